#pragma once

// Deterministic random draws. std::mt19937_64 output is pinned by the
// standard; the uniform/gaussian mappings below avoid std::*_distribution,
// whose streams are implementation-defined, so identical seeds give
// identical samples on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace zkstrip {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    std::uint64_t raw() { return eng_(); }

    int uniform_int(int lo, int hi) { // inclusive range
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace zkstrip
