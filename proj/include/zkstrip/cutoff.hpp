#pragma once

// Smooth cutoffs built from the standard exp(-1/s) profile.

#include <cmath>
#include <vector>

#include "geometry.hpp"

namespace zkstrip {

namespace detail {
inline double smooth_ramp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
} // namespace detail

/// C-infinity step: 1 for s <= 0, 0 for s >= 1, monotone between.
inline double smooth_step_down(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double a = detail::smooth_ramp(1.0 - s);
    const double b = detail::smooth_ramp(s);
    return a / (a + b);
}

/// theta_T(t): identically 1 on [-T, T], supported in [-2T, 2T].
inline double cutoff_theta(double t, double T) {
    const double s = std::abs(t) / T;
    return smooth_step_down(s - 1.0);
}

/// Samples of theta_T on a time grid.
inline std::vector<double> cutoff_theta_samples(const TimeGrid& tg, double T) {
    std::vector<double> out(tg.n_window());
    for (int n = 0; n < tg.n_window(); ++n) out[n] = cutoff_theta(tg.t(n), T);
    return out;
}

} // namespace zkstrip
