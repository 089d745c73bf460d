#pragma once

/**
 * fractional.hpp: Riemann-Liouville fractional calculus in the time
 * variable.
 *
 * I_gamma[h](t) = (1/Gamma(gamma)) int_0^t (t-s)^{gamma-1} h(s) ds is
 * realized two ways:
 *  - gamma > 0: causal product-integration quadrature, exact for piecewise
 *    linear h (the endpoint singularity is integrated analytically per
 *    panel), second order for smooth h;
 *  - any gamma: Fourier multiplier (i tau)^{-gamma} on the padded window,
 *    principal branch (i tau)^g = |tau|^g e^{i pi g sgn(tau)/2}.
 * The tau = 0 bin of (i tau)^g is 0 for g > 0, 1 for g = 0, and
 * (i zero_bin_scale tau_min)^g for g < 0 (config-exposed regularization).
 */

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "geometry.hpp"

namespace zkstrip {

/// C_Gamma = Gamma(4/3) / Gamma(2/3), strictly below one.
inline double gamma_ratio_constant() {
    static const double c = std::tgamma(4.0 / 3.0) / std::tgamma(2.0 / 3.0);
    return c;
}

/// principal branch of (i tau)^g for tau != 0
inline cplx itau_pow(double tau, double g) {
    if (tau == 0.0) {
        if (g > 0.0) return {0.0, 0.0};
        if (g == 0.0) return {1.0, 0.0};
        throw numeric_error("itau_pow: tau = 0 with negative order needs regularization");
    }
    const double mag = std::pow(std::abs(tau), g);
    const double ph = 0.5 * std::numbers::pi * g * (tau > 0.0 ? 1.0 : -1.0);
    return std::polar(mag, ph);
}

namespace detail {

/// interior convolution weights kappa_d = (d+1)^{g+1} - 2 d^{g+1} + (d-1)^{g+1}
inline std::shared_ptr<const std::vector<double>> rl_kernel(double gamma, int nt) {
    static std::shared_mutex mtx;
    static std::map<std::pair<double, int>, std::shared_ptr<const std::vector<double>>> cache;
    const auto key = std::make_pair(gamma, nt);
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto ker = std::make_shared<std::vector<double>>();
    ker->resize(nt > 1 ? nt - 1 : 0);
    const double gp = gamma + 1.0;
    for (int d = 1; d < nt; ++d)
        (*ker)[d - 1] = std::pow(d + 1.0, gp) - 2.0 * std::pow(double(d), gp) +
                        std::pow(d - 1.0, gp);
    std::unique_lock lock(mtx);
    cache.emplace(key, ker);
    return ker;
}

} // namespace detail

/**
 * Riemann-Liouville integral of order gamma > 0 on a uniform grid t_n = n dt.
 * Product-integration weights: with C = dt^gamma / Gamma(gamma + 2),
 *   I[h]_n = C [ w0(n) h_0 + sum_{j=1}^{n-1} kappa_{n-j} h_j + h_n ],
 *   w0(n) = (n-1)^{g+1} - n^{g+1} + (g+1) n^g.
 */
inline std::vector<double> rl_integral(std::span<const double> h, double gamma, double dt) {
    if (!(gamma > 0.0))
        throw numeric_error("rl_integral: order must be positive (use the multiplier path)");
    const int nt = static_cast<int>(h.size());
    std::vector<double> out(nt, 0.0);
    if (nt == 0) return out;
    if (!std::isfinite(h[0])) throw numeric_error("rl_integral: h(0) not finite");
    const auto ker = detail::rl_kernel(gamma, nt);
    const double C = std::pow(dt, gamma) / std::tgamma(gamma + 2.0);
    const double gp = gamma + 1.0;
    for (int n = 1; n < nt; ++n) {
        double s = h[n];
        const auto& kv = *ker;
        for (int j = 1; j < n; ++j) s += kv[n - j - 1] * h[j];
        const double w0 = std::pow(n - 1.0, gp) - std::pow(double(n), gp) +
                          gp * std::pow(double(n), gamma);
        s += w0 * h[0];
        out[n] = C * s;
    }
    return out;
}

/// Multiplies a spectrum on the window's FFT tau-grid by (i tau)^g in place.
inline void frac_fourier_multiplier(std::span<cplx> spec, double g, const TimeGrid& tg,
                                    double zero_bin_scale = 0.5) {
    const int n = tg.n_window();
    if (static_cast<int>(spec.size()) != n)
        throw dimension_error("frac_fourier_multiplier: spectrum length != window");
    if (g == 0.0) return;
    for (int j = 0; j < n; ++j) {
        const double tau = tg.tau(j);
        if (tau == 0.0) {
            if (g > 0.0)
                spec[j] = 0.0;
            else
                spec[j] *= std::pow(cplx(0.0, zero_bin_scale * tg.tau_min()), g);
        } else {
            spec[j] *= itau_pow(tau, g);
        }
    }
}

/// Applies I_gamma in multiplier form: h -> F^{-1}[(i tau)^{-gamma} F h].
inline std::vector<double> rl_multiplier_apply(std::span<const double> h, double gamma,
                                               const TimeGrid& tg,
                                               double zero_bin_scale = 0.5) {
    const int n = tg.n_window();
    if (static_cast<int>(h.size()) != n)
        throw dimension_error("rl_multiplier_apply: length != window");
    std::vector<cplx> spec(h.begin(), h.end());
    fft::forward(spec);
    frac_fourier_multiplier(spec, -gamma, tg, zero_bin_scale);
    fft::inverse(spec);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = spec[i].real();
    return out;
}

/// A fractional order together with its chosen realization.
struct FractionalOrder {
    enum class Rep { time_domain, multiplier };
    double gamma = 0.0;
    Rep rep = Rep::multiplier;

    std::vector<double> apply(std::span<const double> h, const TimeGrid& tg) const {
        if (rep == Rep::time_domain) return rl_integral(h, gamma, tg.dt());
        return rl_multiplier_apply(h, gamma, tg);
    }
};

} // namespace zkstrip
