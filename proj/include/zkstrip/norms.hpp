#pragma once

/**
 * norms.hpp: discrete Bourgain-type norms.
 *
 * The modified X^{s,b} splits each (k, xi) column by |omega_k(xi)|: the
 * dispersive region |omega_k| >= 1 carries the modulation weight
 * <tau - omega_k(xi)>^{2b}, the low-dispersion region carries <tau>^{2 alpha}
 * instead; for s != 0 both carry the spatial weight <3 xi^2 + lambda_k>^{2s}.
 * The companion Y^{s,b} uses inverse weights plus an L^1-in-tau third term
 * on the dispersive region.
 *
 * Discrete conventions (fixed so that b = alpha = s = 0 reduces X to the
 * grid L^2 norm exactly): every frequency integral is a Riemann sum over
 * FFT bins carrying a 1/(2 pi) per variable,
 *   int F dxi dtau := (dxi dtau / 4 pi^2) sum_{m,j} F(xi_m, tau_j),
 *   inner L^1 integral of the Y third term := (dtau / 2 pi) sum_j,
 * with <x> = 1 + |x| evaluated at bin centers. Quotient (restriction) norms
 * are certified upper bounds over a finite extension family, reported with
 * the winning extension.
 */

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cutoff.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "threading.hpp"
#include "transverse.hpp"

namespace zkstrip {

struct BourgainParams {
    double s = 0.0;
    double b = 0.45;
    double alpha = 0.55;

    /// window where the bilinear estimate machinery applies:
    /// b in (3/8, 1/2), alpha in (1/2, 2/3)
    bool in_validity_window() const {
        return b > 3.0 / 8.0 && b < 0.5 && alpha > 0.5 && alpha < 2.0 / 3.0;
    }
};

struct NormReport {
    double low = 0.0;    ///< squared low-dispersion contribution
    double high = 0.0;   ///< squared high-dispersion contribution
    double third = 0.0;  ///< squared Y third term (zero for X norms)
    double energy = 0.0; ///< squared energy-space contribution (Z norm only)
    double total = 0.0;  ///< the norm value
    BourgainParams params;

    double squared_parts() const { return low + high + third + energy; }
};

namespace detail {
inline double bracket(double v) { return 1.0 + std::abs(v); }
}

/// Modified X^{s,b} norm of a full space-time spectrum stack.
inline NormReport x0b_norm(const ModeSpectrum& u, const BourgainParams& p) {
    const StripGeometry& g = u.geom;
    const TimeGrid& tg = u.tgrid;
    const int nt = tg.n_window(), nx = g.Nx;
    const double measure =
        g.dxi() * tg.dtau() / (4.0 * std::numbers::pi * std::numbers::pi);
    NormReport rep;
    rep.params = p;
    // mode-parallel partials, reduced serially in fixed k order
    std::vector<double> low_k(g.K, 0.0), high_k(g.K, 0.0);
    for_each_mode(g.K, [&](int k) {
        const double lam = eigenvalue(k, g);
        for (int m = 0; m < nx; ++m) {
            const double xi = g.xi(m);
            const double om = omega_k(xi, k, g);
            const double sw =
                p.s == 0.0 ? 1.0 : std::pow(detail::bracket(3.0 * xi * xi + lam), 2.0 * p.s);
            double acc = 0.0;
            if (std::abs(om) >= 1.0) {
                for (int j = 0; j < nt; ++j)
                    acc += std::pow(detail::bracket(tg.tau(j) - om), 2.0 * p.b) *
                           std::norm(u.at(k, j, m));
                high_k[k - 1] += sw * measure * acc;
            } else {
                for (int j = 0; j < nt; ++j)
                    acc += std::pow(detail::bracket(tg.tau(j)), 2.0 * p.alpha) *
                           std::norm(u.at(k, j, m));
                low_k[k - 1] += sw * measure * acc;
            }
        }
    });
    for (int k = 0; k < g.K; ++k) {
        rep.low += low_k[k];
        rep.high += high_k[k];
    }
    rep.total = std::sqrt(rep.low + rep.high);
    return rep;
}

/// Y^{s,b} norm: inverse-weight terms plus the L^1-in-tau third term.
inline NormReport y0b_norm(const ModeSpectrum& f, const BourgainParams& p) {
    const StripGeometry& g = f.geom;
    const TimeGrid& tg = f.tgrid;
    const int nt = tg.n_window(), nx = g.Nx;
    const double pi2 = 2.0 * std::numbers::pi;
    const double measure = g.dxi() * tg.dtau() / (pi2 * pi2);
    NormReport rep;
    rep.params = p;
    std::vector<double> low_k(g.K, 0.0), high_k(g.K, 0.0), third_k(g.K, 0.0);
    for_each_mode(g.K, [&](int k) {
        const double lam = eigenvalue(k, g);
        for (int m = 0; m < nx; ++m) {
            const double xi = g.xi(m);
            const double om = omega_k(xi, k, g);
            const double sw =
                p.s == 0.0 ? 1.0 : std::pow(detail::bracket(3.0 * xi * xi + lam), 2.0 * p.s);
            const double sw_half = p.s == 0.0 ? 1.0 : std::sqrt(sw);
            if (std::abs(om) >= 1.0) {
                double acc = 0.0, l1 = 0.0;
                for (int j = 0; j < nt; ++j) {
                    const double mod = detail::bracket(tg.tau(j) - om);
                    const double a2 = std::norm(f.at(k, j, m));
                    acc += a2 / std::pow(mod, 2.0 * p.b);
                    l1 += std::abs(f.at(k, j, m)) / mod;
                }
                high_k[k - 1] += sw * measure * acc;
                l1 *= sw_half * tg.dtau() / pi2;
                third_k[k - 1] += g.dxi() / pi2 * l1 * l1;
            } else {
                double acc = 0.0;
                for (int j = 0; j < nt; ++j)
                    acc += std::norm(f.at(k, j, m)) /
                           std::pow(detail::bracket(tg.tau(j)), 2.0 * (1.0 - p.alpha));
                low_k[k - 1] += sw * measure * acc;
            }
        }
    });
    for (int k = 0; k < g.K; ++k) {
        rep.low += low_k[k];
        rep.high += high_k[k];
        rep.third += third_k[k];
    }
    rep.total = std::sqrt(rep.low + rep.high + rep.third);
    return rep;
}

/// H^s_t L^2_y of boundary data: temporal FFT per mode, <tau>^{2s} weights,
/// Parseval in y through the orthonormal mode coefficients.
inline double hs_t_l2y_norm(const BoundaryData& v, double s) {
    const TimeGrid& tg = v.tgrid;
    const int nt = tg.n_window();
    const double measure = tg.dtau() / (2.0 * std::numbers::pi);
    double total = 0.0;
    std::vector<cplx> spec(nt);
    for (int k = 1; k <= v.geom.K; ++k) {
        auto m = v.mode(k);
        for (int n = 0; n < nt; ++n) spec[n] = m[n];
        fft::forward(spec);
        const double dt = tg.dt();
        for (int j = 0; j < nt; ++j)
            total += std::pow(detail::bracket(tg.tau(j)), 2.0 * s) *
                     std::norm(spec[j] * dt) * measure;
    }
    return std::sqrt(total);
}

/// L^2(0, T; H-dot^1) energy norm: d_x spectrally, d_y through sqrt(lambda_k),
/// trapezoid in t over the horizon [0, T].
inline double energy_norm(const SpaceTimeField& u) {
    const StripGeometry& g = u.geom;
    const TimeGrid& tg = u.tgrid;
    const int nx = g.Nx;
    const double meas_x = g.dxi() / (2.0 * std::numbers::pi);
    double total = 0.0;
    std::vector<cplx> hat(nx);
    for (int k = 1; k <= g.K; ++k) {
        const double lam = eigenvalue(k, g);
        for (int n = 0; n < tg.n_horizon(); ++n) {
            auto line = u.x_line(k, n);
            double l2 = 0.0;
            for (int i = 0; i < nx; ++i) {
                l2 += line[i] * line[i];
                hat[i] = line[i];
            }
            l2 *= g.dx();
            fft::forward(hat.data(), nx);
            double dx2 = 0.0;
            const double scale = g.dx() * g.dx(); // continuum-FT normalization
            for (int m = 0; m < nx; ++m) {
                const double xi = g.xi(m);
                dx2 += xi * xi * std::norm(hat[m]) * scale;
            }
            dx2 *= meas_x;
            const double w = (n == 0 || n == tg.n_horizon() - 1) ? 0.5 : 1.0;
            total += w * tg.dt() * (dx2 + lam * l2);
        }
    }
    return std::sqrt(total);
}

/// Z^b sum norm ||u||_X + ||u||_{L^2_T Hdot^1}.
inline double zb_norm(const SpaceTimeField& u, const BourgainParams& p) {
    return x0b_norm(spectrum_of(u), p).total + energy_norm(u);
}

enum class ExtensionStrategy { zero, reflect_decay, periodic_window };

inline std::string extension_name(ExtensionStrategy s) {
    switch (s) {
        case ExtensionStrategy::zero: return "zero";
        case ExtensionStrategy::reflect_decay: return "reflect_decay";
        default: return "periodic_window";
    }
}

/// Build a window function agreeing with u on [0, T] per strategy.
inline SpaceTimeField extend_on_window(const SpaceTimeField& u, ExtensionStrategy st) {
    const TimeGrid& tg = u.tgrid;
    SpaceTimeField v(u.geom, tg);
    const int nh = tg.n_horizon(), nw = tg.n_window();
    const int nt_t = nh - 1; // index of t = T
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = 0; n < nh; ++n) {
            auto src = u.x_line(k, n);
            auto dst = v.x_line(k, n);
            for (int i = 0; i < u.geom.Nx; ++i) dst[i] = src[i];
        }
    if (st == ExtensionStrategy::zero) return v;
    const double pad = tg.window_length() - tg.T;
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = nh; n < nw; ++n) {
            const double t = tg.t(n);
            auto dst = v.x_line(k, n);
            if (st == ExtensionStrategy::reflect_decay) {
                const int mirror = 2 * nt_t - n;
                if (mirror < 0) continue;
                auto src = u.x_line(k, mirror);
                const double decay = std::exp(-std::pow((t - tg.T) / (0.35 * pad), 2));
                for (int i = 0; i < u.geom.Nx; ++i) dst[i] = decay * src[i];
            } else { // periodic_window: tile u(t mod T) under a smooth cutoff
                const int src_n = (n - nh + 1) % nt_t;
                auto src = u.x_line(k, src_n);
                const double win = smooth_step_down((t - tg.T) / (0.35 * pad));
                for (int i = 0; i < u.geom.Nx; ++i) dst[i] = win * src[i];
            }
        }
    return v;
}

struct RestrictionNorm {
    double value = 0.0;
    ExtensionStrategy winner = ExtensionStrategy::zero;
};

/**
 * Upper bound on the quotient norm ||u||_{X^{s,b}_T}: minimum of the global
 * X norm over the configured extension family. A certified upper bound,
 * not the true infimum.
 */
inline RestrictionNorm restriction_norm(const SpaceTimeField& u, const BourgainParams& p,
                                        const std::vector<ExtensionStrategy>& family = {
                                            ExtensionStrategy::zero,
                                            ExtensionStrategy::reflect_decay,
                                            ExtensionStrategy::periodic_window}) {
    if (family.empty()) throw config_error("restriction_norm: empty extension family");
    RestrictionNorm best;
    bool first = true;
    for (auto st : family) {
        const double val = x0b_norm(spectrum_of(extend_on_window(u, st)), p).total;
        if (first || val < best.value) {
            best.value = val;
            best.winner = st;
            first = false;
        }
    }
    return best;
}

} // namespace zkstrip
