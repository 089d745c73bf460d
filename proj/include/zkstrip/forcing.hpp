#pragma once

/**
 * forcing.hpp: the inverse boundary operator: from wavemaker data g to the
 * Dirac-supported forcing f(y, t) with delta_0(x) f driving the whole-space
 * problem so that the solution attains g at x = 0.
 *
 * Per transverse mode, with sigma_k = a - lambda_k and the principal branch
 * of (i tau)^gamma,
 *   f_hat_k(tau) = M(k, tau) a_hat_k(tau) / (C_cal Gamma(2/3)),
 *   M(k, tau)    = (i tau)^{4/3} / ((i tau)^{2/3} - C_Gamma sigma_k),
 * or equivalently the Neumann series
 *   f = sum_n C_Gamma^n (I_{2/3} sigma_k)^n [ I_{-2/3} g1 / (C_cal Gamma(2/3)) ],
 * valid per mode when |r_k(tau)| = C_Gamma |sigma_k| / |tau|^{2/3} < 1 on the
 * resolved band. C_cal is the calibration constant standing in for the
 * closed-form inverse-transform constant; calibrate_forcing_scale measures
 * it once from the defining trace identity.
 */

#include <cmath>
#include <complex>
#include <vector>

#include "cutoff.hpp"
#include "dispersion.hpp"
#include "duhamel.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "field.hpp"
#include "fractional.hpp"
#include "threading.hpp"

namespace zkstrip {

/// (S(t) u0_ext)(x = 0, y) per mode: multiplier propagator, inverse FFT,
/// value at the x = 0 grid node.
inline BoundaryData linear_trace(const FieldSlice& u0_ext, const TimeGrid& tg) {
    const StripGeometry& g = u0_ext.geom;
    if (std::abs(g.x(g.x0_index())) > 1e-12 * g.L)
        throw config_error("linear_trace: grid does not contain the node x = 0");
    BoundaryData out(g, tg, BoundaryRole::trace);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> hat(g.Nx);
        auto line = u0_ext.mode(k);
        for (int i = 0; i < g.Nx; ++i) hat[i] = line[i];
        fft::forward(hat.data(), g.Nx);
        std::vector<cplx> buf(g.Nx);
        for (int n = 0; n < tg.n_window(); ++n) {
            const double t = tg.t(n);
            for (int m = 0; m < g.Nx; ++m)
                buf[m] = hat[m] * std::polar(1.0, t * omega_k(g.xi(m), k, g));
            fft::inverse(buf.data(), g.Nx);
            out.at(k, n) = buf[g.x0_index()].real();
        }
    });
    return out;
}

/// g1 = g_ext - S(t) u0_ext |_{x=0}
inline BoundaryData corrected_boundary(const BoundaryData& g_ext, const FieldSlice& u0_ext) {
    BoundaryData trace = linear_trace(u0_ext, g_ext.tgrid);
    if (!g_ext.same_shape(trace))
        throw dimension_error("corrected_boundary: grid mismatch");
    BoundaryData out = g_ext - trace;
    out.role = BoundaryRole::corrected_g1;
    return out;
}

/// Rolls the last `fraction` of the padding smoothly to zero so trace-type
/// data does not jump at the circular seam of the padded FFT window; the
/// Duhamel term is causal, so samples this deep in the pad never reach the
/// horizon.
inline void taper_window_tail(BoundaryData& b, double fraction = 0.25) {
    const TimeGrid& tg = b.tgrid;
    const double pad = tg.window_length() - tg.T;
    const double start = tg.window_length() - fraction * pad;
    for (int k = 1; k <= b.geom.K; ++k)
        for (int n = 0; n < tg.n_window(); ++n) {
            const double t = tg.t(n);
            if (t > start) b.at(k, n) *= smooth_step_down((t - start) / (fraction * pad));
        }
}

/// M(k, tau); the tau = 0 bin is the branch limit 0. A vanishing denominator
/// on a nonzero bin raises singular_bin_error naming (k, tau).
inline cplx forcing_multiplier(int k, double tau, const StripGeometry& geom) {
    if (k < 1 || k > geom.K) throw index_error("forcing_multiplier: mode out of range");
    if (tau == 0.0) return {0.0, 0.0};
    const cplx den = itau_pow(tau, 2.0 / 3.0) - gamma_ratio_constant() * sigma_k(k, geom);
    if (std::abs(den) < 1e-300)
        throw singular_bin_error("forcing_multiplier: singular denominator", k, tau);
    return itau_pow(tau, 4.0 / 3.0) / den;
}

struct ForcingResult {
    BoundaryData f;
    double imag_residue = 0.0;     ///< discarded |Im| / |Re| L^2 ratio
    double truncation_bound = 0.0; ///< Neumann path only: geometric tail estimate
};

/// Multiplier (closed-form) construction of f from g1. The unpaired Nyquist
/// bin is zeroed (its phase-rotated image has no conjugate partner on a real
/// signal, the same hygiene as in odd spectral derivatives).
inline ForcingResult forcing_from_boundary(const BoundaryData& g1, double C_cal) {
    const StripGeometry& g = g1.geom;
    const TimeGrid& tg = g1.tgrid;
    const int nt = tg.n_window();
    ForcingResult res;
    res.f = BoundaryData(g, tg, BoundaryRole::forcing_f);
    const double scale = 1.0 / (C_cal * std::tgamma(2.0 / 3.0));
    std::vector<double> re_sq(g.K, 0.0), im_sq(g.K, 0.0);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> spec(nt);
        auto src = g1.mode(k);
        for (int n = 0; n < nt; ++n) spec[n] = src[n];
        fft::forward(spec);
        for (int j = 0; j < nt; ++j)
            spec[j] *= forcing_multiplier(k, tg.tau(j), g) * scale;
        spec[nt / 2] = 0.0;
        fft::inverse(spec);
        auto dst = res.f.mode(k);
        double rs = 0.0, is = 0.0;
        for (int n = 0; n < nt; ++n) {
            dst[n] = spec[n].real();
            rs += spec[n].real() * spec[n].real();
            is += spec[n].imag() * spec[n].imag();
        }
        re_sq[k - 1] = rs;
        im_sq[k - 1] = is;
    });
    double rs = 0.0, is = 0.0;
    for (int k = 0; k < g.K; ++k) {
        rs += re_sq[k];
        is += im_sq[k];
    }
    res.imag_residue = rs > 0.0 ? std::sqrt(is / rs) : 0.0;
    if (res.imag_residue > 1e-8)
        throw numeric_error("forcing_from_boundary: imaginary residue above 1e-8");
    return res;
}

/// Neumann-series ratio r_k(tau) = C_Gamma sigma_k (i tau)^{-2/3}.
inline cplx neumann_ratio(int k, double tau, const StripGeometry& geom) {
    return gamma_ratio_constant() * sigma_k(k, geom) * itau_pow(tau, -2.0 / 3.0);
}

/// sup over the resolved band (nonzero bins) of |r_k(tau)|; the sup sits at
/// the fundamental frequency.
inline double neumann_ratio_sup(int k, const StripGeometry& geom, const TimeGrid& tg) {
    return std::abs(neumann_ratio(k, tg.tau_min(), geom));
}

/// Time-domain Neumann-series construction, truncated at n_max terms.
/// Refuses with divergent_series_error when |r_k| >= 1 on the resolved band.
inline ForcingResult neumann_series_forcing(const BoundaryData& g1, int n_max,
                                            double C_cal, double zero_bin_scale = 0.5) {
    const StripGeometry& g = g1.geom;
    const TimeGrid& tg = g1.tgrid;
    for (int k = 1; k <= g.K; ++k) {
        const double r = neumann_ratio_sup(k, g, tg);
        if (r >= 1.0)
            throw divergent_series_error("neumann_series_forcing: |r_k| >= 1 on the band",
                                         k, tg.tau_min(), r);
    }
    ForcingResult res;
    res.f = BoundaryData(g, tg, BoundaryRole::forcing_f);
    const double CG = gamma_ratio_constant();
    const double scale = 1.0 / (C_cal * std::tgamma(2.0 / 3.0));
    std::vector<double> tail(g.K, 0.0);
    for_each_mode(g.K, [&](int k) {
        auto src = g1.mode(k);
        std::vector<double> base =
            rl_multiplier_apply(std::vector<double>(src.begin(), src.end()),
                                -2.0 / 3.0, tg, zero_bin_scale);
        for (double& v : base) v *= scale;
        auto dst = res.f.mode(k);
        std::vector<double> term = base;
        for (int n = 0; n < tg.n_window(); ++n) dst[n] = term[n];
        const double sk = sigma_k(k, g);
        for (int n = 1; n <= n_max; ++n) {
            term = rl_integral(term, 2.0 / 3.0, tg.dt());
            for (double& v : term) v *= CG * sk;
            for (int m = 0; m < tg.n_window(); ++m) dst[m] += term[m];
        }
        const double r = neumann_ratio_sup(k, g, tg);
        tail[k - 1] = std::pow(r, n_max + 1) / (1.0 - r);
    });
    for (int k = 0; k < g.K; ++k) res.truncation_bound = std::max(res.truncation_bound, tail[k]);
    return res;
}

struct RegularityReport {
    double left = 0.0;           ///< ||f||^2 in H^{-1/3}_t L^2_y (discrete)
    double right = 0.0;          ///< sum_k k^2 int <tau>^{2/3} |a_hat_k|^2
    double bound_constant = 0.0; ///< provable c with left <= c * right
};

/**
 * Discrete form of the forcing-regularity estimate: the H^{-1/3}_t L^2_y
 * norm of f is controlled by the weighted wavemaker energy. The constant
 * uses the global multiplier bound |M| <= (2/sqrt(3)) |tau|^{2/3}, giving
 * c = (4/3) / (C_cal Gamma(2/3))^2.
 */
inline RegularityReport forcing_regularity(const BoundaryData& f, const BoundaryData& g1,
                                           double C_cal) {
    if (!f.same_shape(g1)) throw dimension_error("forcing_regularity: grid mismatch");
    const TimeGrid& tg = f.tgrid;
    const int nt = tg.n_window();
    const double measure = tg.dtau() / (2.0 * std::numbers::pi);
    RegularityReport rep;
    rep.bound_constant = (4.0 / 3.0) / std::pow(C_cal * std::tgamma(2.0 / 3.0), 2);
    for (int k = 1; k <= f.geom.K; ++k) {
        std::vector<cplx> fs(nt), as(nt);
        auto fm = f.mode(k);
        auto am = g1.mode(k);
        for (int n = 0; n < nt; ++n) {
            fs[n] = fm[n];
            as[n] = am[n];
        }
        fft::forward(fs);
        fft::forward(as);
        for (int j = 0; j < nt; ++j) {
            const double tau = tg.tau(j);
            const double w = 1.0 + std::abs(tau);
            const double dt = tg.dt();
            rep.left += std::pow(w, -2.0 / 3.0) * std::norm(fs[j] * dt) * measure;
            rep.right += k * static_cast<double>(k) * std::pow(w, 2.0 / 3.0) *
                         std::norm(as[j] * dt) * measure;
        }
    }
    if (rep.left > rep.bound_constant * rep.right * (1.0 + 1e-9) + 1e-300)
        throw numeric_error("forcing_regularity: bound violated");
    return rep;
}

/**
 * One-time least-squares calibration of C_cal: solve the linear problem for
 * a reference single-mode wavemaker with forcing built at C_cal = 1, measure
 * the boundary trace, and pick the scalar minimizing the trace mismatch.
 * The trace is linear in 1/C_cal, so the optimum is |trace|^2 / <g1, trace>.
 */
inline double calibrate_forcing_scale(const BoundaryData& g1_ref) {
    ForcingResult f1 = forcing_from_boundary(g1_ref, 1.0);
    BoundaryData tr = duhamel_delta_trace(f1.f);
    double tt = 0.0, tg_ = 0.0;
    const int n_h = g1_ref.tgrid.n_horizon();
    for (int k = 1; k <= g1_ref.geom.K; ++k)
        for (int n = 0; n < n_h; ++n) {
            tt += tr.at(k, n) * tr.at(k, n);
            tg_ += tr.at(k, n) * g1_ref.at(k, n);
        }
    if (tg_ == 0.0) throw numeric_error("calibrate_forcing_scale: degenerate reference data");
    return tt / tg_;
}

} // namespace zkstrip
