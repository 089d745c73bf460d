#pragma once

/**
 * solver.hpp: the constructive local solver: extension operators, the
 * cutoff global integral equation and its Picard iteration.
 *
 * The iterated map on the padded window is
 *   Phi(v) = theta_T S(t) u0_ext + theta_T Duh_delta(f) + theta_T Duh(N(v)),
 * with N(v) = -1/2 d_x(v^2) evaluated pseudospectrally (2/3-rule dealiased
 * in xi, Galerkin-truncated at K sine modes) and f the boundary forcing
 * built from the corrected wavemaker data. v_0 is the full linear part, so
 * the iteration lives in the contraction ball centered per the fixed-point
 * scheme. Non-convergence is retried on a halved horizon; the horizon
 * exponent beta is estimated by regressing log rho against log T across
 * the retries.
 */

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "cutoff.hpp"
#include "dispersion.hpp"
#include "duhamel.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "forcing.hpp"
#include "norms.hpp"
#include "threading.hpp"

namespace zkstrip {

struct SolverConfig {
    StripGeometry geom;
    TimeGrid tgrid;
    BourgainParams bourgain;
    double picard_tol = 1e-9; ///< relative Z^b increment threshold
    int picard_max = 25;
    int max_halvings = 6;
    bool nonlinearity_on = true;
    bool forcing_on = true;       ///< off: pure initial-value run, f = 0
    bool dealias = true;
    double C_cal = 0.0;           ///< 0 requests the analytic default
    double mollifier_width = 0.0; ///< 0 -> 2 dx

    double calibration() const {
        return C_cal > 0.0 ? C_cal : 1.0 / (3.0 * std::tgamma(2.0 / 3.0));
    }
    void validate() const {
        geom.validate();
        tgrid.validate();
        if (!(picard_tol > 0.0)) throw config_error("SolverConfig: picard_tol must be positive");
        if (picard_max < 1) throw config_error("SolverConfig: picard_max must be >= 1");
        if (max_halvings < 0) throw config_error("SolverConfig: max_halvings must be >= 0");
    }
};

struct PicardReport {
    std::vector<double> increments;  ///< Z^b increments per iteration
    std::vector<double> contraction; ///< ratios of consecutive increments
    double rho_final = 0.0;
    double M_hat = 0.0;      ///< Z^b norm of the linear part
    double ball_radius = 0.0; ///< r = 2 M_hat
    double c1_extension = 1.0;
    double c2_extension = 1.0;
    double beta_hat = std::numeric_limits<double>::quiet_NaN();
    double T_used = 0.0;
    int iterations = 0;
    int halvings = 0;
    bool converged = false;
};

struct convergence_error : std::runtime_error {
    PicardReport report;
    convergence_error(const std::string& what, PicardReport rep)
        : std::runtime_error(what), report(std::move(rep)) {}
};

struct ExtendedInitial {
    FieldSlice field;
    double c1 = 1.0; ///< measured ||u0_ext|| / ||u0||
};

/// Zero-extension to x < 0 with one mollification pass blended in a collar
/// around the seam; data away from the collar is untouched. The default
/// width stays at grid scale so the collar cannot reach into bulk data on
/// wide boxes.
inline ExtendedInitial extend_initial(const FieldSlice& u0, double width = 0.0) {
    const StripGeometry& g = u0.geom;
    const double w = width > 0.0 ? width : 2.0 * g.dx();
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * w / g.dx())));
    std::vector<double> kernel(2 * half + 1);
    double ksum = 0.0;
    for (int q = -half; q <= half; ++q) {
        kernel[q + half] = std::exp(-std::pow(q * g.dx() / w, 2));
        ksum += kernel[q + half];
    }
    for (double& v : kernel) v /= ksum;
    const double collar = 3.0 * w;

    ExtendedInitial out;
    out.field = FieldSlice(g);
    double n_in = 0.0, n_out = 0.0;
    for (int k = 1; k <= g.K; ++k) {
        auto src = u0.mode(k);
        auto dst = out.field.mode(k);
        for (int i = 0; i < g.Nx; ++i) {
            const double x = g.x(i);
            n_in += src[i] * src[i];
            const double chi = smooth_step_down((2.0 * collar - x) / collar);
            double m = 0.0;
            if (chi < 1.0) {
                for (int q = -half; q <= half; ++q) {
                    const int ii = i + q;
                    if (ii >= 0 && ii < g.Nx && g.x(ii) > 0.0) m += kernel[q + half] * src[ii];
                }
            }
            dst[i] = chi * src[i] + (1.0 - chi) * m;
            n_out += dst[i] * dst[i];
        }
    }
    out.c1 = n_in > 0.0 ? std::sqrt(n_out / n_in) : 1.0;
    return out;
}

struct ExtendedBoundary {
    BoundaryData data;
    double c2 = 1.0; ///< measured H^{1/3}_t L^2_y ratio
};

/// Temporal extension by smooth decay to zero over the padding; samples on
/// [0, T] are untouched (the transverse grid already encodes (0, B)).
inline ExtendedBoundary extend_boundary(const BoundaryData& g) {
    const TimeGrid& tg = g.tgrid;
    ExtendedBoundary out;
    out.data = g;
    out.data.role = BoundaryRole::extended_g;
    const int nh = tg.n_horizon(), nw = tg.n_window();
    const double pad = tg.window_length() - tg.T;
    for (int k = 1; k <= g.geom.K; ++k) {
        const double edge = g.at(k, nh - 1);
        for (int n = nh; n < nw; ++n)
            out.data.at(k, n) = edge * smooth_step_down((tg.t(n) - tg.T) / (0.8 * pad));
    }
    BoundaryData zero_ext = g;
    for (int k = 1; k <= g.geom.K; ++k)
        for (int n = nh; n < nw; ++n) zero_ext.at(k, n) = 0.0;
    const double base = hs_t_l2y_norm(zero_ext, 1.0 / 3.0);
    out.c2 = base > 0.0 ? hs_t_l2y_norm(out.data, 1.0 / 3.0) / base : 1.0;
    return out;
}

/// d_x(v^2) by the pseudospectral Galerkin route: dealias in xi, square on
/// the physical grid, project back to the K retained sine modes (the
/// quadrature is alias-free for pair products when Ny >= 2K+1).
inline SpaceTimeField galerkin_dx_square(const SpaceTimeField& v, bool dealias = true) {
    const StripGeometry& g = v.geom;
    const TimeGrid& tg = v.tgrid;
    const int nx = g.Nx, ny = g.ny_interior(), nw = tg.n_window();
    const int m_cut = g.Nx / 3; // keep |m~| <= Nx/3
    SineBasis basis(g);
    SpaceTimeField out(g, tg);

    std::vector<double> coeffs(static_cast<size_t>(g.K) * nx);
    std::vector<double> phys(static_cast<size_t>(ny) * nx);
    std::vector<cplx> row(nx);

    for (int n = 0; n < nw; ++n) {
        // dealiased mode rows for this time slice
        for (int k = 1; k <= g.K; ++k) {
            auto line = v.x_line(k, n);
            for (int i = 0; i < nx; ++i) {
                if (!std::isfinite(line[i]))
                    throw numeric_error("galerkin_dx_square: non-finite input");
                row[i] = line[i];
            }
            if (dealias) {
                fft::forward(row.data(), nx);
                for (int m = 0; m < nx; ++m) {
                    const int mw = (m <= nx / 2) ? m : m - nx;
                    if (std::abs(mw) > m_cut) row[m] = 0.0;
                }
                fft::inverse(row.data(), nx);
            }
            double* dst = &coeffs[(k - 1) * static_cast<size_t>(nx)];
            for (int i = 0; i < nx; ++i) dst[i] = row[i].real();
        }
        // synthesize, square pointwise
        std::fill(phys.begin(), phys.end(), 0.0);
        for (int k = 1; k <= g.K; ++k) {
            const double* ck = &coeffs[(k - 1) * static_cast<size_t>(nx)];
            for (int j = 0; j < ny; ++j) {
                const double e = basis.e(k, j + 1);
                double* pj = &phys[static_cast<size_t>(j) * nx];
                for (int i = 0; i < nx; ++i) pj[i] += e * ck[i];
            }
        }
        for (double& p : phys) p *= p;
        // project back to K modes
        std::fill(coeffs.begin(), coeffs.end(), 0.0);
        for (int k = 1; k <= g.K; ++k) {
            double* ck = &coeffs[(k - 1) * static_cast<size_t>(nx)];
            for (int j = 0; j < ny; ++j) {
                const double e = g.dy() * basis.e(k, j + 1);
                const double* pj = &phys[static_cast<size_t>(j) * nx];
                for (int i = 0; i < nx; ++i) ck[i] += e * pj[i];
            }
        }
        // d_x with the dealias mask
        for (int k = 1; k <= g.K; ++k) {
            const double* ck = &coeffs[(k - 1) * static_cast<size_t>(nx)];
            for (int i = 0; i < nx; ++i) row[i] = ck[i];
            fft::forward(row.data(), nx);
            for (int m = 0; m < nx; ++m) {
                const int mw = (m <= nx / 2) ? m : m - nx;
                if (dealias && std::abs(mw) > m_cut)
                    row[m] = 0.0;
                else
                    row[m] *= cplx(0.0, g.xi(m));
            }
            fft::inverse(row.data(), nx);
            auto dst = out.x_line(k, n);
            for (int i = 0; i < nx; ++i) dst[i] = row[i].real();
        }
    }
    return out;
}

/// N(v) = -1/2 d_x(v^2)
inline SpaceTimeField nonlinearity(const SpaceTimeField& v, bool dealias = true) {
    SpaceTimeField out = galerkin_dx_square(v, dealias);
    for (double& x : out.data) x *= -0.5;
    return out;
}

/// S(t) u0 sampled on the whole window (the cutoff is applied separately).
inline SpaceTimeField group_orbit(const FieldSlice& u0, const TimeGrid& tg) {
    const StripGeometry& g = u0.geom;
    SpaceTimeField out(g, tg);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> hat(g.Nx), buf(g.Nx);
        auto line = u0.mode(k);
        for (int i = 0; i < g.Nx; ++i) hat[i] = line[i];
        fft::forward(hat.data(), g.Nx);
        for (int n = 0; n < tg.n_window(); ++n) {
            const double t = tg.t(n);
            for (int m = 0; m < g.Nx; ++m)
                buf[m] = hat[m] * std::polar(1.0, t * omega_k(g.xi(m), k, g));
            fft::inverse(buf.data(), g.Nx);
            auto dst = out.x_line(k, n);
            for (int i = 0; i < g.Nx; ++i) dst[i] = buf[i].real();
        }
    });
    return out;
}

inline void apply_theta(SpaceTimeField& u) {
    const auto theta = cutoff_theta_samples(u.tgrid, u.tgrid.T);
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = 0; n < u.tgrid.n_window(); ++n) {
            auto line = u.x_line(k, n);
            for (int i = 0; i < u.geom.Nx; ++i) line[i] *= theta[n];
        }
}

struct RestrictedField;
RestrictedField restrict_field(const SpaceTimeField& v);

struct PicardResult {
    std::optional<SpaceTimeField> solution; ///< window field; empty if diverged
    PicardReport report;
    ForcingResult forcing; ///< empty geometry when forcing disabled

    /// solution restricted to the half-strip and the horizon
    RestrictedField restricted() const;
};

/// One Picard run at the configured horizon.
inline PicardResult picard_solve(const FieldSlice& u0, const BoundaryData& g_raw,
                                 const SolverConfig& cfg) {
    cfg.validate();
    const TimeGrid& tg = cfg.tgrid;
    PicardResult res;
    PicardReport& rep = res.report;
    rep.T_used = tg.T;

    auto ext = extend_initial(u0, cfg.mollifier_width);
    rep.c1_extension = ext.c1;

    SpaceTimeField linear = group_orbit(ext.field, tg);
    if (cfg.forcing_on) {
        auto gb = extend_boundary(g_raw);
        rep.c2_extension = gb.c2;
        BoundaryData g1 = corrected_boundary(gb.data, ext.field);
        taper_window_tail(g1);
        res.forcing = forcing_from_boundary(g1, cfg.calibration());
        linear = linear + duhamel_delta(res.forcing.f);
    }
    apply_theta(linear);

    rep.M_hat = zb_norm(linear, cfg.bourgain);
    rep.ball_radius = 2.0 * rep.M_hat;

    SpaceTimeField v = linear;
    if (!cfg.nonlinearity_on) {
        rep.converged = true;
        rep.iterations = 1;
        res.solution = std::move(v);
        return res;
    }

    const double scale = std::max(rep.M_hat, 1e-300);
    double prev_inc = -1.0;
    for (int it = 0; it < cfg.picard_max; ++it) {
        SpaceTimeField duh = duhamel_inhomogeneous(nonlinearity(v, cfg.dealias));
        apply_theta(duh);
        SpaceTimeField next = linear + duh;
        const double inc = zb_norm(next - v, cfg.bourgain);
        rep.increments.push_back(inc);
        if (prev_inc > 0.0) {
            rep.contraction.push_back(inc / prev_inc);
            rep.rho_final = rep.contraction.back();
        }
        prev_inc = inc;
        v = std::move(next);
        rep.iterations = it + 1;
        if (inc / scale < cfg.picard_tol &&
            (rep.contraction.empty() || rep.rho_final < 1.0)) {
            rep.converged = true;
            break;
        }
        if (rep.contraction.size() >= 3) {
            const size_t nc = rep.contraction.size();
            if (rep.contraction[nc - 1] >= 1.0 && rep.contraction[nc - 2] >= 1.0 &&
                rep.contraction[nc - 3] >= 1.0)
                break; // sustained expansion: diverging
        }
    }
    if (rep.converged) res.solution = std::move(v);
    return res;
}

/**
 * Automatic horizon halving: retry the Picard run on T/2 (same dt) until it
 * contracts, at most max_halvings times; beta_hat is the regression slope
 * of log rho against log T over the attempts. Throws convergence_error when
 * the schedule is exhausted.
 */
inline PicardResult solve_with_halving(
    const FieldSlice& u0, const std::function<double(int, double)>& wavemaker,
    const SolverConfig& cfg) {
    SolverConfig run_cfg = cfg;
    std::vector<double> log_T, log_rho;
    PicardReport last_report;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
        BoundaryData g(run_cfg.geom, run_cfg.tgrid, BoundaryRole::raw_g);
        for (int k = 1; k <= run_cfg.geom.K; ++k)
            for (int n = 0; n < run_cfg.tgrid.n_horizon(); ++n)
                g.at(k, n) = wavemaker(k, run_cfg.tgrid.t(n));
        PicardResult res = picard_solve(u0, g, run_cfg);
        res.report.halvings = h;
        if (!res.report.contraction.empty()) {
            double rho_max = 0.0;
            for (double r : res.report.contraction) rho_max = std::max(rho_max, r);
            if (rho_max > 0.0) {
                log_T.push_back(std::log(run_cfg.tgrid.T));
                log_rho.push_back(std::log(rho_max));
            }
        }
        if (log_T.size() >= 2) {
            double mx = 0.0, my = 0.0;
            for (size_t i = 0; i < log_T.size(); ++i) {
                mx += log_T[i];
                my += log_rho[i];
            }
            mx /= log_T.size();
            my /= log_T.size();
            double sxx = 0.0, sxy = 0.0;
            for (size_t i = 0; i < log_T.size(); ++i) {
                sxx += (log_T[i] - mx) * (log_T[i] - mx);
                sxy += (log_T[i] - mx) * (log_rho[i] - my);
            }
            if (sxx > 0.0) res.report.beta_hat = sxy / sxx;
        }
        if (res.report.converged) return res;
        last_report = res.report;
        if (run_cfg.tgrid.Nt / 2 < 16) break;
        run_cfg.tgrid.T /= 2.0;
        run_cfg.tgrid.Nt /= 2;
    }
    throw convergence_error("solve_with_halving: no contraction after the halving schedule",
                            last_report);
}

/// Restriction to the half-strip and the horizon: x >= 0 nodes, t in [0, T].
struct RestrictedField {
    StripGeometry geom;
    TimeGrid tgrid;
    std::vector<double> data; // [k][n in 0..Nt][i over Nx/2 nodes with x >= 0]

    int nx_half() const { return geom.Nx / 2; }
    size_t index(int k, int n, int i) const {
        return ((k - 1) * static_cast<size_t>(tgrid.n_horizon()) + n) * nx_half() + i;
    }
    double at(int k, int n, int i) const { return data[index(k, n, i)]; }
};

inline RestrictedField restrict_field(const SpaceTimeField& v) {
    RestrictedField r;
    r.geom = v.geom;
    r.tgrid = v.tgrid;
    const int half = v.geom.Nx / 2;
    r.data.resize(static_cast<size_t>(v.geom.K) * v.tgrid.n_horizon() * half);
    for (int k = 1; k <= v.geom.K; ++k)
        for (int n = 0; n < v.tgrid.n_horizon(); ++n) {
            auto line = v.x_line(k, n);
            for (int i = 0; i < half; ++i) r.data[r.index(k, n, i)] = line[half + i];
        }
    return r;
}

inline RestrictedField PicardResult::restricted() const {
    if (!solution) throw numeric_error("PicardResult::restricted: no solution field");
    return restrict_field(*solution);
}

/**
 * Relative interior residual of u_t + a u_x + u_xxx + u_xyy + u u_x:
 * spectral spatial derivatives, fourth-order central time differences, the
 * same Galerkin product as the solver for the advective term. Excluded from
 * the sample: the layers t near {0, T}, |x| <= skip (the Dirac support),
 * the outer 10% of the box where periodization wrap lives, and bins beyond
 * the temporally resolved band |omega_k(xi)| dt > 1/2, where no finite
 * difference approximates d_t (trace amplitudes there sit at the
 * periodization floor but carry unbounded omega weights).
 */
inline double pde_residual(const SpaceTimeField& u, bool nonlinearity_on = true,
                           double skip_x = 0.0, bool dealias = true) {
    const StripGeometry& g = u.geom;
    const TimeGrid& tg = u.tgrid;
    const int nx = g.Nx;
    const double skip = skip_x > 0.0 ? skip_x : 8.0 * g.dx();

    // restrict to the active band: the temporally resolved bins inside the
    // dealias band the scheme actually evolves (the dead band above 2/3
    // Nyquist carries no source and only transports seam junk), without the
    // unpaired Nyquist bin
    SpaceTimeField uf(g, tg);
    {
        const int m_cut = dealias ? nx / 3 : nx / 2 - 1;
        std::vector<cplx> row(nx);
        for (int k = 1; k <= g.K; ++k)
            for (int n = 0; n < tg.n_window(); ++n) {
                auto src = u.x_line(k, n);
                for (int i = 0; i < nx; ++i) row[i] = src[i];
                fft::forward(row.data(), nx);
                row[nx / 2] = 0.0;
                for (int m = 0; m < nx; ++m) {
                    const int mw = (m <= nx / 2) ? m : m - nx;
                    if (std::abs(mw) > m_cut ||
                        std::abs(omega_k(g.xi(m), k, g)) * tg.dt() > 0.5)
                        row[m] = 0.0;
                }
                fft::inverse(row.data(), nx);
                auto dst = uf.x_line(k, n);
                for (int i = 0; i < nx; ++i) dst[i] = row[i].real();
            }
    }

    SpaceTimeField nl(g, tg);
    if (nonlinearity_on) {
        nl = galerkin_dx_square(uf, dealias);
        for (double& x : nl.data) x *= 0.5;
    }
    double num = 0.0, den = 0.0;
    std::vector<cplx> row(nx);
    for (int k = 1; k <= g.K; ++k) {
        for (int n = 2; n + 2 < tg.n_horizon(); ++n) {
            auto lm2 = uf.x_line(k, n - 2);
            auto lm1 = uf.x_line(k, n - 1);
            auto lp1 = uf.x_line(k, n + 1);
            auto lp2 = uf.x_line(k, n + 2);
            auto here = uf.x_line(k, n);
            for (int i = 0; i < nx; ++i) row[i] = here[i];
            fft::forward(row.data(), nx);
            for (int m = 0; m < nx; ++m)
                row[m] *= cplx(0.0, -omega_k(g.xi(m), k, g)); // a d_x + d_x^3 + d_x d_y^2
            fft::inverse(row.data(), nx);
            auto nlline = nl.x_line(k, n);
            for (int i = 0; i < nx; ++i) {
                const double x = g.x(i);
                if (std::abs(x) <= skip || std::abs(x) > 0.9 * g.L) continue;
                const double ut =
                    (-lp2[i] + 8.0 * lp1[i] - 8.0 * lm1[i] + lm2[i]) / (12.0 * tg.dt());
                const double resid = ut + row[i].real() + (nonlinearity_on ? nlline[i] : 0.0);
                num += resid * resid;
                den += ut * ut;
            }
        }
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

} // namespace zkstrip
