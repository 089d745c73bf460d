// Acceptance suite: every exit criterion of the build, one pass/fail line
// each, all tolerances pinned in code. Runs at desk scale (minutes).

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "zkstrip/estimates.hpp"
#include "zkstrip/forcing.hpp"
#include "zkstrip/fractional.hpp"
#include "zkstrip/io.hpp"
#include "zkstrip/norms.hpp"
#include "zkstrip/solver.hpp"

using namespace zkstrip;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

StripGeometry desk_geom(double a, int K = 16, int Nx = 256, int Ny = 64, double L = 0.0,
                        double T = 1.0) {
    StripGeometry g;
    g.B = pi;
    g.a = a;
    g.K = K;
    g.Nx = Nx;
    g.Ny = Ny;
    g.L = L > 0.0 ? L : default_box_halfwidth(Nx, T);
    g.validate();
    return g;
}

FieldSlice half_strip_gaussian(const StripGeometry& g, int k, double amp, double x0,
                               double sigma) {
    FieldSlice u(g);
    auto line = u.mode(k);
    for (int i = 0; i < g.Nx; ++i) {
        const double x = g.x(i);
        if (x > 0.0) line[i] = amp * std::exp(-std::pow((x - x0) / sigma, 2) / 2.0);
    }
    return u;
}

BoundaryData burst(const StripGeometry& g, const TimeGrid& tg, int k, double amp,
                   double tau0, double tc, double w) {
    BoundaryData b(g, tg, BoundaryRole::raw_g);
    for (int n = 0; n < tg.n_horizon(); ++n) {
        const double s = tg.t(n) - tc;
        b.at(k, n) = amp * std::sin(tau0 * s) * std::exp(-std::pow(s / w, 2));
    }
    return b;
}

// ---------------------------------------------------------------------------

void criterion_1_unitarity_group_law() {
    auto g = desk_geom(0.7, 16, 256, 64, 20.0);
    Rng rng(101);
    FieldSlice u0(g);
    for (int k = 1; k <= g.K; ++k) {
        auto line = u0.mode(k);
        const double x0 = rng.uniform(-4.0, 4.0), amp = rng.gaussian();
        for (int i = 0; i < g.Nx; ++i)
            line[i] = amp * std::exp(-std::pow((g.x(i) - x0) / 1.3, 2) / 2.0);
    }
    const double n0 = u0.l2();
    double worst_unitary = 0.0, worst_group = 0.0;
    for (int it = 1; it <= 5; ++it)
        for (int is = 1; is <= 5; ++is) {
            const double t = 0.13 * it, s = 0.09 * is;
            auto once = propagate_2d(u0, t + s);
            worst_unitary = std::max(worst_unitary, std::abs(once.l2() / n0 - 1.0));
            auto twice = propagate_2d(propagate_2d(u0, s), t);
            double diff = 0.0;
            for (size_t i = 0; i < once.data.size(); ++i)
                diff += std::pow(once.data[i] - twice.data[i], 2);
            worst_group = std::max(worst_group, std::sqrt(g.dx() * diff) / n0);
        }
    report(1, "unitarity and group law", worst_unitary <= 1e-10 && worst_group <= 1e-10,
           "unitary " + fmt(worst_unitary) + ", group " + fmt(worst_group) + " <= 1e-10");
}

void criterion_2_mode_decoupling() {
    auto g = desk_geom(0.4, 16, 256, 64, 20.0);
    auto u0 = half_strip_gaussian(g, 3, 1.0, 6.0, 1.2);
    double worst = 0.0;
    for (double t = 0.0; t <= 1.0; t += 0.1) {
        auto ut = propagate_2d(u0, t);
        double off = 0.0, total = 0.0;
        for (int k = 1; k <= g.K; ++k)
            for (int i = 0; i < g.Nx; ++i) {
                const double e = ut.at(k, i) * ut.at(k, i);
                total += e;
                if (k != 3) off += e;
            }
        worst = std::max(worst, off / total);
    }
    report(2, "single-mode energy leak over the horizon", worst <= 1e-12,
           "leak fraction " + fmt(worst) + " <= 1e-12");
}

void criterion_3_fractional_oracles() {
    bool ok = true;
    std::string detail;
    // closed forms I_gamma[t^mu] = Gamma(mu+1)/Gamma(mu+gamma+1) t^{mu+gamma}
    auto mono_err = [](double gamma, double mu, int nt) {
        const double dt = 1.0 / nt;
        std::vector<double> h(nt);
        for (int n = 0; n < nt; ++n) h[n] = std::pow(n * dt, mu);
        auto out = rl_integral(h, gamma, dt);
        double num = 0.0, den = 0.0;
        for (int n = 0; n < nt; ++n) {
            const double e = std::tgamma(mu + 1.0) / std::tgamma(mu + gamma + 1.0) *
                             std::pow(n * dt, mu + gamma);
            num += std::pow(out[n] - e, 2);
            den += e * e;
        }
        return std::sqrt(num / den);
    };
    double worst_exact = 0.0, worst_order = 0.0;
    for (double gamma : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
        for (double mu : {0.0, 1.0})
            worst_exact = std::max(worst_exact, mono_err(gamma, mu, 512));
        const double e1 = mono_err(gamma, 2.0, 256), e2 = mono_err(gamma, 2.0, 512);
        worst_order = std::max(worst_order, std::abs(e1 / e2 - 4.0));
    }
    ok = ok && worst_exact <= 1e-12 && worst_order <= 0.6;

    // semigroup at Nt = 1024
    const int nt = 1024;
    const double dt = 1.0 / nt;
    std::vector<double> h(nt);
    for (int n = 0; n < nt; ++n) h[n] = std::sin(3.0 * n * dt) * std::exp(-n * dt);
    double worst_semi = 0.0;
    for (double gamma : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0})
        for (double beta : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
            auto two = rl_integral(rl_integral(h, gamma, dt), beta, dt);
            auto one = rl_integral(h, gamma + beta, dt);
            double num = 0.0, den = 0.0;
            for (int n = 0; n < nt; ++n) {
                num += std::pow(two[n] - one[n], 2);
                den += one[n] * one[n];
            }
            worst_semi = std::max(worst_semi, std::sqrt(num / den));
        }
    ok = ok && worst_semi <= 1e-3;
    report(3, "fractional-calculus oracles",
           ok,
           "monomial " + fmt(worst_exact) + " <= 1e-12, order-2 defect " + fmt(worst_order) +
               ", semigroup " + fmt(worst_semi) + " <= 1e-3");
}

void criterion_4_multiplier_law() {
    auto g = desk_geom(0.0, 64, 256, 129, 20.0);
    double lo = 1e300, hi = 0.0;
    for (int k = 1; k <= 64; ++k)
        for (double lt = 0.0; lt <= 4.0; lt += 0.05) {
            const double tau = std::pow(10.0, lt);
            const double v = std::abs(forcing_multiplier(k, tau, g)) *
                             (std::pow(tau, 2.0 / 3.0) + k * k) / std::pow(tau, 4.0 / 3.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double cg = gamma_ratio_constant();
    const bool ok = lo >= 0.5 && hi <= 2.0 && std::abs(cg - 0.659) < 5e-4 && cg < 1.0;
    report(4, "multiplier law and Gamma-ratio constant", ok,
           "band [" + fmt(lo) + ", " + fmt(hi) + "] in [0.5, 2.0], C_Gamma = " + fmt(cg));
}

void criterion_5_boundary_recovery() {
    // calibrated constant, single-mode smooth wavemaker, u0 = 0; the
    // reference configuration a = lambda_1 makes the mode-1 inversion exact
    // in the continuum, so the trace error is pure discretization
    auto run = [&](int scale) {
        StripGeometry g = desk_geom(1.0, 16, 256 * scale, 64 * scale);
        TimeGrid tg{1.0, 256 * scale, 2};
        g.L = default_box_halfwidth(g.Nx, tg.T);
        BoundaryData g1 = burst(g, tg, 1, 1.0, 6.0 * pi, 0.5, 0.1);
        g1.role = BoundaryRole::corrected_g1;
        const double C = calibrate_forcing_scale(g1);
        auto f = forcing_from_boundary(g1, C);
        auto tr = duhamel_delta_trace(f.f);
        double num = 0.0, den = 0.0;
        for (int n = 0; n < tg.n_horizon(); ++n) {
            num += std::pow(tr.at(1, n) - g1.at(1, n), 2);
            den += std::pow(g1.at(1, n), 2);
        }
        return std::make_pair(std::sqrt(num / den), C);
    };
    auto [err1, c1] = run(1);
    auto [err2, c2] = run(2);
    const bool ok = err1 <= 5e-2 && err2 < err1;
    report(5, "boundary recovery at the calibrated constant", ok,
           "error " + fmt(err1) + " <= 5e-2, refined " + fmt(err2) + ", C_cal = " + fmt(c1));
}

void criterion_6_neumann_duality() {
    // sup |r_1| = C_Gamma / tau_min^{2/3} ~ 0.31 <= 0.5 on this window
    auto g = desk_geom(0.0, 1, 256, 4, 20.0);
    TimeGrid tg{1.0, 256, 2};
    const double C = 1.0 / (3.0 * std::tgamma(2.0 / 3.0));
    BoundaryData g1 = burst(g, tg, 1, 1.0, 6.0 * pi, 0.5, 0.1);
    g1.role = BoundaryRole::corrected_g1;
    const double sup_r = neumann_ratio_sup(1, g, tg);
    auto fm = forcing_from_boundary(g1, C);
    auto fn = neumann_series_forcing(g1, 20, C);
    double num = 0.0, den = 0.0;
    for (int n = 0; n < tg.n_horizon(); ++n) {
        num += std::pow(fn.f.at(1, n) - fm.f.at(1, n), 2);
        den += std::pow(fm.f.at(1, n), 2);
    }
    const double err = std::sqrt(num / den);
    report(6, "Neumann series vs multiplier forcing", sup_r <= 0.5 && err <= 1e-3,
           "sup|r| = " + fmt(sup_r) + ", agreement " + fmt(err) + " <= 1e-3");
}

void criterion_7_picard_contraction() {
    SolverConfig cfg;
    cfg.geom = desk_geom(1.0, 16, 256, 64);
    cfg.tgrid = TimeGrid{1.0, 256, 2};
    cfg.geom.L = default_box_halfwidth(cfg.geom.Nx, cfg.tgrid.T);
    cfg.bourgain = BourgainParams{0.0, 0.45, 0.55};
    cfg.picard_tol = 1e-9;
    cfg.picard_max = 20;

    auto data_at = [&](double amp) {
        return std::make_pair(half_strip_gaussian(cfg.geom, 1, amp, 8.0, 1.2), amp);
    };
    auto wavemaker = [&](double amp) {
        return [amp](int k, double t) {
            if (k != 1) return 0.0;
            return amp * std::sin(6.0 * pi * (t - 0.5)) * std::exp(-std::pow((t - 0.5) / 0.1, 2));
        };
    };

    // amplitude 1e-3: contraction factor < 1/2, geometric increments
    auto [u0_small, amp_s] = data_at(1e-3);
    BoundaryData g_small(cfg.geom, cfg.tgrid, BoundaryRole::raw_g);
    for (int n = 0; n < cfg.tgrid.n_horizon(); ++n)
        g_small.at(1, n) = wavemaker(1e-3)(1, cfg.tgrid.t(n));
    auto res = picard_solve(u0_small, g_small, cfg);
    double rho_max = 0.0;
    for (double r : res.report.contraction) rho_max = std::max(rho_max, r);
    bool geometric = res.report.increments.size() >= 2;
    for (size_t i = 1; i < res.report.increments.size(); ++i)
        geometric = geometric && res.report.increments[i] < 0.5 * res.report.increments[i - 1];
    const bool small_ok = res.report.converged && rho_max < 0.5 && geometric;

    // amplitude x10 through the halving schedule
    bool mid_ok = false;
    double mid_rho = 0.0;
    try {
        auto [u0_mid, amp_m] = data_at(1e-2);
        auto rmid = solve_with_halving(u0_mid, wavemaker(1e-2), cfg);
        for (double r : rmid.report.contraction) mid_rho = std::max(mid_rho, r);
        mid_ok = rmid.report.converged && mid_rho < 1.0;
    } catch (const convergence_error&) {
    }

    // large data actually trips the schedule; halving must restore rho < 1
    bool big_ok = false;
    int big_halvings = 0;
    double big_rho = 0.0;
    try {
        auto [u0_big, amp_b] = data_at(8.0);
        auto rbig = solve_with_halving(u0_big, wavemaker(8.0), cfg);
        big_halvings = rbig.report.halvings;
        for (double r : rbig.report.contraction) big_rho = std::max(big_rho, r);
        big_ok = rbig.report.converged && big_rho < 1.0 && big_halvings >= 1;
    } catch (const convergence_error&) {
    }

    report(7, "Picard contraction and automatic T-halving", small_ok && mid_ok && big_ok,
           "rho(1e-3) = " + fmt(rho_max) + " < 0.5, rho(1e-2) = " + fmt(mid_rho) +
               " < 1, large data restored with " + std::to_string(big_halvings) +
               " halvings, rho = " + fmt(big_rho));
}

void criterion_8_linear_limit() {
    SolverConfig cfg;
    cfg.geom = desk_geom(0.6, 16, 256, 64);
    cfg.tgrid = TimeGrid{1.0, 256, 2};
    cfg.geom.L = default_box_halfwidth(cfg.geom.Nx, cfg.tgrid.T);
    cfg.bourgain = BourgainParams{0.0, 0.45, 0.55};
    cfg.nonlinearity_on = false;
    auto u0 = half_strip_gaussian(cfg.geom, 2, 0.8, 8.0, 1.2);
    BoundaryData g = burst(cfg.geom, cfg.tgrid, 1, 0.5, 4.0 * pi, 0.5, 0.1);
    auto res = picard_solve(u0, g, cfg);

    // direct linear Duhamel solution assembled independently
    auto ext = extend_initial(u0, cfg.mollifier_width);
    SpaceTimeField lin = group_orbit(ext.field, cfg.tgrid);
    auto gb = extend_boundary(g);
    BoundaryData g1 = corrected_boundary(gb.data, ext.field);
    taper_window_tail(g1);
    auto f = forcing_from_boundary(g1, cfg.calibration());
    lin = lin + duhamel_delta(f.f);
    apply_theta(lin);

    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < lin.data.size(); ++i) {
        num += std::pow(res.solution->data[i] - lin.data[i], 2);
        den += lin.data[i] * lin.data[i];
    }
    const double err = std::sqrt(num / den);
    report(8, "linear-limit equivalence", res.report.converged && err <= 1e-10,
           "relative deviation " + fmt(err) + " <= 1e-10");
}

void criterion_9_estimate_sweeps() {
    SweepConfig cfg;
    cfg.geom = desk_geom(0.0, 8, 128, 32, 12.0);
    cfg.tgrid = TimeGrid{0.75, 96, 2};
    cfg.bourgain = BourgainParams{0.0, 0.45, 0.55};
    cfg.samples = 100;
    cfg.seed = 2026;
    SweepConfig fine = cfg;
    fine.geom.Nx *= 2;
    fine.geom.Ny *= 2;
    fine.tgrid.Nt *= 2;

    bool ok = true;
    std::string detail;
    for (const char* id : {"group", "delta", "duhamel", "trace", "bilinear", "strichartz"}) {
        auto lo = run_estimate_sweep(id, cfg);
        auto hi = run_estimate_sweep(id, fine);
        const double growth = hi.max_ratio / lo.max_ratio;
        const bool this_ok = std::isfinite(lo.max_ratio) && lo.max_ratio > 0.0 &&
                             hi.max_ratio <= 1.25 * lo.max_ratio;
        ok = ok && this_ok;
        detail += std::string(id) + " max " + fmt(lo.max_ratio) + " x" + fmt(growth) + "; ";
    }
    report(9, "estimate ratio sweeps over 100 seeds", ok, detail);
}

void criterion_10_lipschitz() {
    SolverConfig cfg;
    cfg.geom = desk_geom(1.0, 16, 256, 64);
    cfg.tgrid = TimeGrid{1.0, 256, 2};
    cfg.geom.L = default_box_halfwidth(cfg.geom.Nx, cfg.tgrid.T);
    cfg.bourgain = BourgainParams{0.0, 0.45, 0.55};
    cfg.picard_tol = 1e-10;

    auto lambda_at = [&](double scale) {
        auto u01 = half_strip_gaussian(cfg.geom, 1, 1e-3 * scale, 8.0, 1.2);
        auto u02 = half_strip_gaussian(cfg.geom, 1, 1.25e-3 * scale, 8.2, 1.15);
        auto g1 = burst(cfg.geom, cfg.tgrid, 1, 1e-3 * scale, 6.0 * pi, 0.5, 0.1);
        auto g2 = burst(cfg.geom, cfg.tgrid, 1, 0.8e-3 * scale, 6.0 * pi, 0.52, 0.11);
        auto r1 = picard_solve(u01, g1, cfg);
        auto r2 = picard_solve(u02, g2, cfg);
        const double du = zb_norm(*r1.solution - *r2.solution, cfg.bourgain);
        FieldSlice d0 = u01;
        for (size_t i = 0; i < d0.data.size(); ++i) d0.data[i] -= u02.data[i];
        BoundaryData dg = g1 - g2;
        const double data_dist = d0.l2() + hs_t_l2y_norm(dg, 1.0 / 3.0);
        return du / data_dist;
    };
    const double l1 = lambda_at(1.0);
    const double l2 = lambda_at(0.5);
    const double ratio = l1 > l2 ? l1 / l2 : l2 / l1;
    report(10, "Lipschitz data-to-solution stability", ratio <= 2.0,
           "Lambda = " + fmt(l1) + " vs halved " + fmt(l2) + ", ratio " + fmt(ratio) +
               " <= 2");
}

void criterion_11_norm_reductions() {
    auto g = desk_geom(0.4, 16, 256, 64, 20.0);
    TimeGrid tg{1.0, 256, 2};
    Rng rng(404);
    SpaceTimeField u(g, tg);
    for (int k = 1; k <= g.K; ++k) {
        const double x0 = rng.uniform(-4.0, 4.0), tau0 = rng.uniform(3.0, 20.0);
        const double amp = rng.gaussian();
        for (int n = 0; n < tg.n_window(); ++n) {
            auto line = u.x_line(k, n);
            const double env = std::exp(-std::pow((tg.t(n) - 0.8) / 0.3, 2));
            for (int i = 0; i < g.Nx; ++i)
                line[i] += amp * env * std::cos(tau0 * tg.t(n) + 0.4 * g.x(i)) *
                           std::exp(-std::pow((g.x(i) - x0) / 1.5, 2) / 2.0);
        }
    }
    auto spec = spectrum_of(u);
    const double l2 = u.l2();
    const double x00 = x0b_norm(spec, BourgainParams{0.0, 0.0, 0.0}).total;
    const double red_err = std::abs(x00 / l2 - 1.0);
    bool monotone = true;
    double prev = 0.0;
    for (double b : {0.0, 0.1, 0.2, 0.3, 0.38, 0.42, 0.46, 0.49}) {
        const double v = x0b_norm(spec, BourgainParams{0.0, b, 0.55}).total;
        monotone = monotone && v >= prev;
        prev = v;
    }
    report(11, "norm reductions and b-monotonicity", red_err <= 1e-12 && monotone,
           "L2 reduction defect " + fmt(red_err) + " <= 1e-12, monotone in b");
}

void criterion_12_pde_residual() {
    SolverConfig cfg;
    cfg.geom = desk_geom(1.0, 16, 256, 64);
    cfg.tgrid = TimeGrid{1.0, 1024, 2};
    cfg.geom.L = default_box_halfwidth(cfg.geom.Nx, cfg.tgrid.T);
    cfg.bourgain = BourgainParams{0.0, 0.45, 0.55};
    cfg.picard_tol = 1e-9;
    cfg.forcing_on = false; // pure initial-value nonlinear run
    auto u0 = half_strip_gaussian(cfg.geom, 1, 0.25, 10.0, 1.2);
    BoundaryData g0(cfg.geom, cfg.tgrid, BoundaryRole::raw_g);
    auto res = picard_solve(u0, g0, cfg);
    const double r1 = pde_residual(*res.solution, true);

    SolverConfig fine = cfg;
    fine.tgrid.Nt *= 2;
    auto resf = picard_solve(u0, BoundaryData(fine.geom, fine.tgrid, BoundaryRole::raw_g),
                             fine);
    const double r2 = pde_residual(*resf.solution, true);
    report(12, "interior PDE residual of the converged nonlinear solution",
           res.report.converged && r1 <= 1e-4 && r2 < r1,
           "residual " + fmt(r1) + " <= 1e-4, refined " + fmt(r2));
}

} // namespace

int main() {
    std::printf("zkstrip acceptance suite\n");
    criterion_1_unitarity_group_law();
    criterion_2_mode_decoupling();
    criterion_3_fractional_oracles();
    criterion_4_multiplier_law();
    criterion_5_boundary_recovery();
    criterion_6_neumann_duality();
    criterion_7_picard_contraction();
    criterion_8_linear_limit();
    criterion_9_estimate_sweeps();
    criterion_10_lipschitz();
    criterion_11_norm_reductions();
    criterion_12_pde_residual();
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
