#pragma once

/**
 * estimates.hpp: falsification-style checks of the linear and bilinear
 * estimates: each inequality becomes a sampled ratio (left norm over right
 * norm) over randomized inputs. Bounded, refinement-stable ratios
 * corroborate the estimate; a diverging ratio would contradict it. No
 * attempt is made to certify the analytic constants.
 *
 * Inputs mix smooth Gaussians, modulated packets on the characteristic
 * surface tau = omega_k(xi) (the known worst cases for the bilinear
 * estimate) and band-limited rough draws. Draw parameters are continuum
 * quantities tied to the sample seed, so a sweep is replayable bit-exactly
 * and the same functions can be realized on a refined grid.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cutoff.hpp"
#include "duhamel.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "norms.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "transverse.hpp"

namespace zkstrip {

struct SweepConfig {
    StripGeometry geom;
    TimeGrid tgrid;
    BourgainParams bourgain;
    int samples = 100;
    std::uint64_t seed = 1;
};

struct RatioSweep {
    std::string estimate_id;
    std::vector<std::uint64_t> seeds;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    std::uint64_t argmax_seed = 0;
    bool flagged = false; ///< set by the resolution-stability comparison
    BourgainParams params;
    double T = 0.0;
    int Nx = 0, Nt = 0, K = 0;

    void finalize() {
        if (ratios.empty()) return;
        std::vector<double> sorted = ratios;
        std::sort(sorted.begin(), sorted.end());
        median_ratio = sorted[sorted.size() / 2];
        max_ratio = 0.0;
        for (size_t i = 0; i < ratios.size(); ++i) {
            if (!std::isfinite(ratios[i]))
                throw numeric_error("RatioSweep: non-finite ratio at seed " +
                                    std::to_string(seeds[i]));
            if (ratios[i] > max_ratio) {
                max_ratio = ratios[i];
                argmax_seed = seeds[i];
            }
        }
    }
};

namespace detail {

inline std::uint64_t sample_seed(std::uint64_t base, int index) {
    return base ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1));
}

/// smooth half-strip slice: per-mode Gaussian packets with random carriers
inline FieldSlice random_slice(const StripGeometry& g, Rng& rng) {
    FieldSlice u(g);
    const int active = 1 + rng.uniform_int(0, g.K - 1);
    for (int pick = 0; pick < active; ++pick) {
        const int k = 1 + rng.uniform_int(0, g.K - 1);
        const double amp = rng.gaussian();
        const double x0 = rng.uniform(-0.25 * g.L, 0.25 * g.L);
        const double sig = rng.uniform(0.8, 2.0);
        const double xi0 = rng.uniform(0.0, 2.0);
        const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
        auto line = u.mode(k);
        for (int i = 0; i < g.Nx; ++i)
            line[i] += amp * std::cos(xi0 * g.x(i) + ph) *
                       std::exp(-std::pow((g.x(i) - x0) / sig, 2) / 2.0);
    }
    return u;
}

/// smooth compact wavemaker bursts
inline BoundaryData random_boundary(const StripGeometry& g, const TimeGrid& tg, Rng& rng) {
    BoundaryData b(g, tg, BoundaryRole::forcing_f);
    const int active = 1 + rng.uniform_int(0, g.K - 1);
    for (int pick = 0; pick < active; ++pick) {
        const int k = 1 + rng.uniform_int(0, g.K - 1);
        const double amp = rng.gaussian();
        const double tau0 = rng.uniform(2.0, 0.25 / tg.dt());
        const double tc = tg.T * rng.uniform(0.35, 0.65);
        const double w = tg.T * rng.uniform(0.06, 0.1);
        for (int n = 0; n < tg.n_window(); ++n) {
            const double s = tg.t(n) - tc;
            b.at(k, n) += amp * std::sin(tau0 * s) * std::exp(-std::pow(s / w, 2));
        }
    }
    return b;
}

/// space-time packets; resonant fraction rides the characteristic surface
inline SpaceTimeField random_field(const StripGeometry& g, const TimeGrid& tg, Rng& rng,
                                   double resonant_fraction = 0.5) {
    SpaceTimeField u(g, tg);
    const int packets = 2 + rng.uniform_int(0, 2);
    for (int p = 0; p < packets; ++p) {
        const int k = 1 + rng.uniform_int(0, g.K - 1);
        const double amp = rng.gaussian();
        const double x0 = rng.uniform(-0.25 * g.L, 0.25 * g.L);
        const double sx = rng.uniform(0.8, 2.0);
        const double tc = tg.T * rng.uniform(0.3, 0.7);
        const double st = tg.T * rng.uniform(0.1, 0.2);
        const double xi0 = rng.uniform(0.2, 2.5);
        const bool resonant = rng.uniform() < resonant_fraction;
        const double detune = resonant ? rng.uniform(-0.5, 0.5)
                                       : rng.uniform(3.0, 0.25 / tg.dt());
        const double tau0 = omega_k(xi0, k, g) + detune;
        const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (int n = 0; n < tg.n_window(); ++n) {
            auto line = u.x_line(k, n);
            const double env_t = std::exp(-std::pow((tg.t(n) - tc) / st, 2) / 2.0);
            if (env_t < 1e-14) continue;
            for (int i = 0; i < g.Nx; ++i)
                line[i] += amp * env_t * std::cos(xi0 * g.x(i) + tau0 * tg.t(n) + ph) *
                           std::exp(-std::pow((g.x(i) - x0) / sx, 2) / 2.0);
        }
    }
    // one rough band-limited layer on a fixed coarse lattice
    const int k = 1 + rng.uniform_int(0, g.K - 1);
    const double rough_amp = 0.2 * rng.gaussian();
    for (int m = 1; m <= 5; ++m)
        for (int j = 1; j <= 5; ++j) {
            const double cr = rng.gaussian(), ci = rng.gaussian();
            const double xi = g.dxi() * m;
            const double tau = tg.dtau() * j;
            for (int n = 0; n < tg.n_window(); ++n) {
                auto line = u.x_line(k, n);
                const double tphase = tau * tg.t(n);
                for (int i = 0; i < g.Nx; ++i)
                    line[i] += rough_amp * (cr * std::cos(xi * g.x(i) + tphase) -
                                            ci * std::sin(xi * g.x(i) + tphase)) /
                               25.0;
            }
        }
    return u;
}

inline double l4_norm(const SpaceTimeField& u) {
    const StripGeometry& g = u.geom;
    SineBasis basis(g);
    const int ny = g.ny_interior();
    std::vector<double> c(g.K), p(ny);
    double acc = 0.0;
    for (int n = 0; n < u.tgrid.n_window(); ++n)
        for (int i = 0; i < g.Nx; ++i) {
            for (int k = 1; k <= g.K; ++k) c[k - 1] = u.at(k, n, i);
            basis.synthesize(c, p);
            for (int j = 0; j < ny; ++j) acc += std::pow(p[j], 4);
        }
    return std::pow(g.dx() * g.dy() * u.tgrid.dt() * acc, 0.25);
}

template <typename SampleFn>
RatioSweep run_sweep(const std::string& id, const SweepConfig& cfg, SampleFn&& fn) {
    RatioSweep sweep;
    sweep.estimate_id = id;
    sweep.params = cfg.bourgain;
    sweep.T = cfg.tgrid.T;
    sweep.Nx = cfg.geom.Nx;
    sweep.Nt = cfg.tgrid.Nt;
    sweep.K = cfg.geom.K;
    for (int s = 0; s < cfg.samples; ++s) {
        const std::uint64_t seed = sample_seed(cfg.seed, s);
        Rng rng(seed);
        const double ratio = fn(rng);
        sweep.seeds.push_back(seed);
        sweep.ratios.push_back(ratio);
    }
    sweep.finalize();
    return sweep;
}

} // namespace detail

/// ||theta S(t) u0||_X / ||u0||_{L^2}
inline RatioSweep check_group_estimate(const SweepConfig& cfg) {
    return detail::run_sweep("group", cfg, [&](Rng& rng) {
        FieldSlice u0 = detail::random_slice(cfg.geom, rng);
        SpaceTimeField u = group_orbit(u0, cfg.tgrid);
        apply_theta(u);
        return x0b_norm(spectrum_of(u), cfg.bourgain).total / u0.l2();
    });
}

/// ||theta Duh_delta(f)||_X / ||f||_{H^{-1/3}_t L^2_y}
inline RatioSweep check_delta_forcing(const SweepConfig& cfg) {
    return detail::run_sweep("delta", cfg, [&](Rng& rng) {
        BoundaryData f = detail::random_boundary(cfg.geom, cfg.tgrid, rng);
        SpaceTimeField u = duhamel_delta(f);
        apply_theta(u);
        return x0b_norm(spectrum_of(u), cfg.bourgain).total / hs_t_l2y_norm(f, -1.0 / 3.0);
    });
}

/// ||theta Duh(w)||_X / ||w||_Y
inline RatioSweep check_duhamel_yx(const SweepConfig& cfg) {
    return detail::run_sweep("duhamel", cfg, [&](Rng& rng) {
        SpaceTimeField w = detail::random_field(cfg.geom, cfg.tgrid, rng);
        SpaceTimeField u = duhamel_inhomogeneous(w);
        apply_theta(u);
        return x0b_norm(spectrum_of(u), cfg.bourgain).total /
               y0b_norm(spectrum_of(w), cfg.bourgain).total;
    });
}

/// ||trace theta Duh(h)||_{H^{1/3}_t L^2_y} / ||h||_Y
inline RatioSweep check_trace_estimate(const SweepConfig& cfg) {
    return detail::run_sweep("trace", cfg, [&](Rng& rng) {
        SpaceTimeField h = detail::random_field(cfg.geom, cfg.tgrid, rng);
        SpaceTimeField u = duhamel_inhomogeneous(h);
        apply_theta(u);
        BoundaryData v(cfg.geom, cfg.tgrid, BoundaryRole::trace);
        const int i0 = cfg.geom.x0_index();
        for (int k = 1; k <= cfg.geom.K; ++k)
            for (int n = 0; n < cfg.tgrid.n_window(); ++n) v.at(k, n) = u.at(k, n, i0);
        return hs_t_l2y_norm(v, 1.0 / 3.0) / y0b_norm(spectrum_of(h), cfg.bourgain).total;
    });
}

/// ||d_x(v^2)||_Y / ||v||_Z^2, adversarial resonant sampling
inline RatioSweep check_bilinear(const SweepConfig& cfg) {
    if (!cfg.bourgain.in_validity_window())
        throw config_error("check_bilinear: parameters outside b in (3/8,1/2), alpha in (1/2,2/3)");
    return detail::run_sweep("bilinear", cfg, [&](Rng& rng) {
        SpaceTimeField v = detail::random_field(cfg.geom, cfg.tgrid, rng, 0.7);
        const double zb = zb_norm(v, cfg.bourgain);
        SpaceTimeField dxsq = galerkin_dx_square(v);
        return y0b_norm(spectrum_of(dxsq), cfg.bourgain).total / (zb * zb);
    });
}

/// ||v||_{L^4} / ||v||_X, requires b > 3/8
inline RatioSweep check_strichartz_embedding(const SweepConfig& cfg) {
    if (!(cfg.bourgain.b > 3.0 / 8.0))
        throw config_error("check_strichartz_embedding: requires b > 3/8");
    return detail::run_sweep("strichartz", cfg, [&](Rng& rng) {
        SpaceTimeField v = detail::random_field(cfg.geom, cfg.tgrid, rng);
        return detail::l4_norm(v) / x0b_norm(spectrum_of(v), cfg.bourgain).total;
    });
}

inline RatioSweep run_estimate_sweep(const std::string& id, const SweepConfig& cfg) {
    if (id == "group") return check_group_estimate(cfg);
    if (id == "delta") return check_delta_forcing(cfg);
    if (id == "duhamel") return check_duhamel_yx(cfg);
    if (id == "trace") return check_trace_estimate(cfg);
    if (id == "bilinear") return check_bilinear(cfg);
    if (id == "strichartz") return check_strichartz_embedding(cfg);
    throw config_error("run_estimate_sweep: unknown estimate id '" + id + "'");
}

/// Resolution-stability comparison: flag (not fail) growth beyond 25%.
inline bool stability_flag(const RatioSweep& base, const RatioSweep& refined) {
    return refined.max_ratio > 1.25 * base.max_ratio;
}

} // namespace zkstrip
