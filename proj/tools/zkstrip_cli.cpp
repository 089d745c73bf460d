// zkstrip: pseudospectral solver for the Zakharov-Kuznetsov equation on a
// half-strip with a Dirichlet wavemaker, plus the estimate-verification
// harness. Subcommands: solve | verify | forcing | norms.
//
// Exit codes: 0 ok, 2 configuration, 3 non-convergence after the halving
// schedule, 4 flagged sweep divergence, 5 singular multiplier bin.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zkstrip/config.hpp"
#include "zkstrip/estimates.hpp"
#include "zkstrip/io.hpp"
#include "zkstrip/solver.hpp"
#include "zkstrip/threading.hpp"

namespace fs = std::filesystem;
using namespace zkstrip;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    double resolution_scale = 1.0;
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

json picard_report_json(const PicardReport& rep) {
    return json{{"converged", rep.converged},
                {"iterations", rep.iterations},
                {"halvings", rep.halvings},
                {"T_used", rep.T_used},
                {"increments", rep.increments},
                {"contraction", rep.contraction},
                {"rho_final", rep.rho_final},
                {"M_hat", rep.M_hat},
                {"ball_radius", rep.ball_radius},
                {"c1_extension", rep.c1_extension},
                {"c2_extension", rep.c2_extension},
                {"beta_hat", std::isnan(rep.beta_hat) ? json() : json(rep.beta_hat)}};
}

/// One-time calibration on the reference single-mode wavemaker (the config's
/// own burst when present, otherwise the bundled default).
double auto_calibrate(const RunConfig& rc) {
    WavemakerSpec ref = rc.wavemaker;
    if (ref.type != "tone_burst" || ref.amplitude == 0.0) {
        ref.type = "tone_burst";
        ref.mode_k = 1;
        ref.amplitude = 1.0;
        ref.tau0 = 6.0 * std::numbers::pi / rc.solver.tgrid.T;
        ref.center_t = 0.5 * rc.solver.tgrid.T;
        ref.width_t = 0.1 * rc.solver.tgrid.T;
    }
    BoundaryData g1(rc.solver.geom, rc.solver.tgrid, BoundaryRole::corrected_g1);
    for (int n = 0; n < rc.solver.tgrid.n_horizon(); ++n)
        g1.at(ref.mode_k, n) = ref.eval(ref.mode_k, rc.solver.tgrid.t(n));
    return calibrate_forcing_scale(g1);
}

double boundary_recovery_error(const SpaceTimeField& u, const BoundaryData& g) {
    const int i0 = u.geom.x0_index();
    double num = 0.0, den = 0.0;
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = 0; n < u.tgrid.n_horizon(); ++n) {
            const double tr = u.at(k, n, i0);
            num += std::pow(tr - g.at(k, n), 2);
            den += g.at(k, n) * g.at(k, n);
        }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

int cmd_solve(const GlobalOpts& go) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(go.config_path, go.resolution_scale);
    fs::create_directories(go.out_dir);
    auto manifest = RunManifest::start("solve", rc.raw, go.seed, go.threads,
                                       go.resolution_scale);
    const std::string manifest_path = go.out_dir + "/manifest.json";
    manifest.write(manifest_path);

    if (rc.solver.forcing_on && rc.solver.C_cal <= 0.0) {
        rc.solver.C_cal = auto_calibrate(rc);
    }
    manifest.doc["calibration_C"] =
        rc.solver.forcing_on ? json(rc.solver.C_cal) : json();

    FieldSlice u0 = build_initial_data(rc);
    PicardResult res;
    try {
        res = solve_with_halving(
            u0, [&](int k, double t) { return rc.wavemaker.eval(k, t); }, rc.solver);
    } catch (const convergence_error& e) {
        manifest.doc["status"] = "failed";
        manifest.doc["reports"]["picard"] = picard_report_json(e.report);
        manifest.doc["timings_ms"]["total"] = elapsed_ms(t0);
        manifest.write(manifest_path);
        std::fprintf(stderr, "solve: %s\n", e.what());
        return 3;
    }

    const SpaceTimeField& u = *res.solution;
    if (rc.write_fields) {
        const std::string field_path = go.out_dir + "/solution.zkf";
        write_field(field_path, u);
        manifest.add_output(field_path);
        if (rc.solver.forcing_on) {
            const std::string f_path = go.out_dir + "/forcing.zkf";
            write_boundary(f_path, res.forcing.f);
            manifest.add_output(f_path);
        }
    }
    if (rc.csv_export) {
        const std::string csv_path = go.out_dir + "/solution_final_slice.csv";
        write_slice_csv(csv_path, u, u.tgrid.n_horizon() - 1);
        manifest.add_output(csv_path);
    }

    // rebuild the wavemaker on the possibly halved grid for the trace check
    BoundaryData g_used(u.geom, u.tgrid, BoundaryRole::raw_g);
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = 0; n < u.tgrid.n_horizon(); ++n)
            g_used.at(k, n) = rc.wavemaker.eval(k, u.tgrid.t(n));

    manifest.doc["reports"]["picard"] = picard_report_json(res.report);
    if (rc.solver.forcing_on && rc.wavemaker.type == "tone_burst" &&
        rc.initial.amplitude == 0.0)
        manifest.doc["reports"]["boundary_recovery_rel_l2"] =
            boundary_recovery_error(u, g_used);
    manifest.doc["reports"]["pde_residual_rel"] =
        pde_residual(u, rc.solver.nonlinearity_on);
    manifest.doc["reports"]["forcing_imag_residue"] = res.forcing.imag_residue;
    manifest.doc["status"] = "complete";
    manifest.doc["timings_ms"]["total"] = elapsed_ms(t0);
    manifest.write(manifest_path);
    std::printf("solve: converged=%d iterations=%d halvings=%d residual=%.3e\n",
                res.report.converged ? 1 : 0, res.report.iterations, res.report.halvings,
                manifest.doc["reports"]["pde_residual_rel"].get<double>());
    return 0;
}

int cmd_verify(const GlobalOpts& go, const std::string& estimate_id, int samples) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(go.config_path, go.resolution_scale);
    fs::create_directories(go.out_dir);
    auto manifest = RunManifest::start("verify", rc.raw, go.seed, go.threads,
                                       go.resolution_scale);
    const std::string manifest_path = go.out_dir + "/manifest.json";
    manifest.write(manifest_path);

    std::vector<std::string> ids;
    if (estimate_id == "all")
        ids = {"group", "delta", "duhamel", "trace", "bilinear", "strichartz"};
    else
        ids = {estimate_id};

    SweepConfig cfg;
    cfg.geom = rc.solver.geom;
    cfg.tgrid = rc.solver.tgrid;
    cfg.bourgain = rc.solver.bourgain;
    cfg.samples = samples >= 0 ? samples : rc.verify_samples;
    cfg.seed = go.seed;
    SweepConfig fine = cfg;
    fine.geom.Nx *= 2;
    fine.geom.Ny *= 2;
    fine.tgrid.Nt *= 2;

    bool any_flagged = false;
    for (const auto& id : ids) {
        RatioSweep sweep = run_estimate_sweep(id, cfg);
        if (cfg.samples > 0) {
            RatioSweep refined = run_estimate_sweep(id, fine);
            sweep.flagged = stability_flag(sweep, refined);
            manifest.doc["reports"][id] = json{{"max_ratio", sweep.max_ratio},
                                               {"median_ratio", sweep.median_ratio},
                                               {"max_ratio_refined", refined.max_ratio},
                                               {"argmax_seed", sweep.argmax_seed},
                                               {"flagged", sweep.flagged}};
        }
        const std::string csv = go.out_dir + "/sweep_" + id + ".csv";
        write_sweep_csv(csv, sweep);
        manifest.add_output(csv);
        any_flagged = any_flagged || sweep.flagged;
        std::printf("verify %s: samples=%zu max=%.4g median=%.4g%s\n", id.c_str(),
                    sweep.ratios.size(), sweep.max_ratio, sweep.median_ratio,
                    sweep.flagged ? " FLAGGED" : "");
    }
    manifest.doc["status"] = "complete";
    manifest.doc["timings_ms"]["total"] = elapsed_ms(t0);
    manifest.write(manifest_path);
    return any_flagged ? 4 : 0;
}

int cmd_forcing(const GlobalOpts& go, const std::string& boundary_path) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(go.config_path, go.resolution_scale);
    fs::create_directories(go.out_dir);
    auto manifest = RunManifest::start("forcing", rc.raw, go.seed, go.threads,
                                       go.resolution_scale);
    const std::string manifest_path = go.out_dir + "/manifest.json";
    manifest.write(manifest_path);

    if (rc.solver.C_cal <= 0.0) rc.solver.C_cal = auto_calibrate(rc);
    manifest.doc["calibration_C"] = rc.solver.C_cal;

    BoundaryData g_raw = boundary_path.empty() ? build_wavemaker(rc)
                                               : read_boundary(boundary_path);
    FieldSlice u0 = build_initial_data(rc);
    auto ext = extend_initial(u0, rc.solver.mollifier_width);
    auto gb = extend_boundary(g_raw);
    BoundaryData g1 = corrected_boundary(gb.data, ext.field);
    taper_window_tail(g1);

    ForcingResult mult = forcing_from_boundary(g1, rc.solver.C_cal);
    const std::string f_path = go.out_dir + "/forcing.zkf";
    write_boundary(f_path, mult.f);
    manifest.add_output(f_path);

    // multiplier table over the tau grid (subsampled) for every mode
    {
        const std::string m_path = go.out_dir + "/multiplier_table.csv";
        std::ofstream out(m_path);
        out << "k,tau,re_M,im_M,abs_M\n";
        char buf[160];
        const TimeGrid& tg = rc.solver.tgrid;
        for (int k = 1; k <= rc.solver.geom.K; ++k)
            for (int j = 0; j < tg.n_window(); j += 4) {
                const cplx M = forcing_multiplier(k, tg.tau(j), rc.solver.geom);
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", k, tg.tau(j),
                              M.real(), M.imag(), std::abs(M));
                out << buf;
            }
        manifest.add_output(m_path);
    }

    // Neumann alternative where the series converges
    try {
        ForcingResult neu =
            neumann_series_forcing(g1, rc.neumann_nmax, rc.solver.C_cal, rc.zero_bin_scale);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < mult.f.modes.size(); ++i) {
            num += std::pow(neu.f.modes[i] - mult.f.modes[i], 2);
            den += mult.f.modes[i] * mult.f.modes[i];
        }
        manifest.doc["reports"]["neumann_agreement_rel_l2"] =
            den > 0.0 ? std::sqrt(num / den) : 0.0;
        manifest.doc["reports"]["neumann_truncation_bound"] = neu.truncation_bound;
    } catch (const divergent_series_error& e) {
        manifest.doc["reports"]["neumann_agreement_rel_l2"] = nullptr;
        manifest.doc["reports"]["neumann_divergent_mode"] = e.mode_k;
        manifest.doc["reports"]["neumann_ratio"] = e.ratio;
    }

    auto reg = forcing_regularity(mult.f, g1, rc.solver.C_cal);
    manifest.doc["reports"]["regularity_left"] = reg.left;
    manifest.doc["reports"]["regularity_right_bound"] = reg.bound_constant * reg.right;
    manifest.doc["reports"]["forcing_imag_residue"] = mult.imag_residue;

    // sensitivity of the zero-bin regularization of (i tau)^{-2/3}: compare
    // the leading Neumann term at half and double the configured scale
    {
        auto base_at = [&](double scale) {
            std::vector<double> acc;
            double l2 = 0.0;
            for (int k = 1; k <= rc.solver.geom.K; ++k) {
                auto m = g1.mode(k);
                auto b = rl_multiplier_apply(std::vector<double>(m.begin(), m.end()),
                                             -2.0 / 3.0, rc.solver.tgrid, scale);
                for (double v : b) l2 += v * v;
            }
            return std::sqrt(l2);
        };
        const double b0 = base_at(rc.zero_bin_scale);
        const double lo = base_at(0.5 * rc.zero_bin_scale);
        const double hi = base_at(2.0 * rc.zero_bin_scale);
        manifest.doc["reports"]["zero_bin_sensitivity"] =
            b0 > 0.0 ? std::max(std::abs(lo - b0), std::abs(hi - b0)) / b0 : 0.0;
    }
    manifest.doc["status"] = "complete";
    manifest.doc["timings_ms"]["total"] = elapsed_ms(t0);
    manifest.write(manifest_path);
    std::printf("forcing: |f| l2 = %.6g, regularity left/bound = %.4g\n", mult.f.l2(),
                reg.left / std::max(reg.bound_constant * reg.right, 1e-300));
    return 0;
}

int cmd_norms(const GlobalOpts& go, const std::string& field_path) {
    RunConfig rc = load_run_config(go.config_path, go.resolution_scale);
    fs::create_directories(go.out_dir);
    SpaceTimeField u = read_field(field_path);
    auto spec = spectrum_of(u);
    auto x = x0b_norm(spec, rc.solver.bourgain);
    auto y = y0b_norm(spec, rc.solver.bourgain);
    BoundaryData tr(u.geom, u.tgrid, BoundaryRole::trace);
    const int i0 = u.geom.x0_index();
    for (int k = 1; k <= u.geom.K; ++k)
        for (int n = 0; n < u.tgrid.n_window(); ++n) tr.at(k, n) = u.at(k, n, i0);
    const double hs13 = hs_t_l2y_norm(tr, 1.0 / 3.0);
    const double en = energy_norm(u);
    const std::string path = go.out_dir + "/norms.csv";
    write_norm_report_csv(path, x, y, hs13, en, x.total + en);
    std::printf("norms: X=%.8g Y=%.8g energy=%.8g Z=%.8g trace_H13=%.8g\n", x.total,
                y.total, en, x.total + en, hs13);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zakharov-Kuznetsov half-strip wavemaker solver and estimate harness"};
    app.require_subcommand(1);
    GlobalOpts go;
    app.add_option("--config", go.config_path, "JSON configuration file");
    app.add_option("--out-dir", go.out_dir, "output directory (default .)");
    app.add_option("--seed", go.seed, "base seed for randomized sweeps");
    app.add_option("--threads", go.threads, "mode-parallel thread budget");
    app.add_option("--resolution-scale", go.resolution_scale,
                   "integer multiplier for Nx, Ny, Nt");

    auto* solve = app.add_subcommand("solve", "run the wavemaker initial-boundary solve");
    auto* verify = app.add_subcommand("verify", "run estimate ratio sweeps");
    std::string estimate_id = "all";
    int samples = -1;
    verify->add_option("--estimate", estimate_id,
                       "group|delta|duhamel|trace|bilinear|strichartz|all");
    verify->add_option("--samples", samples, "samples per sweep");
    auto* forcing = app.add_subcommand("forcing", "construct the boundary forcing");
    std::string boundary_path;
    forcing->add_option("--boundary", boundary_path, "boundary-data container (optional)");
    auto* norms = app.add_subcommand("norms", "evaluate norms of a stored field");
    std::string field_path;
    norms->add_option("--field", field_path, "field container")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (go.config_path.empty()) throw config_error("--config is required");
        set_thread_budget(go.threads);
        if (solve->parsed()) return cmd_solve(go);
        if (verify->parsed()) {
            const std::vector<std::string> known{"group",   "delta",    "duhamel",
                                                 "trace",   "bilinear", "strichartz",
                                                 "all"};
            bool ok = false;
            for (const auto& k : known) ok = ok || k == estimate_id;
            if (!ok) throw config_error("unknown estimate id: " + estimate_id);
            return cmd_verify(go, estimate_id, samples);
        }
        if (forcing->parsed()) return cmd_forcing(go, boundary_path);
        if (norms->parsed()) return cmd_norms(go, field_path);
    } catch (const singular_bin_error& e) {
        std::fprintf(stderr, "error: %s (k=%d, tau=%.6g)\n", e.what(), e.mode_k, e.tau);
        return 5;
    } catch (const convergence_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
