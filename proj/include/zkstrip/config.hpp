#pragma once

/**
 * config.hpp: run configuration: JSON with explicit units in key names.
 * Parse errors carry line:column anchors; validation errors name the key.
 */

#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "solver.hpp"

namespace zkstrip {

struct InitialDataSpec {
    std::string type = "zero"; // zero | gaussian_mode
    int mode_k = 1;
    double amplitude = 0.0;
    double center_x = 6.0;
    double width_x = 1.2;
};

struct WavemakerSpec {
    std::string type = "zero"; // zero | tone_burst | file
    int mode_k = 1;
    double amplitude = 0.0;
    double tau0 = 6.0 * std::numbers::pi;
    double center_t = 0.5;
    double width_t = 0.1;
    std::string path;

    double eval(int k, double t) const {
        if (type != "tone_burst" || k != mode_k) return 0.0;
        return amplitude * std::sin(tau0 * (t - center_t)) *
               std::exp(-std::pow((t - center_t) / width_t, 2));
    }
};

struct RunConfig {
    SolverConfig solver;
    InitialDataSpec initial;
    WavemakerSpec wavemaker;
    int neumann_nmax = 20;
    double zero_bin_scale = 0.5;
    int verify_samples = 100;
    bool write_fields = true;
    bool csv_export = false;
    bool auto_box = false; ///< x_box_half_L was "auto"
    nlohmann::json raw;    ///< snapshot for the manifest
};

namespace detail {

inline std::string line_anchor(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config key '") + key + "': " + e.what());
    }
}

} // namespace detail

inline RunConfig parse_run_config(const std::string& text, double resolution_scale = 1.0) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config parse error at " + detail::line_anchor(text, e.byte) +
                           ": " + e.what());
    }
    RunConfig rc;
    rc.raw = j;

    const auto geo = j.value("geometry", nlohmann::json::object());
    StripGeometry& g = rc.solver.geom;
    g.B = detail::get_or(geo, "strip_width_B", std::numbers::pi);
    g.a = detail::get_or(geo, "transport_a", 0.0);
    g.K = detail::get_or(geo, "modes_K", 16);
    g.Nx = detail::get_or(geo, "grid_Nx", 256);
    g.Ny = detail::get_or(geo, "grid_Ny", 64);

    const auto tj = j.value("time", nlohmann::json::object());
    TimeGrid& tg = rc.solver.tgrid;
    tg.T = detail::get_or(tj, "horizon_T", 1.0);
    tg.Nt = detail::get_or(tj, "steps_Nt", 256);
    tg.pad_factor = detail::get_or(tj, "pad_factor", 2);

    if (resolution_scale != 1.0) {
        if (resolution_scale < 1.0 || std::floor(resolution_scale) != resolution_scale)
            throw config_error("resolution scale must be a positive integer");
        const int s = static_cast<int>(resolution_scale);
        g.Nx *= s;
        g.Ny *= s;
        tg.Nt *= s;
    }

    // box half-width: explicit number or "auto" via the group-velocity rule
    if (geo.contains("x_box_half_L") && geo.at("x_box_half_L").is_number()) {
        g.L = geo.at("x_box_half_L").get<double>();
    } else {
        rc.auto_box = true;
        g.L = default_box_halfwidth(g.Nx, tg.T);
    }

    const auto bj = j.value("bourgain", nlohmann::json::object());
    rc.solver.bourgain.s = detail::get_or(bj, "s", 0.0);
    rc.solver.bourgain.b = detail::get_or(bj, "b", 0.45);
    rc.solver.bourgain.alpha = detail::get_or(bj, "alpha", 0.55);

    const auto pj = j.value("picard", nlohmann::json::object());
    rc.solver.picard_tol = detail::get_or(pj, "tol", 1e-9);
    rc.solver.picard_max = detail::get_or(pj, "max_iterations", 25);
    rc.solver.max_halvings = detail::get_or(pj, "max_halvings", 6);

    rc.solver.nonlinearity_on = detail::get_or(j, "nonlinearity", true);
    rc.solver.dealias = detail::get_or(j, "dealias", true);

    const auto fj = j.value("forcing", nlohmann::json::object());
    rc.solver.forcing_on = detail::get_or(fj, "enabled", true);
    if (fj.contains("calibration_C") && fj.at("calibration_C").is_number())
        rc.solver.C_cal = fj.at("calibration_C").get<double>();
    rc.neumann_nmax = detail::get_or(fj, "neumann_nmax", 20);
    rc.zero_bin_scale = detail::get_or(fj, "zero_bin_scale", 0.5);

    const auto ij = j.value("initial_data", nlohmann::json::object());
    rc.initial.type = detail::get_or<std::string>(ij, "type", "zero");
    rc.initial.mode_k = detail::get_or(ij, "mode_k", 1);
    rc.initial.amplitude = detail::get_or(ij, "amplitude", 0.0);
    rc.initial.center_x = detail::get_or(ij, "center_x", 6.0);
    rc.initial.width_x = detail::get_or(ij, "width_x", 1.2);
    if (rc.initial.type != "zero" && rc.initial.type != "gaussian_mode")
        throw config_error("initial_data.type must be zero or gaussian_mode");

    const auto wj = j.value("wavemaker", nlohmann::json::object());
    rc.wavemaker.type = detail::get_or<std::string>(wj, "type", "zero");
    rc.wavemaker.mode_k = detail::get_or(wj, "mode_k", 1);
    rc.wavemaker.amplitude = detail::get_or(wj, "amplitude", 0.0);
    rc.wavemaker.tau0 = detail::get_or(wj, "tau0", 6.0 * std::numbers::pi);
    rc.wavemaker.center_t = detail::get_or(wj, "center_t", 0.5);
    rc.wavemaker.width_t = detail::get_or(wj, "width_t", 0.1);
    rc.wavemaker.path = detail::get_or<std::string>(wj, "path", "");
    if (rc.wavemaker.type != "zero" && rc.wavemaker.type != "tone_burst" &&
        rc.wavemaker.type != "file")
        throw config_error("wavemaker.type must be zero, tone_burst or file");

    const auto vj = j.value("verify", nlohmann::json::object());
    rc.verify_samples = detail::get_or(vj, "samples", 100);

    const auto oj = j.value("output", nlohmann::json::object());
    rc.write_fields = detail::get_or(oj, "write_fields", true);
    rc.csv_export = detail::get_or(oj, "csv_export", false);

    rc.solver.validate();
    if (rc.initial.mode_k < 1 || rc.initial.mode_k > g.K)
        throw config_error("initial_data.mode_k out of range");
    if (rc.wavemaker.type == "tone_burst" &&
        (rc.wavemaker.mode_k < 1 || rc.wavemaker.mode_k > g.K))
        throw config_error("wavemaker.mode_k out of range");
    return rc;
}

inline RunConfig load_run_config(const std::string& path, double resolution_scale = 1.0) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config(text, resolution_scale);
}

inline FieldSlice build_initial_data(const RunConfig& rc) {
    FieldSlice u0(rc.solver.geom);
    if (rc.initial.type == "gaussian_mode" && rc.initial.amplitude != 0.0) {
        auto line = u0.mode(rc.initial.mode_k);
        const StripGeometry& g = rc.solver.geom;
        for (int i = 0; i < g.Nx; ++i) {
            if (g.x(i) <= 0.0) continue; // half-strip data
            line[i] = rc.initial.amplitude *
                      std::exp(-std::pow((g.x(i) - rc.initial.center_x) / rc.initial.width_x, 2) /
                               2.0);
        }
    }
    return u0;
}

inline BoundaryData build_wavemaker(const RunConfig& rc) {
    BoundaryData g(rc.solver.geom, rc.solver.tgrid, BoundaryRole::raw_g);
    if (rc.wavemaker.type == "tone_burst") {
        for (int k = 1; k <= rc.solver.geom.K; ++k)
            for (int n = 0; n < rc.solver.tgrid.n_horizon(); ++n)
                g.at(k, n) = rc.wavemaker.eval(k, rc.solver.tgrid.t(n));
    }
    return g;
}

} // namespace zkstrip
