#pragma once

/**
 * io.hpp: self-describing field containers, CSV reports and the run
 * manifest.
 *
 * Container layout: one JSON header line (dims, grids, layout, dtype)
 * terminated by '\n', followed by the raw little-endian float64 payload in
 * the documented index order. The header pins every grid parameter, so a
 * container plus the manifest reproduces the run exactly.
 */

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "estimates.hpp"
#include "field.hpp"
#include "norms.hpp"
#include "solver.hpp"

namespace zkstrip {

using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "field containers are little-endian");

inline json geometry_json(const StripGeometry& g) {
    return json{{"strip_width_B", g.B}, {"transport_a", g.a},   {"modes_K", g.K},
                {"x_box_half_L", g.L},  {"grid_Nx", g.Nx},      {"grid_Ny", g.Ny}};
}

inline StripGeometry geometry_from_json(const json& j) {
    StripGeometry g;
    g.B = j.at("strip_width_B").get<double>();
    g.a = j.at("transport_a").get<double>();
    g.K = j.at("modes_K").get<int>();
    g.L = j.at("x_box_half_L").get<double>();
    g.Nx = j.at("grid_Nx").get<int>();
    g.Ny = j.at("grid_Ny").get<int>();
    g.validate();
    return g;
}

inline json timegrid_json(const TimeGrid& t) {
    return json{{"horizon_T", t.T}, {"steps_Nt", t.Nt}, {"pad_factor", t.pad_factor}};
}

inline TimeGrid timegrid_from_json(const json& j) {
    TimeGrid t;
    t.T = j.at("horizon_T").get<double>();
    t.Nt = j.at("steps_Nt").get<int>();
    t.pad_factor = j.at("pad_factor").get<int>();
    t.validate();
    return t;
}

namespace detail {

inline void write_container(const std::string& path, const json& header,
                            const std::vector<double>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!out) throw config_error("short write: " + path);
}

inline json read_container(const std::string& path, std::vector<double>& payload) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("missing container header: " + path);
    json header;
    try {
        header = json::parse(line);
    } catch (const json::parse_error& e) {
        throw config_error("bad container header in " + path + ": " + e.what());
    }
    size_t count = 1;
    for (const auto& d : header.at("dims")) count *= d.get<size_t>();
    payload.resize(count);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != count * sizeof(double))
        throw config_error("truncated payload in " + path);
    return header;
}

} // namespace detail

inline void write_field(const std::string& path, const SpaceTimeField& u) {
    json header{{"format", "zkfield-1"},
                {"kind", "space_time_field"},
                {"geometry", geometry_json(u.geom)},
                {"time", timegrid_json(u.tgrid)},
                {"dims", {u.geom.K, u.tgrid.n_window(), u.geom.Nx}},
                {"layout", "mode-major [k][n][i], x_i = -L + i dx, t_n = n dt"},
                {"dtype", "f64le"}};
    detail::write_container(path, header, u.data);
}

inline SpaceTimeField read_field(const std::string& path) {
    std::vector<double> payload;
    json header = detail::read_container(path, payload);
    if (header.at("kind") != "space_time_field")
        throw config_error("not a space_time_field container: " + path);
    SpaceTimeField u(geometry_from_json(header.at("geometry")),
                     timegrid_from_json(header.at("time")));
    if (payload.size() != u.data.size())
        throw config_error("container dims do not match geometry: " + path);
    u.data = std::move(payload);
    return u;
}

inline void write_boundary(const std::string& path, const BoundaryData& b) {
    json header{{"format", "zkfield-1"},
                {"kind", "boundary_data"},
                {"geometry", geometry_json(b.geom)},
                {"time", timegrid_json(b.tgrid)},
                {"role", static_cast<int>(b.role)},
                {"dims", {b.geom.K, b.tgrid.n_window()}},
                {"layout", "mode-major [k][n] against orthonormal e_k"},
                {"dtype", "f64le"}};
    detail::write_container(path, header, b.modes);
}

inline BoundaryData read_boundary(const std::string& path) {
    std::vector<double> payload;
    json header = detail::read_container(path, payload);
    if (header.at("kind") != "boundary_data")
        throw config_error("not a boundary_data container: " + path);
    BoundaryData b(geometry_from_json(header.at("geometry")),
                   timegrid_from_json(header.at("time")),
                   static_cast<BoundaryRole>(header.at("role").get<int>()));
    if (payload.size() != b.modes.size())
        throw config_error("container dims do not match geometry: " + path);
    b.modes = std::move(payload);
    return b;
}

/// plot-ready CSV of one time slice: x, y, u(x, y)
inline void write_slice_csv(const std::string& path, const SpaceTimeField& u, int n) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    SineBasis basis(u.geom);
    std::vector<double> c(u.geom.K), p(u.geom.ny_interior());
    out << "x,y,u\n";
    char buf[96];
    for (int i = 0; i < u.geom.Nx; ++i) {
        for (int k = 1; k <= u.geom.K; ++k) c[k - 1] = u.at(k, n, i);
        basis.synthesize(c, p);
        for (int j = 1; j < u.geom.Ny; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", u.geom.x(i), u.geom.y(j),
                          p[j - 1]);
            out << buf;
        }
    }
}

inline void write_sweep_csv(const std::string& path, const RatioSweep& sweep) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "estimate_id,seed,ratio,b,alpha,s,T,K,Nx,Nt\n";
    char buf[256];
    for (size_t i = 0; i < sweep.ratios.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n",
                      sweep.estimate_id.c_str(),
                      static_cast<unsigned long long>(sweep.seeds[i]), sweep.ratios[i],
                      sweep.params.b, sweep.params.alpha, sweep.params.s, sweep.T, sweep.K,
                      sweep.Nx, sweep.Nt);
        out << buf;
    }
}

inline void write_norm_report_csv(const std::string& path, const NormReport& x,
                                  const NormReport& y, double hs13, double energy,
                                  double zb) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "name,value\n";
    char buf[128];
    auto row = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g\n", name, v);
        out << buf;
    };
    row("x0b_total", x.total);
    row("x0b_low_sq", x.low);
    row("x0b_high_sq", x.high);
    row("y0b_total", y.total);
    row("y0b_low_sq", y.low);
    row("y0b_high_sq", y.high);
    row("y0b_third_sq", y.third);
    row("hs13_t_l2y", hs13);
    row("energy_l2t_h1", energy);
    row("zb_total", zb);
    row("param_b", x.params.b);
    row("param_alpha", x.params.alpha);
    row("param_s", x.params.s);
}

/// Run manifest: written before heavy work starts, rewritten on completion;
/// an interrupted run leaves the valid "running" snapshot behind.
struct RunManifest {
    json doc;

    static RunManifest start(const std::string& command, const json& config,
                             std::uint64_t seed, int threads, double resolution_scale) {
        RunManifest m;
        m.doc = json{{"format", "zkrun-1"},
                     {"status", "running"},
                     {"command", command},
                     {"config", config},
                     {"seed", seed},
                     {"threads", threads},
                     {"resolution_scale", resolution_scale},
                     {"version", "zkstrip 1.0.0"},
                     {"calibration_C", nullptr},
                     {"outputs", json::array()},
                     {"reports", json::object()},
                     {"timings_ms", json::object()}};
        return m;
    }

    void add_output(const std::string& path) { doc["outputs"].push_back(path); }
    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw config_error("cannot open for writing: " + path);
        out << doc.dump(2) << '\n';
    }
};

} // namespace zkstrip
