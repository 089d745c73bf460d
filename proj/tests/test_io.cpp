#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"
#include "zkstrip/config.hpp"
#include "zkstrip/io.hpp"
#include "zkstrip/rng.hpp"

using namespace zkstrip;
using namespace zktest;
using Catch::Approx;
using std::numbers::pi;

namespace {

std::filesystem::path tmp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "zkstrip_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("field container round trip is exact") {
    auto g = desk_geometry(0.3, pi, 4, 64, 16, 8.0);
    TimeGrid tg{0.5, 32, 2};
    SpaceTimeField u(g, tg);
    Rng rng(1);
    for (double& v : u.data) v = rng.gaussian();

    const auto path = tmp_path("field.zkf");
    write_field(path.string(), u);
    auto back = read_field(path.string());
    REQUIRE(back.data.size() == u.data.size());
    for (size_t i = 0; i < u.data.size(); ++i) CHECK(back.data[i] == u.data[i]);
    CHECK(back.geom.B == u.geom.B);
    CHECK(back.geom.L == u.geom.L);
    CHECK(back.tgrid.Nt == u.tgrid.Nt);
}

TEST_CASE("boundary container round trip and kind checking") {
    auto g = desk_geometry(0.0, pi, 3, 64, 8, 8.0);
    TimeGrid tg{0.5, 32, 2};
    BoundaryData b(g, tg, BoundaryRole::forcing_f);
    Rng rng(2);
    for (double& v : b.modes) v = rng.gaussian();

    const auto path = tmp_path("boundary.zkf");
    write_boundary(path.string(), b);
    auto back = read_boundary(path.string());
    for (size_t i = 0; i < b.modes.size(); ++i) CHECK(back.modes[i] == b.modes[i]);
    CHECK(back.role == BoundaryRole::forcing_f);

    // a field reader must reject a boundary container
    CHECK_THROWS_AS(read_field(path.string()), config_error);

    // truncated payload is rejected
    const auto trunc = tmp_path("trunc.zkf");
    {
        std::ifstream in(path, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(trunc, std::ios::binary);
        out.write(all.data(), static_cast<std::streamsize>(all.size() - 64));
    }
    CHECK_THROWS_AS(read_boundary(trunc.string()), config_error);
}

TEST_CASE("config parsing, defaults and validation") {
    const std::string good = R"({
        "geometry": {"strip_width_B": 3.14159, "transport_a": 1.0, "modes_K": 4,
                     "x_box_half_L": 10.0, "grid_Nx": 64, "grid_Ny": 16},
        "time": {"horizon_T": 0.5, "steps_Nt": 32, "pad_factor": 2},
        "wavemaker": {"type": "tone_burst", "mode_k": 1, "amplitude": 0.5}
    })";
    auto rc = parse_run_config(good);
    CHECK(rc.solver.geom.K == 4);
    CHECK(rc.solver.geom.L == 10.0);
    CHECK(rc.wavemaker.amplitude == 0.5);
    CHECK(rc.solver.forcing_on);
    CHECK_FALSE(rc.auto_box);

    // auto box via the group-velocity rule
    auto rc_auto = parse_run_config(R"({
        "geometry": {"grid_Nx": 128, "grid_Ny": 64, "modes_K": 8},
        "time": {"horizon_T": 1.0, "steps_Nt": 64}
    })");
    CHECK(rc_auto.auto_box);
    CHECK(rc_auto.solver.geom.L == Approx(default_box_halfwidth(128, 1.0)));

    // resolution scaling doubles the grids and rederives the box
    auto rc2 = parse_run_config(good, 2.0);
    CHECK(rc2.solver.geom.Nx == 128);
    CHECK(rc2.solver.geom.Ny == 32);
    CHECK(rc2.solver.tgrid.Nt == 64);

    // malformed JSON carries a line anchor
    try {
        parse_run_config("{\n  \"geometry\": {\n  \"bad\"\n}");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    // validation failures name the offending key
    CHECK_THROWS_AS(parse_run_config(R"({"geometry": {"modes_K": 0}})"), config_error);
    CHECK_THROWS_AS(parse_run_config(R"({"initial_data": {"type": "bogus"}})"), config_error);
    CHECK_THROWS_AS(parse_run_config(R"({"geometry": {"grid_Ny": 4, "modes_K": 8}})"),
                    config_error);
}

TEST_CASE("sweep CSV carries the documented header") {
    RatioSweep sweep;
    sweep.estimate_id = "group";
    sweep.seeds = {11, 12};
    sweep.ratios = {1.5, 2.5};
    sweep.params = BourgainParams{0.0, 0.45, 0.55};
    sweep.T = 0.75;
    sweep.Nx = 128;
    sweep.Nt = 96;
    sweep.K = 8;
    sweep.finalize();
    const auto path = tmp_path("sweep.csv");
    write_sweep_csv(path.string(), sweep);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "estimate_id,seed,ratio,b,alpha,s,T,K,Nx,Nt");
    std::string row;
    std::getline(in, row);
    CHECK(row.substr(0, 9) == "group,11,");
    CHECK(sweep.max_ratio == 2.5);
    CHECK(sweep.argmax_seed == 12);
}

TEST_CASE("manifest lifecycle") {
    auto m = RunManifest::start("solve", nlohmann::json{{"demo", true}}, 42, 2, 1.0);
    CHECK(m.doc["status"] == "running");
    const auto path = tmp_path("manifest.json");
    m.write(path.string());
    m.add_output("solution.zkf");
    m.doc["status"] = "complete";
    m.write(path.string());
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    CHECK(j["status"] == "complete");
    CHECK(j["outputs"].size() == 1);
    CHECK(j["seed"] == 42);
}
