// Randomized-geometry property sweeps: the structural invariants checked
// across many grid shapes, not just the reference ones.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "zkstrip/duhamel.hpp"
#include "zkstrip/norms.hpp"
#include "zkstrip/rng.hpp"
#include "zkstrip/threading.hpp"

using namespace zkstrip;
using Catch::Approx;
using std::numbers::pi;

namespace {

StripGeometry random_geometry(Rng& rng) {
    StripGeometry g;
    g.B = rng.uniform(0.8, 6.0);
    g.a = rng.uniform(-2.0, 3.0);
    g.K = 1 + rng.uniform_int(0, 11);
    const int nx_pow = 5 + rng.uniform_int(0, 2); // 32..128
    g.Nx = 1 << nx_pow;
    g.Ny = 2 * g.K + 1 + rng.uniform_int(0, 20);
    g.L = rng.uniform(4.0, 20.0);
    g.validate();
    return g;
}

TimeGrid random_timegrid(Rng& rng) {
    TimeGrid tg;
    tg.T = rng.uniform(0.2, 1.5);
    tg.Nt = 16 << rng.uniform_int(0, 2); // 16..64
    tg.pad_factor = 2 + rng.uniform_int(0, 1);
    tg.validate();
    return tg;
}

} // namespace

TEST_CASE("transverse round trip and Parseval across random geometries") {
    Rng rng(20260809);
    for (int trial = 0; trial < 24; ++trial) {
        auto g = random_geometry(rng);
        SineBasis basis(g);
        std::vector<double> c(g.K), samples(g.ny_interior()), back(g.K);
        for (double& v : c) v = rng.gaussian();
        basis.synthesize(c, samples);
        basis.project(samples, back);
        double quad = 0.0, modes = 0.0;
        for (int j = 0; j < g.ny_interior(); ++j) quad += samples[j] * samples[j];
        quad *= g.dy();
        for (int k = 0; k < g.K; ++k) {
            CHECK(back[k] == Approx(c[k]).margin(1e-12));
            modes += c[k] * c[k];
        }
        CHECK(quad == Approx(modes).epsilon(1e-12));
    }
}

TEST_CASE("propagation stays unitary and grouplike across random geometries") {
    Rng rng(77001);
    for (int trial = 0; trial < 16; ++trial) {
        auto g = random_geometry(rng);
        if (g.Nx < 64) g.Nx = 64;
        FieldSlice u0(g);
        // bumps resolved by the grid and confined inside the box, so no
        // energy hides in the unpaired Nyquist bin
        for (int k = 1; k <= g.K; ++k) {
            auto line = u0.mode(k);
            const double x0 = rng.uniform(-g.L / 4.0, g.L / 4.0);
            const double sig = g.L / 12.0;
            const double amp = rng.gaussian();
            for (int i = 0; i < g.Nx; ++i)
                line[i] = amp * std::exp(-std::pow((g.x(i) - x0) / sig, 2) / 2.0);
        }
        const double t = rng.uniform(-0.6, 0.6);
        const double s = rng.uniform(-0.4, 0.4);
        auto ut = propagate_2d(u0, t);
        CHECK(ut.l2() == Approx(u0.l2()).epsilon(1e-10));
        auto both = propagate_2d(ut, s);
        auto direct = propagate_2d(u0, t + s);
        double diff = 0.0;
        for (size_t i = 0; i < direct.data.size(); ++i)
            diff += std::pow(both.data[i] - direct.data[i], 2);
        CHECK(std::sqrt(g.dx() * diff) <= 1e-10 * (1.0 + u0.l2()));
    }
}

TEST_CASE("space-time spectra satisfy Plancherel across random grids") {
    Rng rng(5150);
    for (int trial = 0; trial < 12; ++trial) {
        auto g = random_geometry(rng);
        auto tg = random_timegrid(rng);
        SpaceTimeField u(g, tg);
        for (double& v : u.data) v = rng.gaussian();
        auto spec = spectrum_of(u);
        CHECK(spec.plancherel_energy() == Approx(u.l2() * u.l2()).epsilon(1e-10));
        auto back = field_of(spec);
        double diff = 0.0;
        for (size_t i = 0; i < u.data.size(); ++i)
            diff += std::pow(u.data[i] - back.data[i], 2);
        CHECK(std::sqrt(diff) <= 1e-12 * u.l2() * std::sqrt(double(u.data.size())));
    }
}

TEST_CASE("X norm homogeneity and region partition across random grids") {
    Rng rng(90125);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = random_geometry(rng);
        auto tg = random_timegrid(rng);
        SpaceTimeField u(g, tg);
        for (double& v : u.data) v = rng.gaussian();
        auto spec = spectrum_of(u);
        BourgainParams p{0.0, rng.uniform(0.38, 0.49), rng.uniform(0.51, 0.66)};
        const double base = x0b_norm(spec, p).total;
        const double c = rng.uniform(0.1, 5.0);
        ModeSpectrum scaled = spec;
        for (auto& z : scaled.data) z *= c;
        CHECK(x0b_norm(scaled, p).total == Approx(c * base).epsilon(1e-11));
        auto flat = x0b_norm(spec, BourgainParams{0.0, 0.0, 0.0});
        CHECK(flat.low + flat.high == Approx(u.l2() * u.l2()).epsilon(1e-11));
    }
}

TEST_CASE("Duhamel of zero is zero and starts from rest across random grids") {
    Rng rng(31459);
    for (int trial = 0; trial < 8; ++trial) {
        auto g = random_geometry(rng);
        auto tg = random_timegrid(rng);
        SpaceTimeField w(g, tg);
        auto d0 = duhamel_inhomogeneous(w);
        for (double v : d0.data) CHECK(v == 0.0);
        for (int k = 1; k <= g.K; ++k)
            for (int n = 0; n < tg.n_window(); ++n) {
                auto line = w.x_line(k, n);
                for (int i = 0; i < g.Nx; ++i)
                    line[i] = rng.gaussian() * std::exp(-std::pow(g.x(i) / 2.0, 2));
            }
        auto d = duhamel_inhomogeneous(w);
        for (int k = 1; k <= g.K; ++k)
            for (int i = 0; i < g.Nx; ++i) CHECK(d.at(k, 0, i) == 0.0);
    }
}

TEST_CASE("norms are bit-stable across thread budgets") {
    auto g = zktest::desk_geometry(0.5, pi, 16, 128, 64, 12.0);
    TimeGrid tg{0.75, 96, 2};
    SpaceTimeField u(g, tg);
    Rng rng(9);
    for (double& v : u.data) v = rng.gaussian();
    BourgainParams p{0.3, 0.45, 0.55};
    set_thread_budget(1);
    auto x1 = x0b_norm(spectrum_of(u), p);
    auto y1 = y0b_norm(spectrum_of(u), p);
    set_thread_budget(7);
    auto x7 = x0b_norm(spectrum_of(u), p);
    auto y7 = y0b_norm(spectrum_of(u), p);
    set_thread_budget(1);
    CHECK(x1.total == x7.total);
    CHECK(x1.low == x7.low);
    CHECK(x1.high == x7.high);
    CHECK(y1.total == y7.total);
    CHECK(y1.third == y7.third);
}
