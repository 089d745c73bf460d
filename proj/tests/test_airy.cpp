#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "test_helpers.hpp"
#include "zkstrip/airy.hpp"
#include "zkstrip/dispersion.hpp"
#include "zkstrip/transverse.hpp"

using namespace zkstrip;
using Catch::Approx;
using std::numbers::pi;

namespace {

/// Brute-force 2D Riemann sum of the inverse transform with smooth ramps in
/// both frequencies; independent of the kernel's own quadrature route.
double airy_brute_2d(double x, double y, double xi_cut, double eta_cut, int n_xi,
                     int n_eta) {
    const double xi_lim = 1.6 * xi_cut, eta_lim = 1.6 * eta_cut;
    const double dxi = 2.0 * xi_lim / (n_xi - 1);
    const double deta = 2.0 * eta_lim / (n_eta - 1);
    std::complex<double> tot{0.0, 0.0};
    for (int i = 0; i < n_xi; ++i) {
        const double xi = -xi_lim + i * dxi;
        const double ramp_xi = std::exp(-std::pow(xi / xi_cut, 8.0));
        if (ramp_xi < 1e-200) continue;
        std::complex<double> row{0.0, 0.0};
        for (int j = 0; j < n_eta; ++j) {
            const double eta = -eta_lim + j * deta;
            const double ramp_eta = std::exp(-std::pow(eta / eta_cut, 8.0));
            if (ramp_eta < 1e-200) continue;
            row += ramp_eta * std::polar(1.0, x * xi + y * eta + xi * xi * xi + xi * eta * eta);
        }
        tot += ramp_xi * row;
    }
    return (tot * dxi * deta / (4.0 * pi * pi)).real();
}

} // namespace

TEST_CASE("kernel symmetry in the transverse argument") {
    for (auto [x, y] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {-1.5, 2.2}, {2.0, 0.7}}) {
        auto plus = airy_kernel_2d(x, y);
        auto minus = airy_kernel_2d(x, -y);
        CHECK(plus.value.real() == Approx(minus.value.real()).margin(1e-12));
        CHECK(plus.value.imag() == 0.0);
        CHECK(plus.error_estimate < 1e-6);
    }
}

TEST_CASE("single-point cross-check against direct 2D quadrature") {
    for (auto [x, y] : std::vector<std::pair<double, double>>{{0.7, 0.4}, {-2.0, 1.0}}) {
        const double a = airy_kernel_2d(x, y).value.real();
        const double brute = airy_brute_2d(x, y, 4.0, 10.0, 3201, 4001);
        const double brute2 = airy_brute_2d(x, y, 4.0, 20.0, 3201, 8001); // doubled cutoff
        CHECK(std::abs(brute - a) < 5e-5);
        CHECK(std::abs(brute2 - a) < 5e-5);
    }
}

TEST_CASE("failed tolerance raises accuracy_error with the estimate") {
    AiryQuadrature quad;
    quad.panels = 2;
    quad.gauss_order = 2;
    quad.tolerance = 1e-14;
    try {
        airy_kernel_2d(-3.0, 1.0, quad);
        FAIL("expected accuracy_error");
    } catch (const accuracy_error& e) {
        CHECK(e.error_estimate > 1e-14);
    }
}

TEST_CASE("kernel convolution reproduces the multiplier propagator at t = 1") {
    // free-space convolution with A equals S(1) on a window away from the
    // periodization images of the box and the odd images of the strip
    StripGeometry g;
    g.B = 10.0;
    g.a = 0.0;
    g.K = 16;
    g.Ny = 64;
    g.Nx = 256;
    g.L = 42.0;
    g.validate();
    const double sx = 1.2, sy = 1.2, y0 = g.B / 2;
    const double dx = g.dx(), dy = g.dy();

    // transverse-projected Gaussian bump
    SineBasis basis(g);
    FieldSlice v(g);
    {
        std::vector<double> col(g.ny_interior()), coeff(g.K);
        for (int i = 0; i < g.Nx; ++i) {
            const double gx = std::exp(-std::pow(g.x(i) / sx, 2) / 2.0);
            if (gx < 1e-16) continue;
            for (int j = 1; j < g.Ny; ++j)
                col[j - 1] = gx * std::exp(-std::pow((g.y(j) - y0) / sy, 2) / 2.0);
            basis.project(col, coeff);
            for (int k = 1; k <= g.K; ++k) v.at(k, i) = coeff[k - 1];
        }
    }
    FieldSlice ut = propagate_2d(v, 1.0);

    // physical samples of the data and the evolved field
    const int i0 = g.x0_index();
    std::vector<int> xo, yo;
    for (int i = i0 - 36; i <= i0 + 24; i += 6) xo.push_back(i);
    for (int j = 24; j <= 40; j += 4) yo.push_back(j);

    std::vector<int> xs; // x columns carrying data support
    for (int i = 0; i < g.Nx; ++i)
        if (std::exp(-std::pow(g.x(i) / sx, 2) / 2.0) > 1e-14) xs.push_back(i);

    // kernel table over lattice differences (t = 1, a = 0: no rescaling)
    AiryQuadrature quad;
    quad.panels = 32;
    quad.gauss_order = 10;
    quad.tolerance = 1e-5;
    std::map<std::pair<int, int>, double> table;
    for (int io : xo)
        for (int ip : xs)
            for (int jo : yo)
                for (int jp = 1; jp < g.Ny; ++jp) {
                    auto key = std::make_pair(io - ip, jo - jp);
                    if (!table.count(key))
                        table[key] = airy_kernel_2d((io - ip) * dx, (jo - jp) * dy, quad)
                                         .value.real();
                }

    std::vector<double> conv, spec;
    std::vector<double> coeff(g.K), col(g.ny_interior());
    for (int jo : yo)
        for (int io : xo) {
            double s = 0.0;
            for (int ip : xs) {
                const double gx = std::exp(-std::pow(g.x(ip) / sx, 2) / 2.0);
                for (int jp = 1; jp < g.Ny; ++jp) {
                    const double vv =
                        gx * std::exp(-std::pow((g.y(jp) - y0) / sy, 2) / 2.0);
                    s += table[{io - ip, jo - jp}] * vv;
                }
            }
            conv.push_back(s * dx * dy);
            for (int k = 1; k <= g.K; ++k) coeff[k - 1] = ut.at(k, io);
            basis.synthesize(coeff, col);
            spec.push_back(col[jo - 1]);
        }
    CHECK(zktest::rel_l2(conv, spec) <= 1e-3);
}
