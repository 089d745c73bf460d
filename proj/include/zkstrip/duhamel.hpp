#pragma once

/**
 * duhamel.hpp: forced Duhamel terms int_0^t S(t-t') w(t') dt'.
 *
 * Time quadrature is product trapezoid with exact propagation between the
 * nodes: the source is replaced by its piecewise-linear interpolant and the
 * oscillatory factor e^{i (t-t') omega} is integrated exactly through the
 * phi functions phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2. The
 * update is the exact recurrence
 *   u_hat(t_{n+1}) = e^{i dt omega} u_hat(t_n)
 *                  + dt [phi1 w_hat_n + phi2 (w_hat_{n+1} - w_hat_n)],
 * second order in dt, unconditionally stable in the stiff xi^3 band.
 */

#include <complex>
#include <vector>

#include "dispersion.hpp"
#include "field.hpp"
#include "threading.hpp"

namespace zkstrip {

namespace detail {

inline void phi_functions(cplx z, cplx& phi1, cplx& phi2) {
    if (std::abs(z) < 1e-6) {
        // series to O(z^3): relative error below 1e-24 at |z| = 1e-6
        phi1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
        phi2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
        return;
    }
    const cplx ez = std::exp(z);
    phi1 = (ez - 1.0) / z;
    phi2 = (ez - 1.0 - z) / (z * z);
}

} // namespace detail

/// int_0^{t_n} S(t_n - t') w(., t') dt' for every n on the window.
inline SpaceTimeField duhamel_inhomogeneous(const SpaceTimeField& w) {
    const StripGeometry& g = w.geom;
    const TimeGrid& tg = w.tgrid;
    const int nx = g.Nx, nt = tg.n_window();
    SpaceTimeField out(g, tg);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> ez(nx), p1(nx), p2(nx);
        for (int m = 0; m < nx; ++m) {
            const cplx z(0.0, tg.dt() * omega_k(g.xi(m), k, g));
            ez[m] = std::exp(z);
            detail::phi_functions(z, p1[m], p2[m]);
        }
        std::vector<cplx> acc(nx, cplx{0.0, 0.0});
        std::vector<cplx> wn(nx), wn1(nx), buf(nx);
        spectrum_x_line(w.x_line(k, 0), g, wn);
        for (int n = 0; n + 1 < nt; ++n) {
            spectrum_x_line(w.x_line(k, n + 1), g, wn1);
            for (int m = 0; m < nx; ++m)
                acc[m] = ez[m] * acc[m] +
                         tg.dt() * (p1[m] * wn[m] + p2[m] * (wn1[m] - wn[m]));
            buf = acc;
            physical_x_line(buf, g);
            auto line = out.x_line(k, n + 1);
            for (int i = 0; i < nx; ++i) line[i] = buf[i].real();
            std::swap(wn, wn1);
        }
    });
    return out;
}

/// int_0^t S_k(t-t') delta_0(x) f_k(t') dt'; the Dirac is band-limited,
/// delta_hat = 1 on every resolved bin.
inline SpaceTimeField duhamel_delta(const BoundaryData& f) {
    const StripGeometry& g = f.geom;
    const TimeGrid& tg = f.tgrid;
    const int nx = g.Nx, nt = tg.n_window();
    SpaceTimeField out(g, tg);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> ez(nx), p1(nx), p2(nx);
        for (int m = 0; m < nx; ++m) {
            const cplx z(0.0, tg.dt() * omega_k(g.xi(m), k, g));
            ez[m] = std::exp(z);
            detail::phi_functions(z, p1[m], p2[m]);
        }
        std::vector<cplx> acc(nx, cplx{0.0, 0.0});
        std::vector<cplx> buf(nx);
        auto fk = f.mode(k);
        for (int n = 0; n + 1 < nt; ++n) {
            const double fn = fk[n], df = fk[n + 1] - fk[n];
            for (int m = 0; m < nx; ++m)
                acc[m] = ez[m] * acc[m] + tg.dt() * (p1[m] * fn + p2[m] * df);
            buf = acc;
            physical_x_line(buf, g);
            auto line = out.x_line(k, n + 1);
            for (int i = 0; i < nx; ++i) line[i] = buf[i].real();
        }
    });
    return out;
}

/// Boundary trace of duhamel_delta without materializing the field:
/// value at x = 0 is (1/2L) sum_m u_hat(xi_m).
inline BoundaryData duhamel_delta_trace(const BoundaryData& f) {
    const StripGeometry& g = f.geom;
    const TimeGrid& tg = f.tgrid;
    const int nx = g.Nx, nt = tg.n_window();
    BoundaryData out(g, tg, BoundaryRole::trace);
    for_each_mode(g.K, [&](int k) {
        std::vector<cplx> ez(nx), p1(nx), p2(nx);
        for (int m = 0; m < nx; ++m) {
            const cplx z(0.0, tg.dt() * omega_k(g.xi(m), k, g));
            ez[m] = std::exp(z);
            detail::phi_functions(z, p1[m], p2[m]);
        }
        std::vector<cplx> acc(nx, cplx{0.0, 0.0});
        auto fk = f.mode(k);
        for (int n = 0; n + 1 < nt; ++n) {
            const double fn = fk[n], df = fk[n + 1] - fk[n];
            cplx s{0.0, 0.0};
            for (int m = 0; m < nx; ++m) {
                acc[m] = ez[m] * acc[m] + tg.dt() * (p1[m] * fn + p2[m] * df);
                s += acc[m];
            }
            out.at(k, n + 1) = s.real() / (2.0 * g.L);
        }
    });
    return out;
}

} // namespace zkstrip
