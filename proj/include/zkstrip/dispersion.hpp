#pragma once

/**
 * dispersion.hpp: dispersion relations and the linear group in multiplier
 * form.
 *
 * omega(xi, eta) = xi^3 + xi eta^2 - a xi; per transverse mode,
 * omega_k(xi) = xi^3 + (lambda_k - a) xi and sigma_k = a - lambda_k.
 * The group acts per mode as multiplication by e^{+i t omega_k(xi)}; with
 * that sign the discrete residual of u_t + a u_x + u_xxx + u_xyy vanishes
 * for propagated data (both of the equivalent operator writings
 * e^{-t dx(Laplace + a)} and e^{i t omega_k} resolve to this multiplier).
 *
 * On real fields the group is unitary on the conjugate-paired bins; the
 * unpaired Nyquist bin has no partner under the odd symbol and its real
 * projection evolves as a standing wave, so resolved data must not carry
 * energy there.
 */

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "threading.hpp"
#include "transverse.hpp"

namespace zkstrip {

struct DispersionParams {
    double a = 0.0;
    double lambda_k = 0.0;
    double omega(double xi) const { return xi * xi * xi + (lambda_k - a) * xi; }
};

inline double omega_2d(double xi, double eta, double a) {
    return xi * xi * xi + xi * eta * eta - a * xi;
}

inline double omega_k(double xi, int k, const StripGeometry& geom) {
    return xi * xi * xi + (eigenvalue(k, geom) - geom.a) * xi;
}

inline double sigma_k(int k, const StripGeometry& geom) {
    return geom.a - eigenvalue(k, geom);
}

/// S_k(dt): FFT, multiply by e^{i dt omega_k}, inverse FFT. dt may be
/// negative (group, not semigroup); dt = 0 is the identity.
inline void propagate_mode_inplace(std::span<cplx> u, int k, double dt_,
                                   const StripGeometry& geom) {
    if (k < 1 || k > geom.K) throw index_error("propagate_mode: mode index out of range");
    for (const cplx& z : u)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numeric_error("propagate_mode: non-finite input");
    fft::forward(u.data(), geom.Nx);
    for (int m = 0; m < geom.Nx; ++m)
        u[m] *= std::polar(1.0, dt_ * omega_k(geom.xi(m), k, geom));
    fft::inverse(u.data(), geom.Nx);
}

inline std::vector<double> propagate_mode(std::span<const double> u, int k, double dt_,
                                          const StripGeometry& geom) {
    if (static_cast<int>(u.size()) != geom.Nx)
        throw dimension_error("propagate_mode: line length != Nx");
    std::vector<cplx> buf(u.begin(), u.end());
    propagate_mode_inplace(buf, k, dt_, geom);
    std::vector<double> out(geom.Nx);
    for (int i = 0; i < geom.Nx; ++i) out[i] = buf[i].real();
    return out;
}

/// One time slice of a real field: mode stack u_k(x_i) for fixed t.
struct FieldSlice {
    StripGeometry geom;
    std::vector<double> data; // [k][i]

    FieldSlice() = default;
    explicit FieldSlice(const StripGeometry& g)
        : geom(g), data(static_cast<size_t>(g.K) * g.Nx, 0.0) {}

    double& at(int k, int i) { return data[(k - 1) * static_cast<size_t>(geom.Nx) + i]; }
    double at(int k, int i) const { return data[(k - 1) * static_cast<size_t>(geom.Nx) + i]; }
    std::span<double> mode(int k) {
        return {data.data() + (k - 1) * static_cast<size_t>(geom.Nx),
                static_cast<size_t>(geom.Nx)};
    }
    std::span<const double> mode(int k) const {
        return {data.data() + (k - 1) * static_cast<size_t>(geom.Nx),
                static_cast<size_t>(geom.Nx)};
    }

    double l2() const {
        double s = 0.0;
        for (double v : data) s += v * v;
        return std::sqrt(geom.dx() * s);
    }
};

/// S(t) on the sine-mode span: every mode propagated by its own multiplier.
inline FieldSlice propagate_2d(const FieldSlice& u0, double t) {
    FieldSlice out(u0.geom);
    for_each_mode(u0.geom.K, [&](int k) {
        auto line = propagate_mode(u0.mode(k), k, t, u0.geom);
        auto dst = out.mode(k);
        for (int i = 0; i < u0.geom.Nx; ++i) dst[i] = line[i];
    });
    return out;
}

} // namespace zkstrip
