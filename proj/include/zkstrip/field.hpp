#pragma once

/**
 * field.hpp: space-time containers.
 *
 * SpaceTimeField: real transverse-mode stack u_k(x_i, t_n), k-major layout
 * [k][n][i], on the periodic box [-L, L) and the padded window [0, pad*T).
 * ModeSpectrum: complex dual stack u_hat_k(xi_m, tau_j), same layout, scaled
 * so that u_hat approximates the continuous Fourier transform
 * (dx dt sums with the e^{+i xi L} phase for the x-offset).
 * BoundaryData: per-mode time traces b_k(t_n) with a role tag.
 */

#include <complex>
#include <span>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "geometry.hpp"
#include "threading.hpp"
#include "transverse.hpp"

namespace zkstrip {

struct SpaceTimeField {
    StripGeometry geom;
    TimeGrid tgrid;
    std::vector<double> data; // [k][n][i]

    SpaceTimeField() = default;
    SpaceTimeField(const StripGeometry& g, const TimeGrid& t)
        : geom(g), tgrid(t),
          data(static_cast<size_t>(g.K) * t.n_window() * g.Nx, 0.0) {}

    size_t index(int k, int n, int i) const {
        return ((k - 1) * static_cast<size_t>(tgrid.n_window()) + n) * geom.Nx + i;
    }
    double& at(int k, int n, int i) { return data[index(k, n, i)]; }
    double at(int k, int n, int i) const { return data[index(k, n, i)]; }
    std::span<double> x_line(int k, int n) {
        return {data.data() + index(k, n, 0), static_cast<size_t>(geom.Nx)};
    }
    std::span<const double> x_line(int k, int n) const {
        return {data.data() + index(k, n, 0), static_cast<size_t>(geom.Nx)};
    }

    bool same_shape(const SpaceTimeField& o) const {
        return geom.K == o.geom.K && geom.Nx == o.geom.Nx &&
               tgrid.n_window() == o.tgrid.n_window();
    }

    /// discrete L^2(x, y) norm of the time slice n
    double l2_slice(int n) const {
        double s = 0.0;
        for (int k = 1; k <= geom.K; ++k)
            for (int i = 0; i < geom.Nx; ++i) {
                double v = at(k, n, i);
                s += v * v;
            }
        return std::sqrt(geom.dx() * s);
    }

    /// discrete L^2(x, y, t) over the whole window
    double l2() const {
        double s = 0.0;
        for (double v : data) s += v * v;
        return std::sqrt(geom.dx() * tgrid.dt() * s);
    }
};

inline SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (!a.same_shape(b)) throw dimension_error("field subtraction: shape mismatch");
    SpaceTimeField r = a;
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
    return r;
}

inline SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (!a.same_shape(b)) throw dimension_error("field addition: shape mismatch");
    SpaceTimeField r = a;
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
    return r;
}

inline SpaceTimeField operator*(double c, const SpaceTimeField& a) {
    SpaceTimeField r = a;
    for (double& v : r.data) v *= c;
    return r;
}

struct ModeSpectrum {
    StripGeometry geom;
    TimeGrid tgrid;
    std::vector<cplx> data; // [k][j][m]

    ModeSpectrum() = default;
    ModeSpectrum(const StripGeometry& g, const TimeGrid& t)
        : geom(g), tgrid(t),
          data(static_cast<size_t>(g.K) * t.n_window() * g.Nx, cplx{0.0, 0.0}) {}

    size_t index(int k, int j, int m) const {
        return ((k - 1) * static_cast<size_t>(tgrid.n_window()) + j) * geom.Nx + m;
    }
    cplx& at(int k, int j, int m) { return data[index(k, j, m)]; }
    cplx at(int k, int j, int m) const { return data[index(k, j, m)]; }

    /// sum of |u_hat|^2 times the Plancherel measure dxi dtau / (2 pi)^2;
    /// equals the squared physical L^2 norm.
    double plancherel_energy() const {
        double s = 0.0;
        for (const cplx& z : data) s += std::norm(z);
        return s * geom.dxi() * tgrid.dtau() /
               (4.0 * std::numbers::pi * std::numbers::pi);
    }
};

/// dx-scaled forward transform of one x-line with the -L offset phase:
/// out_m = dx * (-1)^m * DFT(in)_m approximates int e^{-i xi x} u dx.
inline void spectrum_x_line(std::span<const double> line, const StripGeometry& geom,
                            std::span<cplx> out) {
    const int nx = geom.Nx;
    for (int i = 0; i < nx; ++i) out[i] = line[i];
    fft::forward(out.data(), nx);
    const double dx = geom.dx();
    for (int m = 0; m < nx; ++m) out[m] *= (m % 2 == 0) ? dx : -dx;
}

/// Inverse of spectrum_x_line (in place on the complex buffer).
inline void physical_x_line(std::span<cplx> hat, const StripGeometry& geom) {
    const int nx = geom.Nx;
    const double inv_dx = 1.0 / geom.dx();
    for (int m = 0; m < nx; ++m) hat[m] *= (m % 2 == 0) ? inv_dx : -inv_dx;
    fft::inverse(hat.data(), nx);
}

/// Full space-time spectrum of a real mode-stack field; modes transform
/// independently (one writer per mode slab).
inline ModeSpectrum spectrum_of(const SpaceTimeField& u) {
    ModeSpectrum s(u.geom, u.tgrid);
    const int nx = u.geom.Nx;
    const int nt = u.tgrid.n_window();
    for_each_mode(u.geom.K, [&](int k) {
        std::vector<cplx> col(nt);
        for (int n = 0; n < nt; ++n)
            spectrum_x_line(u.x_line(k, n), u.geom,
                            std::span<cplx>(&s.at(k, n, 0), nx));
        // temporal transform down each xi column, dt-scaled (t starts at 0)
        for (int m = 0; m < nx; ++m) {
            for (int n = 0; n < nt; ++n) col[n] = s.at(k, n, m);
            fft::forward(col.data(), nt);
            const double dt = u.tgrid.dt();
            for (int j = 0; j < nt; ++j) s.at(k, j, m) = col[j] * dt;
        }
    });
    return s;
}

/// Inverse of spectrum_of; imaginary residue is discarded.
inline SpaceTimeField field_of(const ModeSpectrum& s) {
    SpaceTimeField u(s.geom, s.tgrid);
    const int nx = s.geom.Nx;
    const int nt = s.tgrid.n_window();
    for_each_mode(s.geom.K, [&](int k) {
        std::vector<cplx> col(nt);
        std::vector<cplx> row(nx);
        std::vector<cplx> plane(static_cast<size_t>(nt) * nx);
        for (int m = 0; m < nx; ++m) {
            for (int j = 0; j < nt; ++j) col[j] = s.at(k, j, m);
            fft::inverse(col.data(), nt);
            const double inv_dt = 1.0 / s.tgrid.dt();
            for (int n = 0; n < nt; ++n) plane[static_cast<size_t>(n) * nx + m] = col[n] * inv_dt;
        }
        for (int n = 0; n < nt; ++n) {
            for (int m = 0; m < nx; ++m) row[m] = plane[static_cast<size_t>(n) * nx + m];
            physical_x_line(row, s.geom);
            auto line = u.x_line(k, n);
            for (int i = 0; i < nx; ++i) line[i] = row[i].real();
        }
    });
    return u;
}

enum class BoundaryRole { raw_g, extended_g, corrected_g1, forcing_f, trace };

/// Per-mode boundary traces b_k(t_n) against the orthonormal basis e_k.
struct BoundaryData {
    StripGeometry geom;
    TimeGrid tgrid;
    BoundaryRole role = BoundaryRole::raw_g;
    std::vector<double> modes; // [k][n]

    BoundaryData() = default;
    BoundaryData(const StripGeometry& g, const TimeGrid& t,
                 BoundaryRole r = BoundaryRole::raw_g)
        : geom(g), tgrid(t), role(r),
          modes(static_cast<size_t>(g.K) * t.n_window(), 0.0) {}

    size_t index(int k, int n) const {
        return (k - 1) * static_cast<size_t>(tgrid.n_window()) + n;
    }
    double& at(int k, int n) { return modes[index(k, n)]; }
    double at(int k, int n) const { return modes[index(k, n)]; }
    std::span<double> mode(int k) {
        return {modes.data() + index(k, 0), static_cast<size_t>(tgrid.n_window())};
    }
    std::span<const double> mode(int k) const {
        return {modes.data() + index(k, 0), static_cast<size_t>(tgrid.n_window())};
    }

    bool same_shape(const BoundaryData& o) const {
        return geom.K == o.geom.K && tgrid.n_window() == o.tgrid.n_window();
    }

    /// discrete L^2(y, t) over the window
    double l2() const {
        double s = 0.0;
        for (double v : modes) s += v * v;
        return std::sqrt(tgrid.dt() * s);
    }

    /// discrete L^2(y, t) restricted to [0, T]
    double l2_horizon() const {
        double s = 0.0;
        for (int k = 1; k <= geom.K; ++k)
            for (int n = 0; n < tgrid.n_horizon(); ++n) s += at(k, n) * at(k, n);
        return std::sqrt(tgrid.dt() * s);
    }

    /// physical samples at interior y nodes for a fixed time index
    std::vector<double> y_samples(int n, const SineBasis& basis) const {
        std::vector<double> c(geom.K), out(geom.ny_interior());
        for (int k = 1; k <= geom.K; ++k) c[k - 1] = at(k, n);
        basis.synthesize(c, out);
        return out;
    }
};

inline BoundaryData operator-(const BoundaryData& a, const BoundaryData& b) {
    if (!a.same_shape(b)) throw dimension_error("boundary subtraction: shape mismatch");
    BoundaryData r = a;
    for (size_t i = 0; i < r.modes.size(); ++i) r.modes[i] -= b.modes[i];
    return r;
}

} // namespace zkstrip
