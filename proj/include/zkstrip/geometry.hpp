#pragma once

/**
 * geometry.hpp: strip geometry and the uniform grids used everywhere.
 *
 * Domain: half-strip {x > 0, 0 < y < B} with Dirichlet walls at y = 0, B.
 * The whole-space surrogate lives on a periodic box x in [-L, L) which must
 * contain the grid node x = 0 (index Nx/2).  Transverse samples sit on the
 * interior nodes y_j = j B / Ny, j = 1..Ny-1, matching the sine basis.
 * Time samples t_n = n dt cover a padded window [0, pad * T).
 */

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zkstrip {

struct StripGeometry {
    double B = std::numbers::pi; ///< strip width
    double a = 0.0;              ///< linear transport coefficient
    int K = 16;                  ///< retained transverse modes
    double L = 0.0;              ///< half-width of the longitudinal box [-L, L)
    int Nx = 256;                ///< longitudinal grid points (power of two)
    int Ny = 64;                 ///< transverse quadrature points (>= 2K+1)

    double dx() const { return 2.0 * L / Nx; }
    double dy() const { return B / Ny; }
    double x(int i) const { return -L + i * dx(); }
    double y(int j) const { return j * dy(); } // j = 1..Ny-1 interior
    int x0_index() const { return Nx / 2; }    // node at x = 0
    int ny_interior() const { return Ny - 1; }

    /// FFT angular frequency of bin m, xi_m = (pi/L) * m~ with m~ wrapped.
    double xi(int m) const {
        int mw = (m <= Nx / 2) ? m : m - Nx;
        return std::numbers::pi / L * mw;
    }
    double dxi() const { return std::numbers::pi / L; }

    void validate() const {
        if (!(B > 0.0)) throw config_error("StripGeometry: strip width B must be positive");
        if (!(L > 0.0)) throw config_error("StripGeometry: box half-width L must be positive");
        if (K < 1) throw config_error("StripGeometry: mode count K must be >= 1");
        if (Nx < 4 || (Nx & (Nx - 1)) != 0)
            throw config_error("StripGeometry: Nx must be a power of two >= 4");
        if (Ny < 2 * K + 1)
            throw config_error("StripGeometry: Ny must be >= 2K+1 for exact sine quadrature");
    }
};

/**
 * Default longitudinal box half-width: half the distance travelled by the
 * fastest resolved group velocity over the horizon, max_k |omega_k'(xi)| ~
 * 3 xi_max^2 + |lambda_K - a| with xi_max = pi Nx / (2 L).  Solving
 * 2 L = 3 T (pi Nx / (2 L))^2 * margin for L keeps wrap-around energy low
 * while refinement widens the box.
 */
inline double default_box_halfwidth(int Nx, double T, double margin = 1.0) {
    const double pi = std::numbers::pi;
    return std::cbrt(3.0 * margin * T * pi * pi * Nx * Nx / 8.0);
}

struct TimeGrid {
    double T = 1.0;     ///< requested horizon [0, T]
    int Nt = 256;       ///< steps covering [0, T]; dt = T / Nt
    int pad_factor = 2; ///< window length = pad_factor * T

    double dt() const { return T / Nt; }
    int n_window() const { return pad_factor * Nt; } ///< samples in [0, pad*T)
    int n_horizon() const { return Nt + 1; }         ///< samples in [0, T]
    double t(int n) const { return n * dt(); }
    double window_length() const { return pad_factor * T; }

    /// FFT angular frequency of temporal bin j.
    double tau(int j) const {
        int n = n_window();
        int jw = (j <= n / 2) ? j : j - n;
        return 2.0 * std::numbers::pi / window_length() * jw;
    }
    double dtau() const { return 2.0 * std::numbers::pi / window_length(); }
    double tau_min() const { return dtau(); } ///< fundamental (smallest nonzero |tau|)

    void validate() const {
        if (!(T > 0.0)) throw config_error("TimeGrid: horizon T must be positive");
        if (Nt < 16) throw config_error("TimeGrid: Nt must be >= 16");
        if (pad_factor < 2) throw config_error("TimeGrid: pad_factor must be >= 2");
    }
};

} // namespace zkstrip
