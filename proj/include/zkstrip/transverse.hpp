#pragma once

/**
 * transverse.hpp: sine basis on (0, B).
 *
 * e_k(y) = sqrt(2/B) sin(k pi y / B), lambda_k = (k pi / B)^2.
 * Samples live on the interior nodes y_j = j B / Ny, j = 1..Ny-1; with that
 * alignment the discrete inner product dy * sum_j is exactly orthonormal on
 * the first Ny-1 modes, so forward/inverse transforms are exact on the
 * retained band k <= K.
 */

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace zkstrip {

inline double eigenvalue(int k, const StripGeometry& geom) {
    if (k < 1 || k > geom.K) throw index_error("eigenvalue: mode index out of range");
    double r = k * std::numbers::pi / geom.B;
    return r * r;
}

inline double basis_eval(int k, const StripGeometry& geom, double y) {
    if (k < 1 || k > geom.K) throw index_error("basis_eval: mode index out of range");
    if (y < 0.0 || y > geom.B) throw index_error("basis_eval: y outside [0, B]");
    return std::sqrt(2.0 / geom.B) * std::sin(k * std::numbers::pi * y / geom.B);
}

struct TransverseModes {
    std::vector<double> coefficients; // c_k, k = 1..K at index k-1
    StripGeometry geometry;

    double l2_squared() const {
        double s = 0.0;
        for (double c : coefficients) s += c * c;
        return s;
    }
};

/// Cached sine-basis quadrature table for one geometry.
class SineBasis {
  public:
    explicit SineBasis(const StripGeometry& geom) : geom_(geom) {
        geom.validate();
        const int ny = geom.ny_interior();
        table_.resize(static_cast<size_t>(geom.K) * ny);
        for (int k = 1; k <= geom.K; ++k)
            for (int j = 1; j <= ny; ++j)
                table_[(k - 1) * static_cast<size_t>(ny) + (j - 1)] =
                    std::sqrt(2.0 / geom.B) *
                    std::sin(k * std::numbers::pi * j / static_cast<double>(geom.Ny));
    }

    const StripGeometry& geometry() const { return geom_; }
    double e(int k, int j) const { // k = 1..K, j = 1..Ny-1
        return table_[(k - 1) * static_cast<size_t>(geom_.ny_interior()) + (j - 1)];
    }

    /// c_k = <u, e_k> by the exact interior quadrature dy * sum.
    void project(std::span<const double> samples, std::span<double> coeffs) const {
        const int ny = geom_.ny_interior();
        if (static_cast<int>(samples.size()) != ny)
            throw dimension_error("SineBasis::project: sample count != Ny-1");
        if (static_cast<int>(coeffs.size()) != geom_.K)
            throw dimension_error("SineBasis::project: coefficient count != K");
        const double dy = geom_.dy();
        for (int k = 1; k <= geom_.K; ++k) {
            const double* row = &table_[(k - 1) * static_cast<size_t>(ny)];
            double s = 0.0;
            for (int j = 0; j < ny; ++j) s += row[j] * samples[j];
            coeffs[k - 1] = dy * s;
        }
    }

    /// u_j = sum_k c_k e_k(y_j) on the interior nodes.
    void synthesize(std::span<const double> coeffs, std::span<double> samples) const {
        const int ny = geom_.ny_interior();
        if (static_cast<int>(coeffs.size()) != geom_.K)
            throw dimension_error("SineBasis::synthesize: coefficient count != K");
        if (static_cast<int>(samples.size()) != ny)
            throw dimension_error("SineBasis::synthesize: sample count != Ny-1");
        for (int j = 0; j < ny; ++j) samples[j] = 0.0;
        for (int k = 1; k <= geom_.K; ++k) {
            const double* row = &table_[(k - 1) * static_cast<size_t>(ny)];
            const double c = coeffs[k - 1];
            if (c == 0.0) continue;
            for (int j = 0; j < ny; ++j) samples[j] += c * row[j];
        }
    }

  private:
    StripGeometry geom_;
    std::vector<double> table_;
};

inline TransverseModes forward_transverse(std::span<const double> samples,
                                          const StripGeometry& geom) {
    SineBasis basis(geom);
    TransverseModes m;
    m.geometry = geom;
    m.coefficients.resize(geom.K);
    basis.project(samples, m.coefficients);
    return m;
}

inline std::vector<double> inverse_transverse(const TransverseModes& modes) {
    SineBasis basis(modes.geometry);
    std::vector<double> samples(modes.geometry.ny_interior());
    basis.synthesize(modes.coefficients, samples);
    return samples;
}

} // namespace zkstrip
