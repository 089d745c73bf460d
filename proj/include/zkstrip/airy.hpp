#pragma once

/**
 * airy.hpp: the 2D Airy-type kernel A(x, y), inverse Fourier transform of
 * e^{i xi^3} e^{i xi eta^2} with the 1/(2 pi)^2 normalization.
 *
 * The xi integral has the closed form
 *   int e^{i(xi^3 + p xi)} dxi = 2 pi 3^{-1/3} Ai(3^{-1/3} p),  p = x + eta^2,
 * so A(x, y) = (3^{-1/3} / 2 pi) int cos(y eta) Ai(3^{-1/3}(x + eta^2)) deta.
 * The remaining frequency integral is evaluated by panelled Gauss-Legendre
 * quadrature under the smooth ramp e^{-(eta/Xi)^8}; the error estimate is
 * the difference against a panel-doubled evaluation. Validation-only: the
 * multiplier propagator is the production path.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

#include "errors.hpp"

namespace zkstrip {

struct AiryQuadrature {
    double cutoff = 8.0;      ///< ramp scale Xi in e^{-(eta/Xi)^8}
    int panels = 48;          ///< panels on [0, eta_max]
    int gauss_order = 12;     ///< nodes per panel
    double tolerance = 1e-6;  ///< acceptable error estimate
};

struct AiryValue {
    std::complex<double> value;
    double error_estimate;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

inline double airy_eta_integral(double x, double y, double eta_max, int panels,
                                int order, double cutoff) {
    static thread_local std::vector<double> gx, gw;
    static thread_local int cached_order = 0;
    if (cached_order != order) {
        gauss_legendre(order, gx, gw);
        cached_order = order;
    }
    const double c3 = std::pow(3.0, -1.0 / 3.0);
    double sum = 0.0;
    const double h = eta_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = p * h, mid = a + 0.5 * h;
        double acc = 0.0;
        for (int q = 0; q < order; ++q) {
            const double eta = mid + 0.5 * h * gx[q];
            const double ramp = std::exp(-std::pow(eta / cutoff, 8.0));
            if (ramp < 1e-300) continue;
            const double arg = c3 * (x + eta * eta);
            acc += gw[q] * std::cos(y * eta) * boost::math::airy_ai(arg) * ramp;
        }
        sum += 0.5 * h * acc;
    }
    // integrand even in eta; 1/(2 pi) from the inverse transform
    return 2.0 * sum * c3 / (2.0 * std::numbers::pi);
}

} // namespace detail

/// A(x, y) with an estimated quadrature error; throws accuracy_error when
/// the estimate exceeds the configured tolerance.
inline AiryValue airy_kernel_2d(double x, double y, const AiryQuadrature& quad = {}) {
    // beyond arg ~ 12 the Airy function is below 1e-12; clamp by the ramp
    const double c3 = std::pow(3.0, 1.0 / 3.0);
    double eta_sq_max = 12.0 * c3 - x;
    double eta_max = eta_sq_max > 0.0 ? std::sqrt(eta_sq_max) : 0.0;
    eta_max = std::min(std::max(eta_max, 1.0), 1.6 * quad.cutoff);
    const double coarse = detail::airy_eta_integral(x, y, eta_max, quad.panels,
                                                    quad.gauss_order, quad.cutoff);
    const double fine = detail::airy_eta_integral(x, y, eta_max, 2 * quad.panels,
                                                  quad.gauss_order, quad.cutoff);
    const double est = std::abs(fine - coarse);
    if (est > quad.tolerance)
        throw accuracy_error("airy_kernel_2d: quadrature did not converge", est);
    return {std::complex<double>(fine, 0.0), est};
}

} // namespace zkstrip
