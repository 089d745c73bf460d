#pragma once

#include <stdexcept>
#include <string>

namespace zkstrip {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct index_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature failed to meet its tolerance; carries the achieved estimate.
struct accuracy_error : std::runtime_error {
    double error_estimate;
    accuracy_error(const std::string& what, double est)
        : std::runtime_error(what), error_estimate(est) {}
};

/// The forcing multiplier denominator vanished on a sampled bin.
struct singular_bin_error : std::runtime_error {
    int mode_k;
    double tau;
    singular_bin_error(const std::string& what, int k, double tau_)
        : std::runtime_error(what), mode_k(k), tau(tau_) {}
};

/// Neumann-series ratio |r_k(tau)| >= 1 somewhere on the resolved band.
struct divergent_series_error : std::runtime_error {
    int mode_k;
    double tau;
    double ratio;
    divergent_series_error(const std::string& what, int k, double tau_, double r)
        : std::runtime_error(what), mode_k(k), tau(tau_), ratio(r) {}
};

} // namespace zkstrip
