#pragma once

#include <stdexcept>
#include <string>

namespace rfrac {

/// Adaptive quadrature stopped before reaching the requested tolerance.
/// Carries the best estimate obtained and the error actually achieved.
struct ToleranceError : std::runtime_error {
    ToleranceError(const std::string& what, double estimate_, double achieved_)
        : std::runtime_error(what), estimate(estimate_), achieved(achieved_) {}
    double estimate;
    double achieved;
};

/// The shifted bilinear form E(.,.) - int(c . .) is not positive definite,
/// i.e. c reaches beyond the first Dirichlet eigenvalue.
struct SolvabilityError : std::runtime_error {
    SolvabilityError(const std::string& what, double smallest_eigenvalue_)
        : std::runtime_error(what), smallest_eigenvalue(smallest_eigenvalue_) {}
    double smallest_eigenvalue;
};

} // namespace rfrac
