#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfrac/solvers.hpp"

namespace rfrac {

struct ExponentFit {
    double exponent = 0.0;
    double residual = 0.0; // RMS of the log-log fit
    int nodes_used = 0;
};

/// Least-squares slope of log u against log delta over nodes with
/// 2 h_min <= delta <= layer, fitted per boundary side and averaged.
/// Throws when fewer than 6 usable nodes lie in the layer.
ExponentFit boundary_exponent(const DiscreteField& u, double layer);

struct HopfReport {
    double s = 0.0;
    double fitted_exponent = 0.0;
    double epsilon0 = 0.0; // inf of u/delta^{2s-1} over the layer
    double layer_width = 0.0;
    double fit_residual = 0.0;
    int n = 0;
    bool pass = false;
    std::string verdict;
};

/// epsilon0 = min over interior layer nodes of u/delta^{2s-1}; PASS iff
/// epsilon0 > 0. u == 0 lands on the "vanishes identically" branch. Negative
/// interior values violate the precondition (the offending node is named).
HopfReport hopf_ratio(const DiscreteField& u, double s, double layer);

struct BoundsReport {
    double c_lower = 0.0;
    double c_upper = 0.0;
    bool pass = false;
    std::string verdict;
};

/// Two-sided comparison of the torsion field with delta^{2s-1}:
/// C_lower^{-1} delta^{2s-1} <= u <= C_upper delta^{2s-1} at interior nodes.
BoundsReport torsion_bounds(const DiscreteField& u_tor, double s);

struct CompactMin {
    Interval compact;
    double min_value = 0.0;
};

struct SmpReport {
    std::vector<CompactMin> minima;
    bool pass = false;
    std::string verdict;
};

/// Nodewise minimum over each compact sub-interval; PASS iff every minimum is
/// positive or u vanishes identically (the dichotomy).
SmpReport smp_probe(const DiscreteField& u, const std::vector<Interval>& compacts);

/// The three centered sub-intervals of relative width 0.25, 0.5, 0.75.
std::vector<Interval> default_compacts(const Interval& dom);

/// Clamped cubic spline (end slopes from one-sided parabolas, boundary values
/// taken from the data). C^2 surrogate for pointwise operator evaluation.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double second_derivative(double x) const;

private:
    std::vector<double> x_, y_, m_; // m_ = second derivatives at nodes
};

struct NodeVerdict {
    int node = 0;
    double x = 0.0;
    double operator_value = 0.0; // (-Delta)^s_Omega u_spline (x)
    double rhs = 0.0;            // c(x) u(x)
    bool pass = false;
};

/// Pointwise super-solution certification: evaluates the operator on a spline
/// surrogate of u at every stride-th interior node and checks
/// operator_value - c u >= -tol.
std::vector<NodeVerdict> supersolution_check(const DiscreteField& u, const DiscreteField& c,
                                             double s, double tol, int stride = 1,
                                             double quad_tol = 1e-7);

nlohmann::json to_json(const HopfReport& r);
nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const SmpReport& r);

/// CSV delta,u,ratio per node (ratio = u/delta^{2s-1}, empty on the boundary).
void write_profile_csv(std::ostream& os, const DiscreteField& u, double s);

} // namespace rfrac
