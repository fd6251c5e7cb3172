#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "rfrac/geometry.hpp"

namespace rfrac {

using PointFn = std::function<double(const std::vector<double>&)>;
using LineFn = std::function<double(double)>;

/// Green function and Poisson kernel of the restricted operator at the center
/// of the unit ball:
///   G(0,y) = k |y|^{2s-N} int_0^{(1-|y|^2)/|y|^2} t^{s-1} (1+t)^{-N/2} dt
///   P(0,y) = gamma |y|^{-N} (|y|^2-1)^{-s}
/// The constants k_{N,s} and gamma_{N,s} are calibrated at construction so
/// that the Poisson kernel has unit mass and the Green integral matches the
/// ball-torsion value Gamma(N/2)/(2^{2s} Gamma((N+2s)/2) Gamma(1+s)).
class BallKernels {
public:
    BallKernels(int dim, double s, double tol = 1e-9);

    int dim() const { return dim_; }
    double order() const { return s_; }
    double k_green() const { return k_; }
    double gamma_poisson() const { return gamma_; }
    double quad_tol() const { return tol_; }

    double green(double r) const;   // 0 < r < 1
    double poisson(double r) const; // r > 1

    double green_mass() const;   // with the calibrated k
    double poisson_mass() const; // with the calibrated gamma
    double green_mass_target() const { return green_target_; }

private:
    double green_mass_raw() const;   // k = 1
    double poisson_mass_raw() const; // gamma = 1
    double inner_integral(double upper) const;

    int dim_;
    double s_;
    double tol_;
    double k_ = 1.0;
    double gamma_ = 1.0;
    double green_target_ = 0.0;
};

struct MeanValueReport {
    std::vector<double> center;
    double radius = 0.0;
    double green_term = 0.0;
    double poisson_term = 0.0;
    double gap = 0.0; // u(x) - green_term - poisson_term
};

/// Green-representation gap
///   u(x) - r^{2s} int_{B_1} G(0,y) g(x+ry) dy - int_{|y|>1} P(0,y) u(x+ry) dy
/// with an explicit Green-term density g; the Poisson integral is truncated
/// where the support of u ends (u vanishes outside the domain closure).
/// Product quadrature: two-point sphere for N=1, trapezoid circle for N=2.
MeanValueReport mean_value_gap_with_density(const BallKernels& kernels, const Domain& support,
                                            const PointFn& u, const PointFn& green_density,
                                            const std::vector<double>& x, double r, double tol);

/// Standard form with g = c_Omega * u, c_Omega = c + kappa_Omega supplied by
/// the caller. Requires B_r(x) inside the domain.
MeanValueReport mean_value_gap(const BallKernels& kernels, const Domain& support, const PointFn& u,
                               const PointFn& c_omega, const std::vector<double>& x, double r,
                               double tol);

/// 1D conveniences.
MeanValueReport mean_value_gap(const BallKernels& kernels, const Interval& support,
                               const LineFn& u, const LineFn& c_omega, double x, double r,
                               double tol);
MeanValueReport mean_value_gap_with_density(const BallKernels& kernels, const Interval& support,
                                            const LineFn& u, const LineFn& green_density, double x,
                                            double r, double tol);

/// Uniform grid samples on [a,b]; evaluation is piecewise linear and zero
/// outside the grid.
struct GriddedFunction {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> values;

    static GriddedFunction sample(double a, double b, int count, const LineFn& f);
    double dx() const { return (b - a) / (static_cast<double>(values.size()) - 1.0); }
    int count() const { return static_cast<int>(values.size()); }
    double node(int i) const { return a + dx() * i; }
    double operator()(double x) const;
    /// Exact integral of the piecewise-linear interpolant of |f| over
    /// [lo, hi] intersected with the grid.
    double integral_abs(double lo, double hi) const;
};

/// Convolution with the normalized bump exp(-1/(1-t^2)) scaled to radius eps,
/// sampled on the same grid (f extended by zero).
GriddedFunction mollify(const GriddedFunction& f, double eps);

/// max over the given radii of r^{-N} int_{B_r(x)} |f| with N = 1; the
/// normalization carries no volume factor, so M[1] = omega_1 = 2.
double maximal_function(const GriddedFunction& f, double x, const std::vector<double>& radii);

/// CSV abscissa,green,poisson; green filled on (0,1), poisson beyond 1.
void write_kernel_profile_csv(std::ostream& os, const BallKernels& kernels, int samples,
                              double max_abscissa);

} // namespace rfrac
