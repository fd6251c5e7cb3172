#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rfrac/geometry.hpp"

namespace rfrac {

/// Fractional order s in (0,1). The Hopf-rate diagnostics additionally
/// require s > 1/2; in_hopf_range() reports that.
class FractionalOrder {
public:
    explicit FractionalOrder(double s);
    double value() const { return s_; }
    bool in_hopf_range() const { return s_ > 0.5; }

private:
    double s_;
};

/// c_{N,s} = s(1-s) 2^{2s} Gamma((N+2s)/2) / (pi^{N/2} Gamma(2-s)),
/// the inverse of the integral of (1-cos zeta_1)/|zeta|^{N+2s}.
double kernel_constant(int dim, double s);

/// kappa_Omega(x) = c_{N,s} int_{complement} |x-y|^{-N-2s} dy.
/// Interval: exact closed form c/(2s) [(b-x)^{-2s} + (x-a)^{-2s}].
/// Ball: spherical reduction plus adaptive quadrature to tol.
/// Throws std::domain_error on or outside the boundary (kappa ~ delta^{-2s}).
double killing_potential(const Interval& dom, double s, double x);
double killing_potential(const Ball& dom, double s, const std::vector<double>& x,
                         double tol = 1e-10);
double killing_potential(const Domain& dom, double s, const std::vector<double>& x,
                         double tol = 1e-10);

struct PointwiseOptions {
    double tol = 1e-8;
    /// Analytic u'' when available; otherwise central differences are used.
    std::optional<std::function<double(double)>> second_derivative;
};

/// Principal-value evaluation of the regional operator at an interior point:
/// symmetric excision of radius h = min(delta/2, tol^{1/(2-2s)}) with the
/// Taylor correction -c u''(x) h^{2-2s}/(2-2s), the excised symmetric part
/// integrated as [2u(x)-u(x+z)-u(x-z)] z^{-1-2s} to avoid cancellation, and
/// the one-sided remainder beyond delta handled separately.
double apply_pointwise(const Interval& dom, double s, const std::function<double(double)>& u,
                       double x, const PointwiseOptions& opt = {});
double apply_pointwise(const Domain& dom, double s, const std::function<double(double)>& u,
                       double x, const PointwiseOptions& opt = {});

/// Symmetric tridiagonal matrix (mass matrices and weighted variants).
struct TriDiagonal {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size()-1

    int size() const { return static_cast<int>(diag.size()); }
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd dense() const;
    double quadratic_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
};

struct AssemblyOptions {
    /// Subdivide separated cell pairs while the gap is below this multiple of
    /// the larger cell.
    double split_factor = 1.0;
    /// Tensor Gauss order for close (8) and well-separated (4) pairs.
    int near_order = 8;
    int far_order = 4;
    /// Relative tolerance of the adjacent-pair Duffy moments.
    double adjacent_rel_tol = 1e-12;
};

/// Galerkin matrices of the regional energy form
///   E(u,v) = (c/2) II (u(x)-u(y))(v(x)-v(y)) |x-y|^{-1-2s} dx dy over Omega x Omega
/// on piecewise-linear hats. The full stiffness includes boundary hats (its
/// rows sum to zero exactly: constants are annihilated); solvers use the
/// interior block, which is SPD on zero-trace fields.
class OperatorAssembly {
public:
    OperatorAssembly(GradedMesh mesh, FractionalOrder s, Eigen::MatrixXd stiffness_full,
                     TriDiagonal mass_full);

    const GradedMesh& mesh() const { return mesh_; }
    FractionalOrder order() const { return s_; }
    int interior_count() const { return mesh_.node_count() - 2; }

    const Eigen::MatrixXd& stiffness_full() const { return stiffness_full_; }
    const TriDiagonal& mass_full() const { return mass_full_; }
    Eigen::MatrixXd stiffness_interior() const;
    TriDiagonal mass_interior() const;

    /// Interior block of the mass matrix weighted by a piecewise-linear
    /// nodal coefficient (all nodes, boundary included).
    TriDiagonal weighted_mass_interior(const std::vector<double>& c_nodes) const;

    /// Interior rows of M_full f for a nodal source f.
    Eigen::VectorXd load_vector(const std::vector<double>& f_nodes) const;

private:
    GradedMesh mesh_;
    FractionalOrder s_;
    Eigen::MatrixXd stiffness_full_;
    TriDiagonal mass_full_;
};

OperatorAssembly assemble(const GradedMesh& mesh, double s, const AssemblyOptions& opt = {});

/// CSV triplets i,j,value.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

} // namespace rfrac
