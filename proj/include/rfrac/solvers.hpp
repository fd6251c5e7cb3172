#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>

#include "rfrac/operator.hpp"

namespace rfrac {

/// Nodal values on a mesh. zero_trace marks fields whose boundary values are
/// exactly zero. Evaluation interpolates linearly and extends by zero outside.
struct DiscreteField {
    GradedMesh mesh;
    std::vector<double> values;
    bool zero_trace = false;

    static DiscreteField constant(const GradedMesh& mesh, double value);
    static DiscreteField from_function(const GradedMesh& mesh,
                                       const std::function<double(double)>& f);

    double operator()(double x) const;
    DiscreteField positive_part() const;
    DiscreteField negative_part() const; // u^- = max(-u, 0), nonnegative
    double max_value() const;
    double min_interior() const;
};

/// Exact L2 inner product of the piecewise-linear interpolants.
double l2_inner(const DiscreteField& u, const DiscreteField& v);
double l2_norm(const DiscreteField& u);

struct SolveReport {
    double residual_norm = 0.0;
    int iterations = 0;
    enum class Solver { direct, cg } solver = Solver::direct;
};

struct SolverOptions {
    /// Dense factorization is used up to this many interior unknowns,
    /// diagonal-preconditioned CG beyond it.
    int direct_limit = 4096;
    std::optional<SolveReport::Solver> force;
    int cg_max_iter_factor = 40;
};

/// Solves E(u, phi_i) - int(c u phi_i) = int(f phi_i) over interior hats with
/// zero trace. Requires the shifted form to be positive definite (guaranteed
/// for c <= 0); otherwise throws SolvabilityError naming the smallest
/// eigenvalue of the shifted pencil.
std::pair<DiscreteField, SolveReport> solve_dirichlet(const OperatorAssembly& assembly,
                                                      const DiscreteField& c,
                                                      const DiscreteField& f, double tol,
                                                      const SolverOptions& opt = {});

/// The torsion problem: solve_dirichlet with f = 1, c = 0.
DiscreteField torsion(const OperatorAssembly& assembly, double tol);

struct EigenPair {
    double lambda1 = 0.0;
    DiscreteField phi1;
    double residual = 0.0;
    int iterations = 0;
};

/// Inverse power iteration ran out of iterations; carries the last iterate.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, EigenPair last_)
        : std::runtime_error(what), last(std::move(last_)) {}
    EigenPair last;
};

/// Smallest eigenpair of (stiffness, mass) by inverse power iteration with
/// mass orthonormalization. phi1 is L2-normalized and positive at the node
/// nearest the domain midpoint.
EigenPair principal_eigenpair(const OperatorAssembly& assembly, double tol = 1e-10,
                              int max_iter = 500);

/// u^T stiffness v restricted to interior nodes. Throws on mesh mismatch.
double energy_form(const OperatorAssembly& assembly, const DiscreteField& u,
                   const DiscreteField& v);

/// Smallest eigenvalue of the pencil (B, M) for symmetric B and SPD M.
double smallest_pencil_eigenvalue(const Eigen::MatrixXd& B, const TriDiagonal& M,
                                  double tol = 1e-9, int max_iter = 400);

/// CSV node,boundary_distance,value,value_over_delta_pow; the last column is
/// u/delta^{2s-1} and stays empty at boundary nodes.
void write_solution_csv(std::ostream& os, const DiscreteField& u, double s);

} // namespace rfrac
