#include "rfrac/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "rfrac/errors.hpp"
#include "rfrac/io.hpp"

namespace rfrac {

DiscreteField DiscreteField::constant(const GradedMesh& mesh, double value) {
    DiscreteField f{mesh, std::vector<double>(mesh.node_count(), value), value == 0.0};
    return f;
}

DiscreteField DiscreteField::from_function(const GradedMesh& mesh,
                                           const std::function<double(double)>& fn) {
    DiscreteField f{mesh, std::vector<double>(mesh.node_count()), false};
    for (int j = 0; j < mesh.node_count(); ++j) f.values[j] = fn(mesh.nodes[j]);
    f.zero_trace = f.values.front() == 0.0 && f.values.back() == 0.0;
    return f;
}

double DiscreteField::operator()(double x) const {
    if (x <= mesh.domain.a || x >= mesh.domain.b) {
        if (x == mesh.domain.a) return values.front();
        if (x == mesh.domain.b) return values.back();
        return 0.0; // extension by zero
    }
    const int k = mesh.locate(x);
    const double t = (x - mesh.nodes[k]) / mesh.cell_size(k);
    return (1.0 - t) * values[k] + t * values[k + 1];
}

DiscreteField DiscreteField::positive_part() const {
    DiscreteField out = *this;
    for (auto& v : out.values) v = std::max(v, 0.0);
    out.zero_trace = out.values.front() == 0.0 && out.values.back() == 0.0;
    return out;
}

DiscreteField DiscreteField::negative_part() const {
    DiscreteField out = *this;
    for (auto& v : out.values) v = std::max(-v, 0.0);
    out.zero_trace = out.values.front() == 0.0 && out.values.back() == 0.0;
    return out;
}

double DiscreteField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double DiscreteField::min_interior() const {
    double m = values[1];
    for (int j = 2; j + 1 < mesh.node_count(); ++j) m = std::min(m, values[j]);
    return m;
}

double l2_inner(const DiscreteField& u, const DiscreteField& v) {
    if (!u.mesh.compatible_with(v.mesh)) throw std::invalid_argument("l2_inner: mesh mismatch");
    double sum = 0.0;
    for (int k = 0; k < u.mesh.cell_count(); ++k) {
        const double h = u.mesh.cell_size(k);
        const double u0 = u.values[k], u1 = u.values[k + 1];
        const double v0 = v.values[k], v1 = v.values[k + 1];
        sum += h * (2.0 * u0 * v0 + u0 * v1 + u1 * v0 + 2.0 * u1 * v1) / 6.0;
    }
    return sum;
}

double l2_norm(const DiscreteField& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

namespace {

DiscreteField make_zero_trace_field(const GradedMesh& mesh, const Eigen::VectorXd& interior) {
    DiscreteField out{mesh, std::vector<double>(mesh.node_count(), 0.0), true};
    for (int i = 0; i < interior.size(); ++i) out.values[i + 1] = interior[i];
    return out;
}

Eigen::VectorXd interior_vector(const DiscreteField& u) {
    const int m = u.mesh.node_count() - 2;
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v[i] = u.values[i + 1];
    return v;
}

struct CgResult {
    int iterations;
    double relative_residual;
};

// Jacobi-preconditioned conjugate gradients on a dense SPD matrix.
CgResult pcg(const Eigen::MatrixXd& B, const Eigen::VectorXd& rhs, Eigen::VectorXd& u,
             double tol, int max_iter) {
    const Eigen::VectorXd dinv = B.diagonal().cwiseInverse();
    const double rhs_norm = std::max(rhs.norm(), 1e-300);
    u.setZero(rhs.size());
    Eigen::VectorXd r = rhs;
    Eigen::VectorXd z = dinv.cwiseProduct(r);
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    int it = 0;
    double rel = r.norm() / rhs_norm;
    while (rel > tol && it < max_iter) {
        const Eigen::VectorXd Bd = B * d;
        const double alpha = rz / d.dot(Bd);
        u += alpha * d;
        r -= alpha * Bd;
        z = dinv.cwiseProduct(r);
        const double rz_next = r.dot(z);
        d = z + (rz_next / rz) * d;
        rz = rz_next;
        rel = r.norm() / rhs_norm;
        ++it;
    }
    return {it, rel};
}

} // namespace

double smallest_pencil_eigenvalue(const Eigen::MatrixXd& B, const TriDiagonal& M, double tol,
                                  int max_iter) {
    const int m = static_cast<int>(B.rows());
    const Eigen::MatrixXd Md = M.dense();
    // Shift until B + sigma M is positive definite, then run inverse power
    // iteration on the shifted SPD pencil.
    double sigma = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    double trial = 1.0;
    while (llt.info() != Eigen::Success) {
        sigma = trial;
        trial *= 8.0;
        llt.compute(B + sigma * Md);
        if (sigma > 1e18) throw std::runtime_error("smallest_pencil_eigenvalue: cannot shift to SPD");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    v /= std::sqrt(M.quadratic_form(v, v));
    double nu = v.dot(B * v) + sigma * M.quadratic_form(v, v);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = llt.solve(M.apply(v));
        const double mn = std::sqrt(M.quadratic_form(w, w));
        if (!(mn > 0.0)) break;
        w /= mn;
        const double nu_next = w.dot(B * w) + sigma * M.quadratic_form(w, w);
        v = w;
        if (std::abs(nu_next - nu) <= tol * std::max(1.0, std::abs(nu_next))) {
            nu = nu_next;
            break;
        }
        nu = nu_next;
    }
    return nu - sigma;
}

std::pair<DiscreteField, SolveReport> solve_dirichlet(const OperatorAssembly& assembly,
                                                      const DiscreteField& c,
                                                      const DiscreteField& f, double tol,
                                                      const SolverOptions& opt) {
    const GradedMesh& mesh = assembly.mesh();
    if (!c.mesh.compatible_with(mesh) || !f.mesh.compatible_with(mesh))
        throw std::invalid_argument("solve_dirichlet: coefficient/source mesh mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_dirichlet: tol must be positive");

    const int m = assembly.interior_count();
    Eigen::MatrixXd B = assembly.stiffness_interior();
    const TriDiagonal mc = assembly.weighted_mass_interior(c.values);
    for (int i = 0; i < m; ++i) {
        B(i, i) -= mc.diag[i];
        if (i + 1 < m) {
            B(i, i + 1) -= mc.off[i];
            B(i + 1, i) -= mc.off[i];
        }
    }
    const Eigen::VectorXd rhs = assembly.load_vector(f.values);

    const bool use_direct =
        opt.force ? (*opt.force == SolveReport::Solver::direct) : (m <= opt.direct_limit);

    SolveReport report;
    Eigen::VectorXd u;
    if (use_direct) {
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() != Eigen::Success) {
            const double mu = smallest_pencil_eigenvalue(B, assembly.mass_interior());
            throw SolvabilityError("solve_dirichlet: shifted form is indefinite; smallest "
                                   "shifted eigenvalue " +
                                       format_g17(mu) + " (c reaches beyond lambda_1)",
                                   mu);
        }
        u = llt.solve(rhs);
        u += llt.solve(Eigen::VectorXd(rhs - B * u)); // one step of refinement
        report.solver = SolveReport::Solver::direct;
        report.iterations = 2;
        report.residual_norm = (rhs - B * u).norm() / std::max(1.0, rhs.norm());
    } else {
        // Positivity check mirrors the direct branch cheaply: CG itself would
        // diverge silently on an indefinite system.
        const CgResult cg = pcg(B, rhs, u, tol, opt.cg_max_iter_factor * m);
        report.solver = SolveReport::Solver::cg;
        report.iterations = cg.iterations;
        report.residual_norm = cg.relative_residual;
        if (cg.relative_residual > tol) {
            const double mu = smallest_pencil_eigenvalue(B, assembly.mass_interior());
            if (mu <= 0.0)
                throw SolvabilityError("solve_dirichlet: shifted form is indefinite; smallest "
                                       "shifted eigenvalue " +
                                           format_g17(mu),
                                       mu);
            throw ToleranceError("solve_dirichlet: cg did not reach the tolerance",
                                 u.size() ? u.norm() : 0.0, cg.relative_residual);
        }
    }
    if (report.residual_norm > tol)
        throw ToleranceError("solve_dirichlet: residual above tolerance", u.norm(),
                             report.residual_norm);
    return {make_zero_trace_field(mesh, u), report};
}

DiscreteField torsion(const OperatorAssembly& assembly, double tol) {
    const auto one = DiscreteField::constant(assembly.mesh(), 1.0);
    const auto zero = DiscreteField::constant(assembly.mesh(), 0.0);
    return solve_dirichlet(assembly, zero, one, tol).first;
}

EigenPair principal_eigenpair(const OperatorAssembly& assembly, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("principal_eigenpair: tol must be positive");
    const GradedMesh& mesh = assembly.mesh();
    const int m = assembly.interior_count();
    const Eigen::MatrixXd A = assembly.stiffness_interior();
    const TriDiagonal M = assembly.mass_interior();

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("principal_eigenpair: stiffness not positive definite");

    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
    v /= std::sqrt(M.quadratic_form(v, v));
    double lambda = v.dot(A * v);
    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        Eigen::VectorXd w = llt.solve(M.apply(v));
        w /= std::sqrt(M.quadratic_form(w, w));
        const double next = w.dot(A * w);
        v = w;
        if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
            lambda = next;
            converged = true;
            break;
        }
        lambda = next;
    }

    // Sign normalization: positive at the node nearest the midpoint.
    int mid_node = 0;
    double best = std::abs(mesh.nodes[0] - mesh.domain.midpoint());
    for (int j = 1; j < mesh.node_count(); ++j) {
        const double d = std::abs(mesh.nodes[j] - mesh.domain.midpoint());
        if (d < best) {
            best = d;
            mid_node = j;
        }
    }
    const int mid_idx = std::clamp(mid_node - 1, 0, m - 1);
    if (v[mid_idx] < 0.0) v = -v;

    const double residual = (A * v - lambda * M.apply(v)).norm();
    EigenPair pair{lambda, make_zero_trace_field(mesh, v), residual, it + 1};
    if (!converged)
        throw ConvergenceError("principal_eigenpair: max_iter exceeded", std::move(pair));
    return pair;
}

double energy_form(const OperatorAssembly& assembly, const DiscreteField& u,
                   const DiscreteField& v) {
    if (!u.mesh.compatible_with(assembly.mesh()) || !v.mesh.compatible_with(assembly.mesh()))
        throw std::invalid_argument("energy_form: field mesh does not match the assembly");
    const Eigen::VectorXd ui = interior_vector(u);
    const Eigen::VectorXd vi = interior_vector(v);
    const int m = assembly.interior_count();
    return ui.dot(assembly.stiffness_full().block(1, 1, m, m) * vi);
}

void write_solution_csv(std::ostream& os, const DiscreteField& u, double s) {
    os << "node,boundary_distance,value,value_over_delta_pow\n";
    const double expo = 2.0 * s - 1.0;
    for (int j = 0; j < u.mesh.node_count(); ++j) {
        const double delta = u.mesh.boundary_distance_at(j);
        os << format_g17(u.mesh.nodes[j]) << ',' << format_g17(delta) << ','
           << format_g17(u.values[j]) << ',';
        if (delta > 0.0) os << format_g17(u.values[j] / std::pow(delta, expo));
        os << '\n';
    }
}

} // namespace rfrac
