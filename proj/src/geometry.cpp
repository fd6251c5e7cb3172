#include "rfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rfrac/io.hpp"

namespace rfrac {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!(a < b)) throw std::invalid_argument("Interval: endpoints must satisfy a < b");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("Interval: endpoints must be finite");
}

Ball::Ball(std::vector<double> center_, double radius_)
    : center(std::move(center_)), radius(radius_) {
    if (center.empty()) throw std::invalid_argument("Ball: dimension must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
}

Domain Domain::interval(double a, double b) {
    return Domain(Kind::interval, Interval(a, b), Ball({0.0}, 1.0));
}

Domain Domain::ball(std::vector<double> center, double radius) {
    return Domain(Kind::ball, Interval(0.0, 1.0), Ball(std::move(center), radius));
}

const Interval& Domain::as_interval() const {
    if (kind_ != Kind::interval) throw std::logic_error("Domain: not an interval");
    return interval_;
}

const Ball& Domain::as_ball() const {
    if (kind_ != Kind::ball) throw std::logic_error("Domain: not a ball");
    return ball_;
}

int Domain::dim() const { return kind_ == Kind::interval ? 1 : ball_.dim(); }

double Domain::diameter() const {
    return kind_ == Kind::interval ? interval_.length() : 2.0 * ball_.radius;
}

double boundary_distance(const Interval& dom, double x) {
    if (!dom.contains_closure(x))
        throw std::domain_error("boundary_distance: point outside the closure");
    return std::min(x - dom.a, dom.b - x);
}

double boundary_distance(const Ball& dom, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != dom.dim())
        throw std::invalid_argument("boundary_distance: dimension mismatch");
    double r2 = 0.0;
    for (int i = 0; i < dom.dim(); ++i) {
        const double d = x[i] - dom.center[i];
        r2 += d * d;
    }
    const double r = std::sqrt(r2);
    if (r > dom.radius * (1.0 + 1e-12))
        throw std::domain_error("boundary_distance: point outside the closure");
    return std::max(0.0, dom.radius - r);
}

double boundary_distance(const Domain& dom, const std::vector<double>& x) {
    if (dom.kind() == Domain::Kind::interval) {
        if (x.size() != 1) throw std::invalid_argument("boundary_distance: expected a 1D point");
        return boundary_distance(dom.as_interval(), x[0]);
    }
    return boundary_distance(dom.as_ball(), x);
}

double GradedMesh::h_min() const {
    double h = cell_size(0);
    for (int k = 1; k < cell_count(); ++k) h = std::min(h, cell_size(k));
    return h;
}

double GradedMesh::h_max() const {
    double h = cell_size(0);
    for (int k = 1; k < cell_count(); ++k) h = std::max(h, cell_size(k));
    return h;
}

double GradedMesh::boundary_distance_at(int j) const {
    return boundary_distance(domain, nodes.at(j));
}

int GradedMesh::locate(double x) const {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int k = static_cast<int>(it - nodes.begin()) - 1;
    return std::clamp(k, 0, cell_count() - 1);
}

bool GradedMesh::compatible_with(const GradedMesh& other) const {
    return node_count() == other.node_count() && domain.a == other.domain.a &&
           domain.b == other.domain.b && grading == other.grading;
}

GradedMesh build_graded_mesh(const Interval& dom, int n, double beta) {
    if (n < 8) throw std::invalid_argument("build_graded_mesh: need n >= 8");
    if (!(beta >= 1.0)) throw std::invalid_argument("build_graded_mesh: need grading >= 1");
    std::vector<double> nodes(n + 1);
    const double half = 0.5 * dom.length();
    for (int j = 0; j <= n / 2; ++j)
        nodes[j] = dom.a + half * std::pow(2.0 * j / n, beta);
    for (int j = n / 2 + 1; j <= n; ++j)
        nodes[j] = dom.b - half * std::pow(2.0 * (n - j) / n, beta);
    nodes.front() = dom.a;
    nodes.back() = dom.b;
    for (int j = 0; j < n; ++j)
        if (!(nodes[j] < nodes[j + 1]))
            throw std::invalid_argument("build_graded_mesh: grading collapses nodes at this n");
    return GradedMesh{dom, beta, std::move(nodes)};
}

double default_grading(double s) {
    if (s <= 0.5) return 1.0;
    return std::max(1.0, 2.0 / (2.0 * s - 1.0));
}

void write_mesh_csv(std::ostream& os, const GradedMesh& mesh) {
    os << "index,node,boundary_distance\n";
    for (int j = 0; j < mesh.node_count(); ++j)
        os << j << ',' << format_g17(mesh.nodes[j]) << ','
           << format_g17(mesh.boundary_distance_at(j)) << '\n';
}

} // namespace rfrac
