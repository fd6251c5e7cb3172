#pragma once

#include <iosfwd>
#include <vector>

namespace rfrac {

/// Open interval (a, b) with a < b.
struct Interval {
    double a;
    double b;
    Interval(double a_, double b_);
    double length() const { return b - a; }
    bool contains(double x) const { return x > a && x < b; }
    bool contains_closure(double x) const { return x >= a && x <= b; }
    double midpoint() const { return 0.5 * (a + b); }
};

/// Euclidean ball in R^N, N >= 1.
struct Ball {
    std::vector<double> center;
    double radius;
    Ball(std::vector<double> center_, double radius_);
    int dim() const { return static_cast<int>(center.size()); }
};

/// A bounded open set: an interval in 1D or a ball in R^N. Intervals carry
/// meshes; balls only feed the ball-kernel machinery.
class Domain {
public:
    enum class Kind { interval, ball };

    static Domain interval(double a, double b);
    static Domain ball(std::vector<double> center, double radius);

    Kind kind() const { return kind_; }
    const Interval& as_interval() const;
    const Ball& as_ball() const;
    int dim() const;
    double diameter() const;

private:
    Domain(Kind k, Interval iv, Ball bl) : kind_(k), interval_(iv), ball_(std::move(bl)) {}
    Kind kind_;
    Interval interval_;
    Ball ball_;
};

/// Distance to the boundary; zero exactly on it, and 1-Lipschitz.
/// Throws std::domain_error for points outside the closure.
double boundary_distance(const Interval& dom, double x);
double boundary_distance(const Ball& dom, const std::vector<double>& x);
double boundary_distance(const Domain& dom, const std::vector<double>& x);

/// Symmetric 1D mesh with nodes clustered at both endpoints.
/// Node j of the left half sits at a + (b-a)/2 * (2j/n)^beta; the right half
/// mirrors it. beta = 1 gives the uniform mesh.
struct GradedMesh {
    Interval domain;
    double grading;
    std::vector<double> nodes; // size n+1, strictly increasing, exact endpoints

    int cell_count() const { return static_cast<int>(nodes.size()) - 1; }
    int node_count() const { return static_cast<int>(nodes.size()); }
    double cell_size(int k) const { return nodes[k + 1] - nodes[k]; }
    double h_min() const;
    double h_max() const;
    double boundary_distance_at(int j) const;
    /// Index of the cell containing x (clamped to the first/last cell).
    int locate(double x) const;
    bool compatible_with(const GradedMesh& other) const;
};

GradedMesh build_graded_mesh(const Interval& dom, int n, double beta);

/// Grading that lets piecewise-linear interpolation resolve the delta^{2s-1}
/// boundary layer: max(1, 2/(2s-1)).
double default_grading(double s);

/// CSV with header index,node,boundary_distance.
void write_mesh_csv(std::ostream& os, const GradedMesh& mesh);

} // namespace rfrac
