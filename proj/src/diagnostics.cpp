#include "rfrac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rfrac/io.hpp"

namespace rfrac {

namespace {

struct SideFit {
    double slope = 0.0;
    double rss = 0.0;
    int count = 0;
};

SideFit fit_loglog(const std::vector<std::pair<double, double>>& pts) {
    SideFit fit;
    fit.count = static_cast<int>(pts.size());
    if (fit.count < 2) return fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [d, u] : pts) {
        const double lx = std::log(d), ly = std::log(u);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = fit.count;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    for (const auto& [d, u] : pts) {
        const double r = std::log(u) - (intercept + fit.slope * std::log(d));
        fit.rss += r * r;
    }
    return fit;
}

} // namespace

ExponentFit boundary_exponent(const DiscreteField& u, double layer) {
    const GradedMesh& mesh = u.mesh;
    const double diam = mesh.domain.length();
    if (!(layer > 0.0 && layer <= 0.25 * diam))
        throw std::invalid_argument("boundary_exponent: layer must lie in (0, diam/4]");
    bool nontrivial = false;
    for (int j = 1; j + 1 < mesh.node_count(); ++j)
        if (u.values[j] != 0.0) nontrivial = true;
    if (!nontrivial)
        throw std::invalid_argument("boundary_exponent: field vanishes identically");

    const double lo = 2.0 * mesh.h_min();
    const double mid = mesh.domain.midpoint();
    std::vector<std::pair<double, double>> left, right;
    for (int j = 1; j + 1 < mesh.node_count(); ++j) {
        const double delta = mesh.boundary_distance_at(j);
        if (delta < lo || delta > layer) continue;
        if (u.values[j] <= 0.0) continue; // log undefined; skipped
        (mesh.nodes[j] < mid ? left : right).push_back({delta, u.values[j]});
    }
    if (static_cast<int>(left.size() + right.size()) < 6 || left.size() < 2 || right.size() < 2)
        throw std::invalid_argument("boundary_exponent: fewer than 6 usable nodes in the layer "
                                    "(insufficient resolution)");
    const SideFit fl = fit_loglog(left);
    const SideFit fr = fit_loglog(right);
    ExponentFit out;
    out.exponent = 0.5 * (fl.slope + fr.slope);
    out.nodes_used = fl.count + fr.count;
    out.residual = std::sqrt((fl.rss + fr.rss) / out.nodes_used);
    return out;
}

HopfReport hopf_ratio(const DiscreteField& u, double s, double layer) {
    const GradedMesh& mesh = u.mesh;
    HopfReport report;
    report.s = s;
    report.layer_width = layer;
    report.n = mesh.cell_count();

    bool all_zero = true;
    for (int j = 1; j + 1 < mesh.node_count(); ++j) {
        if (u.values[j] < 0.0)
            throw std::invalid_argument("hopf_ratio: u negative at interior node " +
                                        std::to_string(j) + " (x = " +
                                        format_g17(mesh.nodes[j]) + ")");
        if (u.values[j] != 0.0) all_zero = false;
    }
    if (all_zero) {
        report.epsilon0 = 0.0;
        report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        report.fit_residual = std::numeric_limits<double>::quiet_NaN();
        report.pass = false;
        report.verdict = "trivial super-solution (vanishes identically)";
        return report;
    }

    const double expo = 2.0 * s - 1.0;
    double eps0 = std::numeric_limits<double>::infinity();
    int in_layer = 0;
    for (int j = 1; j + 1 < mesh.node_count(); ++j) {
        const double delta = mesh.boundary_distance_at(j);
        if (delta > layer) continue;
        ++in_layer;
        eps0 = std::min(eps0, u.values[j] / std::pow(delta, expo));
    }
    if (in_layer == 0)
        throw std::invalid_argument("hopf_ratio: no interior nodes inside the layer");

    const ExponentFit fit = boundary_exponent(u, layer);
    report.fitted_exponent = fit.exponent;
    report.fit_residual = fit.residual;
    report.epsilon0 = eps0;
    report.pass = eps0 > 0.0;
    report.verdict = report.pass ? "PASS: u/delta^{2s-1} bounded below by epsilon0 > 0"
                                 : "FAIL: ratio not bounded away from zero";
    return report;
}

BoundsReport torsion_bounds(const DiscreteField& u_tor, double s) {
    const GradedMesh& mesh = u_tor.mesh;
    const double expo = 2.0 * s - 1.0;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -std::numeric_limits<double>::infinity();
    bool positive = true;
    for (int j = 1; j + 1 < mesh.node_count(); ++j) {
        if (u_tor.values[j] <= 0.0) positive = false;
        const double ratio = u_tor.values[j] / std::pow(mesh.boundary_distance_at(j), expo);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    BoundsReport report;
    if (!positive || !(rmin > 0.0)) {
        report.pass = false;
        report.c_lower = std::numeric_limits<double>::infinity();
        report.c_upper = rmax;
        report.verdict = "FAIL: zero or negative interior value contradicts strict positivity";
        return report;
    }
    report.c_lower = 1.0 / rmin;
    report.c_upper = rmax;
    report.pass = std::isfinite(report.c_lower) && std::isfinite(report.c_upper);
    report.verdict = report.pass ? "PASS: double-sided comparison with delta^{2s-1} holds"
                                 : "FAIL: comparison constants not finite";
    return report;
}

std::vector<Interval> default_compacts(const Interval& dom) {
    std::vector<Interval> out;
    for (const double w : {0.25, 0.5, 0.75}) {
        const double half = 0.5 * w * dom.length();
        out.emplace_back(dom.midpoint() - half, dom.midpoint() + half);
    }
    return out;
}

SmpReport smp_probe(const DiscreteField& u, const std::vector<Interval>& compacts) {
    const GradedMesh& mesh = u.mesh;
    SmpReport report;
    bool all_zero = true;
    for (int j = 1; j + 1 < mesh.node_count(); ++j)
        if (u.values[j] != 0.0) all_zero = false;

    bool all_positive = true;
    for (const Interval& k : compacts) {
        if (!(k.a > mesh.domain.a && k.b < mesh.domain.b))
            throw std::invalid_argument("smp_probe: compact not strictly interior");
        double m = std::numeric_limits<double>::infinity();
        int found = 0;
        for (int j = 1; j + 1 < mesh.node_count(); ++j) {
            const double x = mesh.nodes[j];
            if (x < k.a || x > k.b) continue;
            m = std::min(m, u.values[j]);
            ++found;
        }
        if (found == 0) throw std::invalid_argument("smp_probe: compact contains no mesh nodes");
        report.minima.push_back({k, m});
        if (!(m > 0.0)) all_positive = false;
    }
    if (all_zero) {
        report.pass = true;
        report.verdict = "identically zero branch";
    } else if (all_positive) {
        report.pass = true;
        report.verdict = "PASS: essinf over every compact is positive";
    } else {
        report.pass = false;
        report.verdict = "FAIL: u is neither identically zero nor positive on every compact "
                         "(not a super-solution)";
    }
    return report;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size()) - 1;
    if (n < 2 || y_.size() != x_.size())
        throw std::invalid_argument("CubicSpline: need at least three nodes");
    // End slopes from the parabola through the first/last three nodes.
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    const double f01 = (y_[1] - y_[0]) / h0, f12 = (y_[2] - y_[1]) / h1;
    const double d0 = f01 - (f12 - f01) / (h0 + h1) * h0;
    const double hn1 = x_[n] - x_[n - 1], hn2 = x_[n - 1] - x_[n - 2];
    const double fa = (y_[n - 1] - y_[n - 2]) / hn2, fb = (y_[n] - y_[n - 1]) / hn1;
    const double dn = fb + (fb - fa) / (hn2 + hn1) * hn1;

    // Clamped tridiagonal system for the second derivatives.
    std::vector<double> a(n + 1), b(n + 1), c(n + 1), r(n + 1);
    b[0] = 2.0 * h0;
    c[0] = h0;
    r[0] = 6.0 * (f01 - d0);
    for (int i = 1; i < n; ++i) {
        const double hi0 = x_[i] - x_[i - 1], hi1 = x_[i + 1] - x_[i];
        a[i] = hi0;
        b[i] = 2.0 * (hi0 + hi1);
        c[i] = hi1;
        r[i] = 6.0 * ((y_[i + 1] - y_[i]) / hi1 - (y_[i] - y_[i - 1]) / hi0);
    }
    a[n] = hn1;
    b[n] = 2.0 * hn1;
    r[n] = 6.0 * (dn - fb);

    // Thomas algorithm.
    m_.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    m_[n] = r[n] / b[n];
    for (int i = n - 1; i >= 0; --i) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double x) const {
    const int n = static_cast<int>(x_.size()) - 1;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const int i = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n - 1);
    const double h = x_[i + 1] - x_[i];
    const double t1 = x_[i + 1] - x, t0 = x - x_[i];
    return (m_[i] * t1 * t1 * t1 + m_[i + 1] * t0 * t0 * t0) / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * t1 + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * t0;
}

double CubicSpline::second_derivative(double x) const {
    const int n = static_cast<int>(x_.size()) - 1;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const int i = std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, n - 1);
    const double h = x_[i + 1] - x_[i];
    return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

std::vector<NodeVerdict> supersolution_check(const DiscreteField& u, const DiscreteField& c,
                                             double s, double tol, int stride, double quad_tol) {
    const GradedMesh& mesh = u.mesh;
    if (!c.mesh.compatible_with(mesh))
        throw std::invalid_argument("supersolution_check: coefficient mesh mismatch");
    if (stride < 1) throw std::invalid_argument("supersolution_check: stride must be >= 1");

    CubicSpline spline(mesh.nodes, u.values);
    auto u_fn = [&spline](double x) { return spline(x); };
    PointwiseOptions opt;
    opt.tol = quad_tol;
    opt.second_derivative = [&spline](double x) { return spline.second_derivative(x); };

    std::vector<NodeVerdict> out;
    for (int j = 1; j + 1 < mesh.node_count(); j += stride) {
        NodeVerdict v;
        v.node = j;
        v.x = mesh.nodes[j];
        v.operator_value = apply_pointwise(mesh.domain, s, u_fn, v.x, opt);
        v.rhs = c.values[j] * u.values[j];
        v.pass = v.operator_value - v.rhs >= -tol;
        out.push_back(v);
    }
    return out;
}

nlohmann::json to_json(const HopfReport& r) {
    return nlohmann::json{{"s", r.s},
                          {"fitted_exponent", r.fitted_exponent},
                          {"epsilon0", r.epsilon0},
                          {"layer_width", r.layer_width},
                          {"fit_residual", r.fit_residual},
                          {"n", r.n},
                          {"pass", r.pass},
                          {"verdict", r.verdict}};
}

nlohmann::json to_json(const BoundsReport& r) {
    return nlohmann::json{
        {"c_lower", r.c_lower}, {"c_upper", r.c_upper}, {"pass", r.pass}, {"verdict", r.verdict}};
}

nlohmann::json to_json(const SmpReport& r) {
    nlohmann::json minima = nlohmann::json::array();
    for (const auto& m : r.minima)
        minima.push_back({{"a", m.compact.a}, {"b", m.compact.b}, {"min", m.min_value}});
    return nlohmann::json{{"minima", minima}, {"pass", r.pass}, {"verdict", r.verdict}};
}

void write_profile_csv(std::ostream& os, const DiscreteField& u, double s) {
    os << "delta,u,ratio\n";
    const double expo = 2.0 * s - 1.0;
    for (int j = 0; j < u.mesh.node_count(); ++j) {
        const double delta = u.mesh.boundary_distance_at(j);
        os << format_g17(delta) << ',' << format_g17(u.values[j]) << ',';
        if (delta > 0.0) os << format_g17(u.values[j] / std::pow(delta, expo));
        os << '\n';
    }
}

} // namespace rfrac
