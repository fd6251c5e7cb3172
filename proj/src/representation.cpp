#include "rfrac/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rfrac/io.hpp"
#include "rfrac/quadrature.hpp"
#include "rfrac/special.hpp"

namespace rfrac {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

BallKernels::BallKernels(int dim, double s, double tol) : dim_(dim), s_(s), tol_(tol) {
    if (dim < 1) throw std::invalid_argument("BallKernels: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("BallKernels: s must lie in (0,1)");
    if (!(tol > 0.0 && tol < 1e-2)) throw std::invalid_argument("BallKernels: bad tolerance");
    green_target_ = gamma_fn(0.5 * dim) /
                    (std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * (dim + 2.0 * s)) * gamma_fn(1.0 + s));
    // The paper leaves k_{N,s} and gamma_{N,s} symbolic; fix them from the
    // mass identities instead of citing values.
    gamma_ = 1.0 / poisson_mass_raw();
    k_ = green_target_ / green_mass_raw();
    log_info("BallKernels N=" + std::to_string(dim) + " s=" + format_g17(s) +
             ": calibrated k=" + format_g17(k_) + " gamma=" + format_g17(gamma_));
}

double BallKernels::inner_integral(double upper) const {
    // int_0^T t^{s-1} (1+t)^{-N/2} dt with t = tau^{1/s}, which removes the
    // t^{s-1} endpoint: (1/s) int_0^{T^s} (1 + tau^{1/s})^{-N/2} dtau.
    if (upper <= 0.0) return 0.0;
    upper = std::min(upper, 1e280); // |y| -> 0 sends T -> inf; keep fp finite
    const double inv_s = 1.0 / s_;
    const double half_n = 0.5 * dim_;
    auto f = [&](double tau) { return std::pow(1.0 + std::pow(tau, inv_s), -half_n); };
    quad::Options opt;
    opt.rel_tol = 0.1 * tol_;
    opt.abs_tol = 0.0;
    opt.max_panels = 60000;
    return quad::adaptive(f, 0.0, std::pow(upper, s_), opt).value / s_;
}

double BallKernels::green(double r) const {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("green: need 0 < |y| < 1");
    const double upper = (1.0 - r * r) / (r * r);
    return k_ * std::pow(r, 2.0 * s_ - dim_) * inner_integral(upper);
}

double BallKernels::poisson(double r) const {
    if (!(r > 1.0)) throw std::domain_error("poisson: need |y| > 1");
    return gamma_ * std::pow(r, -static_cast<double>(dim_)) * std::pow(r * r - 1.0, -s_);
}

double BallKernels::green_mass_raw() const {
    // |S^{N-1}| int_0^1 rho^{2s-1} I((1-rho^2)/rho^2) drho  (k = 1)
    auto inner_of = [&](double rho) { return inner_integral((1.0 - rho * rho) / (rho * rho)); };
    quad::Options opt;
    opt.rel_tol = 0.2 * tol_;
    opt.abs_tol = 0.0;
    opt.max_panels = 60000;
    double radial;
    if (2.0 * s_ < 1.0) {
        // rho^{2s-1} is the singular power; the inner integral stays regular.
        radial = quad::adaptive_power_left(inner_of, 0.0, 1.0, 1.0 - 2.0 * s_, opt).value;
    } else {
        auto f = [&](double rho) { return std::pow(rho, 2.0 * s_ - 1.0) * inner_of(rho); };
        radial = quad::adaptive(f, 0.0, 1.0, opt).value;
    }
    return sphere_area(dim_) * radial;
}

double BallKernels::poisson_mass_raw() const {
    // |S^{N-1}| int_1^inf rho^{-1} (rho^2-1)^{-s} drho with w = 1/rho:
    // int_0^1 w^{2s-1} (1-w)^{-s} (1+w)^{-s} dw (gamma = 1), split at 1/2 so
    // each half carries a single endpoint power.
    quad::Options opt;
    opt.rel_tol = 0.1 * tol_;
    opt.abs_tol = 0.0;
    opt.max_panels = 60000;
    double left;
    if (2.0 * s_ < 1.0) {
        auto phi = [&](double w) { return std::pow(1.0 - w * w, -s_); };
        left = quad::adaptive_power_left(phi, 0.0, 0.5, 1.0 - 2.0 * s_, opt).value;
    } else {
        auto f = [&](double w) {
            return std::pow(w, 2.0 * s_ - 1.0) * std::pow(1.0 - w * w, -s_);
        };
        left = quad::adaptive(f, 0.0, 0.5, opt).value;
    }
    auto phi_right = [&](double w) {
        return std::pow(w, 2.0 * s_ - 1.0) * std::pow(1.0 + w, -s_);
    };
    const double right = quad::adaptive_power_right(phi_right, 0.5, 1.0, s_, opt).value;
    return sphere_area(dim_) * (left + right);
}

double BallKernels::green_mass() const { return k_ * green_mass_raw(); }

double BallKernels::poisson_mass() const { return gamma_ * poisson_mass_raw(); }

namespace {

struct GapAccumulator {
    double green = 0.0;
    double poisson = 0.0;
};

// Radial Green and Poisson integrals along one direction omega from x:
//   green  += int_0^1 G(0,rho) rho^{N-1} g(x + r rho omega) drho
//   poisson += int_1^{Z} P(0,rho) rho^{N-1} u(x + r rho omega) drho
// where Z is where the ray leaves the support of u.
class DirectionalQuadrature {
public:
    DirectionalQuadrature(const BallKernels& kernels, double tol)
        : kernels_(kernels), tol_(tol) {}

    double green_ray(const quad::Fn& density_along, double) const {
        const double s = kernels_.order();
        const int N = kernels_.dim();
        quad::Options opt = options();
        // G rho^{N-1} ~ k rho^{2s-1} I(...): singular at zero only for s < 1/2,
        // in which case the power is split off; green(rho) rho^{N-2s} = k I(...)
        // is the regular factor.
        if (2.0 * s < 1.0) {
            auto phi = [&](double rho) {
                return kernels_.green(rho) * std::pow(rho, N - 2.0 * s) * density_along(rho);
            };
            return quad::adaptive_power_left(phi, 0.0, 1.0, 1.0 - 2.0 * s, opt).value;
        }
        auto f = [&](double rho) {
            return kernels_.green(rho) * std::pow(rho, N - 1) * density_along(rho);
        };
        return quad::adaptive(f, 0.0, 1.0, opt).value;
    }

    double poisson_ray(const quad::Fn& u_along, double z_max) const {
        if (z_max <= 1.0) return 0.0;
        const double s = kernels_.order();
        // P rho^{N-1} = gamma (rho-1)^{-s} (rho+1)^{-s} / rho; the (rho-1)^{-s}
        // power is handled analytically, the rest stays regular at 1.
        auto phi = [&](double rho) {
            return kernels_.gamma_poisson() * std::pow(rho + 1.0, -s) / rho * u_along(rho);
        };
        return quad::adaptive_power_left(phi, 1.0, z_max, s, options()).value;
    }

private:
    quad::Options options() const {
        quad::Options opt;
        opt.rel_tol = 0.25 * tol_;
        opt.abs_tol = 0.25 * tol_;
        opt.max_panels = 60000;
        return opt;
    }

    const BallKernels& kernels_;
    double tol_;
};

} // namespace

MeanValueReport mean_value_gap_with_density(const BallKernels& kernels, const Domain& support,
                                            const PointFn& u, const PointFn& green_density,
                                            const std::vector<double>& x, double r, double tol) {
    const int N = kernels.dim();
    if (support.dim() != N) throw std::invalid_argument("mean_value_gap: dimension mismatch");
    if (static_cast<int>(x.size()) != N)
        throw std::invalid_argument("mean_value_gap: point dimension mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("mean_value_gap: radius must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("mean_value_gap: tol must be positive");
    if (boundary_distance(support, x) <= r)
        throw std::invalid_argument("mean_value_gap: B_r(x) must lie inside the domain");

    const double s = kernels.order();
    DirectionalQuadrature dq(kernels, tol);
    GapAccumulator acc;

    if (N == 1) {
        const Interval& iv = support.as_interval();
        const double x0 = x[0];
        // Two-point sphere: directions +1 and -1.
        for (const double sign : {1.0, -1.0}) {
            auto g_along = [&](double rho) {
                return green_density(std::vector<double>{x0 + sign * r * rho});
            };
            auto u_along = [&](double rho) {
                return u(std::vector<double>{x0 + sign * r * rho});
            };
            const double extent = (sign > 0.0) ? (iv.b - x0) : (x0 - iv.a);
            acc.green += dq.green_ray(g_along, 1.0);
            acc.poisson += dq.poisson_ray(u_along, extent / r);
        }
    } else if (N == 2) {
        const Ball& ball = support.as_ball();
        // Trapezoid rule on the circle (spectrally accurate for smooth data).
        const int m_theta = 64;
        const double w = 2.0 * kPi / m_theta;
        for (int t = 0; t < m_theta; ++t) {
            const double theta = w * t;
            const double ox = std::cos(theta), oy = std::sin(theta);
            auto at = [&](double rho) {
                return std::vector<double>{x[0] + r * rho * ox, x[1] + r * rho * oy};
            };
            auto g_along = [&](double rho) { return green_density(at(rho)); };
            auto u_along = [&](double rho) { return u(at(rho)); };
            // Exit radius of the ray from the support ball.
            const double cx = x[0] - ball.center[0], cy = x[1] - ball.center[1];
            const double beta = cx * ox + cy * oy;
            const double c0 = cx * cx + cy * cy - ball.radius * ball.radius;
            const double z_exit = (-beta + std::sqrt(beta * beta - c0)) / r;
            acc.green += w * dq.green_ray(g_along, 1.0);
            acc.poisson += w * dq.poisson_ray(u_along, z_exit);
        }
    } else {
        throw std::invalid_argument("mean_value_gap: supported dimensions are 1 and 2");
    }

    MeanValueReport report;
    report.center = x;
    report.radius = r;
    report.green_term = std::pow(r, 2.0 * s) * acc.green;
    report.poisson_term = acc.poisson;
    report.gap = u(x) - report.green_term - report.poisson_term;
    return report;
}

MeanValueReport mean_value_gap(const BallKernels& kernels, const Domain& support, const PointFn& u,
                               const PointFn& c_omega, const std::vector<double>& x, double r,
                               double tol) {
    auto density = [&](const std::vector<double>& y) { return c_omega(y) * u(y); };
    return mean_value_gap_with_density(kernels, support, u, density, x, r, tol);
}

MeanValueReport mean_value_gap(const BallKernels& kernels, const Interval& support,
                               const LineFn& u, const LineFn& c_omega, double x, double r,
                               double tol) {
    auto u1 = [&](const std::vector<double>& y) { return u(y[0]); };
    auto c1 = [&](const std::vector<double>& y) { return c_omega(y[0]); };
    return mean_value_gap(kernels, Domain::interval(support.a, support.b), u1, c1,
                          std::vector<double>{x}, r, tol);
}

MeanValueReport mean_value_gap_with_density(const BallKernels& kernels, const Interval& support,
                                            const LineFn& u, const LineFn& green_density, double x,
                                            double r, double tol) {
    auto u1 = [&](const std::vector<double>& y) { return u(y[0]); };
    auto g1 = [&](const std::vector<double>& y) { return green_density(y[0]); };
    return mean_value_gap_with_density(kernels, Domain::interval(support.a, support.b), u1, g1,
                                       std::vector<double>{x}, r, tol);
}

GriddedFunction GriddedFunction::sample(double a, double b, int count, const LineFn& f) {
    if (!(a < b)) throw std::invalid_argument("GriddedFunction: need a < b");
    if (count < 2) throw std::invalid_argument("GriddedFunction: need at least two samples");
    GriddedFunction g;
    g.a = a;
    g.b = b;
    g.values.resize(count);
    const double dx = (b - a) / (count - 1);
    for (int i = 0; i < count; ++i) g.values[i] = f(a + dx * i);
    return g;
}

double GriddedFunction::operator()(double x) const {
    if (x < a || x > b) return 0.0;
    const double t = (x - a) / dx();
    const int i = std::min(static_cast<int>(t), count() - 2);
    const double frac = t - i;
    return (1.0 - frac) * values[i] + frac * values[i + 1];
}

double GriddedFunction::integral_abs(double lo, double hi) const {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    if (hi <= lo) return 0.0;
    const double h = dx();
    auto abs_at = [&](double x) {
        const double t = (x - a) / h;
        const int i = std::min(static_cast<int>(t), count() - 2);
        const double frac = t - i;
        return (1.0 - frac) * std::abs(values[i]) + frac * std::abs(values[i + 1]);
    };
    // Exact trapezoid of the interpolant of |f| with clipped end cells.
    const int i_lo = std::min(static_cast<int>((lo - a) / h), count() - 2);
    const int i_hi = std::min(static_cast<int>((hi - a) / h), count() - 2);
    if (i_lo == i_hi) return 0.5 * (abs_at(lo) + abs_at(hi)) * (hi - lo);
    double sum = 0.5 * (abs_at(lo) + std::abs(values[i_lo + 1])) * (node(i_lo + 1) - lo);
    for (int i = i_lo + 1; i < i_hi; ++i)
        sum += 0.5 * (std::abs(values[i]) + std::abs(values[i + 1])) * h;
    sum += 0.5 * (std::abs(values[i_hi]) + abs_at(hi)) * (hi - node(i_hi));
    return sum;
}

GriddedFunction mollify(const GriddedFunction& f, double eps) {
    const double h = f.dx();
    if (!(eps > 0.0) || eps < h)
        throw std::invalid_argument("mollify: eps must be positive and at least the grid spacing");
    if (eps >= f.b - f.a)
        throw std::invalid_argument("mollify: eps must be smaller than the grid extent");

    // Normalize the bump exp(-1/(1-t^2)) on (-1,1).
    auto bump = [](double t) {
        const double w = 1.0 - t * t;
        return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
    };
    quad::Options nopt;
    nopt.rel_tol = 1e-12;
    nopt.abs_tol = 0.0;
    const double norm = quad::adaptive(bump, -1.0, 1.0, nopt).value;
    auto eta = [&](double t) { return bump(t / eps) / (eps * norm); };

    GriddedFunction out = f;
    for (int i = 0; i < f.count(); ++i) {
        const double xi = f.node(i);
        // Integrate f(x - t) eta(t) piecewise between the kinks of f.
        double sum = 0.0;
        const double lo = -eps, hi = eps;
        // Breakpoints where x - t crosses grid nodes.
        std::vector<double> cuts;
        cuts.push_back(lo);
        for (int j = 0; j < f.count(); ++j) {
            const double t = xi - f.node(j);
            if (t > lo && t < hi) cuts.push_back(t);
        }
        // The support boundary of f also introduces kinks via zero extension.
        for (const double edge : {xi - f.a, xi - f.b}) {
            if (edge > lo && edge < hi) cuts.push_back(edge);
        }
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        auto integrand = [&](double t) { return f(xi - t) * eta(t); };
        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            if (cuts[c + 1] - cuts[c] < 1e-15 * eps) continue;
            sum += quad::gauss(integrand, cuts[c], cuts[c + 1], 8);
        }
        out.values[i] = sum;
    }
    return out;
}

double maximal_function(const GriddedFunction& f, double x, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("maximal_function: radii set must be non-empty");
    double best = 0.0;
    bool first = true;
    for (const double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("maximal_function: radii must be positive");
        if (x - r < f.a || x + r > f.b)
            throw std::invalid_argument("maximal_function: ball exceeds the grid extent");
        const double avg = f.integral_abs(x - r, x + r) / r; // r^{-N}, N = 1
        if (first || avg > best) {
            best = avg;
            first = false;
        }
    }
    return best;
}

void write_kernel_profile_csv(std::ostream& os, const BallKernels& kernels, int samples,
                              double max_abscissa) {
    os << "abscissa,green,poisson\n";
    for (int i = 1; i < samples; ++i) {
        const double r = max_abscissa * i / samples;
        os << format_g17(r) << ',';
        if (r < 1.0) os << format_g17(kernels.green(r));
        os << ',';
        if (r > 1.0) os << format_g17(kernels.poisson(r));
        os << '\n';
    }
}

} // namespace rfrac
