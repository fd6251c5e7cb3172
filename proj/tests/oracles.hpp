#pragma once

// Test-side oracles, independent of the library's quadrature and Gamma paths:
// a self-contained adaptive Simpson integrator, the kernel-constant defining
// integral with analytic oscillatory tails, a direct principal-value
// evaluation of the restricted operator, and closed forms via std::tgamma.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oracle {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11, int depth = 60) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// int_A^inf cos(z) z^{-p} dz by repeated integration by parts:
// C(p) = -sin(A) A^{-p} + p cos(A) A^{-p-1} - p(p+1) C(p+2).
inline double cos_tail(double A, double p, int levels = 8) {
    if (levels == 0) return 0.0;
    return -std::sin(A) * std::pow(A, -p) + p * std::cos(A) * std::pow(A, -p - 1.0) -
           p * (p + 1.0) * cos_tail(A, p + 2.0, levels - 1);
}

// int_A^inf J0(z) z^{-p} dz via (z J1)' = z J0 and J0' = -J1:
// T(p) = -J1(A) A^{-p} + (p+1) [J0(A) A^{-p-1} - (p+1) T(p+2)].
inline double j0_tail(double A, double p, int levels = 8) {
    if (levels == 0) return 0.0;
    return -std::cyl_bessel_j(1, A) * std::pow(A, -p) +
           (p + 1.0) * (std::cyl_bessel_j(0, A) * std::pow(A, -p - 1.0) -
                        (p + 1.0) * j0_tail(A, p + 2.0, levels - 1));
}

/// Quadrature of the defining integral: (int (1-cos zeta_1)/|zeta|^{N+2s})^{-1}.
/// Head on [0,1] with the power substitution z = w^{1/(2-2s)} (the integrand
/// behaves like z^{1-2s}/2 at zero), direct quadrature on [1,A], analytic
/// oscillatory tails beyond.
inline double kernel_constant_by_quadrature(int N, double s) {
    const double p = 1.0 + 2.0 * s;
    const double A = 50.0;
    const double q = 1.0 / (2.0 - 2.0 * s);

    auto one_minus_cos = [](double z) {
        const double h = std::sin(0.5 * z);
        return 2.0 * h * h;
    };
    auto one_minus_j0 = [](double z) {
        if (z < 1e-4) return z * z / 4.0 - z * z * z * z / 64.0;
        return 1.0 - std::cyl_bessel_j(0, z);
    };

    const std::function<double(double)> bump =
        (N == 1) ? std::function<double(double)>(one_minus_cos)
                 : std::function<double(double)>(one_minus_j0);
    const double limit0 = (N == 1) ? 0.5 * q : 0.25 * q; // value of the substituted
                                                         // integrand at w = 0
    auto head_sub = [&](double w) {
        if (w <= 0.0) return limit0;
        const double z = std::pow(w, q);
        return bump(z) * std::pow(z, -p) * q * std::pow(w, q - 1.0);
    };
    auto direct = [&](double z) { return bump(z) * std::pow(z, -p); };

    const double head = integrate(head_sub, 0.0, 1.0, 1e-11) + integrate(direct, 1.0, A, 1e-11);
    if (N == 1) {
        const double tail = std::pow(A, -2.0 * s) / (2.0 * s) - cos_tail(A, p);
        return 1.0 / (2.0 * (head + tail));
    }
    if (N == 2) {
        // The angular integral of cos(rho cos theta) is 2 pi J0(rho).
        const double tail = std::pow(A, -2.0 * s) / (2.0 * s) - j0_tail(A, p);
        return 1.0 / (2.0 * std::numbers::pi * (head + tail));
    }
    throw std::invalid_argument("kernel_constant_by_quadrature: N must be 1 or 2");
}

/// Closed form c_{1,s} via std::tgamma (independent of the library Gamma).
inline double kernel_constant_closed(double s) {
    return s * (1.0 - s) * std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * (1.0 + 2.0 * s)) /
           (std::sqrt(std::numbers::pi) * std::tgamma(2.0 - s));
}

/// Getoor constant: (-Delta)^s (1-|x|^2)^s_+ = B_{N,s} on the unit ball.
inline double getoor_constant(int N, double s) {
    return std::pow(2.0, 2.0 * s) * std::tgamma(s + 1.0) * std::tgamma(0.5 * (N + 2.0 * s)) /
           std::tgamma(0.5 * N);
}

/// Ball-torsion value at the center for the restricted operator,
/// Gamma(N/2) / (2^{2s} Gamma((N+2s)/2) Gamma(1+s)); the Green-mass target.
inline double green_mass_closed(int N, double s) {
    return std::tgamma(0.5 * N) /
           (std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * (N + 2.0 * s)) * std::tgamma(1.0 + s));
}

/// Direct P.V. quadrature of the restricted operator on R with u extended by
/// zero outside (a,b): symmetric-difference excision over (h, W) in geometric
/// panels plus the analytic tail 2 u(x) W^{-2s}/(2s).
inline double restricted_pointwise(const std::function<double(double)>& u, double a, double b,
                                   double s, double x, double tol = 1e-9) {
    const double c = kernel_constant_closed(s);
    const double p = 1.0 + 2.0 * s;
    const double W = std::max(x - a, b - x);
    const double delta = std::min(x - a, b - x);
    const double eps = std::numeric_limits<double>::epsilon();
    const double h_fp = std::pow(80.0 * eps / (2.0 * s * tol), 1.0 / (2.0 * s));
    const double h = std::min(0.5 * delta, std::max(std::pow(tol, 1.0 / (2.0 - 2.0 * s)), h_fp));
    auto uu = [&](double y) { return (y > a && y < b) ? u(y) : 0.0; };
    const double ux = u(x);
    const double fd = std::min(0.25 * delta, 1.2e-4 * (1.0 + std::abs(x)));
    const double upp = (u(x + fd) - 2.0 * ux + u(x - fd)) / (fd * fd);
    auto sym = [&](double z) { return (2.0 * ux - uu(x + z) - uu(x - z)) * std::pow(z, -p); };
    double value = 0.0;
    double lo = h;
    while (lo < W) {
        const double hi = std::min(W, lo * 4.0);
        value += integrate(sym, lo, hi, tol / 64.0, 40);
        lo = hi;
    }
    value += 2.0 * ux * std::pow(W, -2.0 * s) / (2.0 * s);
    const double correction = -upp * std::pow(h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    return c * (value + correction);
}

} // namespace oracle
