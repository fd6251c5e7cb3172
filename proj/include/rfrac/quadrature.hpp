#pragma once

#include <functional>

#include "rfrac/errors.hpp"

namespace rfrac::quad {

using Fn = std::function<double(double)>;

struct Result {
    double value = 0.0;
    double error = 0.0; // accumulated error estimate
    long evals = 0;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 20000;
    bool throw_on_failure = true;
};

/// One Gauss7/Kronrod15 panel on [a,b].
Result gk15(const Fn& f, double a, double b);

/// Adaptive bisection, worst panel first. Throws ToleranceError when the
/// panel budget runs out before the tolerance is met (unless disabled).
Result adaptive(const Fn& f, double a, double b, const Options& opt = {});

/// Integral of (x-a)^{-p} phi(x) over [a,b] with 0 <= p < 1 and phi regular
/// at a. The substitution x = a + w^{1/(1-p)} turns the integrand into
/// q phi(a + w^q), so the singular power never gets evaluated in fp.
Result adaptive_power_left(const Fn& phi, double a, double b, double p, const Options& opt = {});

/// Mirror image: integral of (b-x)^{-p} phi(x) with phi regular at b.
Result adaptive_power_right(const Fn& phi, double a, double b, double p, const Options& opt = {});

/// Fixed Gauss-Legendre rule on [a,b]; order must be one of 2, 4, 8, 16.
double gauss(const Fn& f, double a, double b, int order);

/// Nodes (nonnegative half, symmetric) and weights of the Gauss-Legendre
/// rules used by the assembly loops. points(order) gives the half-count.
const double* gl_nodes(int order);
const double* gl_weights(int order);
int gl_half_count(int order);

} // namespace rfrac::quad
