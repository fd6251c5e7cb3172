#include "rfrac/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rfrac {

namespace {

// Lanczos coefficients for g = 7.
constexpr double kCoef[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

} // namespace

double gamma_fn(double x) {
    constexpr double pi = std::numbers::pi;
    if (std::isnan(x)) return x;
    if (x < 0.5) {
        if (x == std::floor(x)) return std::numeric_limits<double>::quiet_NaN(); // pole
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = kCoef[0];
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double sphere_area(int dim) {
    if (dim < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
    constexpr double pi = std::numbers::pi;
    return 2.0 * std::pow(pi, 0.5 * dim) / gamma_fn(0.5 * dim);
}

double ball_volume(int dim) {
    if (dim < 1) throw std::invalid_argument("ball_volume: dimension must be >= 1");
    constexpr double pi = std::numbers::pi;
    return std::pow(pi, 0.5 * dim) / gamma_fn(0.5 * dim + 1.0);
}

} // namespace rfrac
