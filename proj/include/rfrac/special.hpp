#pragma once

namespace rfrac {

/// Gamma function by a Lanczos approximation (g=7, 9 coefficients),
/// relative error below 1e-12 on the arguments used by the kernels.
double gamma_fn(double x);

/// Surface area of the unit sphere S^{N-1} in R^N.
double sphere_area(int dim);

/// Volume omega_N of the unit ball in R^N.
double ball_volume(int dim);

} // namespace rfrac
