#pragma once

namespace byzq {

/// Standard normal CDF, evaluated through erfc. Absolute error below 1e-12.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal quantile (inverse CDF), valid on (0, 1).
double normal_quantile(double p);

/// Tail probability Q(x) = 1 - Phi(x).
double gaussian_tail(double x);

/// Inverse of gaussian_tail on (0, 1): gaussian_tail(gaussian_tail_inv(p)) = p
/// to within 1e-10. Rejects p outside the open interval.
double gaussian_tail_inv(double p);

}  // namespace byzq
