#pragma once

#include <functional>
#include <vector>

namespace byzq {

/// Adaptive Simpson integration of a vector-valued integrand over [a, b].
/// Subdivides until the classic Richardson error estimate of every component
/// is below abs_tol (scaled by the local interval share). Throws
/// std::runtime_error when the recursion depth limit is hit before
/// converging.
std::vector<double> integrate_adaptive(const std::function<std::vector<double>(double)>& f,
                                       double a, double b, double abs_tol, int max_depth = 40);

/// Scalar convenience wrapper.
double integrate_adaptive_scalar(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, int max_depth = 40);

}  // namespace byzq
