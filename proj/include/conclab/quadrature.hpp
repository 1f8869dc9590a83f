#pragma once

#include <functional>

namespace conclab {

/// Adaptive Simpson quadrature with the classical |S2 - S1| <= 15 tol
/// acceptance test and tolerance halving on recursion. Throws CheckFailure
/// if the recursion depth limit is hit before convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_depth = 60);

}  // namespace conclab
