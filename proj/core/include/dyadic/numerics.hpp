#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace dyadic {

/// phi_1..phi_4 at a non-positive argument x, phi_k(x) = sum_j x^j/(j+k)!.
/// Series for small |x|, downward recurrence phi_{k+1} = (phi_k - 1/k!)/x
/// otherwise.
std::array<double, 4> phi_functions(double x);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

/// Root of f in the bracket [lo, hi] (f(lo) and f(hi) of opposite sign),
/// bisection to absolute x-tolerance tol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol);

}  // namespace dyadic
