#pragma once

#include <functional>

namespace pdmpstop {

// Adaptive composite Simpson on [a,b] to absolute tolerance tol.
// Panel refinement is capped at 2^14 subintervals.
double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Smallest t in [lo,hi] with f(t) >= target, for nondecreasing f with
// f(lo) <= target <= f(hi). Bisection bracketing refined with secant steps;
// terminates when the bracket is below time_tol.
double invert_nondecreasing(const std::function<double(double)>& f, double lo, double hi, double target,
                            double time_tol);

// Maximum of f over [a,b]: dense scan on grid_points nodes (endpoints
// included), then golden-section refinement around the best node to x-width
// tol. Returns the maximizing x; the value is f(x).
double maximize_scan_golden(const std::function<double(double)>& f, double a, double b, int grid_points,
                            double tol);

}  // namespace pdmpstop
