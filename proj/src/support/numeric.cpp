#include "support/numeric.hpp"

#include <cmath>

namespace pdmpstop {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b);
    double m = 0.5 * (a + b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 14);
}

double invert_nondecreasing(const std::function<double(double)>& f, double lo, double hi, double target,
                            double time_tol) {
    double flo = f(lo);
    if (flo >= target) return lo;
    double fhi = f(hi);
    double a = lo, b = hi, fa = flo, fb = fhi;
    while (b - a > time_tol) {
        // secant guess, clamped strictly inside the bracket; fall back to
        // bisection when the slope degenerates
        double mid = 0.5 * (a + b);
        double x = mid;
        if (fb > fa) {
            double sec = a + (target - fa) * (b - a) / (fb - fa);
            if (sec > a + 0.25 * (b - a) && sec < b - 0.25 * (b - a)) x = sec;
        }
        double fx = f(x);
        if (fx >= target) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return b;
}

double maximize_scan_golden(const std::function<double(double)>& f, double a, double b, int grid_points,
                            double tol) {
    if (b <= a) return a;
    if (grid_points < 2) grid_points = 2;
    double best_x = a, best_v = f(a);
    double h = (b - a) / (grid_points - 1);
    int best_i = 0;
    for (int i = 1; i < grid_points; ++i) {
        double x = (i == grid_points - 1) ? b : a + i * h;
        double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    // golden-section around the bracketing neighbours of the best node
    double lo = (best_i == 0) ? a : a + (best_i - 1) * h;
    double hi = (best_i == grid_points - 1) ? b : a + (best_i + 1) * h;
    const double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (lo + hi);
    if (f(xm) > best_v) best_x = xm;
    return best_x;
}

}  // namespace pdmpstop
