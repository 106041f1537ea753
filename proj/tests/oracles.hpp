#pragma once
// Independent reference computations for the tests.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const Fn& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Classical RK4 with a fixed step; returns the state at s1.
inline double rk4(const std::function<double(double, double)>& f, double s0, double y0, double s1, int n) {
    double h = (s1 - s0) / n;
    double s = s0;
    double y = y0;
    for (int i = 0; i < n; ++i) {
        double k1 = f(s, y);
        double k2 = f(s + h / 2, y + h * k1 / 2);
        double k3 = f(s + h / 2, y + h * k2 / 2);
        double k4 = f(s + h, y + h * k3);
        y += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
        s += h;
    }
    return y;
}

/// Argmax of f over an equally spaced grid, refined twice around the best cell.
inline double grid_argmax(const Fn& f, double lo, double hi, int n = 2001) {
    double best = lo;
    for (int pass = 0; pass < 3; ++pass) {
        double h = (hi - lo) / (n - 1);
        double fb = -INFINITY;
        for (int i = 0; i < n; ++i) {
            double x = lo + i * h;
            double v = f(x);
            if (v > fb) {
                fb = v;
                best = x;
            }
        }
        lo = best - h;
        hi = best + h;
    }
    return best;
}

/// Plain bisection on a sign change.
inline double bisection(const Fn& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Gamma by the Euler reflection-free Stirling series after shifting the argument above 20.
inline double gamma_stirling(double x) {
    double shift = 1.0;
    while (x < 20.0) {
        shift *= x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0 - inv * inv2 * inv2 * inv2 / 1680.0;
    double lg = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI) + series;
    return std::exp(lg) / shift;
}

}  // namespace oracle
