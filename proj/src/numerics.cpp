#include "maxstop/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "maxstop/error.hpp"

namespace maxstop {

QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureTolerance& tol) {
    if (a == b) return {};
    if (a > b) {
        auto r = integrate(f, b, a, tol);
        return {-r.value, r.error};
    }
    if (std::isfinite(a) && std::isfinite(b) && b - a <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)})) {
        double v = f(0.5 * (a + b)) * (b - a);
        if (!std::isfinite(v)) fail(ErrorKind::divergence, "integrand is not finite on the integration range");
        return {v, 0.0};
    }
    bool bad = false;
    auto guarded = [&](double x) {
        double v = f(x);
        if (!std::isfinite(v)) {
            bad = true;
            return 0.0;
        }
        return v;
    };
    double err = 0.0;
    double l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(guarded, a, b, 15, tol.rel,
                                                                                 &err, &l1);
    if (bad || !std::isfinite(value)) fail(ErrorKind::divergence, "integrand is not finite on the integration range");
    if (err > std::max(tol.abs, tol.rel * l1) * 1e4 && err > 1e-6 * (1.0 + l1))
        fail(ErrorKind::divergence, "quadrature did not converge (error estimate " + std::to_string(err) + ")");
    return {value, err};
}

double quad(const RealFn& f, double a, double b, const QuadratureTolerance& tol) {
    return integrate(f, a, b, tol).value;
}

TailIntegral decade_tail_integral(const RealFn& f, double lo, double upper, const QuadratureTolerance& tol) {
    return decade_tail_sum([&](double a, double b) { return quad(f, a, b, tol); }, lo, upper);
}

TailIntegral decade_tail_sum(const std::function<double(double, double)>& piece, double lo, double upper) {
    TailIntegral out;
    if (std::isfinite(upper)) {
        out.value = piece(lo, upper);
        out.converged = true;
        return out;
    }
    double edge = std::max(10.0, 10.0 * std::abs(lo));
    out.value = piece(lo, edge);
    std::vector<double> increments;
    for (int k = 0; k < 14; ++k) {
        double next = edge * 10.0;
        double inc = piece(edge, next);
        out.value += inc;
        increments.push_back(std::abs(inc));
        edge = next;
    }
    out.last_increment = increments.back();
    bool negligible = out.last_increment <= 1e-12 * std::max(1.0, std::abs(out.value));
    bool geometric = true;
    for (std::size_t i = increments.size() - 3; i < increments.size(); ++i) {
        if (!(increments[i] <= 0.5 * increments[i - 1])) geometric = false;
    }
    out.converged = negligible || geometric;
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Step {
    double y = 0.0;
    double err = 0.0;
    bool ok = false;
};

Step dopri_step(const OdeRhs& f, double s, double y, double h) {
    Step out;
    double k1 = f(s, y);
    double k2 = f(s + c2 * h, y + h * a21 * k1);
    double k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    double k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    double k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    double k6 = f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    double k7 = f(s + h, y5);
    out.y = y5;
    out.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    out.ok = std::isfinite(y5) && std::isfinite(out.err);
    return out;
}

}  // namespace

OdeStop integrate_ode(const OdeRhs& rhs, double s0, double y0, double s1, const OdeOptions& opts,
                      const OdeObserver& observer, const OdeEvent& event) {
    const double dir = s1 >= s0 ? 1.0 : -1.0;
    double s = s0;
    double y = y0;
    double h = std::min(opts.h_init, opts.h_max);
    if (observer) observer(s, y);
    if (event && event(s, y) <= 0.0) return {s, y, true};

    for (int n = 0; n < opts.max_steps; ++n) {
        double remaining = (s1 - s) * dir;
        if (remaining <= 0.0) return {s, y, false};
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        Step st = dopri_step(rhs, s, y, dir * h);
        double scale = opts.atol + opts.rtol * std::max(std::abs(y), std::abs(st.y));
        double ratio = st.ok ? std::abs(st.err) / scale : kInf;
        if (ratio > 1.0) {
            double factor = st.ok ? std::max(0.1, 0.9 * std::pow(ratio, -0.2)) : 0.25;
            h *= factor;
            if (h < opts.h_min) fail(ErrorKind::numeric, "ODE step size underflow at s=" + std::to_string(s) + " y=" + std::to_string(y) + " s1=" + std::to_string(s1)+" ok="+std::to_string(st.ok));
            continue;
        }
        double s_new = last ? s1 : s + dir * h;
        if (event && event(s_new, st.y) <= 0.0) {
            // Locate the crossing by bisection on the step length.
            double lo = 0.0;
            double hi = h;
            double y_hi = st.y;
            for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, std::abs(s)); ++it) {
                double mid = 0.5 * (lo + hi);
                Step trial = dopri_step(rhs, s, y, dir * mid);
                if (trial.ok && event(s + dir * mid, trial.y) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                    if (trial.ok) y_hi = trial.y;
                }
            }
            double s_ev = s + dir * hi;
            if (observer) observer(s_ev, y_hi);
            return {s_ev, y_hi, true};
        }
        s = s_new;
        y = st.y;
        if (observer) observer(s, y);
        if (last) return {s, y, false};
        double grow = ratio > 0.0 ? std::min(5.0, 0.9 * std::pow(ratio, -0.2)) : 5.0;
        h = std::min(h * grow, opts.h_max);
    }
    fail(ErrorKind::numeric, "ODE integration exceeded the step budget");
}

double bisect(const RealFn& f, double lo, double hi, int max_iter, double x_tol) {
    double flo = f(lo);
    for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> maximize(const RealFn& f, double lo, double hi) {
    auto neg = [&](double x) { return -f(x); };
    auto r = boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits / 2);
    return {r.first, -r.second};
}

}  // namespace maxstop
