#pragma once

#include <functional>
#include <limits>
#include <utility>

namespace maxstop {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureTolerance {
    double abs = 1e-10;
    double rel = 1e-8;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Either limit may be infinite.
/// Throws ErrorKind::divergence when the integrand produces non-finite values or the
/// estimate does not settle.
QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureTolerance& tol = {});

/// Convenience wrapper returning the value only.
double quad(const RealFn& f, double a, double b, const QuadratureTolerance& tol = {});

/// Integral of f over [lo, upper) where the upper tail may diverge. The range is cut into
/// decades and the partial sums are checked for geometric decay of the increments.
struct TailIntegral {
    double value = 0.0;
    bool converged = false;
    double last_increment = 0.0;
};
TailIntegral decade_tail_integral(const RealFn& f, double lo, double upper, const QuadratureTolerance& tol = {});
/// Same rule with a caller-supplied integral over [a, b].
TailIntegral decade_tail_sum(const std::function<double(double, double)>& piece, double lo, double upper);

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-6;
    double h_max = kInf;
    double h_min = 1e-14;
    int max_steps = 2'000'000;
};

using OdeRhs = std::function<double(double, double)>;
/// Event function: integration stops at the first point where the value becomes <= 0.
using OdeEvent = std::function<double(double, double)>;
using OdeObserver = std::function<void(double, double)>;

struct OdeStop {
    double s = 0.0;
    double y = 0.0;
    bool event = false;
};

/// Scalar Dormand-Prince 5(4) with step-size control. Integrates from s0 towards s1
/// (either direction). A non-finite rhs evaluation rejects the step and halves it.
/// The observer sees every accepted point including the start.
OdeStop integrate_ode(const OdeRhs& rhs, double s0, double y0, double s1, const OdeOptions& opts,
                      const OdeObserver& observer, const OdeEvent& event = {});

/// Bisection for a sign change of f on [lo, hi]; returns the midpoint of the final bracket.
double bisect(const RealFn& f, double lo, double hi, int max_iter = 200, double x_tol = 0.0);

/// Location and value of the maximum of f on [lo, hi] (Brent).
std::pair<double, double> maximize(const RealFn& f, double lo, double hi);

}  // namespace maxstop
