#pragma once

#include <string_view>

#include "maxstop/numerics.hpp"
#include "maxstop/reward_cost.hpp"

namespace maxstop {

enum class BoundaryKind { natural, exit, entrance, regular_reflecting };

BoundaryKind parse_boundary_kind(std::string_view text);
std::string_view to_string(BoundaryKind kind) noexcept;

/// Regular one-dimensional diffusion dX = drift(X) dt + volatility(X) dB on (lo, hi).
///
/// Boundary kinds are declared by the user and only consumed by the solver. An
/// entrance or reflecting endpoint is treated as part of the state space. Scale and
/// speed use closed forms for driftless and constant-coefficient diffusions and nested
/// adaptive quadrature otherwise.
class DiffusionSpec {
public:
    DiffusionSpec(RealFn drift, RealFn volatility, double lo, double hi, BoundaryKind lo_kind, BoundaryKind hi_kind,
                  double x_ref, QuadratureTolerance tol = {});

    static DiffusionSpec brownian(double sigma = 1.0, double x_ref = 0.0);
    /// |B| on [0, inf), reflecting at 0.
    static DiffusionSpec reflected_brownian(double sigma = 1.0, double x_ref = 1.0);
    /// Constant drift mu and volatility sigma on the real line.
    static DiffusionSpec constant_coefficients(double mu, double sigma, double x_ref = 0.0);
    /// Mean-reverting dX = theta (mean - X) dt + sigma dB.
    static DiffusionSpec ornstein_uhlenbeck(double theta, double mean, double sigma, double x_ref = 0.0);

    double drift(double x) const { return drift_(x); }
    double volatility(double x) const { return volatility_(x); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    BoundaryKind lo_kind() const { return lo_kind_; }
    BoundaryKind hi_kind() const { return hi_kind_; }
    double x_ref() const { return x_ref_; }
    const QuadratureTolerance& tolerance() const { return tol_; }

    /// True when x lies in the state space (closed at entrance/reflecting finite ends).
    bool in_state_space(double x) const;

    /// Same diffusion with another scale normalization point.
    DiffusionSpec with_x_ref(double x_ref) const;

    enum class ScaleForm { driftless, constant, general };
    ScaleForm scale_form() const { return form_; }
    double drift_ratio() const { return drift_ratio_; }

private:
    RealFn drift_;
    RealFn volatility_;
    double lo_;
    double hi_;
    BoundaryKind lo_kind_;
    BoundaryKind hi_kind_;
    double x_ref_;
    QuadratureTolerance tol_;
    ScaleForm form_ = ScaleForm::general;
    double drift_ratio_ = 0.0;  // 2 mu / sigma^2 in the constant case
};

struct ScaleValue {
    double L = 0.0;
    double Lprime = 0.0;
};

/// Scale function normalized by L(x_ref) = 0 and its derivative.
ScaleValue scale(const DiffusionSpec& d, double x);
double scale_value(const DiffusionSpec& d, double x);
double scale_derivative(const DiffusionSpec& d, double x);

/// Density of the speed measure, m(x) = 2 / (L'(x) sigma^2(x)).
double speed_density(const DiffusionSpec& d, double x);

/// Probability of leaving [a, b] through b when started at x.
double exit_up_probability(const DiffusionSpec& d, double a, double b, double x);

/// E_x of the cost accrued until the exit from [a, b], via the Green function of the
/// interval. Throws ErrorKind::divergence when the cost is not integrable on [a, b].
double expected_cost_to_exit(const DiffusionSpec& d, const CostSpec& c, double a, double b, double x);

}  // namespace maxstop
