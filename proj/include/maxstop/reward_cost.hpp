#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxstop/numerics.hpp"

namespace maxstop {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains_open(double x) const { return lo < x && x < hi; }
};

struct RewardJump {
    double at = 0.0;
    double size = 0.0;
};

/// Non-decreasing, right-continuous reward of the running maximum.
///
/// The reward is a C^1 base function plus finitely many upward jumps. `derivative` is
/// the right-continuous derivative of the base. Kink points are where the derivative is
/// discontinuous; jump points are always included among them. When the reward is
/// constant on a half-line [flat_from, inf) the boundary there is the diagonal.
class RewardSpec {
public:
    RewardSpec(RealFn base, RealFn base_derivative, std::vector<RewardJump> jumps = {},
               std::vector<double> kinks = {}, std::optional<double> flat_from = std::nullopt,
               std::optional<double> r_phi = std::nullopt);

    static RewardSpec identity();
    /// s -> max(s, 0)^p, the reward of the power-inequality problems.
    static RewardSpec power(double p);

    double value(double s) const;
    double left_value(double s) const;
    double derivative(double s) const;

    /// Jump points in descending order.
    const std::vector<double>& jump_points() const { return jump_points_; }
    const std::vector<RewardJump>& jumps() const { return jumps_; }
    /// Kinks of the derivative including the jump points, descending.
    const std::vector<double>& kink_points() const { return kink_points_; }
    std::optional<double> flat_from() const { return flat_from_; }
    /// Level above which the reward is C^1 with positive derivative (when it exists).
    std::optional<double> r_phi() const { return r_phi_; }

    /// C^1 minorant equal to the reward on [r_phi - 1, inf) with positive derivative.
    double smooth_companion(double s) const;
    double smooth_companion_derivative(double s) const;

    /// Sampled checks of the structural assumptions on [lo, hi]; returns human-readable findings.
    std::vector<std::string> check(double lo, double hi, int samples = 401) const;

private:
    RealFn base_;
    RealFn base_derivative_;
    std::vector<RewardJump> jumps_;
    std::vector<double> jump_points_;
    std::vector<double> kink_points_;
    std::optional<double> flat_from_;
    std::optional<double> r_phi_;
    double companion_curvature_ = 0.0;
};

/// Non-negative running cost. Outside the finite-cost interval the cost is +inf, inside
/// a declared zero interval it is exactly 0.
class CostSpec {
public:
    explicit CostSpec(RealFn value, std::vector<double> discontinuities = {}, std::vector<Interval> zero_intervals = {},
                      Interval finite_interval = {-kInf, kInf});

    static CostSpec constant(double c);
    /// x -> coef * |x|^exponent, the cost of the power-inequality problems.
    static CostSpec power(double coef, double exponent);

    double operator()(double x) const;

    const std::vector<double>& discontinuities() const { return discontinuities_; }
    const std::vector<Interval>& zero_intervals() const { return zero_intervals_; }
    const Interval& finite_interval() const { return finite_interval_; }

    CostSpec scaled(double factor) const;
    CostSpec plus(const CostSpec& other) const;

    std::vector<std::string> check(double lo, double hi, int samples = 401) const;

private:
    RealFn value_;
    std::vector<double> discontinuities_;
    std::vector<Interval> zero_intervals_;
    Interval finite_interval_;
};

}  // namespace maxstop
