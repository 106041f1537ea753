#include "maxstop/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "maxstop/error.hpp"

namespace maxstop {

RewardSpec::RewardSpec(RealFn base, RealFn base_derivative, std::vector<RewardJump> jumps, std::vector<double> kinks,
                       std::optional<double> flat_from, std::optional<double> r_phi)
    : base_(std::move(base)),
      base_derivative_(std::move(base_derivative)),
      jumps_(std::move(jumps)),
      flat_from_(flat_from) {
    for (const auto& j : jumps_) {
        if (!(j.size > 0.0)) fail(ErrorKind::domain, "reward jumps must be strictly positive");
        jump_points_.push_back(j.at);
    }
    std::sort(jump_points_.begin(), jump_points_.end(), std::greater<>());
    kink_points_ = kinks;
    kink_points_.insert(kink_points_.end(), jump_points_.begin(), jump_points_.end());
    if (flat_from_) kink_points_.push_back(*flat_from_);
    std::sort(kink_points_.begin(), kink_points_.end(), std::greater<>());
    kink_points_.erase(std::unique(kink_points_.begin(), kink_points_.end()), kink_points_.end());

    if (r_phi) {
        r_phi_ = r_phi;
    } else if (!flat_from_) {
        r_phi_ = kink_points_.empty() ? -kInf : kink_points_.front() + 1.0;
    }
    if (r_phi_ && std::isfinite(*r_phi_)) {
        // Smallest curvature (doubling search) making the companion a minorant on a
        // window below r_phi - 1.
        const double r = *r_phi_ - 1.0;
        const double v0 = value(r);
        const double k = derivative(r);
        auto below = [&](double curv) {
            for (int i = 1; i <= 400; ++i) {
                double s = r - 0.05 * i;
                double d = s - r;
                if (v0 + k * d - curv * d * d > value(s) + 1e-12) return false;
            }
            return true;
        };
        double curv = 0.0;
        if (!below(curv)) {
            curv = 1e-3;
            while (!below(curv) && curv < 1e12) curv *= 2.0;
        }
        companion_curvature_ = curv;
    }
}

RewardSpec RewardSpec::identity() {
    return RewardSpec([](double s) { return s; }, [](double) { return 1.0; });
}

RewardSpec RewardSpec::power(double p) {
    return RewardSpec([p](double s) { return s > 0.0 ? std::pow(s, p) : 0.0; },
                      [p](double s) { return s > 0.0 ? p * std::pow(s, p - 1.0) : 0.0; }, {}, {0.0});
}

double RewardSpec::value(double s) const {
    double v = flat_from_ && s >= *flat_from_ ? base_(*flat_from_) : base_(s);
    for (const auto& j : jumps_)
        if (s >= j.at) v += j.size;
    return v;
}

double RewardSpec::left_value(double s) const {
    double v = flat_from_ && s > *flat_from_ ? base_(*flat_from_) : base_(s);
    for (const auto& j : jumps_)
        if (s > j.at) v += j.size;
    return v;
}

double RewardSpec::derivative(double s) const {
    if (flat_from_ && s >= *flat_from_) return 0.0;
    return base_derivative_(s);
}

double RewardSpec::smooth_companion(double s) const {
    if (!r_phi_ || !std::isfinite(*r_phi_) || s >= *r_phi_ - 1.0) return value(s);
    const double r = *r_phi_ - 1.0;
    const double d = s - r;
    return value(r) + derivative(r) * d - companion_curvature_ * d * d;
}

double RewardSpec::smooth_companion_derivative(double s) const {
    if (!r_phi_ || !std::isfinite(*r_phi_) || s >= *r_phi_ - 1.0) return derivative(s);
    const double r = *r_phi_ - 1.0;
    return derivative(r) - 2.0 * companion_curvature_ * (s - r);
}

std::vector<std::string> RewardSpec::check(double lo, double hi, int samples) const {
    std::vector<std::string> out;
    auto at = [&](int i) { return lo + (hi - lo) * i / (samples - 1); };
    double prev = value(lo);
    for (int i = 1; i < samples; ++i) {
        double s = at(i);
        double v = value(s);
        if (v < prev - 1e-12) {
            std::ostringstream os;
            os << "reward decreases near s=" << s;
            out.push_back(os.str());
            break;
        }
        prev = v;
    }
    for (int i = 0; i < samples; ++i) {
        double s = at(i);
        if (derivative(s) < 0.0) {
            std::ostringstream os;
            os << "reward derivative negative at s=" << s;
            out.push_back(os.str());
            break;
        }
        if (r_phi_ && s >= *r_phi_ - 1.0 && !(derivative(s) > 0.0)) {
            std::ostringstream os;
            os << "reward derivative not positive above r_phi - 1 at s=" << s;
            out.push_back(os.str());
            break;
        }
        if (smooth_companion(s) > value(s) + 1e-9) {
            std::ostringstream os;
            os << "smooth companion exceeds reward at s=" << s;
            out.push_back(os.str());
            break;
        }
    }
    return out;
}

CostSpec::CostSpec(RealFn value, std::vector<double> discontinuities, std::vector<Interval> zero_intervals,
                   Interval finite_interval)
    : value_(std::move(value)),
      discontinuities_(std::move(discontinuities)),
      zero_intervals_(std::move(zero_intervals)),
      finite_interval_(finite_interval) {
    for (const auto& z : zero_intervals_)
        if (!(z.lo < z.hi)) fail(ErrorKind::domain, "zero-cost interval must have lo < hi");
    std::sort(zero_intervals_.begin(), zero_intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
}

CostSpec CostSpec::constant(double c) {
    if (c < 0.0) fail(ErrorKind::domain, "cost must be non-negative");
    return CostSpec([c](double) { return c; });
}

CostSpec CostSpec::power(double coef, double exponent) {
    if (coef < 0.0) fail(ErrorKind::domain, "cost must be non-negative");
    return CostSpec([coef, exponent](double x) { return coef * std::pow(std::abs(x), exponent); });
}

double CostSpec::operator()(double x) const {
    if (x < finite_interval_.lo || x > finite_interval_.hi) return kInf;
    for (const auto& z : zero_intervals_)
        if (z.contains_open(x)) return 0.0;
    return value_(x);
}

CostSpec CostSpec::scaled(double factor) const {
    CostSpec out = *this;
    out.value_ = [v = value_, factor](double x) { return factor * v(x); };
    return out;
}

CostSpec CostSpec::plus(const CostSpec& other) const {
    auto a = *this;
    auto b = other;
    std::vector<double> disc = discontinuities_;
    disc.insert(disc.end(), other.discontinuities_.begin(), other.discontinuities_.end());
    Interval fi{std::max(finite_interval_.lo, other.finite_interval_.lo),
                std::min(finite_interval_.hi, other.finite_interval_.hi)};
    return CostSpec([a, b](double x) { return a(x) + b(x); }, disc, {}, fi);
}

std::vector<std::string> CostSpec::check(double lo, double hi, int samples) const {
    std::vector<std::string> out;
    for (int i = 0; i < samples; ++i) {
        double x = lo + (hi - lo) * i / (samples - 1);
        double v = (*this)(x);
        bool inside = x >= finite_interval_.lo && x <= finite_interval_.hi;
        if (std::isnan(v) || v < 0.0 || (inside && !std::isfinite(v))) {
            std::ostringstream os;
            os << "cost invalid at x=" << x << " (value " << v << ")";
            out.push_back(os.str());
            break;
        }
    }
    return out;
}

}  // namespace maxstop

namespace maxstop {

StoppingProblem::StoppingProblem(DiffusionSpec d, RewardSpec r, CostSpec c, double x, double s)
    : diffusion(std::move(d)), reward(std::move(r)), cost(std::move(c)), start_x(x), start_s(s) {
    if (!(x <= s)) fail(ErrorKind::domain, "start_x must not exceed start_s");
    if (!diffusion.in_state_space(x) || !diffusion.in_state_space(s))
        fail(ErrorKind::domain, "start point outside the state interval");
}

}  // namespace maxstop
