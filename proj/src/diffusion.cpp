#include "maxstop/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "maxstop/error.hpp"

namespace maxstop {

BoundaryKind parse_boundary_kind(std::string_view text) {
    if (text == "natural") return BoundaryKind::natural;
    if (text == "exit") return BoundaryKind::exit;
    if (text == "entrance") return BoundaryKind::entrance;
    if (text == "regular_reflecting") return BoundaryKind::regular_reflecting;
    fail(ErrorKind::parse, "unknown boundary kind '" + std::string(text) + "'");
}

std::string_view to_string(BoundaryKind kind) noexcept {
    switch (kind) {
        case BoundaryKind::natural: return "natural";
        case BoundaryKind::exit: return "exit";
        case BoundaryKind::entrance: return "entrance";
        case BoundaryKind::regular_reflecting: return "regular_reflecting";
    }
    return "natural";
}

DiffusionSpec::DiffusionSpec(RealFn drift, RealFn volatility, double lo, double hi, BoundaryKind lo_kind,
                             BoundaryKind hi_kind, double x_ref, QuadratureTolerance tol)
    : drift_(std::move(drift)),
      volatility_(std::move(volatility)),
      lo_(lo),
      hi_(hi),
      lo_kind_(lo_kind),
      hi_kind_(hi_kind),
      x_ref_(x_ref),
      tol_(tol) {
    if (!(lo < hi)) fail(ErrorKind::domain, "state interval must satisfy lo < hi");
    if (!(lo <= x_ref && x_ref < hi) || !std::isfinite(x_ref))
        fail(ErrorKind::domain, "x_ref must lie inside the state interval");
}

DiffusionSpec DiffusionSpec::brownian(double sigma, double x_ref) {
    DiffusionSpec d([](double) { return 0.0; }, [sigma](double) { return sigma; }, -kInf, kInf,
                    BoundaryKind::natural, BoundaryKind::natural, x_ref);
    d.form_ = ScaleForm::driftless;
    return d;
}

DiffusionSpec DiffusionSpec::reflected_brownian(double sigma, double x_ref) {
    DiffusionSpec d([](double) { return 0.0; }, [sigma](double) { return sigma; }, 0.0, kInf,
                    BoundaryKind::regular_reflecting, BoundaryKind::natural, x_ref);
    d.form_ = ScaleForm::driftless;
    return d;
}

DiffusionSpec DiffusionSpec::constant_coefficients(double mu, double sigma, double x_ref) {
    DiffusionSpec d([mu](double) { return mu; }, [sigma](double) { return sigma; }, -kInf, kInf,
                    BoundaryKind::natural, BoundaryKind::natural, x_ref);
    d.form_ = mu == 0.0 ? ScaleForm::driftless : ScaleForm::constant;
    d.drift_ratio_ = 2.0 * mu / (sigma * sigma);
    return d;
}

DiffusionSpec DiffusionSpec::ornstein_uhlenbeck(double theta, double mean, double sigma, double x_ref) {
    return DiffusionSpec([theta, mean](double x) { return theta * (mean - x); }, [sigma](double) { return sigma; },
                         -kInf, kInf, BoundaryKind::natural, BoundaryKind::natural, x_ref);
}

bool DiffusionSpec::in_state_space(double x) const {
    if (std::isnan(x)) return false;
    auto closed = [](BoundaryKind k) {
        return k == BoundaryKind::entrance || k == BoundaryKind::regular_reflecting;
    };
    bool above = x > lo_ || (x == lo_ && std::isfinite(lo_) && closed(lo_kind_));
    bool below = x < hi_ || (x == hi_ && std::isfinite(hi_) && closed(hi_kind_));
    return above && below;
}

DiffusionSpec DiffusionSpec::with_x_ref(double x_ref) const {
    DiffusionSpec d = *this;
    if (!(lo_ <= x_ref && x_ref < hi_)) fail(ErrorKind::domain, "x_ref must lie inside the state interval");
    d.x_ref_ = x_ref;
    return d;
}

namespace {

void require_state(const DiffusionSpec& d, double x) {
    if (!d.in_state_space(x)) {
        std::ostringstream os;
        os << "x=" << x << " is outside the state interval (" << d.lo() << ", " << d.hi() << ")";
        fail(ErrorKind::domain, os.str());
    }
}

double log_scale_density(const DiffusionSpec& d, double x) {
    // log L'(x) = -int_{x_ref}^x 2 drift / sigma^2
    auto integrand = [&d](double u) {
        double s = d.volatility(u);
        return 2.0 * d.drift(u) / (s * s);
    };
    return -quad(integrand, d.x_ref(), x, d.tolerance());
}

}  // namespace

double scale_derivative(const DiffusionSpec& d, double x) {
    require_state(d, x);
    switch (d.scale_form()) {
        case DiffusionSpec::ScaleForm::driftless: return 1.0;
        case DiffusionSpec::ScaleForm::constant: return std::exp(-d.drift_ratio() * (x - d.x_ref()));
        case DiffusionSpec::ScaleForm::general: break;
    }
    return std::exp(log_scale_density(d, x));
}

double scale_value(const DiffusionSpec& d, double x) {
    require_state(d, x);
    switch (d.scale_form()) {
        case DiffusionSpec::ScaleForm::driftless: return x - d.x_ref();
        case DiffusionSpec::ScaleForm::constant: {
            double k = d.drift_ratio();
            return -std::expm1(-k * (x - d.x_ref())) / k;
        }
        case DiffusionSpec::ScaleForm::general: break;
    }
    return quad([&d](double u) { return std::exp(log_scale_density(d, u)); }, d.x_ref(), x, d.tolerance());
}

ScaleValue scale(const DiffusionSpec& d, double x) { return {scale_value(d, x), scale_derivative(d, x)}; }

double speed_density(const DiffusionSpec& d, double x) {
    double s = d.volatility(x);
    return 2.0 / (scale_derivative(d, x) * s * s);
}

double exit_up_probability(const DiffusionSpec& d, double a, double b, double x) {
    if (!(a < b) || x < a || x > b) fail(ErrorKind::argument, "exit_up_probability needs a < b and a <= x <= b");
    if (x == a) return 0.0;
    if (x == b) return 1.0;
    double La = scale_value(d, a);
    double Lb = scale_value(d, b);
    return (scale_value(d, x) - La) / (Lb - La);
}

double expected_cost_to_exit(const DiffusionSpec& d, const CostSpec& c, double a, double b, double x) {
    if (!(a < b) || x < a || x > b) fail(ErrorKind::argument, "expected_cost_to_exit needs a < b and a <= x <= b");
    require_state(d, a);
    require_state(d, b);
    if (x == a || x == b) return 0.0;
    const double La = scale_value(d, a);
    const double Lb = scale_value(d, b);
    const double Lx = scale_value(d, x);
    const double D = Lb - La;

    std::vector<double> cuts{a, x, b};
    for (double p : c.discontinuities())
        if (a < p && p < b) cuts.push_back(p);
    for (const auto& z : c.zero_intervals()) {
        if (a < z.lo && z.lo < b) cuts.push_back(z.lo);
        if (a < z.hi && z.hi < b) cuts.push_back(z.hi);
    }
    for (double p : {c.finite_interval().lo, c.finite_interval().hi})
        if (a < p && p < b) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto green = [&](double y) {
        double cy = c(y);
        if (cy == 0.0) return 0.0;
        double Ly = scale_value(d, y);
        double g = y <= x ? (Ly - La) * (Lb - Lx) / D : (Lx - La) * (Lb - Ly) / D;
        return g * cy * speed_density(d, y);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad(green, cuts[i], cuts[i + 1], d.tolerance());
    return std::max(total, 0.0);
}

}  // namespace maxstop
