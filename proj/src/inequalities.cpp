#include "maxstop/inequalities.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "maxstop/error.hpp"

namespace maxstop {

double alpha_threshold(double p) {
    if (!(p > 1.0)) fail(ErrorKind::domain, "alpha_root needs p > 1");
    return std::pow(p, p + 1.0) / (2.0 * std::pow(p - 1.0, p - 1.0));
}

double alpha_root(double p, double c) {
    const double threshold = alpha_threshold(p);
    if (!(c >= threshold * (1.0 - 1e-12))) {
        std::ostringstream os;
        os << "no root: c=" << c << " is below the threshold " << threshold << " for p=" << p;
        fail(ErrorKind::domain, os.str());
    }
    const double rhs = p / (2.0 * c);
    auto f = [&](double a) { return std::pow(a, p - 1.0) - std::pow(a, p) - rhs; };
    double lo = (p - 1.0) / p;
    double hi = 1.0;
    // f(lo) >= 0 > f(1) = -rhs; at the threshold f(lo) vanishes up to roundoff.
    if (f(lo) <= 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double doob_constant(double p) {
    if (!(p > 1.0)) fail(ErrorKind::domain, "doob_constant needs p > 1");
    return std::pow(p / (p - 1.0), p);
}

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    return a;
}

}  // namespace

double lanczos_log_gamma(double x) {
    if (!(x > 0.0)) fail(ErrorKind::domain, "log gamma needs x > 0");
    if (x < 0.5) return std::log(M_PI / std::abs(std::sin(M_PI * x))) - lanczos_log_gamma(1.0 - x);
    double z = x - 1.0;
    double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double lanczos_gamma(double x) {
    if (x < 0.5) {
        if (x == std::floor(x)) fail(ErrorKind::domain, "gamma has a pole at non-positive integers");
        return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
    }
    double z = x - 1.0;
    double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

double gamma_star_1q(double q) {
    if (!(q > 0.0)) fail(ErrorKind::domain, "gamma_star_1q needs q > 0");
    double log_value = std::log(q * (1.0 + q) / 2.0) / (1.0 + q) + q / (1.0 + q) * lanczos_log_gamma(2.0 + 1.0 / q);
    return std::exp(log_value);
}

namespace {

InequalityReport compare_max_and_norm(const SimulationResult& res) {
    const std::size_t n = res.paths.size();
    std::vector<double> s(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = res.paths[i].s_tau;
        x2[i] = res.paths[i].x_tau * res.paths[i].x_tau;
    }
    Summary S = summarize(s);
    Summary X2 = summarize(x2);
    const double rhs = std::sqrt(X2.mean);
    // Delta method: lhs - rhs is linearized per path as S_i - X_i^2 / (2 rhs).
    std::vector<double> lin(n);
    for (std::size_t i = 0; i < n; ++i) lin[i] = s[i] - x2[i] / (2.0 * rhs);
    InequalityReport r;
    r.constant = 1.0;
    r.mc_lhs = S.mean;
    r.mc_lhs_se = S.se;
    r.mc_rhs = rhs;
    r.mc_rhs_se = X2.se / (2.0 * rhs);
    r.mc_se = summarize(lin).se;
    return r;
}

}  // namespace

InequalityReport dubins_schwarz_check(double a, const SimulationConfig& cfg) {
    if (!(a > 0.0)) fail(ErrorKind::domain, "dubins_schwarz_check needs a > 0");
    StoppingProblem p(DiffusionSpec::brownian(), RewardSpec::identity(), CostSpec::constant(0.0), 0.0, 0.0);
    Boundary g = Boundary::tabulate([a](double s) { return s - a; }, 0.0, 40.0 * a, 2);
    SimulationConfig c = cfg;
    c.scheme = Scheme::exact_gaussian;
    SimulationResult res = simulate(p, g, c);
    if (res.censored_frac >= 0.01) {
        std::ostringstream os;
        os << "censored fraction " << res.censored_frac << " is not below 1%; raise t_max";
        fail(ErrorKind::reliability, os.str());
    }
    InequalityReport r = compare_max_and_norm(res);
    r.name = "dubins_schwarz";
    r.parameters = {{"a", a}, {"dt", cfg.dt}, {"n_paths", static_cast<double>(cfg.n_paths)}};
    return r;
}

InequalityReport fixed_time_check(double T, const SimulationConfig& cfg) {
    if (!(T > 0.0)) fail(ErrorKind::domain, "fixed_time_check needs T > 0");
    StoppingProblem p(DiffusionSpec::brownian(), RewardSpec::identity(), CostSpec::constant(0.0), 0.0, 0.0);
    // Never stops: every path is censored at T.
    Boundary never({}, {}, {}, kInf, -kInf);
    SimulationConfig c = cfg;
    c.scheme = Scheme::exact_gaussian;
    c.t_max = T;
    if (!(c.dt < T)) c.dt = T / 1000.0;
    SimulationResult res = simulate(p, never, c);
    InequalityReport r = compare_max_and_norm(res);
    r.name = "fixed_time";
    r.parameters = {{"T", T}, {"dt", c.dt}, {"n_paths", static_cast<double>(cfg.n_paths)}};
    return r;
}

}  // namespace maxstop
