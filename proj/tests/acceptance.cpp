// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "battery.hpp"
#include "maxstop/embedding.hpp"
#include "maxstop/error.hpp"
#include "maxstop/inequalities.hpp"
#include "maxstop/montecarlo.hpp"
#include "oracles.hpp"

using namespace maxstop;
using battery::Outcome;
using battery::str;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimulationConfig mc(std::int64_t n, std::uint64_t seed) {
    SimulationConfig c;
    c.n_paths = n;
    c.dt = 1e-3;
    c.t_max = 100.0;
    c.seed = seed;
    return c;
}

Outcome linear_boundary() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 10.0;
    Boundary g = solve_maximal_boundary(battery::linear_problem(), grid);
    double secs = seconds_since(t0);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double s = 10.0 * i / 2000.0;
        worst = std::max(worst, std::abs(g(s) - (s - 1.0)));
    }
    out.require(worst < 1e-3, "sup error " + str(worst));
    out.require(secs < 5.0, "runtime " + str(secs) + " s");
    out.detail = "sup|g - (s-1)| = " + str(worst) + ", " + str(secs) + " s" + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome power_case() {
    Outcome out;
    SolverGrid grid;
    grid.s_min = 0.5;
    grid.s_max = 10.0;
    Boundary g = solve_maximal_boundary(battery::power_problem(), grid);
    const double alpha = alpha_root(2.0, 8.0);
    double worst = 0.0;
    for (double s = 1.0; s <= 10.0; s += 0.25) {
        double slope = (g(s + 0.01) - g(s - 0.01)) / 0.02;
        worst = std::max({worst, std::abs(slope - alpha), std::abs(g(s) / s - alpha)});
    }
    out.require(worst < 1e-3, "slope error " + str(worst));
    StoppingProblem bad(DiffusionSpec::reflected_brownian(), RewardSpec::power(2.0), CostSpec::constant(3.0), 1.0, 1.0);
    std::string kind = "none";
    try {
        solve_maximal_boundary(bad, grid);
    } catch (const Error& e) {
        kind = std::string(to_string(e.kind()));
    }
    out.require(kind == "INFINITE_PAYOFF", "c=3 gave " + kind);
    out.detail = "slope error " + str(worst) + " vs alpha " + str(alpha) + ", c=3 -> " + kind +
                 (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome constants() {
    Outcome out;
    double g = gamma_star_1q(1.0);
    double d = doob_constant(2.0);
    out.require(std::abs(g - std::sqrt(2.0)) < 1e-12, "gamma*_{1,1} error " + str(g - std::sqrt(2.0)));
    out.require(d == 4.0, "doob(2) = " + str(d));
    out.detail = "|gamma* - sqrt 2| = " + str(std::abs(g - std::sqrt(2.0))) + ", doob(2) = " + str(d) +
                 (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome dubins_schwarz() {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = mc(100000, 2024);
    auto ds = dubins_schwarz_check(1.0, cfg);
    auto ft = fixed_time_check(1.0, cfg);
    double secs = seconds_since(t0);
    double zl = std::abs(*ds.mc_lhs - 1.0) / *ds.mc_lhs_se;
    double zr = std::abs(*ds.mc_rhs - 1.0) / *ds.mc_rhs_se;
    double gap = (*ft.mc_rhs - *ft.mc_lhs) / *ft.mc_se;
    out.require(zl < 3.0, "mean S_T off by " + str(zl) + " SE");
    out.require(zr < 3.0, "sqrt(mean X_T^2) off by " + str(zr) + " SE");
    out.require(gap > 3.0, "fixed-time gap only " + str(gap) + " SE");
    out.require(secs < 60.0, "runtime " + str(secs) + " s");
    out.detail = "S_T " + str(*ds.mc_lhs) + " (" + str(zl) + " SE), rms X_T " + str(*ds.mc_rhs) + " (" + str(zr) +
                 " SE), fixed-time gap " + str(gap) + " SE, " + str(secs) + " s" + (out.pass ? "" : "; " + out.detail);
    return out;
}

std::vector<double> stopped_values(const SimulationResult& r) {
    std::vector<double> xs;
    xs.reserve(r.paths.size());
    for (const auto& p : r.paths) xs.push_back(p.x_tau);
    return xs;
}

Outcome embedding_law() {
    Outcome out;
    auto ex = TargetMeasure::shifted_exponential();
    StoppingProblem pe(DiffusionSpec::brownian(), RewardSpec::identity(), CostSpec::constant(0.5));
    auto ay = simulate(pe, azema_yor_boundary(ex, 40.0), mc(10000, 11));
    double ks_ex = ks_distance(stopped_values(ay), ex);
    out.require(ks_ex < 0.02, "Azema-Yor KS " + str(ks_ex));

    auto un = TargetMeasure::uniform(-1.0, 1.0);
    auto [r, c] = embedding_pair(un);
    auto report = validate_pair(un, r, c);
    out.require(report.cond_pair_max_violation < 1e-8, "pair violation " + str(report.cond_pair_max_violation));
    StoppingProblem pu(DiffusionSpec::brownian(), r, c);
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 1.0;
    auto g = solve_maximal_boundary(pu, grid);
    auto res = simulate(pu, g, mc(10000, 12));
    double ks_un = ks_distance(stopped_values(res), un);
    out.require(ks_un < 0.02, "uniform KS " + str(ks_un));
    out.detail = "KS exponential " + str(ks_ex) + ", KS uniform " + str(ks_un) + ", pair violation " +
                 str(report.cond_pair_max_violation) + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome payoff_vs_mc() {
    Outcome out;
    auto p = battery::linear_problem();
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 10.0;
    Boundary g = solve_maximal_boundary(p, grid);
    double formula = payoff(p, g, 0.0, 0.0);
    // 0 + (1/2)(0 - (-1))^2
    const double closed = 0.5;
    auto res = simulate(p, g, mc(100000, 6));
    auto est = empirical_payoff(res, p.reward);
    double z = std::abs(est.mean - formula) / est.se;
    out.require(std::abs(formula - closed) < 1e-6, "formula payoff " + str(formula));
    out.require(z < 3.0, "Monte Carlo off by " + str(z) + " SE");
    out.detail = "formula " + str(formula) + ", MC " + str(est.mean) + " +- " + str(est.se) + " (" + str(z) + " SE)" +
                 (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome jump_equation() {
    Outcome out;
    const double s0 = 5.0, delta = 1.0;
    RewardSpec reward([](double) { return 0.0; }, [](double) { return 0.0; }, {{s0, delta}}, {}, s0);
    StoppingProblem p(DiffusionSpec::brownian(), reward, CostSpec::constant(1.0));
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 10.0;
    Boundary g = solve_maximal_boundary(p, grid);
    // Brownian, c = 1: stop at a or collect delta at s0, objective delta (x-a)/(s0-a) - (x-a)(s0-x)
    const double x = s0 - 1e-2;
    double oracle_a = oracle::grid_argmax([&](double a) { return delta * (x - a) / (s0 - a) - (x - a) * (s0 - x); },
                                          -10.0, x - 1e-9, 20001);
    double left = g.left_limit(s0);
    out.require(std::abs(left - oracle_a) < 1e-3, "g(5-) = " + str(left) + " vs oracle " + str(oracle_a));
    out.require(std::abs(left - 4.0) < 1e-3, "g(5-) = " + str(left));
    out.detail = "g(5-) = " + str(left) + ", grid search " + str(oracle_a) + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome dual_route() {
    Outcome out;
    RewardSpec reward([](double x) { return std::min(x, 0.0); }, [](double x) { return x < 0.0 ? 1.0 : 0.0; }, {}, {0.0},
                      0.0);
    StoppingProblem p(DiffusionSpec::brownian(), reward, CostSpec::constant(0.5));
    SolverGrid grid;
    grid.s_min = -10.0;
    grid.s_max = 0.0;
    Boundary direct = solve_maximal_boundary(p, grid);
    Boundary via_h = boundary_from_H(meilijson_H(reward, 0.5, 0.0, grid), 0.5);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        double s = -10.0 + 10.0 * i / 1000.0;
        if (!direct.defined_at(s) || !via_h.defined_at(s)) {
            out.require(false, "s = " + str(s) + " outside a boundary range");
            break;
        }
        worst = std::max(worst, std::abs(direct(s) - via_h(s)));
    }
    out.require(worst < 1e-3, "sup difference " + str(worst));
    out.detail = "sup|g_H - g*| = " + str(worst) + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome property_suites() {
    Outcome out;
    auto add = [&](const std::string& name, const Outcome& o) {
        out.require(o.pass, name + ": " + o.detail);
    };
    add("maximality linear", battery::maximality(battery::linear_problem(), 0.0, 10.0, {2.0, 4.0, 6.0}));
    add("maximality ou", battery::maximality(battery::ou_problem(), 0.0, 6.0, {1.0, 2.0, 3.0}));
    add("maximality power", battery::maximality(battery::power_problem(), 0.5, 10.0, {2.0, 4.0, 6.0}));
    add("constancy", battery::constancy());
    add("zero cost", battery::zero_cost());
    add("tail equivalence", battery::tail_equivalence());
    if (out.pass) out.detail = "maximality (3 problems), constancy, zero-cost avoidance, tail equivalence";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"linear boundary", linear_boundary},
        {"power case", power_case},
        {"constants", constants},
        {"Dubins-Schwarz sharpness", dubins_schwarz},
        {"embedding law", embedding_law},
        {"payoff formula vs Monte Carlo", payoff_vs_mc},
        {"jump equation", jump_equation},
        {"dual-route equivalence", dual_route},
        {"property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("CRITERION %zu %s: %s -- %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
