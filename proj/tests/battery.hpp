#pragma once
// Property battery shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "maxstop/boundary.hpp"

namespace battery {

using namespace maxstop;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

inline std::string str(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline StoppingProblem linear_problem() {
    return {DiffusionSpec::brownian(), RewardSpec::identity(), CostSpec::constant(0.5), 0.0, 0.0};
}

inline StoppingProblem ou_problem() {
    return {DiffusionSpec::ornstein_uhlenbeck(0.5, 0.0, 1.0), RewardSpec::identity(), CostSpec::constant(0.5), 0.0, 0.0};
}

inline StoppingProblem power_problem() {
    return {DiffusionSpec::reflected_brownian(), RewardSpec::power(2.0), CostSpec::constant(8.0), 1.0, 1.0};
}

/// Curves started eps above g* at interior points reach the diagonal; curves started
/// eps below do not.
inline Outcome maximality(const StoppingProblem& p, double s_min, double s_max, const std::vector<double>& starts) {
    Outcome out;
    SolverGrid grid;
    grid.s_min = s_min;
    grid.s_max = s_max;
    Boundary g = solve_maximal_boundary(p, grid);
    const double horizon = s_min + 3.0 * (s_max - s_min);
    for (double s1 : starts) {
        for (double eps : {1e-2, 1e-3}) {
            auto up = forward_hits_diagonal(p, s1, g(s1) + eps, horizon);
            out.require(up.has_value(), "curve from s=" + str(s1) + " eps=" + str(eps) + " above g* stays below the diagonal");
            auto down = forward_hits_diagonal(p, s1, g(s1) - eps, horizon);
            out.require(!down.has_value(), "curve from s=" + str(s1) + " eps=" + str(eps) + " below g* hits the diagonal");
        }
    }
    return out;
}

/// Central-difference residual of the ODE on the solver grid, away from kinks.
inline Outcome residual(const StoppingProblem& p, double s_min, double s_max, double tol = 1e-5) {
    Outcome out;
    SolverGrid grid;
    grid.s_min = s_min;
    grid.s_max = s_max;
    Boundary g = solve_maximal_boundary(p, grid);
    const auto& s = g.grid();
    const auto& v = g.values();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] < s_min || s[i] > s_max) continue;
        if (s[i + 1] - s[i - 1] > 0.2) continue;
        double num = (v[i + 1] - v[i - 1]) / (s[i + 1] - s[i - 1]);
        worst = std::max(worst, std::abs(num - ode_rhs(p, s[i], v[i])));
    }
    out.require(worst < tol, "residual " + str(worst));
    return out;
}

/// The reward s on [0, a), a on [a, b), s - (b - a) above b: g* is flat exactly on [a, b].
inline Outcome constancy(double a = 3.0, double b = 3.5) {
    Outcome out;
    RewardSpec r([a, b](double s) { return s < a ? s : (s < b ? a : s - (b - a)); },
                 [a, b](double s) { return (s >= a && s < b) ? 0.0 : 1.0; }, {}, {a, b});
    StoppingProblem p(DiffusionSpec::brownian(), r, CostSpec::constant(0.5));
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 8.0;
    Boundary g = solve_maximal_boundary(p, grid);
    const auto& s = g.grid();
    const auto& v = g.values();
    double cell = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) cell = std::max(cell, s[i] - s[i - 1]);
    double flat_lo = kInf, flat_hi = -kInf;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] > grid.s_max) break;
        if (std::abs(v[i] - v[i - 1]) <= 1e-12 * std::max(1.0, std::abs(v[i]))) {
            flat_lo = std::min(flat_lo, s[i - 1]);
            flat_hi = std::max(flat_hi, s[i]);
        }
    }
    out.require(std::abs(flat_lo - a) <= cell, "flat starts at " + str(flat_lo));
    out.require(std::abs(flat_hi - b) <= cell, "flat ends at " + str(flat_hi));
    out.require(std::abs(g(a) - g(b)) < 1e-12, "g not constant across the flat of the reward");
    return out;
}

/// Cost vanishing on (lo, hi): no boundary value lies inside.
inline Outcome zero_cost(double lo = 2.0, double hi = 3.0) {
    Outcome out;
    StoppingProblem p(DiffusionSpec::brownian(), RewardSpec::identity(),
                      CostSpec([](double) { return 0.5; }, {lo, hi}, {{lo, hi}}));
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 10.0;
    Boundary g = solve_maximal_boundary(p, grid);
    int inside = 0;
    for (double v : g.values()) inside += (v > lo && v < hi) ? 1 : 0;
    for (int i = 0; i <= 2000; ++i) {
        double s = 10.0 * i / 2000.0;
        double v = g(s);
        inside += (v > lo + 1e-9 && v < hi - 1e-9) ? 1 : 0;
    }
    out.require(inside == 0, str(inside) + " boundary values inside the zero-cost interval");
    return out;
}

/// Rewards equal up to a constant on [r, inf) give the same boundary there.
inline Outcome tail_equivalence(double r = 5.0) {
    Outcome out;
    RewardSpec other([r](double s) { return s >= r ? s + 1.0 : 0.5 * s + 0.5 * r + 1.0; },
                     [r](double s) { return s >= r ? 1.0 : 0.5; }, {}, {r});
    StoppingProblem a = linear_problem();
    StoppingProblem b(DiffusionSpec::brownian(), other, CostSpec::constant(0.5));
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 10.0;
    Boundary ga = solve_maximal_boundary(a, grid);
    Boundary gb = solve_maximal_boundary(b, grid);
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
        double s = r + (grid.s_max - r) * i / 500.0;
        worst = std::max(worst, std::abs(ga(s) - gb(s)));
    }
    out.require(worst < 1e-6, "tail difference " + str(worst));
    // below r the boundaries differ
    out.require(std::abs(ga(2.0) - gb(2.0)) > 1e-3, "boundaries agree below r as well");
    return out;
}

/// g non-decreasing, g(s) <= s, and g(s) < s where the reward increases.
inline Outcome shape(const StoppingProblem& p, double s_min, double s_max) {
    Outcome out;
    SolverGrid grid;
    grid.s_min = s_min;
    grid.s_max = s_max;
    Boundary g = solve_maximal_boundary(p, grid);
    const auto& s = g.grid();
    const auto& v = g.values();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && v[i] < v[i - 1] - 1e-12) out.require(false, "g decreases at s=" + str(s[i]));
        if (v[i] > s[i]) out.require(false, "g above the diagonal at s=" + str(s[i]));
        if (p.reward.derivative(s[i]) > 0.0 && !(v[i] < s[i])) out.require(false, "g on the diagonal at s=" + str(s[i]));
    }
    return out;
}

}  // namespace battery
