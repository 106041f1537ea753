#pragma once

#include <map>
#include <optional>
#include <string>

#include "maxstop/montecarlo.hpp"

namespace maxstop {

struct InequalityReport {
    std::string name;
    double constant = 0.0;
    std::map<std::string, double> parameters;
    std::optional<double> mc_lhs;
    std::optional<double> mc_rhs;
    /// Standard error of mc_lhs - mc_rhs.
    std::optional<double> mc_se;
    std::optional<double> mc_lhs_se;
    std::optional<double> mc_rhs_se;
};

/// c threshold p^{p+1} / (2 (p-1)^{p-1}) below which alpha_root has no solution.
double alpha_threshold(double p);

/// Larger root in [(p-1)/p, 1] of alpha^{p-1} - alpha^p = p / (2c), by bisection.
double alpha_root(double p, double c);

/// (p / (p-1))^p.
double doob_constant(double p);

/// Gamma function by the Lanczos approximation (g = 7, 9 terms), with reflection below 1/2.
double lanczos_gamma(double x);
double lanczos_log_gamma(double x);

/// (q (1+q) / 2)^{1/(1+q)} Gamma(2 + 1/q)^{q/(1+q)}.
double gamma_star_1q(double q);

/// Simulates T = inf{t : S_t - B_t = a} and reports mean S_T against sqrt(mean B_T^2).
/// Throws ErrorKind::reliability when 1% or more of the paths are censored.
InequalityReport dubins_schwarz_check(double a, const SimulationConfig& cfg);

/// The same comparison for the deterministic time T (a suboptimal rule).
InequalityReport fixed_time_check(double T, const SimulationConfig& cfg);

}  // namespace maxstop
