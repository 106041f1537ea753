#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "maxstop/boundary.hpp"
#include "maxstop/embedding.hpp"

namespace maxstop {

enum class Scheme { exact_gaussian, euler_maruyama, reflected_euler };

Scheme parse_scheme(std::string_view text);
std::string_view to_string(Scheme s) noexcept;

/// -zeta(1/2) / sqrt(2 pi), the mean overshoot of a discretely monitored Brownian path.
inline constexpr double kCrossingShift = 0.5825971579390107;

struct SimulationConfig {
    std::int64_t n_paths = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double t_max = 100.0;
    Scheme scheme = Scheme::exact_gaussian;
    /// The rule stops at X <= g(S) + crossing_shift * sigma(X) * sqrt(dt); 0 gives the plain rule.
    double crossing_shift = kCrossingShift;
    /// Draw the running maximum between grid points from the Brownian-bridge law instead of
    /// taking the maximum over grid points only.
    bool bridge_maximum = true;
    /// OpenMP threads; 0 keeps the runtime default.
    int threads = 0;
};

/// Findings for a simulation config (field name and message).
std::vector<std::string> check(const SimulationConfig& cfg);

struct PathRecord {
    double tau = 0.0;
    double x_tau = 0.0;
    double s_tau = 0.0;
    double cost = 0.0;
    bool censored = false;
};

struct Summary {
    double mean = 0.0;
    double se = 0.0;
};

struct SimulationResult {
    SimulationConfig config;
    std::vector<PathRecord> paths;
    Summary tau;
    Summary x_tau;
    Summary s_tau;
    Summary cost;
    double censored_frac = 0.0;
};

/// Mean and standard error of a sample.
Summary summarize(const std::vector<double>& v);

/// Simulates the rule tau = inf{t : X_t <= g(S_t)} on the time grid, censoring at t_max.
/// Paths run in parallel; results do not depend on the thread count.
SimulationResult simulate(const StoppingProblem& p, const Boundary& g, const SimulationConfig& cfg);
/// Single-threaded reference producing the same records.
SimulationResult simulate_serial(const StoppingProblem& p, const Boundary& g, const SimulationConfig& cfg);

/// Mean and standard error of phi(S_tau) - cost. Throws ErrorKind::reliability when
/// 1% or more of the paths are censored.
Summary empirical_payoff(const SimulationResult& res, const RewardSpec& reward);

/// Kolmogorov-Smirnov distance between the empirical law of the samples and mu.
double ks_distance(std::vector<double> samples, const TargetMeasure& mu);

struct CandidateRow {
    std::size_t index = 0;
    Summary payoff;
    /// Paired difference against the designated candidate.
    Summary diff;
    bool beats_designated = false;
};

struct ComparisonTable {
    std::vector<CandidateRow> rows;
    std::size_t designated = 0;
    bool flagged = false;
};

/// Payoff of every candidate with common random numbers. A candidate beats the designated
/// one when its mean paired difference exceeds three standard errors.
ComparisonTable compare_boundaries(const StoppingProblem& p, const std::vector<Boundary>& candidates,
                                   const SimulationConfig& cfg, std::size_t designated = 0);

/// CSV with header `path_id,tau,x_tau,s_tau,cost,censored`.
void write_paths_csv(std::ostream& os, const SimulationResult& res);

}  // namespace maxstop
