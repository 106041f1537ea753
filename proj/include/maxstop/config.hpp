#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maxstop/embedding.hpp"
#include "maxstop/inequalities.hpp"
#include "maxstop/montecarlo.hpp"

namespace maxstop {

using Json = nlohmann::ordered_json;

enum class Command { solve, payoff, embed, simulate, compare, constants, validate };

Command parse_command(std::string_view text);
std::string_view to_string(Command c) noexcept;

struct RunConfig {
    Command command = Command::solve;
    Json doc;
    /// Directory of the config file; relative paths in the config resolve against it.
    std::filesystem::path base_dir;
};

/// Reads a JSON config. `command` overrides the file's "command" key.
/// Throws ErrorKind::parse on malformed input.
RunConfig load_config(const std::filesystem::path& file, std::optional<Command> command = std::nullopt);
RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

struct Finding {
    std::string field;
    std::string message;
};

/// All schema and invariant violations; empty when the config is usable.
std::vector<Finding> validate_config(const RunConfig& cfg);

DiffusionSpec build_diffusion(const Json& j);
/// `measure` is needed by the embedding_reward and hazard kinds.
RewardSpec build_reward(const Json& j, const TargetMeasure* measure = nullptr);
CostSpec build_cost(const Json& j, const TargetMeasure* measure = nullptr);
StoppingProblem build_problem(const Json& problem, const TargetMeasure* measure = nullptr);
SolverGrid build_grid(const Json& j);
SimulationConfig build_simulation(const Json& j);
/// Applies the recenter policy: a non-centered law is shifted when "recenter" is true and
/// rejected otherwise.
TargetMeasure build_measure(const Json& j);

/// Finite numbers as JSON numbers, non-finite ones as the strings "inf", "-inf", "nan".
Json number(double v);

Json to_json(const InequalityReport& r);
Json to_json(const PairReport& r);

}  // namespace maxstop
