#pragma once

#include "maxstop/diffusion.hpp"
#include "maxstop/reward_cost.hpp"

namespace maxstop {

/// Maximize E[reward(S_tau) - int_0^tau cost(X_t) dt] for the diffusion started at (x, s).
struct StoppingProblem {
    DiffusionSpec diffusion;
    RewardSpec reward;
    CostSpec cost;
    double start_x = 0.0;
    double start_s = 0.0;

    StoppingProblem(DiffusionSpec d, RewardSpec r, CostSpec c, double x = 0.0, double s = 0.0);
};

}  // namespace maxstop
