#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "maxstop/problem.hpp"

namespace maxstop {

struct BoundaryJump {
    double s = 0.0;
    double left = 0.0;
    double right = 0.0;
};

/// Stopping boundary s -> g(s) of the rule tau = inf{t : X_t <= g(S_t)}.
///
/// Tabulated on a strictly increasing grid and interpolated linearly, right-continuous
/// at the listed jumps. Below `clip_level` the boundary equals `floor_value` (the lower
/// end of the state space); from `diagonal_from` on it is the diagonal g(s) = s.
class Boundary {
public:
    Boundary() = default;
    Boundary(std::vector<double> s, std::vector<double> g, std::vector<BoundaryJump> jumps = {},
             double clip_level = -kInf, double floor_value = -kInf, std::optional<double> diagonal_from = std::nullopt);

    /// Tabulates a continuous function on n equally spaced points of [lo, hi].
    static Boundary tabulate(const RealFn& g, double lo, double hi, int n);

    bool defined_at(double s) const;
    /// Throws ErrorKind::range outside the defined range.
    double operator()(double s) const;
    double left_limit(double s) const;

    const std::vector<double>& grid() const { return s_; }
    const std::vector<double>& values() const { return g_; }
    const std::vector<BoundaryJump>& jumps() const { return jumps_; }
    double clip_level() const { return clip_level_; }
    double floor_value() const { return floor_value_; }
    std::optional<double> diagonal_from() const { return diagonal_from_; }

    /// Set when the curve reached an entrance or reflecting lower end; the recorded
    /// limit is kept as computed.
    bool lower_end_flag() const { return lower_end_flag_; }
    void set_lower_end_flag(bool f) { lower_end_flag_ = f; }

    /// g + delta clipped to stay on or below the diagonal.
    Boundary shifted(double delta) const;

    /// CSV with header `s,g,side`; jump points emit a `left` and a `right` row.
    /// Clip, floor and diagonal metadata are written as leading `# key=value` lines.
    void write_csv(std::ostream& os) const;
    static Boundary read_csv(std::istream& is);

private:
    std::vector<double> s_;
    std::vector<double> g_;
    std::vector<BoundaryJump> jumps_;
    double clip_level_ = -kInf;
    double floor_value_ = -kInf;
    std::optional<double> diagonal_from_;
    bool lower_end_flag_ = false;

    std::optional<double> jump_left_at(double s) const;
};

struct SolverGrid {
    double s_min = 0.0;
    double s_max = 10.0;
    double eps_diag = 1e-6;
    /// Largest step inside the reporting window; 0 selects (s_max - s_min) / 2000.
    double max_step = 0.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Successive sweep boundaries must agree to this on the window.
    double accept_tol = 1e-4;
    int max_sweeps = 12;
};

struct SolveDiagnostics {
    double terminal_s = 0.0;
    double eps_diag = 0.0;
    int sweeps = 0;
    double last_change = 0.0;
};

/// Right-hand side of the boundary equation
///   g'(s) = phi'(s) sigma^2(g) L'(g) / (2 c(g) (L(s) - L(g))).
/// Throws ErrorKind::numeric when g >= s; returns +inf when c(g) = 0 and 0 when c(g) = +inf.
double ode_rhs(const StoppingProblem& p, double s, double g);

/// Maximal solution of the boundary equation staying below the diagonal, with jumps at
/// the reward's jump points, flats where the reward is flat and gaps over zero-cost
/// intervals. Throws ErrorKind::infinite_payoff when no such solution exists.
Boundary solve_maximal_boundary(const StoppingProblem& p, const SolverGrid& grid, SolveDiagnostics* diag = nullptr);

/// Left value g(s0-) at a reward jump: maximizer over a < s0 of
///   (V_right - phi_left) P_x(exit [a, s0] at s0) - E_x[cost until exit] + phi_left.
/// Throws ErrorKind::no_interior_max when the maximizer escapes to -inf.
double jump_boundary_value(const StoppingProblem& p, double V_right, double s0, double phi_left);

/// The objective maximized by jump_boundary_value, evaluated at start point x.
double jump_objective(const StoppingProblem& p, double V_right, double s0, double phi_left, double a, double x);

/// V(x, s) = phi(s) + int_{x ^ g(s)}^{x} (L(x) - L(u)) c(u) m(u) du.
double payoff(const StoppingProblem& p, const Boundary& g, double x, double s);

/// Integrates the boundary equation forward from (s1, g1). Returns the s at which the
/// curve reaches the diagonal, or nullopt if it stays below it up to s_end.
std::optional<double> forward_hits_diagonal(const StoppingProblem& p, double s1, double g1, double s_end,
                                            const OdeOptions& opts = {});

/// Value function of the constant-cost problem with reward constant on [x0, inf).
struct ValueFunctionH {
    std::vector<double> x;
    std::vector<double> H;
    std::vector<double> Hprime;
    /// (x, H'(x-), H'(x)) at reward jumps.
    std::vector<BoundaryJump> derivative_jumps;
    double x0 = 0.0;

    double value(double at) const;
    double derivative(double at) const;
};

/// Minimal solution of H - (H')^2 / (4c) = phi equal to phi on [x0, inf), obtained by
/// integrating H' = sqrt(4c (H - phi)) backward from x0 down to grid.s_min.
ValueFunctionH meilijson_H(const RewardSpec& reward, double c, double x0, const SolverGrid& grid);

/// g(x) = x - H'(x) / (2c).
Boundary boundary_from_H(const ValueFunctionH& H, double c);

}  // namespace maxstop
