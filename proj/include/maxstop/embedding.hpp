#pragma once

#include <string>
#include <utility>
#include <vector>

#include "maxstop/boundary.hpp"

namespace maxstop {

struct Atom {
    double at = 0.0;
    double mass = 0.0;
};

/// Probability law mu = f dx + sum of atoms, with support [lo, hi].
///
/// The density is treated as zero outside the support. `breaks` lists points where the
/// density is not smooth; `gaps` lists open intervals where it vanishes.
class TargetMeasure {
public:
    TargetMeasure(RealFn density, double lo, double hi, std::vector<Atom> atoms = {}, std::vector<double> breaks = {},
                  std::vector<Interval> gaps = {});

    static TargetMeasure uniform(double lo, double hi);
    /// rate * exp(-rate (x - loc)) on [loc, inf).
    static TargetMeasure exponential(double rate, double loc);
    /// Centered exponential law exp(-(x + 1)) on [-1, inf) scaled by 1/rate.
    static TargetMeasure shifted_exponential(double rate = 1.0);
    static TargetMeasure truncated_gaussian(double mean, double sd, double lo, double hi);
    /// Density sum_k coeffs[i][k] (x - breaks[i])^k on [breaks[i], breaks[i+1]).
    static TargetMeasure piecewise_polynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs);
    /// Linear interpolation of (xs, fs) on [xs.front(), xs.back()].
    static TargetMeasure tabulated(std::vector<double> xs, std::vector<double> fs);
    /// Atoms only; no density part.
    static TargetMeasure atomic(std::vector<Atom> atoms);

    double density(double x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<Interval>& gaps() const { return gaps_; }
    bool is_atom(double x) const;
    double atom_mass(double x) const;

    double density_mass() const { return density_mass_; }
    double total_mass() const;
    double mean() const { return mean_; }

    /// mu([x, inf)).
    double tail(double x) const;
    /// mu((x, inf)).
    double tail_open(double x) const;
    /// mu((-inf, x]).
    double cdf(double x) const;
    /// Integral of y over [x, inf).
    double tail_moment(double x) const;

    /// Integral of h f over [a, b] restricted to the support, split at the breaks.
    double integrate_against_density(const RealFn& h, double a, double b) const;

    /// Density scaled so that the total mass is one.
    TargetMeasure normalized() const;
    TargetMeasure shifted(double delta) const;

    /// Mass, positivity and centering findings; empty when the law is admissible.
    std::vector<std::string> check() const;

private:
    RealFn density_;
    double lo_;
    double hi_;
    std::vector<Atom> atoms_;
    std::vector<double> breaks_;
    std::vector<Interval> gaps_;
    double density_mass_ = 0.0;
    double mean_ = 0.0;

    void refresh();
};

/// Psi(x) = E[Z | Z >= x]; equals the mean at and below the lower end of the support.
/// Throws ErrorKind::range when mu([x, inf)) = 0.
double barycentre(const TargetMeasure& mu, double x);
/// Psi(j+) = E[Z | Z > j].
double barycentre_right(const TargetMeasure& mu, double x);
/// sup Psi, the upper end of the support.
double barycentre_sup(const TargetMeasure& mu);

/// Left-continuous generalized inverse inf{x >= lo : Psi(x) >= s} for s in [0, sup Psi).
double inverse_barycentre(const TargetMeasure& mu, double s);

/// c(x) = f(x) / (2 mu([x, inf))) on the support, +inf outside.
/// Throws ErrorKind::domain at an atom.
double hazard_cost(const TargetMeasure& mu, double x);

/// The pair (phi, c) whose maximal boundary is the inverse barycentre: c is the hazard
/// cost on the support and phi' the indicator of the range of Psi, with phi(0) = 0.
std::pair<RewardSpec, CostSpec> embedding_pair(const TargetMeasure& mu);

/// Reward for a constant cost c built from H'(x) = 2c (x - Psi^{-1}(x)) and
/// phi = H - H'^2 / (4c). When sup Psi is infinite the table ends at x_max and phi is
/// extended linearly.
RewardSpec meilijson_reward(const TargetMeasure& mu, double c, double x_max = kInf, int n = 4001);

struct PairReport {
    double cond_pair_max_violation = 0.0;
    double cond_pair_phi_integral = 0.0;
    bool cond_pair_phi_finite = true;
    bool loglogl = true;
    int grid_points = 0;
};

/// Checks phi'(Psi(u)) / (2 c(u)) = mu([u, inf)) / f(u) on a grid of density points and
/// evaluates the integral of phi(Psi) against mu. Violations are reported as
/// max(lhs/rhs, rhs/lhs) - 1.
PairReport validate_pair(const TargetMeasure& mu, const RewardSpec& reward, const CostSpec& cost, int n = 1001);

/// True when the integral of x log x over [1, inf) against mu converges numerically.
bool loglogl_check(const TargetMeasure& mu);

/// The Azema-Yor boundary s -> Psi^{-1}(s) tabulated through the points (Psi(x_i), x_i),
/// with flats at atoms and the diagonal from sup Psi when it is finite.
Boundary azema_yor_boundary(const TargetMeasure& mu, double s_max, int n = 4001);

/// Lower and upper quantile-type window [x_lo, x_hi] carrying all but `mass` of mu.
std::pair<double, double> support_window(const TargetMeasure& mu, double mass = 1e-9);

}  // namespace maxstop
