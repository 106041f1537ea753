#include "maxstop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "maxstop/error.hpp"
#include "maxstop/rng.hpp"

namespace maxstop {

Scheme parse_scheme(std::string_view text) {
    if (text == "exact_gaussian") return Scheme::exact_gaussian;
    if (text == "euler_maruyama") return Scheme::euler_maruyama;
    if (text == "reflected_euler") return Scheme::reflected_euler;
    fail(ErrorKind::parse, "unknown simulation scheme '" + std::string(text) + "'");
}

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::exact_gaussian: return "exact_gaussian";
        case Scheme::euler_maruyama: return "euler_maruyama";
        case Scheme::reflected_euler: return "reflected_euler";
    }
    return "exact_gaussian";
}

std::vector<std::string> check(const SimulationConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.n_paths < 1) out.push_back("n_paths: must be positive");
    if (!(cfg.dt > 0.0)) out.push_back("dt: must be positive");
    if (!(cfg.t_max > 0.0)) out.push_back("t_max: must be positive");
    if (cfg.dt > 0.0 && cfg.t_max > 0.0 && !(cfg.dt < cfg.t_max)) out.push_back("dt: must be below t_max");
    if (!(cfg.crossing_shift >= 0.0)) out.push_back("crossing_shift: must be non-negative");
    if (cfg.threads < 0) out.push_back("threads: must be non-negative");
    return out;
}

Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() < 2) return s;
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    return s;
}

namespace {

struct PathContext {
    const StoppingProblem& p;
    const Boundary& g;
    const SimulationConfig& cfg;
    std::int64_t n_steps;
    double sqrt_dt;
    double reflect_at;
};

std::string path_error(std::int64_t id, double t, double x, double s, const std::string& what) {
    std::ostringstream os;
    os << "path " << id << " at t=" << t << " (x=" << x << ", s=" << s << "): " << what;
    return os.str();
}

double boundary_at(const PathContext& ctx, std::int64_t id, double t, double x, double s) {
    if (!ctx.g.defined_at(s)) fail(ErrorKind::simulation, path_error(id, t, x, s, "boundary undefined at the running maximum"));
    return ctx.g(s);
}

PathRecord run_path(const PathContext& ctx, std::int64_t id) {
    const auto& d = ctx.p.diffusion;
    const double dt = ctx.cfg.dt;
    PathStream rng(ctx.cfg.seed, static_cast<std::uint64_t>(id));
    double x = ctx.p.start_x;
    double s = ctx.p.start_s;
    double cost = 0.0;
    double level = boundary_at(ctx, id, 0.0, x, s);
    if (x <= level) return {0.0, x, s, 0.0, false};
    const double shift = ctx.cfg.crossing_shift * ctx.sqrt_dt;
    for (std::int64_t k = 1; k <= ctx.n_steps; ++k) {
        cost += ctx.p.cost(x) * dt;
        double z = rng.normal();
        double vol = d.volatility(x);
        const double x_prev = x;
        x += d.drift(x) * dt + vol * ctx.sqrt_dt * z;
        if (ctx.cfg.scheme == Scheme::reflected_euler && x < ctx.reflect_at) x = 2.0 * ctx.reflect_at - x;
        double peak = x;
        if (ctx.cfg.bridge_maximum) {
            // Maximum of a Brownian bridge from x_prev to x over one step.
            double u = rng.uniform();
            double gap = x - x_prev;
            peak = 0.5 * (x_prev + x + std::sqrt(gap * gap - 2.0 * vol * vol * dt * std::log(u)));
        }
        double t = static_cast<double>(k) * dt;
        if (peak > s) {
            s = peak;
            level = boundary_at(ctx, id, t, x, s);
        }
        if (x <= level + shift * d.volatility(x)) return {t, x, s, cost, false};
    }
    return {static_cast<double>(ctx.n_steps) * dt, x, s, cost, true};
}

PathContext make_context(const StoppingProblem& p, const Boundary& g, const SimulationConfig& cfg) {
    auto findings = check(cfg);
    if (!findings.empty()) fail(ErrorKind::argument, "invalid simulation config: " + findings.front());
    const auto& d = p.diffusion;
    if (cfg.scheme == Scheme::exact_gaussian && d.scale_form() == DiffusionSpec::ScaleForm::general)
        fail(ErrorKind::argument, "exact_gaussian needs constant drift and volatility");
    double reflect_at = -kInf;
    if (cfg.scheme == Scheme::reflected_euler) {
        if (!std::isfinite(d.lo())) fail(ErrorKind::argument, "reflected_euler needs a finite lower end");
        reflect_at = d.lo();
    }
    auto n_steps = static_cast<std::int64_t>(std::llround(cfg.t_max / cfg.dt));
    return {p, g, cfg, std::max<std::int64_t>(n_steps, 1), std::sqrt(cfg.dt), reflect_at};
}

SimulationResult reduce(const SimulationConfig& cfg, std::vector<PathRecord> paths) {
    SimulationResult res;
    res.config = cfg;
    res.paths = std::move(paths);
    const std::size_t n = res.paths.size();
    std::vector<double> v(n);
    auto field = [&](auto get) {
        for (std::size_t i = 0; i < n; ++i) v[i] = get(res.paths[i]);
        return summarize(v);
    };
    res.tau = field([](const PathRecord& r) { return r.tau; });
    res.x_tau = field([](const PathRecord& r) { return r.x_tau; });
    res.s_tau = field([](const PathRecord& r) { return r.s_tau; });
    res.cost = field([](const PathRecord& r) { return r.cost; });
    std::size_t censored = 0;
    for (const auto& r : res.paths) censored += r.censored ? 1 : 0;
    res.censored_frac = n ? static_cast<double>(censored) / static_cast<double>(n) : 0.0;
    return res;
}

}  // namespace

SimulationResult simulate_serial(const StoppingProblem& p, const Boundary& g, const SimulationConfig& cfg) {
    PathContext ctx = make_context(p, g, cfg);
    std::vector<PathRecord> paths(static_cast<std::size_t>(cfg.n_paths));
    for (std::int64_t i = 0; i < cfg.n_paths; ++i) paths[static_cast<std::size_t>(i)] = run_path(ctx, i);
    return reduce(cfg, std::move(paths));
}

SimulationResult simulate(const StoppingProblem& p, const Boundary& g, const SimulationConfig& cfg) {
    PathContext ctx = make_context(p, g, cfg);
    std::vector<PathRecord> paths(static_cast<std::size_t>(cfg.n_paths));
    std::string first_error;
    ErrorKind first_kind = ErrorKind::simulation;
    bool failed = false;
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads)
    for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
        try {
            paths[static_cast<std::size_t>(i)] = run_path(ctx, i);
        } catch (const Error& e) {
#pragma omp critical(maxstop_sim_error)
            {
                if (!failed) {
                    failed = true;
                    first_error = e.what();
                    first_kind = e.kind();
                }
            }
        }
    }
    if (failed) fail(first_kind, first_error);
    return reduce(cfg, std::move(paths));
}

Summary empirical_payoff(const SimulationResult& res, const RewardSpec& reward) {
    if (res.censored_frac >= 0.01) {
        std::ostringstream os;
        os << "censored fraction " << res.censored_frac << " is not below 1%; raise t_max";
        fail(ErrorKind::reliability, os.str());
    }
    std::vector<double> v(res.paths.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = reward.value(res.paths[i].s_tau) - res.paths[i].cost;
    return summarize(v);
}

double ks_distance(std::vector<double> samples, const TargetMeasure& mu) {
    if (samples.empty()) return 1.0;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    auto count_le = [&](double x) {
        return static_cast<double>(std::upper_bound(samples.begin(), samples.end(), x) - samples.begin());
    };
    auto count_lt = [&](double x) {
        return static_cast<double>(std::lower_bound(samples.begin(), samples.end(), x) - samples.begin());
    };
    double worst = 0.0;
    auto compare_at = [&](double x) {
        double F = mu.cdf(x);
        double F_left = std::clamp(mu.total_mass() - mu.tail(x), 0.0, 1.0);
        worst = std::max(worst, std::abs(count_le(x) / n - F));
        worst = std::max(worst, std::abs(count_lt(x) / n - F_left));
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && samples[i] == samples[i - 1]) continue;
        compare_at(samples[i]);
    }
    for (const auto& a : mu.atoms()) compare_at(a.at);
    return worst;
}

ComparisonTable compare_boundaries(const StoppingProblem& p, const std::vector<Boundary>& candidates,
                                   const SimulationConfig& cfg, std::size_t designated) {
    if (candidates.empty()) fail(ErrorKind::argument, "compare_boundaries needs at least one candidate");
    if (designated >= candidates.size()) fail(ErrorKind::argument, "designated candidate out of range");
    std::vector<std::vector<double>> payoffs;
    for (const auto& g : candidates) {
        SimulationResult res = simulate(p, g, cfg);
        empirical_payoff(res, p.reward);
        std::vector<double> v(res.paths.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = p.reward.value(res.paths[i].s_tau) - res.paths[i].cost;
        payoffs.push_back(std::move(v));
    }
    ComparisonTable table;
    table.designated = designated;
    const auto& base = payoffs[designated];
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        CandidateRow row;
        row.index = k;
        row.payoff = summarize(payoffs[k]);
        std::vector<double> diff(base.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = payoffs[k][i] - base[i];
        row.diff = summarize(diff);
        row.beats_designated = k != designated && row.diff.mean > 3.0 * row.diff.se && row.diff.mean > 1e-12;
        table.flagged = table.flagged || row.beats_designated;
        table.rows.push_back(row);
    }
    return table;
}

void write_paths_csv(std::ostream& os, const SimulationResult& res) {
    os << "path_id,tau,x_tau,s_tau,cost,censored\n";
    char buf[160];
    for (std::size_t i = 0; i < res.paths.size(); ++i) {
        const auto& r = res.paths[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d\n", i, r.tau, r.x_tau, r.s_tau, r.cost,
                      r.censored ? 1 : 0);
        os << buf;
    }
}

}  // namespace maxstop
