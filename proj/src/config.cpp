#include "maxstop/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "maxstop/error.hpp"
#include "maxstop/expr.hpp"

namespace maxstop {

Command parse_command(std::string_view text) {
    if (text == "solve") return Command::solve;
    if (text == "payoff") return Command::payoff;
    if (text == "embed") return Command::embed;
    if (text == "simulate") return Command::simulate;
    if (text == "compare") return Command::compare;
    if (text == "constants") return Command::constants;
    if (text == "validate") return Command::validate;
    fail(ErrorKind::parse, "unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::solve: return "solve";
        case Command::payoff: return "payoff";
        case Command::embed: return "embed";
        case Command::simulate: return "simulate";
        case Command::compare: return "compare";
        case Command::constants: return "constants";
        case Command::validate: return "validate";
    }
    return "solve";
}

RunConfig parse_config(std::string_view text, std::optional<Command> command) {
    RunConfig cfg;
    try {
        cfg.doc = Json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::parse, std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.doc.is_object()) fail(ErrorKind::parse, "config must be a JSON object");
    if (command) {
        cfg.command = *command;
        if (!cfg.doc.contains("command")) cfg.doc["command"] = std::string(to_string(*command));
    } else {
        if (!cfg.doc.contains("command") || !cfg.doc["command"].is_string())
            fail(ErrorKind::parse, "config needs a string 'command' or a command on the command line");
        cfg.command = parse_command(cfg.doc["command"].get<std::string>());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file, std::optional<Command> command) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::parse, "cannot read config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = parse_config(ss.str(), command);
    cfg.base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    return cfg;
}

Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

// ---------------------------------------------------------------------------
// Field access

namespace {

double as_double(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(ErrorKind::parse, path + ": expected a number");
}

double get_num(const Json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(ErrorKind::parse, path + "." + key + ": required");
    }
    return as_double(j.at(key), path + "." + key);
}

std::string get_str(const Json& j, const std::string& key, const std::string& path,
                    std::optional<std::string> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(ErrorKind::parse, path + "." + key + ": required");
    }
    if (!j.at(key).is_string()) fail(ErrorKind::parse, path + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

std::vector<double> get_vec(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) return {};
    const Json& a = j.at(key);
    if (!a.is_array()) fail(ErrorKind::parse, path + "." + key + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_double(a[i], path + "." + key + "[" + std::to_string(i) + "]"));
    return out;
}

const Json& section(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || !j.at(key).is_object()) fail(ErrorKind::parse, path + key + ": required section");
    return j.at(key);
}

std::vector<Interval> get_intervals(const Json& j, const std::string& key, const std::string& path) {
    std::vector<Interval> out;
    if (!j.contains(key)) return out;
    const Json& a = j.at(key);
    if (!a.is_array()) fail(ErrorKind::parse, path + "." + key + ": expected an array of [lo, hi] pairs");
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::string p = path + "." + key + "[" + std::to_string(i) + "]";
        if (!a[i].is_array() || a[i].size() != 2) fail(ErrorKind::parse, p + ": expected [lo, hi]");
        out.push_back({as_double(a[i][0], p), as_double(a[i][1], p)});
    }
    return out;
}

/// Linear interpolation of a table; constant outside.
struct Table {
    std::vector<double> x;
    std::vector<double> y;

    double operator()(double at) const {
        if (at <= x.front()) return y.front();
        if (at >= x.back()) return y.back();
        auto it = std::upper_bound(x.begin(), x.end(), at);
        std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        double w = (at - x[i]) / (x[i + 1] - x[i]);
        return y[i] + w * (y[i + 1] - y[i]);
    }
    double slope(double at) const {
        if (at < x.front() || at >= x.back()) return 0.0;
        auto it = std::upper_bound(x.begin(), x.end(), at);
        std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        return (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    }
};

Table get_table(const Json& j, const std::string& xkey, const std::string& ykey, const std::string& path) {
    Table t{get_vec(j, xkey, path), get_vec(j, ykey, path)};
    if (t.x.size() < 2 || t.x.size() != t.y.size())
        fail(ErrorKind::parse, path + ": '" + xkey + "' and '" + ykey + "' need equal lengths of at least 2");
    for (std::size_t i = 1; i < t.x.size(); ++i)
        if (!(t.x[i] > t.x[i - 1])) fail(ErrorKind::domain, path + "." + xkey + ": must be strictly increasing");
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Builders

DiffusionSpec build_diffusion(const Json& j) {
    const std::string path = "problem.diffusion";
    if (!j.is_object()) fail(ErrorKind::parse, path + ": expected an object");
    QuadratureTolerance tol;
    tol.abs = get_num(j, "quad_abs", path, tol.abs);
    tol.rel = get_num(j, "quad_rel", path, tol.rel);
    if (j.contains("preset")) {
        std::string preset = get_str(j, "preset", path);
        double sigma = get_num(j, "sigma", path, 1.0);
        if (!(sigma > 0.0)) fail(ErrorKind::domain, path + ".sigma: must be positive");
        if (preset == "brownian") return DiffusionSpec::brownian(sigma, get_num(j, "x_ref", path, 0.0));
        if (preset == "reflected_brownian") return DiffusionSpec::reflected_brownian(sigma, get_num(j, "x_ref", path, 1.0));
        if (preset == "constant")
            return DiffusionSpec::constant_coefficients(get_num(j, "mu", path), sigma, get_num(j, "x_ref", path, 0.0));
        if (preset == "ou")
            return DiffusionSpec::ornstein_uhlenbeck(get_num(j, "theta", path), get_num(j, "mean", path, 0.0), sigma,
                                                     get_num(j, "x_ref", path, 0.0));
        fail(ErrorKind::parse, path + ".preset: unknown preset '" + preset + "'");
    }
    RealFn drift = compile_expression(get_str(j, "drift", path, "0"));
    RealFn vol = compile_expression(get_str(j, "volatility", path));
    double lo = get_num(j, "lo", path, -kInf);
    double hi = get_num(j, "hi", path, kInf);
    auto lo_kind = parse_boundary_kind(get_str(j, "lo_kind", path, "natural"));
    auto hi_kind = parse_boundary_kind(get_str(j, "hi_kind", path, "natural"));
    double fallback_ref = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                          : std::isfinite(lo)                    ? lo + 1.0
                          : std::isfinite(hi)                    ? hi - 1.0
                                                                 : 0.0;
    return DiffusionSpec(drift, vol, lo, hi, lo_kind, hi_kind, get_num(j, "x_ref", path, fallback_ref), tol);
}

RewardSpec build_reward(const Json& j, const TargetMeasure* measure) {
    const std::string path = "problem.reward";
    if (!j.is_object()) fail(ErrorKind::parse, path + ": expected an object");
    std::string kind = get_str(j, "kind", path);
    if (kind == "embedding_reward" || kind == "meilijson_reward") {
        if (!measure) fail(ErrorKind::parse, path + ".kind: '" + kind + "' needs a measure section");
        if (kind == "embedding_reward") return embedding_pair(*measure).first;
        return meilijson_reward(*measure, get_num(j, "c", path), get_num(j, "x_max", path, kInf),
                                static_cast<int>(get_num(j, "points", path, 4001)));
    }
    RealFn value;
    RealFn deriv;
    std::vector<double> kinks = get_vec(j, "kinks", path);
    if (kind == "identity") {
        value = [](double s) { return s; };
        deriv = [](double) { return 1.0; };
    } else if (kind == "constant") {
        double v = get_num(j, "value", path);
        value = [v](double) { return v; };
        deriv = [](double) { return 0.0; };
    } else if (kind == "affine") {
        double a = get_num(j, "slope", path);
        double b = get_num(j, "intercept", path, 0.0);
        if (a < 0.0) fail(ErrorKind::domain, path + ".slope: reward must be non-decreasing");
        value = [a, b](double s) { return a * s + b; };
        deriv = [a](double) { return a; };
    } else if (kind == "power") {
        double p = get_num(j, "p", path);
        if (!(p > 0.0)) fail(ErrorKind::domain, path + ".p: must be positive");
        RewardSpec base = RewardSpec::power(p);
        value = [base](double s) { return base.value(s); };
        deriv = [base](double s) { return base.derivative(s); };
        kinks.push_back(0.0);
    } else if (kind == "expr") {
        value = compile_expression(get_str(j, "value", path));
        deriv = compile_expression(get_str(j, "derivative", path));
    } else if (kind == "table") {
        Table t = get_table(j, "s", "phi", path);
        value = [t](double s) { return t(s); };
        deriv = [t](double s) { return t.slope(s); };
        kinks.insert(kinks.end(), t.x.begin(), t.x.end());
    } else {
        fail(ErrorKind::parse, path + ".kind: unknown reward kind '" + kind + "'");
    }
    std::vector<RewardJump> jumps;
    if (j.contains("jumps")) {
        const Json& a = j.at("jumps");
        if (!a.is_array()) fail(ErrorKind::parse, path + ".jumps: expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::string p = path + ".jumps[" + std::to_string(i) + "]";
            jumps.push_back({get_num(a[i], "at", p), get_num(a[i], "size", p)});
        }
    }
    std::optional<double> flat;
    if (j.contains("flat_from")) flat = get_num(j, "flat_from", path);
    std::optional<double> r_phi;
    if (j.contains("r_phi")) r_phi = get_num(j, "r_phi", path);
    return RewardSpec(value, deriv, jumps, kinks, flat, r_phi);
}

CostSpec build_cost(const Json& j, const TargetMeasure* measure) {
    const std::string path = "problem.cost";
    if (!j.is_object()) fail(ErrorKind::parse, path + ": expected an object");
    std::string kind = get_str(j, "kind", path);
    if (kind == "hazard") {
        if (!measure) fail(ErrorKind::parse, path + ".kind: 'hazard' needs a measure section");
        return embedding_pair(*measure).second;
    }
    RealFn value;
    std::vector<double> disc = get_vec(j, "discontinuities", path);
    if (kind == "constant") {
        double c = get_num(j, "value", path);
        if (c < 0.0) fail(ErrorKind::domain, path + ".value: cost must be non-negative");
        value = [c](double) { return c; };
    } else if (kind == "affine") {
        double a = get_num(j, "slope", path);
        double b = get_num(j, "intercept", path, 0.0);
        value = [a, b](double x) { return a * x + b; };
    } else if (kind == "power") {
        double coef = get_num(j, "coef", path);
        double e = get_num(j, "exponent", path);
        if (coef < 0.0) fail(ErrorKind::domain, path + ".coef: cost must be non-negative");
        value = [coef, e](double x) { return coef * std::pow(std::abs(x), e); };
    } else if (kind == "expr") {
        value = compile_expression(get_str(j, "value", path));
    } else if (kind == "table") {
        Table t = get_table(j, "x", "c", path);
        value = [t](double x) { return t(x); };
    } else {
        fail(ErrorKind::parse, path + ".kind: unknown cost kind '" + kind + "'");
    }
    Interval fi{-kInf, kInf};
    if (j.contains("finite_interval")) {
        auto v = get_vec(j, "finite_interval", path);
        if (v.size() != 2 || !(v[0] < v[1])) fail(ErrorKind::parse, path + ".finite_interval: expected [lo, hi] with lo < hi");
        fi = {v[0], v[1]};
    }
    return CostSpec(value, disc, get_intervals(j, "zero_intervals", path), fi);
}

StoppingProblem build_problem(const Json& problem, const TargetMeasure* measure) {
    if (!problem.is_object()) fail(ErrorKind::parse, "problem: required section");
    DiffusionSpec d = build_diffusion(section(problem, "diffusion", "problem."));
    RewardSpec r = build_reward(section(problem, "reward", "problem."), measure);
    CostSpec c = build_cost(section(problem, "cost", "problem."), measure);
    double x = 0.0;
    double s = 0.0;
    if (problem.contains("start")) {
        x = get_num(problem.at("start"), "x", "problem.start", 0.0);
        s = get_num(problem.at("start"), "s", "problem.start", std::max(x, 0.0));
    }
    return StoppingProblem(d, r, c, x, s);
}

SolverGrid build_grid(const Json& j) {
    const std::string path = "grid";
    SolverGrid g;
    g.s_min = get_num(j, "s_min", path, g.s_min);
    g.s_max = get_num(j, "s_max", path, g.s_max);
    g.eps_diag = get_num(j, "eps_diag", path, g.eps_diag);
    g.max_step = get_num(j, "max_step", path, g.max_step);
    g.rtol = get_num(j, "rtol", path, g.rtol);
    g.atol = get_num(j, "atol", path, g.atol);
    g.accept_tol = get_num(j, "accept_tol", path, g.accept_tol);
    g.max_sweeps = static_cast<int>(get_num(j, "max_sweeps", path, g.max_sweeps));
    return g;
}

SimulationConfig build_simulation(const Json& j) {
    const std::string path = "simulation";
    SimulationConfig c;
    c.n_paths = static_cast<std::int64_t>(get_num(j, "n_paths", path, static_cast<double>(c.n_paths)));
    c.dt = get_num(j, "dt", path, c.dt);
    c.t_max = get_num(j, "t_max", path, c.t_max);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned())
            fail(ErrorKind::parse, "simulation.seed: expected an integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.scheme = parse_scheme(get_str(j, "scheme", path, std::string(to_string(c.scheme))));
    c.crossing_shift = get_num(j, "crossing_shift", path, c.crossing_shift);
    if (j.contains("bridge_maximum")) {
        if (!j.at("bridge_maximum").is_boolean()) fail(ErrorKind::parse, "simulation.bridge_maximum: expected a boolean");
        c.bridge_maximum = j.at("bridge_maximum").get<bool>();
    }
    c.threads = static_cast<int>(get_num(j, "threads", path, 0.0));
    return c;
}

TargetMeasure build_measure(const Json& j) {
    const std::string path = "measure";
    if (!j.is_object()) fail(ErrorKind::parse, path + ": required section");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        const Json& a = j.at("atoms");
        if (!a.is_array()) fail(ErrorKind::parse, path + ".atoms: expected an array");
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::string p = path + ".atoms[" + std::to_string(i) + "]";
            atoms.push_back({get_num(a[i], "at", p), get_num(a[i], "mass", p)});
        }
    }
    std::optional<TargetMeasure> mu;
    std::string kind = "none";
    if (j.contains("density")) {
        const Json& d = j.at("density");
        const std::string dp = path + ".density";
        kind = get_str(d, "kind", dp);
        const Json params = d.contains("params") ? d.at("params") : Json::object();
        const std::string pp = dp + ".params";
        if (kind == "uniform") {
            mu = TargetMeasure::uniform(get_num(params, "lo", pp), get_num(params, "hi", pp));
        } else if (kind == "exponential") {
            double rate = get_num(params, "rate", pp, 1.0);
            mu = TargetMeasure::exponential(rate, get_num(params, "loc", pp, -1.0 / rate));
        } else if (kind == "shifted_exponential") {
            mu = TargetMeasure::shifted_exponential(get_num(params, "rate", pp, 1.0));
        } else if (kind == "truncated_gaussian") {
            mu = TargetMeasure::truncated_gaussian(get_num(params, "mean", pp, 0.0), get_num(params, "sd", pp, 1.0),
                                                   get_num(params, "lo", pp), get_num(params, "hi", pp));
        } else if (kind == "piecewise_polynomial") {
            std::vector<double> breaks = get_vec(params, "breaks", pp);
            std::vector<std::vector<double>> coeffs;
            if (!params.contains("coeffs") || !params.at("coeffs").is_array())
                fail(ErrorKind::parse, pp + ".coeffs: required array of coefficient arrays");
            for (std::size_t i = 0; i < params.at("coeffs").size(); ++i) {
                std::vector<double> row;
                const Json& r = params.at("coeffs")[i];
                if (!r.is_array()) fail(ErrorKind::parse, pp + ".coeffs[" + std::to_string(i) + "]: expected an array");
                for (const auto& v : r) row.push_back(as_double(v, pp + ".coeffs"));
                coeffs.push_back(row);
            }
            mu = TargetMeasure::piecewise_polynomial(breaks, coeffs);
        } else if (kind == "tabulated") {
            mu = TargetMeasure::tabulated(get_vec(params, "x", pp), get_vec(params, "f", pp));
        } else if (kind == "expr") {
            auto sup = get_vec(j, "support", path);
            if (sup.size() != 2) fail(ErrorKind::parse, path + ".support: required [lo, hi] for an expression density");
            mu = TargetMeasure(compile_expression(get_str(params, "value", pp)), sup[0], sup[1]).normalized();
        } else if (kind != "none") {
            fail(ErrorKind::parse, dp + ".kind: unknown density kind '" + kind + "'");
        }
    }
    if (!mu) {
        if (atoms.empty()) fail(ErrorKind::parse, path + ": needs a density or atoms");
        mu = TargetMeasure::atomic(atoms);
    } else if (!atoms.empty()) {
        double lo = mu->lo();
        double hi = mu->hi();
        for (const auto& a : atoms) {
            lo = std::min(lo, a.at);
            hi = std::max(hi, a.at);
        }
        const TargetMeasure base = *mu;
        mu = TargetMeasure([base](double x) { return base.density(x); }, lo, hi, atoms, base.breaks(), base.gaps())
                 .normalized();
    }
    if (j.contains("support")) {
        auto sup = get_vec(j, "support", path);
        if (sup.size() != 2 || sup[0] > mu->lo() || sup[1] < mu->hi())
            fail(ErrorKind::domain, path + ".support: must contain the support of the density and atoms");
    }
    bool recenter = false;
    if (j.contains("recenter")) {
        if (!j.at("recenter").is_boolean()) fail(ErrorKind::parse, path + ".recenter: expected a boolean");
        recenter = j.at("recenter").get<bool>();
    }
    if (std::abs(mu->mean()) > 1e-6) {
        if (!recenter) {
            std::ostringstream os;
            os << path << ": mean is " << mu->mean() << "; the target must be centered (set recenter to shift it)";
            fail(ErrorKind::domain, os.str());
        }
        mu = mu->shifted(-mu->mean());
    }
    auto findings = mu->check();
    if (!findings.empty()) fail(ErrorKind::domain, path + ": " + findings.front());
    return *mu;
}

Json to_json(const InequalityReport& r) {
    Json j;
    j["name"] = r.name;
    j["constant"] = number(r.constant);
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) params[k] = number(v);
    j["parameters"] = params;
    if (r.mc_lhs) j["mc_lhs"] = number(*r.mc_lhs);
    if (r.mc_rhs) j["mc_rhs"] = number(*r.mc_rhs);
    if (r.mc_se) j["mc_se"] = number(*r.mc_se);
    if (r.mc_lhs_se) j["mc_lhs_se"] = number(*r.mc_lhs_se);
    if (r.mc_rhs_se) j["mc_rhs_se"] = number(*r.mc_rhs_se);
    return j;
}

Json to_json(const PairReport& r) {
    Json j;
    j["cond_pair_max_violation"] = number(r.cond_pair_max_violation);
    j["cond_pair_phi_integral"] = r.cond_pair_phi_finite ? number(r.cond_pair_phi_integral) : Json("divergent");
    j["loglogl"] = r.loglogl;
    j["grid_points"] = r.grid_points;
    return j;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Needs {
    bool problem = false;
    bool grid = false;
    bool simulation = false;
    bool measure = false;
    bool constants = false;
};

/// validate checks a config against the command it declares.
Command target_of(const RunConfig& cfg) {
    const Json& d = cfg.doc;
    if (cfg.command == Command::validate && d.contains("command") && d["command"].is_string()) {
        try {
            return parse_command(d["command"].get<std::string>());
        } catch (const Error&) {
        }
    }
    return cfg.command;
}

Needs needs_for(const RunConfig& cfg) {
    const Json& d = cfg.doc;
    bool csv_boundary = d.contains("boundary") && d["boundary"].is_object() && d["boundary"].value("source", "solve") != "solve";
    switch (target_of(cfg)) {
        case Command::solve: return {true, true, false, false, false};
        case Command::payoff: return {true, !csv_boundary, false, false, false};
        case Command::embed: return {false, false, false, true, false};
        case Command::simulate: return {true, !csv_boundary, true, false, false};
        case Command::compare: return {true, true, true, false, false};
        case Command::constants: return {false, false, false, false, true};
        case Command::validate: return {false, false, false, true, false};
    }
    return {};
}

bool mentions_measure(const Json& problem) {
    if (!problem.is_object()) return false;
    auto kind_of = [&](const char* key) -> std::string {
        if (!problem.contains(key) || !problem[key].is_object()) return "";
        return problem[key].value("kind", "");
    };
    std::string r = kind_of("reward");
    std::string c = kind_of("cost");
    return r == "embedding_reward" || r == "meilijson_reward" || c == "hazard";
}

void positive(std::vector<Finding>& out, const Json& j, const std::string& sec, const std::string& key) {
    if (!j.contains(key)) return;
    try {
        double v = as_double(j.at(key), sec + "." + key);
        if (!(v > 0.0)) out.push_back({sec + "." + key, "must be positive"});
    } catch (const Error& e) {
        out.push_back({sec + "." + key, e.what()});
    }
}

std::string field_of(const std::string& message, const std::string& fallback) {
    auto colon = message.find(':');
    if (colon == std::string::npos) return fallback;
    std::string head = message.substr(0, colon);
    if (head.find(' ') != std::string::npos || head.empty()) return fallback;
    return head;
}

}  // namespace

std::vector<Finding> validate_config(const RunConfig& cfg) {
    std::vector<Finding> out;
    const Json& d = cfg.doc;
    Needs need = needs_for(cfg);
    if (need.problem && mentions_measure(d.value("problem", Json::object()))) need.measure = true;

    auto require = [&](bool needed, const char* key) {
        if (needed && (!d.contains(key) || !d[key].is_object()))
            out.push_back({key, std::string("section required by command '") + std::string(to_string(target_of(cfg))) + "'"});
    };
    require(need.problem, "problem");
    require(need.grid, "grid");
    require(need.simulation, "simulation");
    require(need.measure, "measure");
    require(need.constants, "constants");

    auto attempt = [&](const std::string& sec, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            out.push_back({field_of(e.what(), sec), e.what()});
        }
    };

    std::optional<TargetMeasure> mu;
    if (d.contains("measure") && d["measure"].is_object())
        attempt("measure", [&] { mu = build_measure(d["measure"]); });
    if (d.contains("problem") && d["problem"].is_object() && (!need.measure || mu))
        attempt("problem", [&] { build_problem(d["problem"], mu ? &*mu : nullptr); });

    if (d.contains("grid") && d["grid"].is_object()) {
        const Json& g = d["grid"];
        for (const char* k : {"eps_diag", "rtol", "atol", "accept_tol", "max_sweeps"}) positive(out, g, "grid", k);
        attempt("grid", [&] {
            SolverGrid sg = build_grid(g);
            if (!(sg.s_min < sg.s_max)) out.push_back({"grid.s_max", "must exceed grid.s_min"});
            if (sg.max_step < 0.0) out.push_back({"grid.max_step", "must be non-negative"});
        });
    }
    if (d.contains("simulation") && d["simulation"].is_object()) {
        const Json& s = d["simulation"];
        for (const char* k : {"n_paths", "dt", "t_max"}) positive(out, s, "simulation", k);
        attempt("simulation", [&] {
            SimulationConfig sc = build_simulation(s);
            if (sc.dt > 0.0 && sc.t_max > 0.0 && !(sc.dt < sc.t_max))
                out.push_back({"simulation.dt", "must be below simulation.t_max"});
            if (!(sc.crossing_shift >= 0.0)) out.push_back({"simulation.crossing_shift", "must be non-negative"});
            if (sc.threads < 0) out.push_back({"simulation.threads", "must be non-negative"});
        });
    }
    if (d.contains("constants")) {
        const Json& c = d["constants"];
        if (!c.is_object()) {
            out.push_back({"constants", "expected an object"});
        } else {
            for (const char* k : {"p", "q", "dubins_schwarz", "fixed_time"}) {
                attempt("constants", [&] { get_vec(c, k, "constants"); });
            }
        }
    }
    if (d.contains("boundary")) {
        const Json& b = d["boundary"];
        if (!b.is_object()) {
            out.push_back({"boundary", "expected an object"});
        } else {
            std::string src = b.value("source", "solve");
            if (src != "solve" && src != "csv" && src != "azema_yor" && src != "linear")
                out.push_back({"boundary.source", "unknown source '" + src + "'"});
            if (src == "csv" && !b.contains("path")) out.push_back({"boundary.path", "required for a CSV boundary"});
            if (src == "azema_yor" && !d.contains("measure")) out.push_back({"measure", "required for the Azema-Yor boundary"});
        }
    }
    return out;
}

}  // namespace maxstop
