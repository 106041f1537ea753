#include "maxstop/run.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "maxstop/error.hpp"

namespace maxstop {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& file) {
    std::ofstream os(file, std::ios::binary);
    if (!os) fail(ErrorKind::argument, "cannot write " + file.string());
    return os;
}

void write_json(const fs::path& file, const Json& j) {
    auto os = open_out(file);
    os << j.dump(2) << '\n';
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const Json& sub(const Json& doc, const char* key) {
    static const Json empty = Json::object();
    if (doc.contains(key) && doc[key].is_object()) return doc[key];
    return empty;
}

double num_or(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j[key];
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        if (v == "inf") return kInf;
        if (v == "-inf") return -kInf;
    }
    fail(ErrorKind::parse, std::string(key) + ": expected a number");
}

std::vector<double> nums(const Json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    const Json& v = j[key];
    if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) fail(ErrorKind::parse, std::string(key) + ": expected numbers");
            out.push_back(e.get<double>());
        }
    } else if (v.is_number()) {
        out.push_back(v.get<double>());
    } else {
        fail(ErrorKind::parse, std::string(key) + ": expected a number or an array of numbers");
    }
    return out;
}

/// Pieces shared by the commands, built once from the document.
struct Context {
    const RunConfig& cfg;
    fs::path out_dir;
    std::ostream& out;
    std::optional<TargetMeasure> measure;

    const TargetMeasure* mu() const { return measure ? &*measure : nullptr; }
    const Json& doc() const { return cfg.doc; }
};

void check_sections(const RunConfig& cfg) {
    auto findings = validate_config(cfg);
    for (const auto& f : findings)
        if (f.message.rfind("section required", 0) == 0) fail(ErrorKind::parse, f.field + ": " + f.message);
}

void check_remaining(const RunConfig& cfg) {
    auto findings = validate_config(cfg);
    if (!findings.empty()) fail(ErrorKind::domain, findings.front().field + ": " + findings.front().message);
}

Boundary solve_for(const Context& ctx, const StoppingProblem& p, SolveDiagnostics* diag) {
    const Json& b = sub(ctx.doc(), "boundary");
    SolverGrid grid = build_grid(sub(ctx.doc(), "grid"));
    std::string method = b.value("method", "ode");
    if (method == "ode") return solve_maximal_boundary(p, grid, diag);
    if (method == "meilijson") {
        double c = p.cost(0.0);
        for (double x : {-1.0, 1.0, 3.0})
            if (p.cost(x) != c) fail(ErrorKind::unsupported, "boundary.method: meilijson needs a constant cost");
        double x0 = num_or(b, "x0", grid.s_max);
        return boundary_from_H(meilijson_H(p.reward, c, x0, grid), c);
    }
    fail(ErrorKind::parse, "boundary.method: unknown method '" + method + "'");
}

Boundary resolve_boundary(const Context& ctx, const StoppingProblem& p) {
    const Json& b = sub(ctx.doc(), "boundary");
    const Json& grid = sub(ctx.doc(), "grid");
    std::string source = b.value("source", "solve");
    if (source == "solve") return solve_for(ctx, p, nullptr);
    if (source == "csv") {
        fs::path file = b.at("path").get<std::string>();
        if (file.is_relative()) file = ctx.cfg.base_dir / file;
        std::ifstream in(file);
        if (!in) fail(ErrorKind::parse, "boundary.path: cannot read " + file.string());
        return Boundary::read_csv(in);
    }
    double s_min = num_or(b, "s_min", num_or(grid, "s_min", p.start_s));
    double s_max = num_or(b, "s_max", num_or(grid, "s_max", 10.0));
    if (source == "azema_yor") {
        if (!ctx.measure) fail(ErrorKind::parse, "measure: required for the Azema-Yor boundary");
        return azema_yor_boundary(*ctx.measure, s_max);
    }
    if (source == "linear") {
        double offset = num_or(b, "offset", 1.0);
        return Boundary::tabulate([offset](double s) { return s - offset; }, s_min, s_max, 2);
    }
    fail(ErrorKind::parse, "boundary.source: unknown source '" + source + "'");
}

StoppingProblem problem_of(const Context& ctx) { return build_problem(ctx.doc().at("problem"), ctx.mu()); }

Json summary_json(const Summary& s) {
    Json j;
    j["mean"] = number(s.mean);
    j["se"] = number(s.se);
    return j;
}

// ---------------------------------------------------------------------------

void cmd_solve(const Context& ctx) {
    StoppingProblem p = problem_of(ctx);
    SolveDiagnostics diag;
    Boundary g = solve_for(ctx, p, &diag);
    fs::path file = ctx.out_dir / "boundary.csv";
    {
        auto os = open_out(file);
        g.write_csv(os);
    }
    Json j;
    j["command"] = "solve";
    j["boundary"] = file.filename().string();
    j["points"] = g.grid().size();
    j["s_min"] = number(g.grid().front());
    j["s_max"] = number(g.grid().back());
    j["clip_level"] = number(g.clip_level());
    j["jumps"] = g.jumps().size();
    j["terminal_s"] = number(diag.terminal_s);
    j["eps_diag"] = number(diag.eps_diag);
    j["sweeps"] = diag.sweeps;
    if (g.lower_end_flag()) j["lower_end_flag"] = true;
    ctx.out << j.dump() << '\n';
}

void cmd_payoff(const Context& ctx) {
    StoppingProblem p = problem_of(ctx);
    Boundary g = resolve_boundary(ctx, p);
    const Json& spec = sub(ctx.doc(), "payoff");
    std::vector<std::pair<double, double>> points;
    if (spec.contains("points")) {
        for (const auto& pt : spec["points"]) {
            if (!pt.is_array() || pt.size() != 2) fail(ErrorKind::parse, "payoff.points: expected [x, s] pairs");
            points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
    } else if (spec.contains("x_min")) {
        double lo = num_or(spec, "x_min", 0.0);
        double hi = num_or(spec, "x_max", lo);
        int n = static_cast<int>(num_or(spec, "n", 11));
        if (n < 1) fail(ErrorKind::domain, "payoff.n: must be positive");
        std::optional<double> s;
        if (spec.contains("s")) s = num_or(spec, "s", 0.0);
        for (int i = 0; i < n; ++i) {
            double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
            points.emplace_back(x, s ? std::max(*s, x) : x);
        }
    } else {
        points.emplace_back(p.start_x, p.start_s);
    }
    fs::path file = ctx.out_dir / "payoff.csv";
    auto os = open_out(file);
    os << "x,s,payoff\n";
    Json values = Json::array();
    for (auto [x, s] : points) {
        double v = payoff(p, g, x, s);
        os << fmt(x) << ',' << fmt(s) << ',' << fmt(v) << '\n';
        values.push_back(number(v));
    }
    Json j;
    j["command"] = "payoff";
    j["payoff_csv"] = file.filename().string();
    j["start"] = {{"x", number(points.front().first)}, {"s", number(points.front().second)}};
    j["payoff"] = values.front();
    j["points"] = points.size();
    ctx.out << j.dump() << '\n';
}

void cmd_embed(const Context& ctx) {
    const TargetMeasure& mu = *ctx.measure;
    auto [reward, cost] = embedding_pair(mu);
    PairReport report = validate_pair(mu, reward, cost);
    const Json& grid_in = sub(ctx.doc(), "grid");
    double sup = barycentre_sup(mu);
    double s_min = num_or(grid_in, "s_min", 0.0);
    double s_max = num_or(grid_in, "s_max", std::isfinite(sup) ? sup : 10.0);
    int n = static_cast<int>(num_or(sub(ctx.doc(), "embed"), "points", 1001));
    if (n < 2 || !(s_min < s_max)) fail(ErrorKind::domain, "embed: needs at least 2 points and s_min < s_max");

    fs::path table = ctx.out_dir / "embedding.csv";
    {
        auto os = open_out(table);
        os << "s,psi_inverse,phi,cost_at_psi_inverse\n";
        for (int i = 0; i < n; ++i) {
            double s = i + 1 == n ? s_max : s_min + (s_max - s_min) * i / (n - 1);
            double x = s >= sup ? mu.hi() : inverse_barycentre(mu, s);
            double c = mu.density(x) > 0.0 ? cost(x) : 0.0;
            os << fmt(s) << ',' << fmt(x) << ',' << fmt(reward.value(s)) << ',' << fmt(c) << '\n';
        }
    }
    Json pair;
    pair["command"] = "solve";
    pair["problem"] = {{"diffusion", {{"preset", "brownian"}}},
                       {"reward", {{"kind", "embedding_reward"}}},
                       {"cost", {{"kind", "hazard"}}},
                       {"start", {{"x", 0.0}, {"s", 0.0}}}};
    pair["measure"] = ctx.doc().at("measure");
    Json grid_out = grid_in;
    grid_out["s_min"] = number(s_min);
    grid_out["s_max"] = number(s_max);
    pair["grid"] = grid_out;
    write_json(ctx.out_dir / "pair.json", pair);
    Json v = to_json(report);
    write_json(ctx.out_dir / "validation.json", v);

    Json j;
    j["command"] = "embed";
    j["embedding_csv"] = table.filename().string();
    j["pair"] = "pair.json";
    j["validation"] = v;
    j["mean"] = number(mu.mean());
    j["barycentre_sup"] = number(sup);
    ctx.out << j.dump() << '\n';
}

void cmd_simulate(const Context& ctx) {
    StoppingProblem p = problem_of(ctx);
    Boundary g = resolve_boundary(ctx, p);
    const Json& sim = sub(ctx.doc(), "simulation");
    SimulationConfig sc = build_simulation(sim);
    SimulationResult res = simulate(p, g, sc);
    if (sim.value("dump_paths", false)) {
        auto os = open_out(ctx.out_dir / "paths.csv");
        write_paths_csv(os, res);
    }
    Json j;
    j["command"] = "simulate";
    j["n_paths"] = sc.n_paths;
    j["seed"] = sc.seed;
    j["dt"] = number(sc.dt);
    j["scheme"] = std::string(to_string(sc.scheme));
    j["censored_frac"] = number(res.censored_frac);
    j["tau"] = summary_json(res.tau);
    j["x_tau"] = summary_json(res.x_tau);
    j["s_tau"] = summary_json(res.s_tau);
    j["cost"] = summary_json(res.cost);
    if (ctx.measure) {
        std::vector<double> xs;
        xs.reserve(res.paths.size());
        for (const auto& r : res.paths) xs.push_back(r.x_tau);
        j["ks"] = number(ks_distance(std::move(xs), *ctx.measure));
    } else {
        j["ks"] = nullptr;
    }
    Summary pay = empirical_payoff(res, p.reward);
    j["payoff_mean"] = number(pay.mean);
    j["payoff_se"] = number(pay.se);
    write_json(ctx.out_dir / "summary.json", j);
    ctx.out << j.dump() << '\n';
}

void cmd_compare(const Context& ctx) {
    StoppingProblem p = problem_of(ctx);
    Boundary base = resolve_boundary(ctx, p);
    const Json& spec = sub(ctx.doc(), "compare");
    std::vector<double> shifts = nums(spec, "shifts");
    if (shifts.empty()) shifts = {0.0, -0.2, 0.2};
    std::vector<Boundary> candidates;
    for (double d : shifts) candidates.push_back(d == 0.0 ? base : base.shifted(d));
    auto designated = static_cast<std::size_t>(num_or(spec, "designated", 0));
    if (designated >= candidates.size()) fail(ErrorKind::domain, "compare.designated: out of range");
    SimulationConfig sc = build_simulation(sub(ctx.doc(), "simulation"));
    ComparisonTable table = compare_boundaries(p, candidates, sc, designated);
    {
        auto os = open_out(ctx.out_dir / "compare.csv");
        os << "index,shift,payoff,payoff_se,diff,diff_se,beats_designated\n";
        for (const auto& r : table.rows)
            os << r.index << ',' << fmt(shifts[r.index]) << ',' << fmt(r.payoff.mean) << ',' << fmt(r.payoff.se) << ','
               << fmt(r.diff.mean) << ',' << fmt(r.diff.se) << ',' << (r.beats_designated ? 1 : 0) << '\n';
    }
    Json rows = Json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"index", r.index},
                        {"shift", number(shifts[r.index])},
                        {"payoff", summary_json(r.payoff)},
                        {"diff", summary_json(r.diff)},
                        {"beats_designated", r.beats_designated}});
    Json j;
    j["command"] = "compare";
    j["designated"] = designated;
    j["flagged"] = table.flagged;
    j["rows"] = rows;
    ctx.out << j.dump() << '\n';
}

void cmd_constants(const Context& ctx) {
    const Json& c = ctx.doc().at("constants");
    std::vector<Json> lines;
    for (double q : nums(c, "q")) {
        InequalityReport r;
        r.name = "gamma_star_1q";
        r.constant = gamma_star_1q(q);
        r.parameters = {{"q", q}};
        lines.push_back(to_json(r));
    }
    std::vector<double> ps = nums(c, "p");
    for (double p : ps) {
        InequalityReport r;
        r.name = "doob";
        r.constant = doob_constant(p);
        r.parameters = {{"p", p}};
        lines.push_back(to_json(r));
    }
    if (c.contains("alpha")) {
        for (const auto& pc : c["alpha"]) {
            double p = num_or(pc, "p", 2.0);
            double cc = num_or(pc, "c", kInf);
            InequalityReport r;
            r.name = "alpha_root";
            r.constant = alpha_root(p, cc);
            r.parameters = {{"c", cc}, {"p", p}, {"threshold", alpha_threshold(p)}};
            lines.push_back(to_json(r));
        }
    }
    SimulationConfig sc = build_simulation(sub(ctx.doc(), "simulation"));
    for (double a : nums(c, "dubins_schwarz")) lines.push_back(to_json(dubins_schwarz_check(a, sc)));
    for (double T : nums(c, "fixed_time")) lines.push_back(to_json(fixed_time_check(T, sc)));
    auto os = open_out(ctx.out_dir / "constants.jsonl");
    for (const auto& l : lines) {
        os << l.dump() << '\n';
        ctx.out << l.dump() << '\n';
    }
}

Json findings_json(const std::vector<Finding>& findings) {
    Json arr = Json::array();
    for (const auto& f : findings) arr.push_back({{"field", f.field}, {"message", f.message}});
    return arr;
}

}  // namespace

fs::path output_dir(const RunConfig& cfg, const std::optional<fs::path>& override_dir) {
    if (override_dir) return *override_dir;
    const Json& o = sub(cfg.doc, "output");
    if (o.contains("dir") && o["dir"].is_string()) return fs::path(o["dir"].get<std::string>());
    return ".";
}

void run(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::argument, "cannot create output directory " + out_dir.string() + ": " + ec.message());

    if (cfg.command == Command::validate) {
        auto findings = validate_config(cfg);
        Json j;
        j["command"] = "validate";
        j["valid"] = findings.empty();
        j["findings"] = findings_json(findings);
        std::optional<TargetMeasure> mu;
        if (findings.empty() && cfg.doc.contains("measure")) {
            mu = build_measure(cfg.doc["measure"]);
            const Json& prob = sub(cfg.doc, "problem");
            if (prob.contains("reward") && prob.contains("cost")) {
                j["pair"] = to_json(validate_pair(*mu, build_reward(prob["reward"], &*mu), build_cost(prob["cost"], &*mu)));
            } else {
                auto [r, c] = embedding_pair(*mu);
                j["pair"] = to_json(validate_pair(*mu, r, c));
            }
        }
        write_json(out_dir / "validation.json", j);
        out << j.dump() << '\n';
        if (!findings.empty()) fail(ErrorKind::domain, findings.front().field + ": " + findings.front().message);
        return;
    }

    check_sections(cfg);
    Context ctx{cfg, out_dir, out, std::nullopt};
    if (cfg.doc.contains("measure")) ctx.measure = build_measure(cfg.doc["measure"]);
    if (cfg.doc.contains("problem")) build_problem(cfg.doc["problem"], ctx.mu());
    check_remaining(cfg);

    switch (cfg.command) {
        case Command::solve: cmd_solve(ctx); break;
        case Command::payoff: cmd_payoff(ctx); break;
        case Command::embed: cmd_embed(ctx); break;
        case Command::simulate: cmd_simulate(ctx); break;
        case Command::compare: cmd_compare(ctx); break;
        case Command::constants: cmd_constants(ctx); break;
        case Command::validate: break;
    }
}

int run_main(const fs::path& config_file, std::optional<Command> command, const std::optional<fs::path>& override_dir,
             std::ostream& out, std::ostream& err) {
    std::optional<fs::path> dir = override_dir;
    std::string command_name = command ? std::string(to_string(*command)) : "";
    try {
        RunConfig cfg = load_config(config_file, command);
        command_name = std::string(to_string(cfg.command));
        dir = output_dir(cfg, override_dir);
        run(cfg, *dir, out);
        return 0;
    } catch (const Error& e) {
        Json j;
        j["error"] = std::string(to_string(e.kind()));
        j["exit_code"] = exit_code(e.kind());
        j["command"] = command_name;
        j["message"] = e.what();
        err << j.dump() << '\n';
        if (dir && exit_code(e.kind()) == 4) {
            std::error_code ec;
            fs::create_directories(*dir, ec);
            std::ofstream os(*dir / "error.json", std::ios::binary);
            if (os) os << j.dump(2) << '\n';
        }
        return exit_code(e.kind());
    } catch (const nlohmann::json::exception& e) {
        Json j;
        j["error"] = std::string(to_string(ErrorKind::parse));
        j["exit_code"] = 2;
        j["command"] = command_name;
        j["message"] = e.what();
        err << j.dump() << '\n';
        return 2;
    }
}

}  // namespace maxstop
