#include "maxstop/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "maxstop/error.hpp"

namespace maxstop {

// ---------------------------------------------------------------------------
// Boundary

Boundary::Boundary(std::vector<double> s, std::vector<double> g, std::vector<BoundaryJump> jumps, double clip_level,
                   double floor_value, std::optional<double> diagonal_from)
    : s_(std::move(s)),
      g_(std::move(g)),
      jumps_(std::move(jumps)),
      clip_level_(clip_level),
      floor_value_(floor_value),
      diagonal_from_(diagonal_from) {
    if (s_.size() != g_.size()) fail(ErrorKind::argument, "boundary grid and values differ in length");
    for (std::size_t i = 1; i < s_.size(); ++i)
        if (!(s_[i] > s_[i - 1])) fail(ErrorKind::argument, "boundary grid must be strictly increasing");
    std::sort(jumps_.begin(), jumps_.end(), [](const BoundaryJump& a, const BoundaryJump& b) { return a.s < b.s; });
}

Boundary Boundary::tabulate(const RealFn& g, double lo, double hi, int n) {
    if (n < 2 || !(lo < hi)) fail(ErrorKind::argument, "tabulate needs n >= 2 and lo < hi");
    std::vector<double> s(n), v(n);
    for (int i = 0; i < n; ++i) {
        s[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        v[i] = g(s[i]);
    }
    return Boundary(std::move(s), std::move(v));
}

std::optional<double> Boundary::jump_left_at(double s) const {
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), s,
                               [](const BoundaryJump& j, double v) { return j.s < v; });
    if (it != jumps_.end() && it->s == s) return it->left;
    return std::nullopt;
}

bool Boundary::defined_at(double s) const {
    if (s < clip_level_) return true;
    if (diagonal_from_ && s >= *diagonal_from_) return true;
    return !s_.empty() && s >= s_.front() && s <= s_.back();
}

double Boundary::operator()(double s) const {
    if (s < clip_level_) return floor_value_;
    if (diagonal_from_ && s >= *diagonal_from_) return s;
    if (s_.empty() || !(s >= s_.front() && s <= s_.back())) {
        std::ostringstream os;
        os << "boundary undefined at s=" << s;
        fail(ErrorKind::range, os.str());
    }
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    if (s == s_[i] || i + 1 == s_.size()) return g_[i];
    double right_end = jump_left_at(s_[i + 1]).value_or(g_[i + 1]);
    double w = (s - s_[i]) / (s_[i + 1] - s_[i]);
    return g_[i] + w * (right_end - g_[i]);
}

double Boundary::left_limit(double s) const {
    if (auto l = jump_left_at(s)) return *l;
    return (*this)(s);
}

Boundary Boundary::shifted(double delta) const {
    Boundary out = *this;
    for (std::size_t i = 0; i < out.s_.size(); ++i) out.g_[i] = std::min(out.g_[i] + delta, out.s_[i]);
    for (auto& j : out.jumps_) {
        j.left = std::min(j.left + delta, j.s);
        j.right = std::min(j.right + delta, j.s);
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& token) {
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::parse, "malformed number '" + token + "' in boundary CSV");
    }
}

}  // namespace

void Boundary::write_csv(std::ostream& os) const {
    os << "# clip_level=" << fmt(clip_level_) << '\n';
    os << "# floor_value=" << fmt(floor_value_) << '\n';
    if (diagonal_from_) os << "# diagonal_from=" << fmt(*diagonal_from_) << '\n';
    os << "s,g,side\n";
    for (std::size_t i = 0; i < s_.size(); ++i) {
        if (auto l = jump_left_at(s_[i])) {
            os << fmt(s_[i]) << ',' << fmt(*l) << ",left\n";
            os << fmt(s_[i]) << ',' << fmt(g_[i]) << ",right\n";
        } else {
            os << fmt(s_[i]) << ',' << fmt(g_[i]) << ",\n";
        }
    }
}

Boundary Boundary::read_csv(std::istream& is) {
    std::vector<double> s, g;
    std::vector<BoundaryJump> jumps;
    double clip = -kInf;
    double floor = -kInf;
    std::optional<double> diag;
    bool header = false;
    bool has_left = false;
    double left_s = 0.0;
    double left_g = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            double v = parse_number(line.substr(eq + 1));
            if (key == "clip_level") clip = v;
            else if (key == "floor_value") floor = v;
            else if (key == "diagonal_from") diag = v;
            continue;
        }
        if (!header) {
            if (line != "s,g,side") fail(ErrorKind::parse, "boundary CSV must start with header 's,g,side'");
            header = true;
            continue;
        }
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) fail(ErrorKind::parse, "boundary CSV row needs three columns: " + line);
        double sv = parse_number(line.substr(0, c1));
        double gv = parse_number(line.substr(c1 + 1, c2 - c1 - 1));
        std::string side = line.substr(c2 + 1);
        if (side == "left") {
            has_left = true;
            left_s = sv;
            left_g = gv;
        } else if (side == "right" || side.empty()) {
            if (side == "right") {
                if (!has_left || left_s != sv)
                    fail(ErrorKind::parse, "right row without matching left row in boundary CSV");
                jumps.push_back({sv, left_g, gv});
                has_left = false;
            }
            s.push_back(sv);
            g.push_back(gv);
        } else {
            fail(ErrorKind::parse, "unknown side '" + side + "' in boundary CSV");
        }
    }
    if (!header) fail(ErrorKind::parse, "boundary CSV has no header");
    return Boundary(std::move(s), std::move(g), std::move(jumps), clip, floor, diag);
}

// ---------------------------------------------------------------------------
// Boundary equation

double ode_rhs(const StoppingProblem& p, double s, double g) {
    if (!(g < s)) {
        std::ostringstream os;
        os << "boundary equation is singular on or above the diagonal (s=" << s << ", g=" << g << ")";
        fail(ErrorKind::numeric, os.str());
    }
    double dphi = p.reward.derivative(s);
    if (dphi == 0.0) return 0.0;
    double c = p.cost(g);
    if (std::isinf(c)) return 0.0;
    if (c == 0.0) return kInf;
    const auto& d = p.diffusion;
    double sig = d.volatility(g);
    double dL = scale_value(d, s) - scale_value(d, g);
    return dphi * sig * sig * scale_derivative(d, g) / (2.0 * c * dL);
}

namespace {

double green_integral(const StoppingProblem& p, double lower, double x) {
    // int_lower^x (L(x) - L(u)) c(u) m(u) du
    if (!(lower < x)) return 0.0;
    const auto& d = p.diffusion;
    const double Lx = scale_value(d, x);
    std::vector<double> cuts{lower, x};
    for (double q : p.cost.discontinuities())
        if (lower < q && q < x) cuts.push_back(q);
    for (const auto& z : p.cost.zero_intervals()) {
        if (lower < z.lo && z.lo < x) cuts.push_back(z.lo);
        if (lower < z.hi && z.hi < x) cuts.push_back(z.hi);
    }
    for (double q : {p.cost.finite_interval().lo, p.cost.finite_interval().hi})
        if (lower < q && q < x) cuts.push_back(q);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto f = [&](double u) {
        double c = p.cost(u);
        if (c == 0.0) return 0.0;
        return (Lx - scale_value(d, u)) * c * speed_density(d, u);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += quad(f, cuts[i], cuts[i + 1], d.tolerance());
    return total;
}

double payoff_given_level(const StoppingProblem& p, double g_at_s, double x, double s) {
    double lower = std::min(x, g_at_s);
    return p.reward.value(s) + green_integral(p, lower, x);
}

/// Everything recorded by one backward sweep.
struct Trace {
    std::vector<double> s;
    std::vector<double> g;
    std::vector<BoundaryJump> jumps;
    double clip = -kInf;

    void push(double sv, double gv) {
        if (!s.empty() && sv >= s.back()) return;
        s.push_back(sv);
        g.push_back(gv);
    }
};

bool is_jump_point(const RewardSpec& r, double s) {
    const auto& jp = r.jump_points();
    return std::find(jp.begin(), jp.end(), s) != jp.end();
}

class BackwardSolver {
public:
    BackwardSolver(const StoppingProblem& p, const SolverGrid& grid) : p_(p), grid_(grid) {
        const auto& d = p.diffusion;
        floor_ = d.lo();
        window_step_ = grid.max_step > 0.0 ? grid.max_step : (grid.s_max - grid.s_min) / 2000.0;
    }

    double floor() const { return floor_; }

    /// Sweeps backward from s_T. When start_on_diagonal the boundary is the diagonal at
    /// s_T, otherwise it starts at s_T - eps.
    Boundary run(double s_T, double eps, bool start_on_diagonal, std::optional<double> diagonal_from) const {
        Trace tr;
        const double s_end = grid_.s_min;
        std::vector<double> stops;
        for (double k : p_.reward.kink_points())
            if (k > s_end && k < s_T) stops.push_back(k);
        if (grid_.s_max > s_end && grid_.s_max < s_T) stops.push_back(grid_.s_max);
        std::sort(stops.begin(), stops.end(), std::greater<>());
        stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

        double s = s_T;
        double g = start_on_diagonal ? s_T : s_T - eps;
        bool on_diagonal = start_on_diagonal;
        bool handled_jump_at_s = false;
        tr.push(s, g);

        auto next_stop_below = [&](double cur) {
            for (double q : stops)
                if (q < cur) return q;
            return s_end;
        };

        while (s > s_end) {
            if (!handled_jump_at_s && is_jump_point(p_.reward, s)) {
                double V_right = payoff_given_level(p_, g, s, s);
                double a = jump_boundary_value(p_, V_right, s, p_.reward.left_value(s));
                if (a < g) {
                    tr.jumps.push_back({s, a, g});
                    g = a;
                    on_diagonal = false;
                }
                if (std::isfinite(floor_) && g <= floor_) {
                    tr.clip = s;
                    break;
                }
            }
            handled_jump_at_s = false;
            double next = next_stop_below(s);

            if (on_diagonal) {
                if (p_.reward.derivative(0.5 * (s + next)) == 0.0) {
                    tr.push(next, next);
                    s = next;
                    g = next;
                    continue;
                }
                g = s - eps;
                on_diagonal = false;
                if (!tr.s.empty() && tr.s.back() == s) tr.g.back() = s;
            }

            // Levels the curve may reach from above while descending.
            std::vector<double> levels;
            if (std::isfinite(floor_) && floor_ < g) levels.push_back(floor_);
            for (const auto& z : p_.cost.zero_intervals())
                if (z.hi < g - 1e-14 * std::max(1.0, std::abs(g))) levels.push_back(z.hi);
            auto event = [&](double sv, double gv) {
                double e = (sv - gv) - 1e-12 * std::max(1.0, std::abs(sv));
                for (double l : levels) e = std::min(e, gv - l);
                return e;
            };
            // The reward derivative is right-continuous; the segment uses its left side at the top.
            const double top = std::nextafter(s, -kInf);
            // Below a finite lower end the field is frozen at the end value so the floor event
            // can be located.
            const double floor_eval =
                p_.diffusion.in_state_space(floor_) ? floor_ : floor_ + 1e-12 * std::max(1.0, std::abs(floor_));
            auto rhs = [&, top, floor_eval](double sv, double gv) {
                if (std::isfinite(floor_) && gv < floor_eval) gv = floor_eval;
                // Likewise inside a zero-cost interval whose top is an event level.
                for (const auto& z : p_.cost.zero_intervals())
                    if (gv > z.lo && gv < z.hi && z.hi < g) gv = z.hi;
                if (!(gv < sv) || !p_.diffusion.in_state_space(gv)) return std::nan("");
                return ode_rhs(p_, std::min(sv, top), gv);
            };
            OdeOptions opts;
            opts.rtol = grid_.rtol;
            opts.atol = grid_.atol;
            opts.h_init = std::min(1e-3 * std::max(eps, 1e-9), 1e-6);
            opts.h_max = next >= grid_.s_max ? kInf : window_step_;
            OdeStop stop = integrate_ode(rhs, s, g, next, opts, [&](double sv, double gv) { tr.push(sv, gv); }, event);
            s = stop.s;
            g = stop.y;
            if (!stop.event) {
                handled_jump_at_s = false;
                continue;
            }
            // Identify the event.
            if (s - g <= 1e-9 * std::max(1.0, std::abs(s))) {
                if (p_.reward.derivative(s) != 0.0) {
                    std::ostringstream os;
                    os << "backward curve reached the diagonal at s=" << s << " where the reward increases";
                    fail(ErrorKind::numeric, os.str());
                }
                g = s;
                if (!tr.s.empty()) tr.g.back() = s;
                on_diagonal = true;
                handled_jump_at_s = true;
                continue;
            }
            if (std::isfinite(floor_) && std::abs(g - floor_) <= 1e-9 * std::max(1.0, std::abs(floor_))) {
                tr.clip = s;
                if (!tr.s.empty()) tr.g.back() = floor_;
                break;
            }
            bool matched = false;
            for (const auto& z : p_.cost.zero_intervals()) {
                if (std::abs(g - z.hi) <= 1e-9 * std::max(1.0, std::abs(z.hi))) {
                    tr.jumps.push_back({s, z.lo, z.hi});
                    if (!tr.s.empty()) tr.g.back() = z.hi;
                    g = z.lo;
                    matched = true;
                    break;
                }
            }
            if (!matched) fail(ErrorKind::numeric, "unidentified event in boundary integration");
            if (std::isfinite(floor_) && g <= floor_) {
                tr.clip = s;
                break;
            }
            handled_jump_at_s = true;
        }
        return build(tr, diagonal_from);
    }

private:
    const StoppingProblem& p_;
    const SolverGrid& grid_;
    double floor_ = -kInf;
    double window_step_ = 0.0;

    Boundary build(Trace& tr, std::optional<double> diagonal_from) const {
        std::reverse(tr.s.begin(), tr.s.end());
        std::reverse(tr.g.begin(), tr.g.end());
        // Jumps whose left value was never extended by a grid point below collapse onto the grid.
        Boundary b(tr.s, tr.g, tr.jumps, tr.clip, floor_, diagonal_from);
        auto kind = p_.diffusion.lo_kind();
        if (std::isfinite(tr.clip) && (kind == BoundaryKind::entrance || kind == BoundaryKind::regular_reflecting))
            b.set_lower_end_flag(true);
        return b;
    }
};

double sup_distance(const Boundary& a, const Boundary& b, double lo, double hi) {
    double worst = 0.0;
    const int n = 401;
    for (int i = 0; i < n; ++i) {
        double s = lo + (hi - lo) * i / (n - 1);
        double va = a(s);
        double vb = b(s);
        if (va == vb) continue;
        worst = std::max(worst, std::abs(va - vb));
        if (std::isnan(worst)) return kInf;
    }
    return worst;
}

bool same_clip(const Boundary& a, const Boundary& b, double tol) {
    double ca = a.clip_level();
    double cb = b.clip_level();
    if (std::isinf(ca) || std::isinf(cb)) return ca == cb;
    return std::abs(ca - cb) <= tol * std::max(1.0, std::abs(ca));
}

}  // namespace

Boundary solve_maximal_boundary(const StoppingProblem& p, const SolverGrid& grid, SolveDiagnostics* diag) {
    if (!(grid.s_min < grid.s_max)) fail(ErrorKind::argument, "solver grid needs s_min < s_max");
    if (!(grid.eps_diag > 0.0)) fail(ErrorKind::argument, "solver grid needs eps_diag > 0");
    const auto& d = p.diffusion;
    if (!d.in_state_space(grid.s_min) || !(grid.s_max <= d.hi()))
        fail(ErrorKind::domain, "solver window must lie inside the state interval");

    BackwardSolver solver(p, grid);
    SolveDiagnostics local;
    auto record = [&](double T, double eps, int sweeps, double change) {
        local = {T, eps, sweeps, change};
        if (diag) *diag = local;
    };

    auto eps_sweep = [&](double T, bool on_diag, std::optional<double> diagonal_from, const Boundary* first,
                         int sweeps) -> std::optional<Boundary> {
        Boundary b1 = first ? *first : solver.run(T, grid.eps_diag, on_diag, diagonal_from);
        Boundary b4 = solver.run(T, grid.eps_diag / 4.0, on_diag, diagonal_from);
        double change = sup_distance(b1, b4, grid.s_min, grid.s_max);
        record(T, grid.eps_diag / 4.0, sweeps, change);
        if (change < grid.accept_tol && same_clip(b1, b4, grid.accept_tol)) return b4;
        return std::nullopt;
    };

    if (auto flat = p.reward.flat_from()) {
        if (*flat <= grid.s_min) {
            record(*flat, 0.0, 0, 0.0);
            return Boundary({}, {}, {}, -kInf, d.lo(), grid.s_min);
        }
        if (auto b = eps_sweep(*flat, true, *flat, nullptr, 1)) return *b;
        fail(ErrorKind::numeric, "boundary not stable under the diagonal offset sweep");
    }
    if (std::isfinite(d.hi())) {
        double T = d.in_state_space(d.hi()) ? d.hi() : d.hi() - 1e-9 * std::max(1.0, std::abs(d.hi()));
        if (auto b = eps_sweep(T, false, std::nullopt, nullptr, 1)) return *b;
        fail(ErrorKind::numeric, "boundary not stable under the diagonal offset sweep");
    }

    const double width = std::max(grid.s_max - grid.s_min, 1.0);
    std::optional<Boundary> prev;
    double last_change = kInf;
    double last_clip = -kInf;
    for (int k = 0; k < grid.max_sweeps; ++k) {
        double T = grid.s_max + width * std::ldexp(1.0, k);
        Boundary cur = solver.run(T, grid.eps_diag, false, std::nullopt);
        if (prev) {
            last_change = sup_distance(*prev, cur, grid.s_min, grid.s_max);
            if (last_change < grid.accept_tol && same_clip(*prev, cur, grid.accept_tol)) {
                if (auto b = eps_sweep(T, false, std::nullopt, &cur, k + 1)) return *b;
            }
        }
        record(T, grid.eps_diag, k + 1, last_change);
        last_clip = cur.clip_level();
        prev = std::move(cur);
    }
    std::ostringstream os;
    os << "backward boundary curves keep descending as the terminal level grows (last change " << last_change
       << " after " << grid.max_sweeps << " sweeps, terminal " << local.terminal_s << ", clip level " << last_clip
       << "); no maximal solution stays below the diagonal";
    fail(ErrorKind::infinite_payoff, os.str());
}

double jump_objective(const StoppingProblem& p, double V_right, double s0, double phi_left, double a, double x) {
    double delta = V_right - phi_left;
    return delta * exit_up_probability(p.diffusion, a, s0, x) - expected_cost_to_exit(p.diffusion, p.cost, a, s0, x) +
           phi_left;
}

double jump_boundary_value(const StoppingProblem& p, double V_right, double s0, double phi_left) {
    const double delta = V_right - phi_left;
    if (!(delta > 0.0)) return s0;
    const auto& d = p.diffusion;
    const double Ls0 = scale_value(d, s0);
    // Limit of the objective as x -> s0, divided by L(s0) - L(x). It has the same maximizer
    // and locates a bracket for the x-based maximization below.
    auto limit_objective = [&](double a) {
        double D = Ls0 - scale_value(d, a);
        double I = 0.0;
        auto f = [&](double y) {
            double c = p.cost(y);
            if (c == 0.0) return 0.0;
            return (scale_value(d, y) - scale_value(d, a)) * c * speed_density(d, y);
        };
        I = quad(f, a, s0, d.tolerance());
        return -(delta + I) / D;
    };
    const double top = s0 - 1e-10 * std::max(1.0, std::abs(s0));
    double width = 1.0;
    double a0 = s0;
    double lo = s0;
    for (int it = 0; it < 40; ++it) {
        lo = s0 - width;
        bool at_floor = false;
        if (std::isfinite(d.lo()) && lo <= d.lo()) {
            lo = d.in_state_space(d.lo()) ? d.lo() : d.lo() + 1e-12 * std::max(1.0, std::abs(d.lo()));
            at_floor = true;
        }
        a0 = maximize(limit_objective, lo, top).first;
        if (at_floor || a0 - lo > 1e-6 * width) break;
        width *= 4.0;
        if (width > 1e12) fail(ErrorKind::no_interior_max, "jump equation has no interior maximizer (cost too small)");
    }
    if (a0 - lo <= 1e-6 * width && !(std::isfinite(d.lo()) && lo <= d.lo() + 1e-9))
        fail(ErrorKind::no_interior_max, "jump equation has no interior maximizer (cost too small)");
    if (a0 >= top) return s0;
    // Maximize the payoff at a start point strictly between the candidate and s0.
    double x = s0 - 0.5 * (s0 - a0);
    auto obj = [&](double a) { return jump_objective(p, V_right, s0, phi_left, a, x); };
    double lo2 = std::max(lo, a0 - 2.0 * (s0 - a0));
    return maximize(obj, lo2, x).first;
}

double payoff(const StoppingProblem& p, const Boundary& g, double x, double s) {
    if (!(x <= s)) fail(ErrorKind::argument, "payoff needs x <= s");
    if (!p.diffusion.in_state_space(x) || !p.diffusion.in_state_space(s))
        fail(ErrorKind::domain, "payoff point outside the state interval");
    return payoff_given_level(p, g(s), x, s);
}

std::optional<double> forward_hits_diagonal(const StoppingProblem& p, double s1, double g1, double s_end,
                                            const OdeOptions& opts) {
    auto rhs = [&](double sv, double gv) {
        if (!(gv < sv)) return std::nan("");
        return ode_rhs(p, sv, gv);
    };
    auto event = [](double sv, double gv) { return (sv - gv) - 1e-6 * std::max(1.0, std::abs(sv)); };
    try {
        OdeStop st = integrate_ode(rhs, s1, g1, s_end, opts, {}, event);
        if (st.event) return st.s;
        return std::nullopt;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::numeric) throw;
        return s1;
    }
}

}  // namespace maxstop
