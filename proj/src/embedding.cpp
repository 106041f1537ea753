#include "maxstop/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxstop/error.hpp"

namespace maxstop {

namespace {

constexpr double kAtomTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kAtomTol * std::max(1.0, std::abs(a)); }

}  // namespace

TargetMeasure::TargetMeasure(RealFn density, double lo, double hi, std::vector<Atom> atoms, std::vector<double> breaks,
                             std::vector<Interval> gaps)
    : density_(std::move(density)),
      lo_(lo),
      hi_(hi),
      atoms_(std::move(atoms)),
      breaks_(std::move(breaks)),
      gaps_(std::move(gaps)) {
    if (!(lo_ <= hi_)) fail(ErrorKind::domain, "measure support needs lo <= hi");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!(atoms_[i].mass > 0.0)) fail(ErrorKind::domain, "atom masses must be positive");
        if (atoms_[i].at < lo_ || atoms_[i].at > hi_) fail(ErrorKind::domain, "atom outside the support");
        if (i > 0 && atoms_[i].at == atoms_[i - 1].at) fail(ErrorKind::domain, "duplicate atom location");
    }
    std::vector<double> b;
    for (double x : breaks_)
        if (x > lo_ && x < hi_) b.push_back(x);
    for (const auto& g : gaps_) {
        if (!(g.lo < g.hi)) fail(ErrorKind::domain, "density gap needs lo < hi");
        if (g.lo > lo_ && g.lo < hi_) b.push_back(g.lo);
        if (g.hi > lo_ && g.hi < hi_) b.push_back(g.hi);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    breaks_ = std::move(b);
    refresh();
}

void TargetMeasure::refresh() {
    density_mass_ = lo_ < hi_ ? integrate_against_density([](double) { return 1.0; }, lo_, hi_) : 0.0;
    double m = lo_ < hi_ ? integrate_against_density([](double x) { return x; }, lo_, hi_) : 0.0;
    for (const auto& a : atoms_) m += a.mass * a.at;
    mean_ = m;
}

TargetMeasure TargetMeasure::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorKind::domain, "uniform law needs lo < hi");
    double h = 1.0 / (hi - lo);
    return TargetMeasure([h](double) { return h; }, lo, hi);
}

TargetMeasure TargetMeasure::exponential(double rate, double loc) {
    if (!(rate > 0.0)) fail(ErrorKind::domain, "exponential law needs rate > 0");
    return TargetMeasure([rate, loc](double x) { return rate * std::exp(-rate * (x - loc)); }, loc, kInf);
}

TargetMeasure TargetMeasure::shifted_exponential(double rate) { return exponential(rate, -1.0 / rate); }

TargetMeasure TargetMeasure::truncated_gaussian(double mean, double sd, double lo, double hi) {
    if (!(sd > 0.0) || !(lo < hi)) fail(ErrorKind::domain, "truncated Gaussian needs sd > 0 and lo < hi");
    auto Phi = [&](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    double Z = Phi((hi - mean) / sd) - Phi((lo - mean) / sd);
    if (!(Z > 0.0)) fail(ErrorKind::domain, "truncated Gaussian has no mass on its support");
    const double k = 1.0 / (Z * sd * std::sqrt(2.0 * M_PI));
    return TargetMeasure([=](double x) { double z = (x - mean) / sd; return k * std::exp(-0.5 * z * z); }, lo, hi);
}

TargetMeasure TargetMeasure::piecewise_polynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs) {
    if (breaks.size() < 2 || coeffs.size() + 1 != breaks.size())
        fail(ErrorKind::domain, "piecewise polynomial needs n+1 breaks for n pieces");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) fail(ErrorKind::domain, "piecewise polynomial breaks must increase");
    std::vector<Interval> gaps;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (std::all_of(coeffs[i].begin(), coeffs[i].end(), [](double c) { return c == 0.0; }))
            gaps.push_back({breaks[i], breaks[i + 1]});
    auto f = [breaks, coeffs](double x) {
        auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
        std::size_t i = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
        if (i >= coeffs.size()) i = coeffs.size() - 1;
        double d = x - breaks[i];
        double v = 0.0;
        for (std::size_t k = coeffs[i].size(); k-- > 0;) v = v * d + coeffs[i][k];
        return v;
    };
    double lo = breaks.front();
    double hi = breaks.back();
    return TargetMeasure(f, lo, hi, {}, breaks, gaps).normalized();
}

TargetMeasure TargetMeasure::tabulated(std::vector<double> xs, std::vector<double> fs) {
    if (xs.size() < 2 || xs.size() != fs.size()) fail(ErrorKind::domain, "tabulated density needs matching tables");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) fail(ErrorKind::domain, "tabulated density nodes must increase");
    for (double f : fs)
        if (f < 0.0) fail(ErrorKind::domain, "tabulated density must be non-negative");
    std::vector<Interval> gaps;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (fs[i] == 0.0 && fs[i + 1] == 0.0) gaps.push_back({xs[i], xs[i + 1]});
    auto f = [xs, fs](double x) {
        if (x <= xs.front()) return fs.front();
        if (x >= xs.back()) return fs.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return fs[i] + w * (fs[i + 1] - fs[i]);
    };
    double lo = xs.front();
    double hi = xs.back();
    return TargetMeasure(f, lo, hi, {}, xs, gaps).normalized();
}

TargetMeasure TargetMeasure::atomic(std::vector<Atom> atoms) {
    if (atoms.empty()) fail(ErrorKind::domain, "atomic law needs at least one atom");
    double lo = kInf;
    double hi = -kInf;
    for (const auto& a : atoms) {
        lo = std::min(lo, a.at);
        hi = std::max(hi, a.at);
    }
    return TargetMeasure([](double) { return 0.0; }, lo, hi, std::move(atoms));
}

double TargetMeasure::density(double x) const {
    if (x < lo_ || x > hi_ || lo_ == hi_) return 0.0;
    for (const auto& g : gaps_)
        if (g.contains_open(x)) return 0.0;
    return density_(x);
}

bool TargetMeasure::is_atom(double x) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [x](const Atom& a) { return near(a.at, x); });
}

double TargetMeasure::atom_mass(double x) const {
    for (const auto& a : atoms_)
        if (near(a.at, x)) return a.mass;
    return 0.0;
}

double TargetMeasure::total_mass() const {
    double m = density_mass_;
    for (const auto& a : atoms_) m += a.mass;
    return m;
}

double TargetMeasure::integrate_against_density(const RealFn& h, double a, double b) const {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (!(a < b)) return 0.0;
    std::vector<double> cuts{a};
    for (double x : breaks_)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = std::isfinite(cuts[i + 1]) ? 0.5 * (cuts[i] + cuts[i + 1]) : cuts[i] + 1.0;
        bool in_gap = std::any_of(gaps_.begin(), gaps_.end(), [mid](const Interval& g) { return g.contains_open(mid); });
        if (in_gap) continue;
        auto g = [&](double x) { return h(x) * density_(x); };
        if (std::isfinite(cuts[i + 1])) {
            total += quad(g, cuts[i], cuts[i + 1]);
            continue;
        }
        try {
            total += quad(g, cuts[i], cuts[i + 1]);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::divergence) throw;
            // Slowly decaying tail: sum decades instead.
            total += decade_tail_integral(g, cuts[i], kInf).value;
        }
    }
    return total;
}

double TargetMeasure::tail(double x) const {
    double t = integrate_against_density([](double) { return 1.0; }, x, hi_);
    for (const auto& a : atoms_)
        if (a.at >= x || near(a.at, x)) t += a.mass;
    return t;
}

double TargetMeasure::tail_open(double x) const {
    double t = integrate_against_density([](double) { return 1.0; }, x, hi_);
    for (const auto& a : atoms_)
        if (a.at > x && !near(a.at, x)) t += a.mass;
    return t;
}

double TargetMeasure::cdf(double x) const { return std::clamp(total_mass() - tail_open(x), 0.0, 1.0); }

double TargetMeasure::tail_moment(double x) const {
    double m = integrate_against_density([](double y) { return y; }, x, hi_);
    for (const auto& a : atoms_)
        if (a.at >= x || near(a.at, x)) m += a.mass * a.at;
    return m;
}

TargetMeasure TargetMeasure::normalized() const {
    double atom_mass = 0.0;
    for (const auto& a : atoms_) atom_mass += a.mass;
    if (atom_mass > 1.0 + 1e-12) fail(ErrorKind::domain, "atom masses exceed one");
    if (!(density_mass_ > 0.0)) return *this;
    double k = (1.0 - atom_mass) / density_mass_;
    TargetMeasure out = *this;
    out.density_ = [f = density_, k](double x) { return k * f(x); };
    out.refresh();
    return out;
}

TargetMeasure TargetMeasure::shifted(double delta) const {
    TargetMeasure out = *this;
    out.density_ = [f = density_, delta](double x) { return f(x - delta); };
    out.lo_ += delta;
    out.hi_ += delta;
    for (auto& a : out.atoms_) a.at += delta;
    for (auto& b : out.breaks_) b += delta;
    for (auto& g : out.gaps_) {
        g.lo += delta;
        g.hi += delta;
    }
    out.refresh();
    return out;
}

std::vector<std::string> TargetMeasure::check() const {
    std::vector<std::string> out;
    if (std::abs(total_mass() - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "total mass is " << total_mass() << ", expected 1";
        out.push_back(os.str());
    }
    if (std::abs(mean_) > 1e-8) {
        std::ostringstream os;
        os << "mean is " << mean_ << ", expected 0";
        out.push_back(os.str());
    }
    if (std::isinf(hi_) && lo_ < hi_) {
        auto ti = decade_tail_integral([this](double x) { return std::abs(x) * density_(x); }, std::max(lo_, 0.0), kInf);
        if (!ti.converged) out.push_back("first moment does not settle in the upper tail");
    }
    if (lo_ < hi_) {
        double a = std::isfinite(lo_) ? lo_ : -50.0;
        double b = std::isfinite(hi_) ? hi_ : 50.0;
        for (int i = 0; i <= 400; ++i) {
            double x = a + (b - a) * i / 400;
            double f = density(x);
            if (!(f >= 0.0) || !std::isfinite(f)) {
                std::ostringstream os;
                os << "density invalid at x=" << x;
                out.push_back(os.str());
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double barycentre(const TargetMeasure& mu, double x) {
    if (x <= mu.lo()) return mu.mean() / mu.total_mass();
    double t = mu.tail(x);
    if (!(t > 0.0)) {
        std::ostringstream os;
        os << "barycentre undefined right of the support (x=" << x << ")";
        fail(ErrorKind::range, os.str());
    }
    return std::max(x, mu.tail_moment(x) / t);
}

double barycentre_right(const TargetMeasure& mu, double x) {
    double t = mu.tail_open(x);
    if (!(t > 0.0)) {
        std::ostringstream os;
        os << "barycentre undefined right of the support (x=" << x << ")";
        fail(ErrorKind::range, os.str());
    }
    return std::max(x, (mu.tail_moment(x) - mu.atom_mass(x) * x) / t);
}

double barycentre_sup(const TargetMeasure& mu) { return mu.hi(); }

double inverse_barycentre(const TargetMeasure& mu, double s) {
    const double sup = barycentre_sup(mu);
    if (!(s >= 0.0) || !(s < sup)) {
        std::ostringstream os;
        os << "inverse barycentre needs s in [0, " << sup << "), got " << s;
        fail(ErrorKind::range, os.str());
    }
    auto reached = [&](double x) { return x >= mu.hi() || barycentre(mu, x) >= s; };
    double a = mu.lo();
    if (!std::isfinite(a)) {
        a = -1.0;
        while (reached(a)) a *= 2.0;
    } else if (reached(a)) {
        return a;
    }
    double b = std::isfinite(mu.hi()) ? mu.hi() : std::max(1.0, s);
    while (!reached(b)) b *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (reached(mid)) b = mid;
        else a = mid;
        if (b - a <= 1e-14 * std::max(1.0, std::abs(b))) break;
    }
    return b;
}

double hazard_cost(const TargetMeasure& mu, double x) {
    if (mu.is_atom(x)) {
        std::ostringstream os;
        os << "hazard cost undefined at the atom x=" << x;
        fail(ErrorKind::domain, os.str());
    }
    if (x < mu.lo() || x > mu.hi()) return kInf;
    double t = mu.tail(x);
    if (!(t > 0.0)) return kInf;
    return mu.density(x) / (2.0 * t);
}

std::pair<RewardSpec, CostSpec> embedding_pair(const TargetMeasure& mu) {
    if (!(mu.density_mass() > 1e-12))
        fail(ErrorKind::unsupported, "purely atomic target: the pair degenerates to phi = c = 0");
    if (!mu.atoms().empty()) {
        bool positive = mu.gaps().empty();
        double a = std::isfinite(mu.lo()) ? mu.lo() : support_window(mu).first;
        double b = std::isfinite(mu.hi()) ? mu.hi() : support_window(mu).second;
        for (int i = 1; i < 400 && positive; ++i) {
            double x = a + (b - a) * i / 400;
            if (!mu.is_atom(x) && !(mu.density(x) > 0.0)) positive = false;
        }
        if (!positive) fail(ErrorKind::unsupported, "target with atoms needs a strictly positive density");
    }
    const double sup = barycentre_sup(mu);
    // Gaps [Psi(j), Psi(j+)) of the range of Psi created by atoms.
    std::vector<Interval> holes;
    for (const auto& at : mu.atoms()) {
        if (at.at >= mu.hi()) continue;
        double l = barycentre(mu, at.at);
        double r = barycentre_right(mu, at.at);
        if (r > l) holes.push_back({l, r});
    }
    std::vector<double> kinks{0.0};
    for (const auto& h : holes) {
        kinks.push_back(h.lo);
        kinks.push_back(h.hi);
    }
    auto deriv = [holes, sup](double s) {
        if (s < 0.0 || s >= sup) return 0.0;
        for (const auto& h : holes)
            if (s >= h.lo && s < h.hi) return 0.0;
        return 1.0;
    };
    auto value = [holes, sup](double s) {
        double top = std::min(s, sup);
        if (top <= 0.0) return 0.0;
        double v = top;
        for (const auto& h : holes) v -= std::max(0.0, std::min(top, h.hi) - std::max(0.0, h.lo));
        return v;
    };
    std::optional<double> flat;
    if (std::isfinite(sup)) flat = sup;
    RewardSpec reward(value, deriv, {}, kinks, flat);

    std::vector<double> disc = mu.breaks();
    for (const auto& a : mu.atoms()) disc.push_back(a.at);
    auto c = [mu](double x) {
        double t = mu.tail(x);
        if (!(t > 0.0)) return kInf;
        return mu.density(x) / (2.0 * t);
    };
    CostSpec cost(c, disc, mu.gaps(), {mu.lo(), mu.hi()});
    return {reward, cost};
}

RewardSpec meilijson_reward(const TargetMeasure& mu, double c, double x_max, int n) {
    if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::domain, "meilijson_reward needs a finite cost c > 0");
    if (!std::isfinite(mu.lo())) fail(ErrorKind::unsupported, "meilijson_reward needs a finite lower support end");
    if (n < 3) fail(ErrorKind::argument, "meilijson_reward needs at least 3 grid points");
    const double lo = mu.lo();
    const double sup = barycentre_sup(mu);
    const bool bounded = std::isfinite(sup);
    if (lo == sup) {
        // Point mass: H' = 0 and the reward is constant.
        return RewardSpec([](double) { return 0.0; }, [](double) { return 0.0; }, {}, {}, lo);
    }
    const double x_hi = bounded ? sup : x_max;
    if (!std::isfinite(x_hi) || !(x_hi > lo))
        fail(ErrorKind::argument, "meilijson_reward needs a finite x_max above the support start");

    std::vector<double> xs(n), hp(n), H(n), phi(n);
    for (int i = 0; i < n; ++i) {
        double x = i + 1 == n ? x_hi : lo + (x_hi - lo) * i / (n - 1);
        xs[i] = x;
        double probe = bounded && i + 1 == n ? std::nextafter(x, -kInf) : x;
        double inv = probe <= 0.0 ? lo : inverse_barycentre(mu, probe);
        double d = 2.0 * c * (probe - inv);
        if (d < -1e-9 * std::max(1.0, std::abs(x)))
            fail(ErrorKind::domain, "inconsistent measure: inverse barycentre exceeds its argument");
        hp[i] = std::max(d, 0.0);
    }
    H[0] = 0.0;
    for (int i = 1; i < n; ++i) H[i] = H[i - 1] + 0.5 * (hp[i] + hp[i - 1]) * (xs[i] - xs[i - 1]);
    for (int i = 0; i < n; ++i) {
        phi[i] = H[i] - hp[i] * hp[i] / (4.0 * c);
        if (i > 0) phi[i] = std::max(phi[i], phi[i - 1]);
    }
    const double tail_slope = (phi[n - 1] - phi[n - 2]) / (xs[n - 1] - xs[n - 2]);
    auto locate = [xs](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        return std::min(i, xs.size() - 2);
    };
    auto base = [=](double x) {
        if (x <= xs.front()) return phi.front();
        if (x >= xs.back()) return bounded ? phi.back() : phi.back() + tail_slope * (x - xs.back());
        std::size_t i = locate(x);
        double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return phi[i] + w * (phi[i + 1] - phi[i]);
    };
    auto deriv = [=](double x) {
        if (x < xs.front()) return 0.0;
        if (x >= xs.back()) return bounded ? 0.0 : tail_slope;
        std::size_t i = locate(x);
        return (phi[i + 1] - phi[i]) / (xs[i + 1] - xs[i]);
    };
    std::vector<RewardJump> jumps;
    std::optional<double> flat;
    if (bounded) {
        flat = sup;
        double size = H[n - 1] - phi[n - 1];
        if (size > 0.0) jumps.push_back({sup, size});
    }
    return RewardSpec(base, deriv, jumps, {lo}, flat);
}

std::pair<double, double> support_window(const TargetMeasure& mu, double mass) {
    double a = mu.lo();
    double b = mu.hi();
    if (!std::isfinite(a)) {
        double x = -1.0;
        while (mu.cdf(x) > mass) x *= 2.0;
        double hi = std::max(x / 2.0, x + 1.0);
        a = bisect([&](double y) { return mu.cdf(y) - mass; }, x, hi, 100);
    }
    if (!std::isfinite(b)) {
        double x = std::max(1.0, std::isfinite(a) ? a + 1.0 : 1.0);
        while (mu.tail_open(x) > mass) x = x > 0 ? 2.0 * x : x + 1.0;
        double lo = std::isfinite(mu.lo()) ? std::max(mu.lo(), x / 2.0) : x / 2.0;
        b = bisect([&](double y) { return mass - mu.tail_open(y); }, lo, x, 100);
    }
    return {a, b};
}

PairReport validate_pair(const TargetMeasure& mu, const RewardSpec& reward, const CostSpec& cost, int n) {
    PairReport rep;
    auto [a, b] = support_window(mu, 1e-6);
    const double pad = 1e-6 * (b - a);
    a += pad;
    b -= pad;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = a + (b - a) * i / (n - 1);
        if (mu.is_atom(u)) continue;
        double f = mu.density(u);
        if (!(f > 0.0)) continue;
        double lhs = reward.derivative(barycentre(mu, u)) / (2.0 * cost(u));
        double rhs = mu.tail(u) / f;
        double v = (lhs > 0.0 && std::isfinite(lhs)) ? std::max(lhs / rhs, rhs / lhs) - 1.0 : kInf;
        worst = std::max(worst, v);
        ++rep.grid_points;
    }
    rep.cond_pair_max_violation = worst;

    auto h = [&](double x) {
        if (x <= mu.lo()) return reward.value(barycentre(mu, x));
        if (mu.density(x) == 0.0 && !mu.is_atom(x)) return 0.0;
        double t = mu.tail(x);
        return reward.value(t > 0.0 ? std::max(x, mu.tail_moment(x) / t) : x);
    };
    double lower = std::isfinite(mu.lo()) ? mu.lo() : support_window(mu, 1e-12).first;
    try {
        TailIntegral ti = decade_tail_sum(
            [&](double l, double r) { return mu.integrate_against_density(h, l, r); }, lower, mu.hi());
        double total = ti.value;
        for (const auto& at : mu.atoms()) total += at.mass * h(at.at);
        rep.cond_pair_phi_integral = total;
        rep.cond_pair_phi_finite = ti.converged && std::isfinite(total);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::divergence && e.kind() != ErrorKind::range) throw;
        rep.cond_pair_phi_integral = kInf;
        rep.cond_pair_phi_finite = false;
    }
    rep.loglogl = loglogl_check(mu);
    return rep;
}

bool loglogl_check(const TargetMeasure& mu) {
    if (mu.hi() <= 1.0) return true;
    auto h = [](double x) { return x * std::log(x); };
    double start = std::max(1.0, mu.lo());
    try {
        TailIntegral ti =
            decade_tail_sum([&](double l, double r) { return mu.integrate_against_density(h, l, r); }, start, mu.hi());
        return ti.converged && std::isfinite(ti.value);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::divergence) throw;
        return false;
    }
}

Boundary azema_yor_boundary(const TargetMeasure& mu, double s_max, int n) {
    if (!std::isfinite(mu.lo())) fail(ErrorKind::unsupported, "Azema-Yor boundary needs a finite lower support end");
    if (n < 2) fail(ErrorKind::argument, "Azema-Yor boundary needs at least 2 points");
    const double lo = mu.lo();
    const double sup = barycentre_sup(mu);
    if (lo == sup) {
        // Point mass at the mean: stop at once.
        return Boundary({}, {}, {}, -kInf, -kInf, std::min(0.0, lo));
    }
    const double x_hi = std::isfinite(sup) ? sup : std::max(s_max, lo + 1.0);

    struct Pt {
        double s;
        double x;
    };
    std::vector<Pt> pts;
    pts.reserve(n + 2 * mu.atoms().size());
    for (int i = 0; i < n; ++i) {
        double x = i + 1 == n ? x_hi : lo + (x_hi - lo) * i / (n - 1);
        double s = x >= sup ? sup : barycentre(mu, x);
        pts.push_back({s, x});
    }
    for (const auto& a : mu.atoms()) {
        if (a.at >= sup) continue;
        pts.push_back({barycentre(mu, a.at), a.at});
        pts.push_back({barycentre_right(mu, a.at), a.at});
    }
    std::sort(pts.begin(), pts.end(), [](const Pt& p, const Pt& q) { return p.s < q.s || (p.s == q.s && p.x < q.x); });

    std::vector<double> s, g;
    std::vector<BoundaryJump> jumps;
    for (std::size_t i = 0; i < pts.size();) {
        std::size_t j = i;
        while (j + 1 < pts.size() && pts[j + 1].s == pts[i].s) ++j;
        double left = pts[i].x;
        double right = pts[j].x;
        if (!g.empty()) {
            left = std::max(left, g.back());
            right = std::max(right, left);
        }
        right = std::min(right, pts[i].s);
        left = std::min(left, right);
        s.push_back(pts[i].s);
        g.push_back(right);
        if (right > left) jumps.push_back({pts[i].s, left, right});
        i = j + 1;
    }
    std::optional<double> diag;
    if (std::isfinite(sup)) diag = sup;
    const double clip = s.empty() ? -kInf : s.front();
    return Boundary(std::move(s), std::move(g), std::move(jumps), clip, lo, diag);
}

}  // namespace maxstop
