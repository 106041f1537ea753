#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxstop/boundary.hpp"
#include "maxstop/error.hpp"

namespace maxstop {

namespace {

bool constant_from(const RewardSpec& r, double x0, double horizon) {
    if (auto f = r.flat_from(); f && *f <= x0) return true;
    for (double j : r.jump_points())
        if (j > x0) return false;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        double x = x0 + horizon * i / n;
        if (r.derivative(x) != 0.0) return false;
    }
    return true;
}

std::size_t locate(const std::vector<double>& x, double at) {
    if (x.empty()) fail(ErrorKind::range, "empty value function");
    if (at <= x.front()) return 0;
    auto it = std::upper_bound(x.begin(), x.end(), at);
    return static_cast<std::size_t>(it - x.begin()) - 1;
}

}  // namespace

namespace {

/// Cubic Hermite piece on [x[i], x[i+1]] from values and end slopes.
struct HermitePiece {
    double x0, h, y0, y1, d0, d1;

    double value(double at) const {
        double t = (at - x0) / h;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
    }
    double slope(double at) const {
        double t = (at - x0) / h;
        double t2 = t * t;
        return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
    }
};

HermitePiece piece(const ValueFunctionH& f, std::size_t i) {
    double right = f.Hprime[i + 1];
    for (const auto& j : f.derivative_jumps)
        if (j.s == f.x[i + 1]) right = j.left;
    return {f.x[i], f.x[i + 1] - f.x[i], f.H[i], f.H[i + 1], f.Hprime[i], right};
}

}  // namespace

double ValueFunctionH::value(double at) const {
    if (x.empty()) fail(ErrorKind::range, "empty value function");
    if (at < x.front()) fail(ErrorKind::range, "value function evaluated below its grid");
    if (at >= x.back()) return H.back();
    std::size_t i = locate(x, at);
    if (at == x[i]) return H[i];
    return piece(*this, i).value(at);
}

double ValueFunctionH::derivative(double at) const {
    if (x.empty()) fail(ErrorKind::range, "empty value function");
    if (at < x.front()) fail(ErrorKind::range, "value function evaluated below its grid");
    if (at >= x.back()) return Hprime.back();
    std::size_t i = locate(x, at);
    if (at == x[i]) return Hprime[i];
    return piece(*this, i).slope(at);
}

ValueFunctionH meilijson_H(const RewardSpec& reward, double c, double x0, const SolverGrid& grid) {
    if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::domain, "meilijson_H needs a finite constant cost c > 0");
    if (!(grid.s_min < x0)) fail(ErrorKind::argument, "meilijson_H needs s_min < x0");
    if (!constant_from(reward, x0, std::max(10.0, grid.s_max - x0)))
        fail(ErrorKind::unsupported, "reward is not constant on [x0, inf); the value function has no anchor");

    // k = H - phi, integrated backward: dk/dx = sqrt(4 c k) - phi'(x).
    std::vector<double> xs, ks;
    std::vector<BoundaryJump> djumps;
    auto push = [&](double x, double k) {
        if (!xs.empty() && x >= xs.back()) return;
        xs.push_back(x);
        ks.push_back(std::max(k, 0.0));
    };

    std::vector<double> stops;
    for (double q : reward.kink_points())
        if (q > grid.s_min && q < x0) stops.push_back(q);
    std::sort(stops.begin(), stops.end(), std::greater<>());

    const double step = grid.max_step > 0.0 ? grid.max_step : (grid.s_max - grid.s_min) / 2000.0;
    auto rhs = [&](double x, double k) { return std::sqrt(4.0 * c * std::max(k, 0.0)) - reward.derivative(x); };
    OdeOptions opts;
    opts.rtol = grid.rtol;
    opts.atol = grid.atol;
    opts.h_max = step;

    double x = x0;
    double k = 0.0;
    push(x, k);
    std::size_t next_stop = 0;
    while (x > grid.s_min) {
        // A jump of phi at x: H is continuous, so k gains the jump size on the left.
        for (const auto& j : reward.jumps()) {
            if (j.at == x) {
                double before = std::sqrt(4.0 * c * k);
                k += j.size;
                djumps.push_back({x, std::sqrt(4.0 * c * k), before});
            }
        }
        double target = next_stop < stops.size() ? stops[next_stop++] : grid.s_min;
        // The recorded point at x keeps the right-hand value; the left value lives in djumps.
        const double top = std::nextafter(x, -kInf);
        auto seg_rhs = [&, top](double xv, double kv) { return rhs(std::min(xv, top), kv); };
        OdeStop st = integrate_ode(seg_rhs, x, k, target, opts, [&](double xv, double kv) { push(xv, kv); });
        x = st.s;
        k = std::max(st.y, 0.0);
    }

    ValueFunctionH out;
    out.x0 = x0;
    for (std::size_t i = xs.size(); i-- > 0;) {
        double xv = xs[i];
        double kv = ks[i];
        out.x.push_back(xv);
        out.H.push_back(kv + reward.value(xv));
        out.Hprime.push_back(std::sqrt(4.0 * c * kv));
    }
    // Right-hand values at jump points: k recorded there is the right value already.
    std::reverse(djumps.begin(), djumps.end());
    out.derivative_jumps = std::move(djumps);
    if (grid.s_max > x0) {
        out.x.push_back(grid.s_max);
        out.H.push_back(reward.value(grid.s_max));
        out.Hprime.push_back(0.0);
    }
    return out;
}

Boundary boundary_from_H(const ValueFunctionH& H, double c) {
    if (!(c > 0.0)) fail(ErrorKind::domain, "boundary_from_H needs c > 0");
    std::vector<double> s, g;
    for (std::size_t i = 0; i < H.x.size() && H.x[i] <= H.x0; ++i) {
        s.push_back(H.x[i]);
        g.push_back(std::min(H.x[i] - H.Hprime[i] / (2.0 * c), H.x[i]));
    }
    std::vector<BoundaryJump> jumps;
    for (const auto& j : H.derivative_jumps) jumps.push_back({j.s, j.s - j.left / (2.0 * c), j.s - j.right / (2.0 * c)});
    return Boundary(std::move(s), std::move(g), std::move(jumps), -kInf, -kInf, H.x0);
}

}  // namespace maxstop
