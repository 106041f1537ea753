#include <cmath>

#include "doctest.h"
#include "maxstop/embedding.hpp"
#include "maxstop/error.hpp"
#include "oracles.hpp"

using namespace maxstop;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::numeric;
}

TargetMeasure two_atoms() { return TargetMeasure::atomic({{-1.0, 0.5}, {1.0, 0.5}}); }

/// Half the mass uniform on [-1, 1], half an atom at 0.
TargetMeasure uniform_plus_atom() {
    return TargetMeasure([](double x) { return std::abs(x) <= 1.0 ? 0.25 : 0.0; }, -1.0, 1.0, {{0.0, 0.5}});
}

}  // namespace

TEST_CASE("barycentre examples") {
    CHECK(barycentre(two_atoms(), 0.0) == doctest::Approx(1.0));
    auto u = TargetMeasure::uniform(-1.0, 1.0);
    CHECK(barycentre(u, -1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(barycentre(u, -3.0) == doctest::Approx(0.0).epsilon(1e-12));
    auto ex = TargetMeasure::shifted_exponential();
    double tail = oracle::simpson([](double y) { return std::exp(-(y + 1.0)); }, 0.7, 60.0, 200000);
    double first = oracle::simpson([](double y) { return y * std::exp(-(y + 1.0)); }, 0.7, 60.0, 200000);
    CHECK(barycentre(ex, 0.7) == doctest::Approx(first / tail).epsilon(1e-8));
    CHECK(barycentre(ex, 0.7) == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(kind_of([&] { barycentre(u, 2.0); }) == ErrorKind::range);
}

TEST_CASE("barycentre is monotone and above the identity") {
    for (const auto& mu : {TargetMeasure::uniform(-1.0, 1.0), TargetMeasure::shifted_exponential(),
                           TargetMeasure::truncated_gaussian(0.0, 1.0, -2.0, 2.0), uniform_plus_atom()}) {
        double prev = -kInf;
        for (int i = 0; i < 100; ++i) {
            double x = mu.lo() + (std::min(mu.hi(), 5.0) - mu.lo()) * i / 100.0;
            double p = barycentre(mu, x);
            CHECK(p >= x - 1e-12);
            CHECK(p >= prev - 1e-12);
            prev = p;
        }
    }
    auto g = TargetMeasure::truncated_gaussian(0.0, 1.0, -2.0, 2.0);
    CHECK(barycentre(g, 2.0 - 1e-6) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("inverse barycentre examples") {
    auto ex = TargetMeasure::shifted_exponential();
    CHECK(inverse_barycentre(ex, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(inverse_barycentre(two_atoms(), 0.5) == doctest::Approx(-1.0));
    auto u = TargetMeasure::uniform(-1.0, 1.0);
    CHECK(inverse_barycentre(u, 0.0) == doctest::Approx(-1.0));
    CHECK(kind_of([&] { inverse_barycentre(u, 1.5); }) == ErrorKind::range);
    CHECK(kind_of([&] { inverse_barycentre(u, -0.1); }) == ErrorKind::range);
}

TEST_CASE("round trip at density points") {
    for (const auto& mu : {TargetMeasure::shifted_exponential(), TargetMeasure::truncated_gaussian(0.0, 1.0, -2.0, 2.0),
                           TargetMeasure::uniform(-1.0, 1.0)}) {
        for (double x : {-0.5, 0.0, 0.4, 0.9}) CHECK(inverse_barycentre(mu, barycentre(mu, x)) == doctest::Approx(x).epsilon(1e-8));
    }
}

TEST_CASE("inverse barycentre solves its differential equation") {
    auto mu = TargetMeasure::truncated_gaussian(0.0, 1.0, -2.0, 2.0);
    double worst = 0.0;
    const double h = 1e-4;
    for (double s : {0.2, 0.5, 0.8, 1.1, 1.4}) {
        double num = (inverse_barycentre(mu, s + h) - inverse_barycentre(mu, s - h)) / (2.0 * h);
        double x = inverse_barycentre(mu, s);
        double rhs = mu.tail(x) / (mu.density(x) * (s - x));
        worst = std::max(worst, std::abs(num - rhs));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("atom gap formula") {
    auto mu = uniform_plus_atom();
    CHECK(mu.total_mass() == doctest::Approx(1.0));
    CHECK(std::abs(mu.mean()) < 1e-12);
    double left = barycentre(mu, 0.0);
    double right = barycentre_right(mu, 0.0);
    CHECK(left == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(right == doctest::Approx(0.5).epsilon(1e-10));
    double formula = 0.5 * (left - 0.0) / mu.tail_open(0.0);
    CHECK(right - left == doctest::Approx(formula).epsilon(1e-8));
    // flats of the inverse at the gap
    CHECK(std::abs(inverse_barycentre(mu, 0.3)) < 1e-9);
}

TEST_CASE("hazard cost") {
    auto ex = TargetMeasure::shifted_exponential();
    for (double x : {-1.0, 0.0, 2.5, 10.0}) CHECK(hazard_cost(ex, x) == doctest::Approx(0.5).epsilon(1e-9));
    auto u = TargetMeasure::uniform(-1.0, 1.0);
    CHECK(hazard_cost(u, 0.0) == doctest::Approx(0.5));
    CHECK(hazard_cost(u, 0.5) == doctest::Approx(1.0));
    CHECK(kind_of([&] { hazard_cost(uniform_plus_atom(), 0.0); }) == ErrorKind::domain);
}

TEST_CASE("embedding pairs") {
    auto [r, c] = embedding_pair(TargetMeasure::shifted_exponential());
    for (double s : {0.0, 0.5, 3.0}) CHECK(r.value(s) == doctest::Approx(s).epsilon(1e-9));
    CHECK(c(0.0) == doctest::Approx(0.5));
    CHECK(std::isinf(c(-1.5)));

    auto [ru, cu] = embedding_pair(TargetMeasure::uniform(-1.0, 1.0));
    CHECK(ru.value(0.5) == doctest::Approx(0.5));
    CHECK(ru.value(1.0) == doctest::Approx(1.0));
    CHECK(ru.value(3.0) == doctest::Approx(1.0));
    CHECK(ru.derivative(2.0) == 0.0);
    CHECK(cu(0.5) == doctest::Approx(1.0));
    CHECK(cu(-0.5) == doctest::Approx(1.0 / 3.0));
    CHECK(std::isinf(cu(1.5)));
    CHECK(std::isinf(cu(-1.5)));

    CHECK(kind_of([&] { embedding_pair(two_atoms()); }) == ErrorKind::unsupported);
}

TEST_CASE("validate_pair") {
    auto ex = TargetMeasure::shifted_exponential();
    auto [r, c] = embedding_pair(ex);
    auto ok = validate_pair(ex, RewardSpec::identity(), c);
    CHECK(ok.cond_pair_max_violation < 1e-8);
    CHECK(ok.cond_pair_phi_finite);
    auto bad = validate_pair(ex, RewardSpec::identity(), c.scaled(2.0));
    CHECK(bad.cond_pair_max_violation == doctest::Approx(1.0).epsilon(1e-6));
    auto u = TargetMeasure::uniform(-1.0, 1.0);
    auto [ru, cu] = embedding_pair(u);
    auto rep = validate_pair(u, ru, cu);
    CHECK(rep.cond_pair_max_violation < 1e-8);
    // int phi(Psi(x)) dmu = int (x + 1)/2 dx / 2 over [-1, 1] = 1/2
    CHECK(rep.cond_pair_phi_integral == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("L log L check") {
    CHECK(loglogl_check(TargetMeasure::uniform(-1.0, 1.0)));
    CHECK(loglogl_check(TargetMeasure::shifted_exponential()));
    auto f = [](double x) { return x >= M_E ? 1.0 / (x * x * std::log(x) * std::log(x)) : 0.0; };
    TargetMeasure bare(f, M_E, kInf);
    double p = 1.0 - bare.density_mass();
    // an atom on the left balances the mean of the density part
    double at = -bare.mean() / p;
    TargetMeasure heavy(f, at, kInf, {{at, p}}, {}, {{at, M_E}});
    CHECK(std::abs(heavy.mean()) < 1e-6);
    CHECK_FALSE(loglogl_check(heavy));
}

TEST_CASE("meilijson reward") {
    auto ex = TargetMeasure::shifted_exponential();
    auto r = meilijson_reward(ex, 0.5, 10.0);
    // flat up to 0, slope 1 after
    CHECK(std::abs(r.value(-0.5)) < 1e-9);
    for (double x : {0.5, 1.0, 3.0}) CHECK(r.derivative(x) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.value(2.0) - r.value(1.0) == doctest::Approx(1.0).epsilon(1e-6));

    auto two = meilijson_reward(two_atoms(), 0.5);
    // phi = H - (x + 1)^2 / 2 with H' = x + 1 on (-1, 1]: flat between the atoms
    CHECK(two.value(0.0) == doctest::Approx(two.value(0.9)).epsilon(1e-9));
    CHECK(two.value(1.0) > two.value(0.9));
    StoppingProblem p(DiffusionSpec::brownian(), two, CostSpec::constant(0.5));
    SolverGrid grid;
    grid.s_min = 0.0;
    grid.s_max = 1.0;
    auto g = solve_maximal_boundary(p, grid);
    CHECK(g(0.5) == doctest::Approx(inverse_barycentre(two_atoms(), 0.5)).epsilon(1e-6));

    auto point = meilijson_reward(TargetMeasure::atomic({{0.0, 1.0}}), 0.5);
    CHECK(point.value(-1.0) == doctest::Approx(point.value(2.0)));
}

TEST_CASE("solving the embedding pair recovers the inverse barycentre") {
    for (auto [name, mu, hi] : {std::tuple{"uniform", TargetMeasure::uniform(-1.0, 1.0), 1.0},
                                std::tuple{"exponential", TargetMeasure::shifted_exponential(), 8.0},
                                std::tuple{"gaussian", TargetMeasure::truncated_gaussian(0.0, 1.0, -2.0, 2.0), 2.0}}) {
        CAPTURE(name);
        auto [r, c] = embedding_pair(mu);
        StoppingProblem p(DiffusionSpec::brownian(), r, c);
        SolverGrid grid;
        grid.s_min = 0.0;
        grid.s_max = hi;
        auto g = solve_maximal_boundary(p, grid);
        double worst = 0.0;
        for (int i = 0; i < 400; ++i) {
            double s = hi * i / 400.0;
            worst = std::max(worst, std::abs(g(s) - inverse_barycentre(mu, s)));
        }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("Azema-Yor boundary") {
    auto g = azema_yor_boundary(TargetMeasure::shifted_exponential(), 20.0);
    for (double s : {0.0, 1.0, 5.0, 19.0}) CHECK(g(s) == doctest::Approx(s - 1.0).epsilon(1e-6));
}

TEST_CASE("measure checks") {
    CHECK(TargetMeasure::uniform(-1.0, 1.0).check().empty());
    CHECK_FALSE(TargetMeasure::uniform(0.0, 1.0).check().empty());
    CHECK(TargetMeasure::piecewise_polynomial({-1.0, 0.0, 1.0}, {{0.0, 1.0}, {1.0, -1.0}}).check().empty());
}
