#include <cmath>

#include "doctest.h"
#include "maxstop/diffusion.hpp"
#include "maxstop/error.hpp"
#include "maxstop/reward_cost.hpp"
#include "oracles.hpp"

using namespace maxstop;

namespace {

DiffusionSpec ou() { return DiffusionSpec::ornstein_uhlenbeck(1.0, 0.0, 1.0, 0.0); }

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

}  // namespace

TEST_CASE("scale function examples") {
    auto bm = DiffusionSpec::brownian();
    auto v = scale(bm, 3.5);
    CHECK(v.L == doctest::Approx(3.5));
    CHECK(v.Lprime == doctest::Approx(1.0));

    auto o = ou();
    auto at_ref = scale(o, 0.0);
    CHECK(at_ref.L == doctest::Approx(0.0));
    CHECK(at_ref.Lprime > 0.0);
    auto one = scale(o, 1.0);
    CHECK(one.Lprime == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    double oracle_L = oracle::simpson([](double u) { return std::exp(u * u); }, 0.0, 1.0);
    CHECK(one.L == doctest::Approx(oracle_L).epsilon(1e-8));
    CHECK(one.L == doctest::Approx(1.4627).epsilon(1e-4));

    // expression-defined OU agrees with the preset
    DiffusionSpec e([](double x) { return -x; }, [](double) { return 1.0; }, -kInf, kInf, BoundaryKind::natural,
                    BoundaryKind::natural, 0.0);
    CHECK(scale_value(e, 1.0) == doctest::Approx(oracle_L).epsilon(1e-8));
}

TEST_CASE("scale outside the state space is a domain error") {
    auto r = DiffusionSpec::reflected_brownian();
    CHECK(kind_of([&] { scale(r, -1.0); }) == ErrorKind::domain);
    CHECK(kind_of([&] { speed_density(r, -0.5); }) == ErrorKind::domain);
}

TEST_CASE("speed density examples") {
    CHECK(speed_density(DiffusionSpec::brownian(), 0.0) == doctest::Approx(2.0));
    CHECK(speed_density(DiffusionSpec::brownian(2.0), 1.7) == doctest::Approx(0.5));
    CHECK(speed_density(ou(), 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("scale and speed are monotone and positive on a grid") {
    for (const auto& d : {DiffusionSpec::brownian(), ou(), DiffusionSpec::constant_coefficients(0.7, 1.3),
                          DiffusionSpec::ornstein_uhlenbeck(2.0, 1.0, 0.5, 0.3)}) {
        double prev = -kInf;
        for (int i = 0; i <= 40; ++i) {
            double x = -2.0 + 0.1 * i;
            auto v = scale(d, x);
            CHECK(v.L > prev);
            CHECK(v.Lprime > 0.0);
            CHECK(speed_density(d, x) > 0.0);
            prev = v.L;
        }
    }
}

TEST_CASE("exit probabilities") {
    auto bm = DiffusionSpec::brownian();
    CHECK(exit_up_probability(bm, 0.0, 1.0, 0.5) == doctest::Approx(0.5));
    CHECK(exit_up_probability(bm, 0.0, 1.0, 1e-9) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(exit_up_probability(ou(), -1.0, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
    auto drifted = DiffusionSpec::constant_coefficients(0.5, 1.0);
    // L(x) = (1 - e^{-x}) for 2 mu / sigma^2 = 1
    auto L = [](double x) { return 1.0 - std::exp(-x); };
    double up = exit_up_probability(drifted, -1.0, 2.0, 0.3);
    CHECK(up == doctest::Approx((L(0.3) - L(-1.0)) / (L(2.0) - L(-1.0))).epsilon(1e-10));
    CHECK(up + (1.0 - up) == doctest::Approx(1.0).epsilon(1e-10));
    double prev = 0.0;
    for (int i = 1; i < 20; ++i) {
        double p = exit_up_probability(ou(), -1.0, 1.0, -1.0 + 0.1 * i);
        CHECK(p > prev);
        prev = p;
    }
    CHECK(kind_of([&] { exit_up_probability(bm, 1.0, 0.0, 0.5); }) == ErrorKind::argument);
    CHECK(kind_of([&] { exit_up_probability(bm, 0.0, 1.0, 2.0); }) == ErrorKind::argument);
}

TEST_CASE("expected cost to exit") {
    auto bm = DiffusionSpec::brownian();
    auto one = CostSpec::constant(1.0);
    CHECK(expected_cost_to_exit(bm, one, 0.0, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(expected_cost_to_exit(bm, one, 0.0, 2.0, 0.5) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(expected_cost_to_exit(bm, CostSpec::constant(0.0), 0.0, 2.0, 0.5) == 0.0);

    // additivity in the cost
    auto c1 = CostSpec::power(1.0, 2.0);
    CostSpec c2([](double x) { return 1.0 + std::sin(x) * std::sin(x); });
    auto o = ou();
    double lhs = expected_cost_to_exit(o, c1.plus(c2), -1.0, 1.5, 0.2);
    double rhs = expected_cost_to_exit(o, c1, -1.0, 1.5, 0.2) + expected_cost_to_exit(o, c2, -1.0, 1.5, 0.2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));

    // Green-function oracle for the OU case
    auto Lf = [&](double x) { return oracle::simpson([](double u) { return std::exp(u * u); }, 0.0, x, 4000); };
    double a = -1.0, b = 1.5, x = 0.2;
    double La = Lf(a), Lb = Lf(b), Lx = Lf(x);
    auto green = [&](double y) {
        double Ly = Lf(y);
        double lo = std::min(Lx, Ly), hi = std::max(Lx, Ly);
        return (lo - La) * (Lb - hi) / (Lb - La) * c1(y) * 2.0 * std::exp(-y * y);
    };
    CHECK(expected_cost_to_exit(o, c1, a, b, x) == doctest::Approx(oracle::simpson(green, a, b, 400)).epsilon(1e-6));
}

TEST_CASE("infinite cost inside the interval diverges") {
    CostSpec c([](double) { return 1.0; }, {}, {}, {0.5, kInf});
    CHECK(kind_of([&] { expected_cost_to_exit(DiffusionSpec::brownian(), c, 0.0, 1.0, 0.7); }) == ErrorKind::divergence);
}

TEST_CASE("x_ref only shifts the scale function") {
    auto d0 = DiffusionSpec::constant_coefficients(0.4, 1.2, 0.0);
    auto d1 = d0.with_x_ref(1.7);
    for (double x : {-1.0, 0.3, 2.0}) {
        CHECK(exit_up_probability(d0, -2.0, 3.0, x) == doctest::Approx(exit_up_probability(d1, -2.0, 3.0, x)).epsilon(1e-10));
        CHECK(expected_cost_to_exit(d0, CostSpec::constant(1.0), -2.0, 3.0, x) ==
              doctest::Approx(expected_cost_to_exit(d1, CostSpec::constant(1.0), -2.0, 3.0, x)).epsilon(1e-9));
    }
}
