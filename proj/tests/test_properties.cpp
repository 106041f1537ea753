#include "battery.hpp"
#include "doctest.h"

using namespace battery;

TEST_CASE("maximality perturbation") {
    auto lin = maximality(linear_problem(), 0.0, 10.0, {2.0, 4.0, 6.0});
    CHECK_MESSAGE(lin.pass, lin.detail);
    auto ou = maximality(ou_problem(), 0.0, 6.0, {1.0, 2.0, 3.0});
    CHECK_MESSAGE(ou.pass, ou.detail);
    auto pw = maximality(power_problem(), 0.5, 10.0, {2.0, 4.0, 6.0});
    CHECK_MESSAGE(pw.pass, pw.detail);
}

TEST_CASE("ode residual on the solver grid") {
    for (auto [name, p, lo, hi] : {std::tuple{"linear", linear_problem(), 0.0, 10.0},
                                   std::tuple{"ou", ou_problem(), 0.0, 6.0},
                                   std::tuple{"power", power_problem(), 0.5, 10.0}}) {
        CAPTURE(name);
        auto r = residual(p, lo, hi);
        CHECK_MESSAGE(r.pass, r.detail);
    }
}

TEST_CASE("constancy matching") {
    auto r = constancy();
    CHECK_MESSAGE(r.pass, r.detail);
}

TEST_CASE("zero-cost range avoidance") {
    auto r = zero_cost();
    CHECK_MESSAGE(r.pass, r.detail);
}

TEST_CASE("tail equivalence") {
    auto r = tail_equivalence();
    CHECK_MESSAGE(r.pass, r.detail);
}

TEST_CASE("boundary shape") {
    for (auto [name, p, lo, hi] : {std::tuple{"linear", linear_problem(), 0.0, 10.0},
                                   std::tuple{"ou", ou_problem(), 0.0, 6.0},
                                   std::tuple{"power", power_problem(), 0.5, 10.0}}) {
        CAPTURE(name);
        auto r = shape(p, lo, hi);
        CHECK_MESSAGE(r.pass, r.detail);
    }
}
