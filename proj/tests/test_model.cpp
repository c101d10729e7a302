#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "animfa/model.hpp"
#include "oracles.hpp"

using namespace animfa;

TEST_CASE("nondimensionalization divides by the curing rate") {
    const auto a = nondimensionalize(RawRates(2.0, 1.0, 1.0, 1.0));
    CHECK(a.tau == 2.0);
    CHECK(a.omega == 1.0);
    CHECK(a.zeta == 1.0);
    CHECK(a.xi == 1.0);

    const auto b = nondimensionalize(RawRates(3.0, 2.0, 4.0, 2.0));
    CHECK(b.tau == 1.5);
    CHECK(b.omega == 2.0);
    CHECK(b.zeta == 2.0);
    CHECK(b.xi == 1.0);

    const auto c = nondimensionalize(RawRates(0.8, 1.0, 1.0, 1.0));
    CHECK(c.tau == 0.8);
    CHECK(c.omega == 1.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(RawRates(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RawRates(1.0, -1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, 2.0, 1.0, 1.0), std::invalid_argument);  // omega != zeta/xi
    CHECK_NOTHROW(ModelParams(1.0, 2.0, 2.0, 1.0));
    const auto p = ModelParams::from_omega(3.0, 0.5);
    CHECK(p.zeta == 0.5);
    CHECK(p.xi == 1.0);
    CHECK(p.omega == 0.5);
}

TEST_CASE("state clamps boundary-grazing values and rejects the rest") {
    CHECK(State(-1e-13, 0.5).y() == 0.0);
    CHECK(State(1.0 + 1e-13, 0.5).y() == 1.0);
    CHECK(State(0.5, -1e-13).z() == 0.0);
    CHECK_THROWS_AS(State(-1e-11, 0.5), std::domain_error);
    CHECK_THROWS_AS(State(0.5, 1.5), std::domain_error);
    CHECK(State(0.25, 0.75).y() == 0.25);
}

TEST_CASE("vector field boundary behaviour") {
    const auto models = {BuiltinModel::rlad, BuiltinModel::linear_break, BuiltinModel::asis,
                         BuiltinModel::aid};
    const auto p = ModelParams::from_omega(2.5, 1.3);
    for (const auto m : models) {
        const auto fr = builtin(m);
        for (int i = 0; i <= 20; ++i) {
            const double v = i / 20.0;
            // prevalence axis is invariant, y = 1 always decays
            CHECK(vector_field(p, fr, 0.0, v)[0] == 0.0);
            CHECK(vector_field(p, fr, 1.0, v)[0] == -1.0);
            // link density cannot leave [0,1]
            CHECK(vector_field(p, fr, v, 0.0)[1] >= 0.0);
            CHECK(vector_field(p, fr, v, 1.0)[1] <= 0.0);
        }
    }
}

TEST_CASE("vector field examples") {
    const auto aid = builtin(BuiltinModel::aid);
    const auto p = ModelParams(2.0, 1.5, 1.0);
    // at z = 1 the creation term vanishes; fbr(0.5) = 0.25
    const auto f = vector_field(p, aid, State(0.5, 1.0));
    CHECK(f[1] == Catch::Approx(-p.zeta * 0.25).margin(1e-15));
}

TEST_CASE("vector field is a pure function") {
    const auto fr = builtin(BuiltinModel::asis);
    const auto p = ModelParams(3.7, 0.4, 1.1);
    auto gen = oracles::rng(17);
    for (int k = 0; k < 50; ++k) {
        const double y = oracles::uniform(gen, 0.0, 1.0);
        const double z = oracles::uniform(gen, 0.0, 1.0);
        const auto a = vector_field(p, fr, y, z);
        const auto b = vector_field(p, fr, y, z);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}
