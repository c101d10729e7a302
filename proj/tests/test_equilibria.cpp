#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "animfa/equilibria.hpp"
#include "oracles.hpp"

using namespace animfa;

namespace {

const BuiltinModel kModels[] = {BuiltinModel::rlad, BuiltinModel::linear_break,
                                BuiltinModel::asis, BuiltinModel::aid};

}  // namespace

TEST_CASE("disease-free equilibrium link density") {
    CHECK(dfe(ModelParams::from_omega(2.0, 1.0), builtin(BuiltinModel::linear_break)).z == 1.0);
    CHECK(dfe(ModelParams::from_omega(2.0, 1.0), builtin(BuiltinModel::aid)).z == 0.0);
    CHECK(dfe(ModelParams::from_omega(2.0, 1.0), builtin(BuiltinModel::rlad)).z == 0.5);

    // both responses vanish at y = 0: any z is stationary
    const auto eq = dfe(ModelParams::from_omega(2.0, 1.0), from_polynomial({0, 1}, {0, 1}));
    CHECK(eq.z_is_free);
    CHECK(eq.y == 0.0);
}

TEST_CASE("h function closed values") {
    const auto rlad = builtin(BuiltinModel::rlad);
    const auto lin = builtin(BuiltinModel::linear_break);
    CHECK(h_function(ModelParams::from_omega(4.0, 1.0), rlad, 0.5) == Catch::Approx(0.0).margin(1e-14));
    CHECK(std::fabs(h_function(ModelParams::from_omega(5.4, 1.0), lin, 0.6875)) < 1e-12);
    // at y = 1 the tau term vanishes
    for (const auto m : kModels) {
        const auto fr = builtin(m);
        const auto p = ModelParams::from_omega(3.3, 0.7);
        CHECK(h_function(p, fr, 1.0) ==
              Catch::Approx(p.omega * fr.fbr(1.0) + fr.fcr(1.0)).margin(1e-15));
    }
}

TEST_CASE("endemic equilibria of the worked examples") {
    SECTION("linear_break tau=5.4") {
        const auto eqs = endemic_equilibria(ModelParams::from_omega(5.4, 1.0),
                                            builtin(BuiltinModel::linear_break));
        REQUIRE(eqs.size() == 1);
        CHECK(eqs[0].y == Catch::Approx(0.6875).margin(1e-10));
        CHECK(eqs[0].z == Catch::Approx(6.4 / 10.8).margin(1e-10));
    }
    SECTION("asis tau=2") {
        // closed form: y = 1 - (1-2w)/(2t) - sqrt(((1-2w)/(2t))^2 + 2w/t)
        const double s = (1.0 - 2.0) / 4.0;
        const double y_star = 1.0 - s - std::sqrt(s * s + 1.0);
        const auto eqs =
            endemic_equilibria(ModelParams::from_omega(2.0, 1.0), builtin(BuiltinModel::asis));
        REQUIRE(eqs.size() == 1);
        CHECK(eqs[0].y == Catch::Approx(y_star).margin(1e-10));
        CHECK(eqs[0].y == Catch::Approx(0.219224).margin(1e-6));
        CHECK(eqs[0].z == Catch::Approx(1.0 / (2.0 * (1.0 - y_star))).margin(1e-10));
        CHECK(eqs[0].z == Catch::Approx(0.640388).margin(1e-6));
    }
    SECTION("aid tau=3 is bistable") {
        const auto eqs =
            endemic_equilibria(ModelParams::from_omega(3.0, 1.0), builtin(BuiltinModel::aid));
        REQUIRE(eqs.size() == 2);
        CHECK(eqs[0].y == Catch::Approx(1.0 / 3.0).margin(1e-10));
        CHECK(eqs[0].z == Catch::Approx(0.5).margin(1e-10));
        CHECK(eqs[1].y == Catch::Approx(0.5).margin(1e-10));
        CHECK(eqs[1].z == Catch::Approx(2.0 / 3.0).margin(1e-10));
    }
    SECTION("rlad below threshold has none") {
        CHECK(endemic_equilibria(ModelParams::from_omega(0.8, 1.0), builtin(BuiltinModel::rlad))
                  .empty());
    }
}

TEST_CASE("basic reproduction number") {
    CHECK(r0(ModelParams::from_omega(4.0, 1.0), builtin(BuiltinModel::rlad)).value() ==
          Catch::Approx(2.0).margin(1e-12));
    CHECK(r0(ModelParams::from_omega(5.4, 1.0), builtin(BuiltinModel::linear_break)).value() ==
          Catch::Approx(5.4).margin(1e-12));
    CHECK_FALSE(r0(ModelParams::from_omega(7.0, 2.0), builtin(BuiltinModel::aid)).has_value());

    auto gen = oracles::rng(2024);
    for (int i = 0; i < 100; ++i) {
        const double tau = oracles::uniform(gen, 0.1, 10.0);
        const double omega = oracles::uniform(gen, 0.1, 10.0);
        const auto p = ModelParams::from_omega(tau, omega);
        CHECK(r0(p, builtin(BuiltinModel::rlad)).value() ==
              Catch::Approx(tau / (1.0 + omega)).margin(1e-12));
        CHECK(r0(p, builtin(BuiltinModel::linear_break)).value() ==
              Catch::Approx(tau).margin(1e-12));
    }
}

TEST_CASE("aid reproduction number") {
    CHECK(r0_aid(ModelParams::from_omega(3.0, 1.0)) ==
          Catch::Approx(6.0 / (3.0 + 2.0 * std::sqrt(2.0))).margin(1e-14));
    CHECK(r0_aid(ModelParams::from_omega(3.0, 1.0)) == Catch::Approx(1.0294).margin(1e-4));
    const double tau_star = (3.0 + 2.0 * std::sqrt(2.0)) / 2.0;
    CHECK(r0_aid(ModelParams::from_omega(tau_star, 1.0)) == Catch::Approx(1.0).margin(1e-12));
    // omega -> 0 limit tends to tau
    CHECK(r0_aid(ModelParams::from_omega(1.0, 1e-10)) == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("closed-form equilibria") {
    const auto rlad = closed_form_ee(BuiltinModel::rlad, ModelParams::from_omega(4.0, 1.0));
    REQUIRE(rlad.size() == 1);
    CHECK(rlad[0].y == Catch::Approx(0.5).margin(1e-14));
    CHECK(rlad[0].z == Catch::Approx(0.5).margin(1e-14));

    const auto aid = closed_form_ee(BuiltinModel::aid, ModelParams::from_omega(3.0, 1.0));
    REQUIRE(aid.size() == 2);
    CHECK(aid[0].y == Catch::Approx(1.0 / 3.0).margin(1e-14));
    CHECK(aid[1].y == Catch::Approx(0.5).margin(1e-14));

    CHECK(closed_form_ee(BuiltinModel::aid, ModelParams::from_omega(1.0, 1.0)).empty());
}

TEST_CASE("numeric root finding matches the closed forms") {
    auto gen = oracles::rng(99);
    for (const auto m : kModels) {
        const auto fr = builtin(m);
        for (int i = 0; i < 200; ++i) {
            const double tau = oracles::uniform(gen, 0.1, 10.0);
            const double omega = oracles::uniform(gen, 0.1, 10.0);
            const auto p = ModelParams::from_omega(tau, omega);
            const auto numeric = endemic_equilibria(p, fr);
            const auto closed = closed_form_ee(m, p);
            REQUIRE(numeric.size() == closed.size());
            for (std::size_t k = 0; k < numeric.size(); ++k) {
                CHECK(numeric[k].y == Catch::Approx(closed[k].y).margin(1e-8));
                CHECK(numeric[k].z == Catch::Approx(closed[k].z).margin(1e-8));
                // feasibility and interiority
                CHECK(numeric[k].y < 1.0 - 1e-9);
                CHECK(p.tau * (1.0 - numeric[k].y) >= 1.0 - 1e-10);
                CHECK(numeric[k].z > 0.0);
                CHECK(numeric[k].z <= 1.0);
            }
        }
    }
}

TEST_CASE("an endemic state exists somewhere for every example") {
    const auto p = ModelParams::from_omega(10.0, 0.1);
    for (const auto m : kModels) CHECK_FALSE(endemic_equilibria(p, builtin(m)).empty());
}

TEST_CASE("threshold coincidence of EE birth and R0 = 1") {
    SECTION("rlad, omega = 1, threshold at tau = 2") {
        const auto fr = builtin(BuiltinModel::rlad);
        CHECK(endemic_equilibria(ModelParams::from_omega(2.0 * (1.0 - 1e-6), 1.0), fr).empty());
        const auto above = endemic_equilibria(ModelParams::from_omega(2.0 * (1.0 + 1e-6), 1.0), fr);
        REQUIRE(above.size() == 1);
        CHECK(above[0].y < 1e-5);  // the newborn EE sits next to the DFE
        for (const auto& eq : endemic_equilibria(ModelParams::from_omega(2.0, 1.0), fr))
            CHECK(eq.y < 1e-5);
    }
    SECTION("linear_break, threshold at tau = 1") {
        const auto fr = builtin(BuiltinModel::linear_break);
        CHECK(endemic_equilibria(ModelParams::from_omega(1.0 - 1e-6, 1.0), fr).empty());
        const auto above = endemic_equilibria(ModelParams::from_omega(1.0 + 1e-6, 1.0), fr);
        REQUIRE(above.size() == 1);
        CHECK(above[0].y < 1e-5);
    }
}

TEST_CASE("reported equilibria are fixed points, also for custom responses") {
    auto gen = oracles::rng(2718);
    auto random_poly = [&gen] {
        // non-negative on [0,1]: random degree <= 3 with non-negative coefficients
        std::vector<double> c(1 + static_cast<std::size_t>(oracles::uniform(gen, 0.0, 4.0)));
        for (auto& v : c) v = oracles::uniform(gen, 0.0, 2.0);
        return c;
    };
    int pairs_done = 0;
    while (pairs_done < 40) {
        const auto fbr = random_poly();
        const auto fcr = random_poly();
        FunctionalResponsePair fr = builtin(BuiltinModel::rlad);
        try {
            fr = from_polynomial(fbr, fcr);
        } catch (const BothZeroError&) {
            continue;
        }
        ++pairs_done;
        const auto p = ModelParams::from_omega(oracles::uniform(gen, 0.1, 10.0),
                                               oracles::uniform(gen, 0.1, 10.0));
        const auto d = dfe(p, fr);
        if (!d.z_is_free) {
            const auto f0 = vector_field(p, fr, 0.0, d.z);
            CHECK(std::fabs(f0[0]) < 1e-12);
            CHECK(std::fabs(f0[1]) < 1e-12);
        }
        double prev_y = 0.0;
        for (const auto& eq : endemic_equilibria(p, fr)) {
            CHECK(std::fabs(h_function(p, fr, eq.y)) < 1e-9);
            CHECK(eq.y > prev_y);
            prev_y = eq.y;
            CHECK(eq.z > 0.0);
            CHECK(eq.z <= 1.0);
            const auto f = vector_field(p, fr, eq.y, eq.z);
            CHECK(std::fabs(f[0]) < 1e-8);
            CHECK(std::fabs(f[1]) < 1e-8);
        }
    }
}

TEST_CASE("tangential root at the aid fold") {
    // double root where the discriminant vanishes: omega = 1, tau = (3+2*sqrt(2))/2
    const double tau_star = (3.0 + 2.0 * std::sqrt(2.0)) / 2.0;
    const auto fr = builtin(BuiltinModel::aid);

    const auto at_fold = endemic_equilibria(ModelParams::from_omega(tau_star, 1.0), fr);
    REQUIRE(at_fold.size() == 1);
    CHECK(at_fold[0].multiplicity == 2);
    const double y_star = (2.0 * tau_star - 1.0) / (4.0 * tau_star);
    CHECK(at_fold[0].y == Catch::Approx(y_star).margin(1e-4));

    // just past the fold the pair separates and is found as two simple roots
    const auto split = endemic_equilibria(ModelParams::from_omega(tau_star + 1e-4, 1.0), fr);
    REQUIRE(split.size() == 2);
    CHECK(split[0].multiplicity == 1);
    CHECK(split[1].multiplicity == 1);
}
