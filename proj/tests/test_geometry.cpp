#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "animfa/geometry.hpp"
#include "oracles.hpp"

using namespace animfa;

namespace {

double lyapunov_residual(const Mat2& P, const Mat2& J) {
    const Mat2 R = P * J + J.transpose() * P + Mat2::identity();
    return R.max_abs();
}

struct AidSetup {
    ModelParams p = ModelParams(3.0, 1.0, 1.0);
    FunctionalResponsePair fr = builtin(BuiltinModel::aid);
    Equilibrium dfe_eq = dfe(p, fr);
    std::vector<Equilibrium> ees = endemic_equilibria(p, fr);
};

std::optional<Equilibrium> settle(const ModelParams& p, const FunctionalResponsePair& fr,
                                  double y, double z,
                                  const std::vector<Equilibrium>& targets) {
    IntegratorConfig cfg;
    cfg.t_end = 1e4;
    cfg.rtol = 1e-11;  // below the convergence-detection noise floor
    cfg.atol = 1e-13;
    const auto traj = integrate(p, fr, State(y, z), cfg);
    return detect_convergence_target(traj, targets);
}

}  // namespace

TEST_CASE("lyapunov solve on closed-form cases") {
    const Mat2 J{-1.0, 0.0, 2.0, -1.0};
    const Mat2 P = solve_lyapunov_2x2(J);
    CHECK(P.m11 == Catch::Approx(1.5).margin(1e-12));
    CHECK(P.m12 == Catch::Approx(0.5).margin(1e-12));
    CHECK(P.m21 == Catch::Approx(0.5).margin(1e-12));
    CHECK(P.m22 == Catch::Approx(0.5).margin(1e-12));
    CHECK(lyapunov_residual(P, J) < 1e-10);

    const Mat2 P2 = solve_lyapunov_2x2(Mat2{-1.0, 0.0, 0.0, -1.0});
    CHECK(P2.m11 == Catch::Approx(0.5).margin(1e-14));
    CHECK(P2.m12 == Catch::Approx(0.0).margin(1e-14));
    CHECK(P2.m22 == Catch::Approx(0.5).margin(1e-14));

    CHECK_THROWS_AS(solve_lyapunov_2x2(Mat2{0.0, 1.0, -1.0, 0.0}), NotHurwitzError);
    CHECK_THROWS_AS(solve_lyapunov_2x2(Mat2{1.0, 0.0, 0.0, -1.0}), NotHurwitzError);
}

TEST_CASE("lyapunov solve on random Hurwitz matrices") {
    auto gen = oracles::rng(808);
    int done = 0;
    while (done < 25) {
        const Mat2 J{oracles::uniform(gen, -3, 3), oracles::uniform(gen, -3, 3),
                     oracles::uniform(gen, -3, 3), oracles::uniform(gen, -3, 3)};
        const auto eig = eigenvalues(J);
        if (!(eig[0].real() < -1e-3 && eig[1].real() < -1e-3)) continue;
        ++done;
        const Mat2 P = solve_lyapunov_2x2(J);
        CHECK(lyapunov_residual(P, J) < 1e-10);
        // symmetric positive definite
        CHECK(P.m12 == P.m21);
        CHECK(P.m11 > 0.0);
        CHECK(P.det() > 0.0);
    }
}

TEST_CASE("region of attraction around the aid disease-free state") {
    AidSetup s;
    const auto roa = estimate_roa(s.p, s.fr, s.dfe_eq);

    CHECK(roa.c_star > 0.0);
    CHECK(roa.P.m11 > 0.0);
    CHECK(roa.P.det() > 0.0);
    CHECK(lyapunov_residual(roa.P, jacobian(s.p, s.fr, State(0.0, 0.0))) < 1e-10);

    // the quadratic form is positive away from the centre
    auto gen = oracles::rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double y = oracles::uniform(gen, 0.0, 1.0);
        const double z = oracles::uniform(gen, 0.0, 1.0);
        if (std::hypot(y, z) < 1e-6) continue;
        CHECK(roa_level(roa, y, z) > 0.0);
    }

    // certified level and its shrunken version both pass the boundary test
    CHECK(roa_level_certified(s.p, s.fr, roa.P, roa.center, roa.c_star));
    CHECK(roa_level_certified(s.p, s.fr, roa.P, roa.center, roa.c_star / 2.0));

    // the sublevel set cannot reach past the saddle level
    CHECK(roa.c_star <= roa_level(roa, 1.0 / 3.0, 0.5));
}

TEST_CASE("certified regions are attracted to their centre") {
    AidSetup s;
    REQUIRE(s.ees.size() == 2);
    std::vector<Equilibrium> targets = s.ees;
    targets.push_back(s.dfe_eq);

    const auto roa_dfe = estimate_roa(s.p, s.fr, s.dfe_eq);
    const auto roa_ee = estimate_roa(s.p, s.fr, s.ees[1]);
    CHECK(roa_ee.c_star > 0.0);

    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double y = i / 20.0;
            const double z = j / 20.0;
            if (roa_level(roa_dfe, y, z) <= roa_dfe.c_star) {
                const auto target = settle(s.p, s.fr, y, z, targets);
                REQUIRE(target.has_value());
                CHECK(target->kind == EquilibriumKind::dfe);
            }
            if (roa_level(roa_ee, y, z) <= roa_ee.c_star) {
                const auto target = settle(s.p, s.fr, y, z, targets);
                REQUIRE(target.has_value());
                CHECK(target->y == Catch::Approx(s.ees[1].y).margin(1e-5));
            }
        }
    }
}

TEST_CASE("certified endemic region is smaller than the simulated basin") {
    AidSetup s;
    const auto roa_ee = estimate_roa(s.p, s.fr, s.ees[1]);
    std::vector<Equilibrium> targets = s.ees;
    targets.push_back(s.dfe_eq);

    int certified = 0, basin = 0;
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const double y = i / 100.0;
            const double z = j / 100.0;
            if (roa_level(roa_ee, y, z) <= roa_ee.c_star) ++certified;
            const auto target = settle(s.p, s.fr, y, z, targets);
            if (target && target->kind == EquilibriumKind::endemic &&
                std::fabs(target->y - s.ees[1].y) < 1e-5)
                ++basin;
        }
    }
    CHECK(certified > 0);
    CHECK(certified < basin);
}

TEST_CASE("separatrix of the aid saddle") {
    AidSetup s;
    const auto sep = separatrix(s.p, s.fr, s.ees[0]);

    REQUIRE(sep.polyline.size() > 10);
    bool touches_saddle = false;
    for (const auto& pt : sep.polyline) {
        CHECK(pt[0] >= 0.0);
        CHECK(pt[0] <= 1.0);
        CHECK(pt[1] >= 0.0);
        CHECK(pt[1] <= 1.0);
        if (std::hypot(pt[0] - 1.0 / 3.0, pt[1] - 0.5) < 1e-6) touches_saddle = true;
    }
    CHECK(touches_saddle);

    // a stable node is not a saddle
    CHECK_THROWS_AS(separatrix(s.p, s.fr, s.ees[1]), NotSaddleError);
}

TEST_CASE("separatrix sides agree with simulated convergence targets") {
    AidSetup s;
    const auto sep = separatrix(s.p, s.fr, s.ees[0]);
    std::vector<Equilibrium> targets = s.ees;
    targets.push_back(s.dfe_eq);

    // reference point whose fate is known: verify it converges to the DFE
    const std::array<double, 2> ref{0.02, 0.02};
    const auto ref_target = settle(s.p, s.fr, ref[0], ref[1], targets);
    REQUIRE(ref_target.has_value());
    REQUIRE(ref_target->kind == EquilibriumKind::dfe);

    auto gen = oracles::rng(606);
    int agreed = 0;
    for (int i = 0; i < 100; ++i) {
        const double y = oracles::uniform(gen, 0.01, 0.99);
        const double z = oracles::uniform(gen, 0.01, 0.99);
        const auto target = settle(s.p, s.fr, y, z, targets);
        REQUIRE(target.has_value());
        const bool goes_dfe = target->kind == EquilibriumKind::dfe;
        const bool same_side = separatrix_same_side(sep, {y, z}, ref);
        if (goes_dfe == same_side) ++agreed;
    }
    CHECK(agreed == 100);
}
