#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hypiso/ball.hpp"
#include "hypiso/rng.hpp"

using namespace hypiso;

namespace {
constexpr double kLn3 = 1.0986122886681098;
}

TEST_CASE("radius/rho conversions") {
    CHECK(radius_to_rho(0.0) == 0.0);
    CHECK(radius_to_rho(0.5) == doctest::Approx(kLn3).epsilon(1e-15));
    CHECK(rho_to_radius(0.0) == 0.0);
    CHECK(rho_to_radius(kLn3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(radius_to_rho(1.0), std::domain_error);
    CHECK_THROWS_AS(radius_to_rho(-0.1), std::domain_error);
    CHECK_THROWS_AS(rho_to_radius(-1e-9), std::domain_error);

    const double r20 = rho_to_radius(20.0);
    CHECK(r20 > 1.0 - 1e-8);
    CHECK(r20 < 1.0);
    CHECK(std::isfinite(r20));

    // Inverse-pair oracle over [0, 1 - 1e-6].
    Rng rng(101);
    std::uniform_real_distribution<double> uni(0.0, 1.0 - 1e-6);
    for (int i = 0; i < 100; ++i) {
        const double r = uni(rng);
        CHECK(std::abs(rho_to_radius(radius_to_rho(r)) - r) < 1e-14);
    }
    // Strictly increasing.
    CHECK(radius_to_rho(0.4) < radius_to_rho(0.400001));
}

TEST_CASE("conformal factor") {
    Vec o = Vec::Zero(3);
    CHECK(conformal_factor_at(o) == 2.0);
    Vec x(3);
    x << 0.5, 0.0, 0.0;
    CHECK(conformal_factor_at(x) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const Vec y = random_ball_vec(rng, 3, 0.999);
        CHECK(conformal_factor_at(y) * one_minus_sq(y) / 2.0 ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("point types enforce their invariants") {
    Vec inside(2);
    inside << 0.3, 0.4;
    CHECK_NOTHROW(BallPoint{inside});
    Vec outside(2);
    outside << 0.8, 0.7;
    CHECK_THROWS_AS(BallPoint{outside}, std::domain_error);
    Vec unit(3);
    unit << 1.0, 0.0, 0.0;
    CHECK_NOTHROW(IdealPoint{unit});
    Vec off(3);
    off << 1.0 + 1e-6, 0.0, 0.0;
    CHECK_THROWS_AS(IdealPoint{off}, std::domain_error);

    const BallPoint p{inside};
    CHECK(p.radius() == doctest::Approx(0.5));
    CHECK(p.rho() == doctest::Approx(kLn3));
}

TEST_CASE("hyperbolic distance: radial law, symmetry, triangle") {
    Vec o = Vec::Zero(3), x(3);
    x << 0.5, 0.0, 0.0;
    CHECK(hyperbolic_distance(o, x) == doctest::Approx(kLn3).epsilon(1e-14));
    CHECK(hyperbolic_distance(x, x) == 0.0);

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Vec a = random_ball_vec(rng, 3, 0.97);
        const Vec b = random_ball_vec(rng, 3, 0.97);
        const Vec c = random_ball_vec(rng, 3, 0.97);
        const double dab = hyperbolic_distance(a, b);
        CHECK(dab == doctest::Approx(hyperbolic_distance(b, a)).epsilon(1e-14));
        CHECK(dab >= 0.0);
        CHECK(dab <= hyperbolic_distance(a, c) + hyperbolic_distance(c, b) + 1e-10);
        // radial law: d(0, x) = rho(|x|)
        CHECK(hyperbolic_distance(o, a) ==
              doctest::Approx(radius_to_rho(a.norm())).epsilon(1e-13));
    }
}

TEST_CASE("mobius translation: defining properties") {
    Rng rng(13);
    const int n = 3;
    Vec zero = Vec::Zero(n);
    const MobiusMap id_map = mobius_translate(zero);
    Vec probe = random_ball_vec(rng, n);
    CHECK((apply(id_map, probe) - probe).norm() < 1e-15);

    CHECK_THROWS_AS(mobius_translate(Vec(Vec::Ones(3))), std::domain_error);

    for (int i = 0; i < 100; ++i) {
        const Vec a = random_ball_vec(rng, n, 0.95);
        const MobiusMap g = mobius_translate(a);
        CHECK((apply(g, zero) - a).norm() < 1e-15);
        // boundary-preservation oracle
        const Vec u = random_unit_vector(rng, n);
        CHECK(std::abs(apply(g, u).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("apply preserves kinds and distances") {
    Rng rng(17);
    const int n = 4;
    for (int i = 0; i < 100; ++i) {
        Vec a = random_ball_vec(rng, n, 0.9);
        MobiusMap g{random_orthogonal(rng, n), a};
        const Vec x = random_ball_vec(rng, n, 0.95);
        const Vec y = random_ball_vec(rng, n, 0.95);
        CHECK(std::abs(hyperbolic_distance(apply(g, x), apply(g, y)) -
                       hyperbolic_distance(x, y)) < 1e-10);
        const IdealPoint u{random_unit_vector(rng, n)};
        CHECK_NOTHROW(apply(g, u));
        // inverse oracle
        const Vec back = apply(g, apply(inverse(g), x));
        CHECK((back - x).norm() < 1e-10);
    }
}

TEST_CASE("group structure as action equalities") {
    Rng rng(19);
    const int n = 3;
    auto random_map = [&] {
        return MobiusMap{random_orthogonal(rng, n), random_ball_vec(rng, n, 0.85)};
    };
    for (int trial = 0; trial < 50; ++trial) {
        const MobiusMap g = random_map();
        const MobiusMap h = random_map();
        const MobiusMap f = random_map();
        const MobiusMap gh = compose(g, h);
        const MobiusMap assoc1 = compose(compose(g, h), f);
        const MobiusMap assoc2 = compose(g, compose(h, f));
        const MobiusMap ginv = inverse(g);
        const MobiusMap unit = compose(g, ginv);
        for (int i = 0; i < 20; ++i) {
            const Vec x = random_ball_vec(rng, n, 0.9);
            CHECK((apply(gh, x) - apply(g, apply(h, x))).norm() < 1e-10);
            CHECK((apply(assoc1, x) - apply(assoc2, x)).norm() < 1e-10);
            CHECK((apply(unit, x) - x).norm() < 1e-10);
            CHECK((apply(compose(g, MobiusMap::identity(n)), x) - apply(g, x)).norm() <
                  1e-12);
        }
        CHECK(orthogonality_defect(gh.rotation) < 1e-10);
    }

    // gyration oracle: tau_a then tau_{-a} is a rotation fixing 0.
    for (int trial = 0; trial < 20; ++trial) {
        const Vec a = random_ball_vec(rng, n, 0.9);
        const MobiusMap gyr = compose(mobius_translate(a), mobius_translate(Vec(-a)));
        CHECK(gyr.translation.norm() < 1e-10);
        CHECK(orthogonality_defect(gyr.rotation) < 1e-10);
    }
}

TEST_CASE("isometry and sphere preservation over 1e3 random cases") {
    Rng rng(23);
    const int n = 3;
    for (int i = 0; i < 1000; ++i) {
        MobiusMap g{random_orthogonal(rng, n), random_ball_vec(rng, n, 0.9)};
        const Vec x = random_ball_vec(rng, n, 0.95);
        const Vec y = random_ball_vec(rng, n, 0.95);
        CHECK(std::abs(hyperbolic_distance(apply(g, x), apply(g, y)) -
                       hyperbolic_distance(x, y)) < 1e-10);
        CHECK(std::abs(apply(g, Vec(random_unit_vector(rng, n))).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("orthogonality drift is repaired across long compositions") {
    Rng rng(29);
    const int n = 3;
    MobiusMap acc = MobiusMap::identity(n);
    for (int i = 0; i < 400; ++i) {
        MobiusMap g{random_orthogonal(rng, n), random_ball_vec(rng, n, 0.6)};
        acc = compose(acc, g);
        CHECK(orthogonality_defect(acc.rotation) < 1e-10);
        CHECK(acc.translation.norm() < 1.0);
    }
}

TEST_CASE("mobius differential matches finite differences") {
    Rng rng(31);
    const int n = 3;
    for (int i = 0; i < 20; ++i) {
        MobiusMap g{random_orthogonal(rng, n), random_ball_vec(rng, n, 0.8)};
        const Vec x = random_ball_vec(rng, n, 0.8);
        const Mat d = differential(g, x);
        const double h = 1e-6;
        for (int j = 0; j < n; ++j) {
            Vec xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            const Vec fd = (apply(g, xp) - apply(g, xm)) / (2.0 * h);
            CHECK((d.col(j) - fd).norm() < 1e-8);
        }
    }
}
