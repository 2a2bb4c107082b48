#include "doctest.h"

#include <random>

#include "tcmc/minkowski.hpp"

using namespace tcmc;

TEST_CASE("basis inner products") {
    CHECK(mink_ip(kE0, kE0) == doctest::Approx(-1.0));
    CHECK(mink_ip(kE1, kE1) == doctest::Approx(1.0));
    CHECK(mink_ip(kE2, kE2) == doctest::Approx(1.0));
    CHECK(mink_ip(kE0 + kE1, kE0 + kE1) == doctest::Approx(0.0)); // lightlike
    CHECK(eucl_ip(kE2, kE2) == doctest::Approx(1.0));
    CHECK(mink_ip(kE0, kE1) == doctest::Approx(0.0));
}

TEST_CASE("matrix isomorphism round trip is exact") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const MinkVec v{u(rng), u(rng), u(rng)};
        const MinkVec w = from_matrix(to_matrix(v));
        // one rounded add/sub pair each way
        CHECK(std::abs(v.t - w.t) <= 4e-16 * std::abs(v.t));
        CHECK(std::abs(v.x1 - w.x1) <= 4e-16 * std::abs(v.x1));
        CHECK(v.x2 == w.x2);
    }
    // inner product through the trace form
    for (int i = 0; i < 20; ++i) {
        const MinkVec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const double tr = 0.5 * (to_matrix(a) * to_matrix(b)).trace();
        CHECK(tr == doctest::Approx(mink_ip(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("bracket relations of the basis") {
    auto close = [](const MinkVec& a, const MinkVec& b) {
        return eucl_norm(a - b) < 1e-14;
    };
    CHECK(close(bracket(kE0, kE1), 2.0 * kE2));
    CHECK(close(bracket(kE1, kE2), -2.0 * kE0));
    CHECK(close(bracket(kE2, kE0), 2.0 * kE1));
}

TEST_CASE("cross product: basis values and bracket formula") {
    CHECK(eucl_norm(cross(kE0, kE1) - kE2) == doctest::Approx(0.0));
    CHECK(eucl_norm(cross(kE1, kE2) - kE0) == doctest::Approx(0.0));
    CHECK(eucl_norm(cross(kE2, kE0) - kE1) == doctest::Approx(0.0));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 100; ++i) {
        const MinkVec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        CHECK(eucl_norm(cross(a, a)) == doctest::Approx(0.0));
        // A x B = -Ad_{e0}[A, B]/2
        const MinkVec viaBracket = ad_e0(bracket(a, b)) * -0.5;
        CHECK(eucl_norm(cross(a, b) - viaBracket) < 1e-12);
    }
}

TEST_CASE("Ad preserves the Lorentz form; Ad_{e0}Ad_X compatibility with cross") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int i = 0; i < 100; ++i) {
        // random X in SL(2,R) from shears and a diagonal
        Eigen::Matrix2d L, U, D;
        L << 1, 0, u(rng), 1;
        U << 1, u(rng), 0, 1;
        const double d = 1.0 + 0.5 * std::abs(u(rng));
        D << d, 0, 0, 1.0 / d;
        const Eigen::Matrix2d X = L * U * D;
        const MinkVec a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        CHECK(mink_ip(ad(X, a), ad(X, b)) == doctest::Approx(mink_ip(a, b)).epsilon(1e-10));
        // (Ad_{e0}Ad_X a) x (Ad_{e0}Ad_X b) = Ad_X Ad_{e0}(a x b)
        const MinkVec lhs = cross(ad_e0(ad(X, a)), ad_e0(ad(X, b)));
        const MinkVec rhs = ad(X, ad_e0(cross(a, b)));
        CHECK(eucl_norm(lhs - rhs) < 1e-10 * std::max(1.0, eucl_norm(rhs)));
    }
}
