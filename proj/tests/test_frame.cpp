#include "doctest.h"

#include <memory>

#include "tcmc/cauchy.hpp"
#include "tcmc/frame.hpp"
#include "test_support.hpp"

using namespace tcmc;
using tcmc::testing::Rng;

namespace {
const int N = 24;

PotentialPair constant_pair() {
    PotentialPair p;
    p.alpha = p.beta = p.gamma = p.delta = PolyFn::constant(1.0);
    p.Ix = {-0.5, 0.5};
    p.Iy = {-0.5, 0.5};
    return p;
}

CauchyData fig1_left() {
    CauchyData d;
    d.s = PolyFn({2.0, 0.0, 0.2});
    d.t = PolyFn({0.0, 1.0});
    d.theta = PolyFn({0.0, 1.0});
    d.H = 1.0;
    d.J = {-0.7, 0.7};
    return d;
}

ShiftedSurface fig1_left_surface(double lambda = 1.0) {
    const SingularPotential sp = noncharacteristic_potential(fig1_left());
    ShiftedSurface::Options o;
    o.lambda = lambda;
    return ShiftedSurface::from_singular(sp, {-0.4, 0.4}, sp.J, o);
}

// 4th-order central derivative of a MinkVec-valued map
template <typename F>
MinkVec fd1(F&& f, double h) {
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) * (1.0 / (12.0 * h));
}
} // namespace

TEST_CASE("sym_point: identity, invariance, and the omega_1 hand value") {
    const MinkVec f0 = sym_point(LoopSeries::identity(N), 1.0, 1.0);
    CHECK(eucl_norm(f0 - (-0.5) * kE2) < 1e-15); // (1/2H)(-e2)

    // invariance under right multiplication by U+ = [[1, u0 l],[0, 1]] and
    // constant diagonal D
    Rng rng(301);
    for (int trial = 0; trial < 30; ++trial) {
        const LoopSeries G = tcmc::testing::random_unimodular(rng, N, 8, 0.5);
        LoopSeries U = LoopSeries::identity(N);
        U.coeff(1)(0, 1) = tcmc::testing::uniform(rng, -2.0, 2.0);
        const double d = tcmc::testing::uniform(rng, 0.5, 2.0);
        LoopSeries D = LoopSeries::identity(N);
        D.coeff(0)(0, 0) = d;
        D.coeff(0)(1, 1) = 1.0 / d;
        const MinkVec a = sym_point(G, 1.0, 1.0);
        const MinkVec b = sym_point(multiply(G, multiply(U, D)), 1.0, 1.0);
        CHECK(eucl_norm(a - b) < 1e-10);
    }

    // omega_1 at lambda = 1, H = 1, via the eval_and_dlambda pieces
    const LoopSeries w1 = LoopSeries::omega(1, N);
    const auto [V, Dl] = w1.eval_and_dlambda(1.0);
    const Mat2c S = 2.0 * Dl * V.inverse() -
                    V * basis_e2().cast<cplx>() * V.inverse();
    const MinkVec byhand = from_matrix(S.real()) * 0.5;
    CHECK(eucl_norm(sym_point(w1, 1.0, 1.0) - byhand) < 1e-14);
    CHECK(eucl_norm(byhand - (-0.5) * kE2) < 1e-14); // = -e2/2
}

TEST_CASE("coordinate_frame_data: worked sign cases and NotRegular") {
    const FrameScalars a = coordinate_frame_data(1.0, -1.0, 1.0);
    CHECK(a.eps1 == 1);
    CHECK(a.eps2 == 1);
    CHECK(a.eps1 * a.eps2 * a.eomega == doctest::Approx(4.0));
    CHECK(a.rho == doctest::Approx(1.0));

    const FrameScalars b = coordinate_frame_data(1.0, 1.0, 1.0);
    CHECK(b.eps1 * b.eps2 == -1);
    CHECK(b.eomega == doctest::Approx(4.0));
    CHECK(b.rho == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)coordinate_frame_data(0.0, 1.0, 1.0), NotRegular);

    // extraction from a Maurer-Cartan pair
    LoopSeries U(N), V(N);
    U.coeff(1)(1, 0) = 2.0;
    U.coeff(1)(0, 1) = 0.3;
    V.coeff(-1)(0, 1) = -0.5;
    const FrameScalars c = coordinate_frame_data(U, V, 2.0);
    CHECK(c.c1 == doctest::Approx(2.0));
    CHECK(c.b2 == doctest::Approx(-0.5));
}

TEST_CASE("dalembert: base point gives Phi = I with factors (I, I)") {
    const DalembertSurface m(constant_pair());
    const LoopSeries Phi = m.phi(0.0, 0.0);
    CHECK((Phi - LoopSeries::identity(N)).max_abs() < 1e-13);
    const auto f = factor_left(Phi);
    CHECK((f.minus - LoopSeries::identity(N)).max_abs() < 1e-12);
    CHECK((f.plus - LoopSeries::identity(N)).max_abs() < 1e-12);
    const PointSample s = m.at(0.0, 0.0);
    CHECK(s.cell.stratum == Stratum::BigCell);
    CHECK(eucl_norm(s.f) < 1e-12); // base-point normalization
}

TEST_CASE("dalembert: constant pair is big cell with MC support {-1,0,1}") {
    const DalembertSurface m(constant_pair());
    for (double x : {-0.4, 0.0, 0.3})
        for (double y : {-0.35, 0.1, 0.4}) {
            const PointSample s = m.at(x, y);
            REQUIRE(s.cell.stratum == Stratum::BigCell);
            CHECK(s.cell.residual <= 1e-9);

            // Maurer-Cartan form of F by loop-level finite differences
            const double h = 1e-4;
            const LoopSeries F = m.frame_loop(x, y);
            const LoopSeries Finv = inverse(F);
            const LoopSeries MCx =
                multiply(Finv, (1.0 / (2.0 * h)) * (m.frame_loop(x + h, y) - m.frame_loop(x - h, y)));
            const LoopSeries MCy =
                multiply(Finv, (1.0 / (2.0 * h)) * (m.frame_loop(x, y + h) - m.frame_loop(x, y - h)));
            for (int k = -N; k <= N; ++k) {
                if (k >= -1 && k <= 1) continue;
                CHECK(MCx.coeff(k).cwiseAbs().maxCoeff() < 1e-6);
                CHECK(MCy.coeff(k).cwiseAbs().maxCoeff() < 1e-6);
            }
            // and the frame scalars sit in the advertised slots
            CHECK(MCx.coeff(1)(1, 0).real() == doctest::Approx(s.c1).epsilon(1e-5));
            CHECK(MCy.coeff(-1)(0, 1).real() == doctest::Approx(s.b2).epsilon(1e-5));
        }
}

TEST_CASE("dalembert: analytic fx, fy match finite differences of the Sym surface") {
    for (double lambda : {1.0, 0.8}) {
        DalembertSurface::Options o;
        o.lambda = lambda;
        const DalembertSurface m(constant_pair(), o);
        const double h = 1e-3;
        for (double x : {-0.2, 0.25})
            for (double y : {-0.3, 0.15}) {
                const PointSample s = m.at(x, y);
                const MinkVec fx = fd1([&](double d) { return m.at(x + d, y).f; }, h);
                const MinkVec fy = fd1([&](double d) { return m.at(x, y + d).f; }, h);
                CHECK(eucl_norm(fx - s.fx) < 1e-8 * std::max(1.0, eucl_norm(s.fx)));
                CHECK(eucl_norm(fy - s.fy) < 1e-8 * std::max(1.0, eucl_norm(s.fy)));
            }
    }
}

TEST_CASE("dalembert: null coordinates, normal orthogonality, unit normal, CMC") {
    const DalembertSurface m(constant_pair());
    const double h = 1e-2;
    for (double x : {-0.2, 0.1})
        for (double y : {-0.1, 0.3}) {
            const PointSample s = m.at(x, y);
            CHECK(std::abs(mink_ip(s.N, s.N) - 1.0) < 1e-10);
            CHECK(std::abs(mink_ip(s.fx, s.fx)) < 1e-9 * eucl_ip(s.fx, s.fx));
            CHECK(std::abs(mink_ip(s.fy, s.fy)) < 1e-9 * eucl_ip(s.fy, s.fy));
            CHECK(std::abs(mink_ip(s.fx, s.N)) < 1e-9);
            CHECK(std::abs(mink_ip(s.fy, s.N)) < 1e-9);

            // finite-difference mean curvature w.r.t. N
            const MinkVec fxy = (m.at(x + h, y).fy - m.at(x - h, y).fy) * (1.0 / (2.0 * h));
            const double Hfd = mink_ip(fxy, s.N) / mink_ip(s.fx, s.fy);
            CHECK(Hfd == doctest::Approx(1.0).epsilon(2e-4));
        }
}

TEST_CASE("singular pipeline: diagonal values and the shifted-factor derivatives") {
    const CauchyData data = fig1_left();
    const SingularPotential sp = noncharacteristic_potential(data);
    const ShiftedSurface m = fig1_left_surface();

    // on the diagonal: Phi~ = I, G- = G+ = I, c_{-1} = 0
    for (double v : {-0.3, 0.0, 0.25}) {
        const auto g = m.shifted_factors(0.0, v);
        CHECK((g.minus - LoopSeries::identity(N)).max_abs() < 1e-11);
        CHECK((g.plus - LoopSeries::identity(N)).max_abs() < 1e-11);
        const PointSample s = m.at(0.0, v);
        CHECK(std::abs(s.c_m1) < 1e-11);
        CHECK(s.cell.stratum == Stratum::P1);
    }

    // d(c_{-1})/du = 2 beta1 and dG+/du = 2 [[a0, g_m1 l + g1 l^3],[0, -a0]]
    const double h = 1e-4;
    for (double v : {-0.2, 0.0, 0.3}) {
        auto cm1 = [&](double u) { return minus_c_m1(m.shifted_factors(u, v)); };
        const double d = (cm1(-2 * h) - 8 * cm1(-h) + 8 * cm1(h) - cm1(2 * h)) / (12 * h);
        CHECK(d == doctest::Approx(2.0 * sp.beta1(v)).epsilon(1e-6));

        auto gplus12 = [&](double u) { return m.shifted_factors(u, v).plus; };
        const LoopSeries dgp =
            (1.0 / (12 * h)) *
            (gplus12(-2 * h) - 8.0 * gplus12(-h) + 8.0 * gplus12(h) - gplus12(2 * h));
        CHECK(dgp.coeff(1)(0, 1).real() == doctest::Approx(2.0 * sp.gamma_m1(v)).epsilon(1e-6));
        CHECK(dgp.coeff(3)(0, 1).real() == doctest::Approx(2.0 * sp.gamma1(v)).epsilon(1e-6));
        CHECK(std::abs(dgp.coeff(0)(0, 0).real() - 2.0 * -sp.alpha0(v)) < 1e-6);
    }
}

TEST_CASE("singular pipeline: limiting derivatives on the diagonal") {
    const CauchyData data = fig1_left();
    const SingularPotential sp = noncharacteristic_potential(data);
    const ShiftedSurface m = fig1_left_surface();
    for (double v : {-0.25, 0.0, 0.2}) {
        const PointSample s = m.at(0.0, v);
        const Eigen::Matrix2d Y = eval_real(m.wframe(0.0, v), 1.0);
        const MinkVec dir = ad(Y, kE0 - kE1);
        const MinkVec fx_exp = (sp.gamma1(v) / data.H) * dir;
        const MinkVec fy_exp = (-sp.gamma_m3(v) / data.H) * dir;
        CHECK(eucl_norm(s.fx - fx_exp) < 1e-5);
        CHECK(eucl_norm(s.fy - fy_exp) < 1e-5);
    }
}

TEST_CASE("singular pipeline: analytic fx, fy match FD of f off the diagonal") {
    for (double lambda : {1.0, 0.8}) {
        const ShiftedSurface m = fig1_left_surface(lambda);
        const double h = 1e-3;
        for (double u : {-0.15, 0.0, 0.2})
            for (double v : {-0.2, 0.1}) {
                const PointSample s = m.at(u, v);
                REQUIRE(s.finite);
                // pipeline coords are (u, v); fx, fy are lightlike-direction
                // derivatives: f_u = fx - fy, f_v = fx + fy
                const MinkVec fu = fd1([&](double d) { return m.at(u + d, v).f; }, h);
                const MinkVec fv = fd1([&](double d) { return m.at(u, v + d).f; }, h);
                CHECK(eucl_norm((s.fx - s.fy) - fu) < 1e-7 * std::max(1.0, eucl_norm(fu)));
                CHECK(eucl_norm((s.fx + s.fy) - fv) < 1e-7 * std::max(1.0, eucl_norm(fv)));
            }
    }
}

TEST_CASE("singular pipeline: two factorization routes give the same surface") {
    const ShiftedSurface m = fig1_left_surface();
    const PointSample ref = m.at(0.3, 0.1);
    REQUIRE(ref.cell.stratum == Stratum::BigCell);

    auto plain_f = [&](double u, double v) {
        const LoopSeries Phi = m.phi(u, v);
        const auto f = factor_left(Phi);
        const LoopSeries F = multiply(m.yframe(u, v), f.plus.adjugate());
        return sym_point(F, 1.0, 1.0);
    };
    const MinkVec base = plain_f(0.3, 0.1);
    for (double u : {-0.25, 0.12, 0.3})
        for (double v : {-0.15, 0.22}) {
            const PointSample s = m.at(u, v);
            REQUIRE(s.cell.stratum == Stratum::BigCell);
            const MinkVec lhs = plain_f(u, v) - base;
            const MinkVec rhs = s.f - ref.f;
            CHECK(eucl_norm(lhs - rhs) < 1e-8);
        }
}

TEST_CASE("parallel surface: cells conjugate and the blow-up is diagnosed") {
    // an all-big-cell field stays all big cell under conjugation
    {
        auto base = std::make_shared<DalembertSurface>(constant_pair());
        const ParallelSurface par(base, 0.0, 0.0);
        for (double x : {-0.3, 0.2})
            for (double y : {-0.2, 0.4})
                CHECK(par.at(x, y).cell.stratum == Stratum::BigCell);
    }

    // conjugating a P1 point gives Pm1 (omega_1 -> -omega_{-1})
    {
        auto base = std::make_shared<ShiftedSurface>(fig1_left_surface());
        const ParallelSurface par(base, 0.3, 0.0);
        const PointSample on = par.at(0.0, 0.0);
        CHECK(on.cell.stratum == Stratum::Pm1);
        CHECK_FALSE(on.finite);
        CHECK(on.blowup_mag > 1e6);

        // the parallel surface blows up approaching the conjugated P1 point
        double prev = 0.0;
        for (double d : {1e-1, 1e-2, 1e-3}) {
            const PointSample s = par.at(d, 0.0);
            REQUIRE(s.finite);
            const double norm = eucl_norm(s.f);
            CHECK(norm > prev);
            prev = norm;
        }
        CHECK(prev >= 1e3);
    }
}

TEST_CASE("parallel surface requires a big-cell base point") {
    auto base = std::make_shared<ShiftedSurface>(fig1_left_surface());
    CHECK_THROWS_AS(ParallelSurface(base, 0.0, 0.0), ValidationError);
}

TEST_CASE("build_grid: deterministic parallel map with cell counts") {
    const DalembertSurface m(constant_pair());
    GridSpec g;
    g.A = {-0.4, 0.4};
    g.B = {-0.4, 0.4};
    g.na = g.nb = 11;
    const FrameField f1 = build_grid(m, g);
    const FrameField f2 = build_grid(m, g);
    REQUIRE(f1.pts.size() == 121);
    CHECK(f1.cell_counts()[0] == 121);
    for (size_t i = 0; i < f1.pts.size(); ++i) {
        CHECK(f1.pts[i].f.t == f2.pts[i].f.t);
        CHECK(f1.pts[i].chi == f2.pts[i].chi);
    }
}
