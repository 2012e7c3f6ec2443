#include "drspace/busemann.hpp"
#include "drspace/geodesics.hpp"
#include "drspace/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drspace;

namespace {

DamekRicciSpace make(const std::string& preset) { return DamekRicciSpace(build_algebra(parse_preset(preset))); }

GroupPoint random_point(const DamekRicciSpace& S, Rng& rng, double scale = 0.6) {
    return {scale * rng.gaussian_vec(S.m()), scale * rng.gaussian_vec(S.k()), std::exp(scale * rng.gaussian())};
}

}  // namespace

TEST(Busemann, BoundaryCoordinatesExamples) {
    const auto S = make("quaternionic");
    const auto minusA = boundary_coords(S, -S.unit_A());
    EXPECT_FALSE(minusA.pole);
    EXPECT_LT(minusA.v.norm() + minusA.y.norm(), 1e-15);
    EXPECT_TRUE(boundary_coords(S, S.unit_A()).pole);
    Rng rng(1);
    const Vec Vh = rng.unit_vec(4);
    const auto th = boundary_coords(S, S.join(Vh, Vec::Zero(3), 0.0));
    EXPECT_LT((th.v - 2.0 * Vh).norm(), 1e-14);
    EXPECT_LT(th.y.norm(), 1e-14);
}

TEST(Busemann, ValuesOnDefiningGeodesic) {
    const auto S = make("htype_k2");
    Rng rng(2);
    for (int i = 0; i < 5; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const auto th = boundary_coords(S, d);
        EXPECT_NEAR(busemann_value(S, S.identity(), th), 0.0, 1e-14);
        for (int t = -3; t <= 3; ++t) EXPECT_NEAR(busemann_value(S, geodesic_point(S, d, t), th), -t, 1e-10);
    }
    EXPECT_NEAR(busemann_value(S, geodesic_point(S, S.unit_A(), 2.5), pole_point(S)), -2.5, 1e-14);
}

TEST(Busemann, LimitOracleOnAndOffGeodesic) {
    const auto S = make("heisenberg");
    Rng rng(3);
    const Vec d = rng.unit_vec(S.n());
    const auto p = geodesic_point(S, d, 5.0);
    for (double T : {10.0, 20.0, 30.0}) EXPECT_NEAR(busemann_limit_oracle(S, p, d, T), -5.0, 1e-9);

    // off the geodesic the oracle decreases in T toward b(p)
    const auto q = random_point(S, rng);
    const auto th = boundary_coords(S, d);
    double prev = busemann_limit_oracle(S, q, d, 2.0);
    for (double T : {4.0, 8.0, 16.0, 30.0}) {
        const double cur = busemann_limit_oracle(S, q, d, T);
        EXPECT_LE(cur, prev + 1e-12) << T;
        EXPECT_GE(cur, busemann_value(S, q, th) - 1e-9) << T;
        prev = cur;
    }
    EXPECT_NEAR(prev, busemann_value(S, q, th), 1e-6);
}

class CatalogBusemann : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogBusemann, LimitOracle) {
    const auto S = make(GetParam());
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const auto p = random_point(S, rng);
        EXPECT_NEAR(busemann_value(S, p, boundary_coords(S, d)), busemann_limit_oracle(S, p, d, 30.0), 1e-6);
    }
}

TEST_P(CatalogBusemann, GradientUnitAndFiniteDifferences) {
    const auto S = make(GetParam());
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto p = random_point(S, rng);
        const Vec g = busemann_gradient(S, p, th);
        EXPECT_NEAR(g.norm(), 1.0, 1e-10);
        EXPECT_LT((fd_gradient(S, p, th) - g).cwiseAbs().maxCoeff(), 1e-6);
    }
    const Vec d = rng.unit_vec(S.n());
    for (double t : {-1.0, 0.0, 2.0}) {
        const Vec g = busemann_gradient(S, geodesic_point(S, d, t), boundary_coords(S, d));
        EXPECT_LT((g + geodesic_velocity(S, d, t)).norm(), 1e-10);
    }
}

TEST_P(CatalogBusemann, HessianFiniteDifferencesAndNullDirection) {
    const auto S = make(GetParam());
    Rng rng(6);
    for (int i = 0; i < 5; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto p = random_point(S, rng);
        const Mat H = hessian(S, p, th);
        EXPECT_LT((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((fd_hessian(S, p, th) - H).cwiseAbs().maxCoeff(), 1e-5);
        EXPECT_LT((H * busemann_gradient(S, p, th)).norm(), 1e-10);
    }
    const Vec d = rng.unit_vec(S.n());
    const auto th = boundary_coords(S, d);
    EXPECT_LT((hessian(S, S.identity(), th) - hessian_at_identity(S, d)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST_P(CatalogBusemann, IdentityTerms) {
    const auto S = make(GetParam());
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto r = identity_terms(S, rng.unit_vec(S.n()));
        EXPECT_LT(std::max({r.res_fv, r.res_4f, r.res_f, r.res_F}), 1e-12);
    }
}

TEST_P(CatalogBusemann, TranslationEquivariance) {
    const auto S = make(GetParam());
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto x = random_point(S, rng), p = random_point(S, rng);
        const auto xth = translate_boundary(S, x, th);
        // b_{x th}(x p) - b_{x th}(x) = b_th(p) - b_th(e)
        const double lhs = busemann_value(S, S.multiply(x, p), xth) - busemann_value(S, x, xth);
        EXPECT_NEAR(lhs, busemann_value(S, p, th), 1e-10);
    }
}

TEST_P(CatalogBusemann, ConvexOnGradientComplement) {
    const auto S = make(GetParam());
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const Mat H = hessian_at_identity(S, d);
        const Vec ev = sym_eigenvalues(restrict_form(H, orthogonal_complement(Mat(d), S.n())));
        EXPECT_GT(ev(0), 0.0);
        EXPECT_LE(ev(ev.size() - 1), 1.0 + 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(All, CatalogBusemann, ::testing::Values("heisenberg", "htype_k2", "quaternionic", "cayley"));

TEST(Busemann, AxisSpectra) {
    const auto S = make("quaternionic");
    for (double s : {1.0, -1.0}) {
        const Vec d = s * S.unit_A();
        const Mat H = s > 0 ? hessian_pole(S) : hessian_at_identity(S, d);
        const Vec ev = sym_eigenvalues(H);
        EXPECT_NEAR(ev(0), 0.0, 1e-14);
        for (int i = 1; i <= 4; ++i) EXPECT_NEAR(ev(i), 0.5, 1e-14);
        for (int i = 5; i <= 7; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-14);
    }
    // eigenspaces: v for 1/2 and z for 1
    const Mat Hm = hessian_at_identity(S, -S.unit_A());
    Rng rng(10);
    const Vec V = S.join(rng.gaussian_vec(4), Vec::Zero(3), 0), Y = S.join(Vec::Zero(4), rng.gaussian_vec(3), 0);
    EXPECT_LT((Hm * V - 0.5 * V).norm(), 1e-14);
    EXPECT_LT((Hm * Y - Y).norm(), 1e-14);
}
