#include "drspace/geodesics.hpp"
#include "drspace/random.hpp"
#include "drspace/riccati.hpp"
#include "drspace/visibility.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drspace;

namespace {

DamekRicciSpace make(const std::string& preset) { return DamekRicciSpace(build_algebra(parse_preset(preset))); }

GroupPoint random_point(const DamekRicciSpace& S, Rng& rng) {
    return {0.5 * rng.gaussian_vec(S.m()), 0.5 * rng.gaussian_vec(S.k()), std::exp(rng.gaussian())};
}

// Unit u with <u, grad b(p0)> = c exactly.
Vec with_angle(const DamekRicciSpace& S, const IdealBoundaryPoint& th, const GroupPoint& p0, double c, Rng& rng) {
    const Vec g = busemann_gradient(S, p0, th);
    Vec w = rng.gaussian_vec(S.n());
    w = (w - w.dot(g) * g).normalized();
    return c * g + std::sqrt(1.0 - c * c) * w;
}

}  // namespace

TEST(Visibility, ProbeRejectsGradientDirections) {
    const auto S = make("heisenberg");
    Rng rng(1);
    const auto th = boundary_coords(S, rng.unit_vec(4));
    const auto p0 = random_point(S, rng);
    const Vec g = busemann_gradient(S, p0, th);
    EXPECT_THROW(make_probe(S, th, p0, g), std::invalid_argument);
    EXPECT_THROW(make_probe(S, th, p0, -g), std::invalid_argument);
    EXPECT_THROW(make_probe(S, th, p0, 2.0 * with_angle(S, th, p0, 0.3, rng)), std::invalid_argument);
}

TEST(Visibility, DefiningGeodesicHasZeroIntegrand) {
    const auto S = make("htype_k2");
    Rng rng(2);
    const Vec d = rng.unit_vec(S.n());
    // the ray toward theta itself; built directly since make_probe refuses it
    const TransverseProbe pr{boundary_coords(S, d), S.identity(), d};
    for (double t : {-3.0, 0.0, 2.0, 8.0}) {
        const auto s = probe_sample(S, pr, t, false);
        EXPECT_NEAR(s.q, -t, 1e-10);
        EXPECT_NEAR(s.dq, -1.0, 1e-12);
        EXPECT_NEAR(s.d2q, 0.0, 1e-10);
    }
    EXPECT_NEAR(visibility_integral(S, pr, 0.0, 10.0), 0.0, 1e-9);
}

TEST(Visibility, TangentProbeLeavesHorosphere) {
    const auto S = make("quaternionic");
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto pr = make_probe(S, th, S.identity(), with_angle(S, th, S.identity(), 0.0, rng));
        EXPECT_NEAR(probe_sample(S, pr, 0.0, false).q, 0.0, 1e-14);
        for (double t : {0.1, 1.0, 5.0, 20.0}) EXPECT_GT(probe_sample(S, pr, t, false).q, 0.0) << t;
    }
}

TEST(Visibility, ObtuseAndAcuteAngles) {
    const auto S = make("heisenberg");
    Rng rng(4);
    const auto th = boundary_coords(S, rng.unit_vec(4));
    const auto p0 = random_point(S, rng);
    const auto obtuse = make_probe(S, th, p0, with_angle(S, th, p0, -0.9, rng));
    const auto acute = make_probe(S, th, p0, with_angle(S, th, p0, 0.9, rng));

    const auto ro = find_T_reaching_one(S, obtuse);
    EXPECT_NEAR(ro.dq_start, -0.9, 1e-12);
    EXPECT_TRUE(ro.found);
    EXPECT_GT(ro.T, 0.0);
    EXPECT_GE(visibility_integral(S, obtuse, 0.0, ro.T), 1.0 - 1e-6);

    // int_0^T q'' = q'(T) - q'(0) < 1 - 0.9, so 1 is out of reach
    const auto ra = find_T_reaching_one(S, acute);
    EXPECT_NEAR(ra.dq_start, 0.9, 1e-12);
    EXPECT_FALSE(ra.found);
    EXPECT_LT(ra.integral_at_horizon, 0.1 + 1e-6);
    EXPECT_NEAR(ra.integral_at_horizon, ra.dq_horizon - ra.dq_start, 1e-6);
}

class CatalogVisibility : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogVisibility, ReachOneExactlyWhenObtuse) {
    const auto S = make(GetParam());
    Rng rng(5);
    for (int i = 0; i < 8; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto p0 = random_point(S, rng);
        const double c = rng.uniform(-0.95, 0.95);
        const auto pr = make_probe(S, th, p0, with_angle(S, th, p0, c, rng));
        const auto r = find_T_reaching_one(S, pr);
        if (c < 0) {
            EXPECT_TRUE(r.found) << "cos phi = " << c;
        } else {
            EXPECT_FALSE(r.found) << "cos phi = " << c;
            EXPECT_LT(r.integral_at_horizon, 1.0 - c + 1e-6);
        }
    }
}

TEST_P(CatalogVisibility, ShapeOfQ) {
    const auto S = make(GetParam());
    Rng rng(6);
    for (int i = 0; i < 4; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(S.n()));
        const auto p0 = random_point(S, rng);
        const auto pr = make_probe(S, th, p0, with_angle(S, th, p0, rng.uniform(-0.9, 0.9), rng));
        const auto sh = probe_shape(S, pr, -15.0, 15.0);
        EXPECT_GT(sh.min_d2q, 0.0);
        EXPECT_EQ(sh.sign_changes, 1);
        EXPECT_TRUE(sh.increasing_after_min);
        EXPECT_GE(sh.derivative_bound_margin, -1e-10);
        EXPECT_GE(sh.gronwall_margin, -1e-6);
        EXPECT_GT(sh.gronwall_pairs, 0);
    }
}

TEST_P(CatalogVisibility, FundamentalTheoremOfCalculus) {
    const auto S = make(GetParam());
    Rng rng(7);
    const auto th = boundary_coords(S, rng.unit_vec(S.n()));
    const auto p0 = random_point(S, rng);
    const auto pr = make_probe(S, th, p0, with_angle(S, th, p0, 0.2, rng));
    const double I = visibility_integral(S, pr, -2.0, 6.0);
    EXPECT_NEAR(I, probe_sample(S, pr, 6.0, false).dq - probe_sample(S, pr, -2.0, false).dq, 1e-8);
}

TEST_P(CatalogVisibility, LeastEigenvalueIntegralDiverges) {
    const auto S = make(GetParam());
    Rng rng(8);
    Rng crng(9);
    const double c0 = c0_estimate(S, 500, crng);
    const auto th = boundary_coords(S, rng.unit_vec(S.n()));
    const auto p0 = random_point(S, rng);
    const auto pr = make_probe(S, th, p0, with_angle(S, th, p0, -0.5, rng));
    const auto r = least_eigenvalue_divergence(S, pr, 0.0, 20.0, c0, 5e-2);
    EXPECT_GE(r.min_margin, -1e-9);
    EXPECT_LE(r.max_lambda, 1.0 + 1e-10);
    EXPECT_GT(r.min_lambda, 0.0);
    EXPECT_GT(r.integral.back(), c0 * 20.0 - 1e-9);
}

INSTANTIATE_TEST_SUITE_P(All, CatalogVisibility, ::testing::Values("heisenberg", "htype_k2", "quaternionic"));

TEST(Visibility, BusemannDivergesAlongTransverseGeodesic) {
    const auto S = make("htype_k2");
    Rng rng(10);
    const auto th = boundary_coords(S, rng.unit_vec(S.n()));
    const auto p0 = random_point(S, rng);
    const auto pr = make_probe(S, th, p0, with_angle(S, th, p0, -0.3, rng));
    const auto b = busemann_divergence_probe(S, pr, {10.0, 20.0, 40.0});
    EXPECT_LT(b[0], b[1]);
    EXPECT_LT(b[1], b[2]);
    EXPECT_GT(b[2], 5.0);
}

TEST(Visibility, PoleProbe) {
    const auto S = make("heisenberg");
    Rng rng(11);
    const auto th = pole_point(S);
    const auto pr = make_probe(S, th, S.identity(), with_angle(S, th, S.identity(), -0.6, rng));
    EXPECT_NEAR(probe_sample(S, pr, 0.0, false).dq, -0.6, 1e-12);
    EXPECT_TRUE(find_T_reaching_one(S, pr).found);
    const auto s = probe_sample(S, pr, 1.0, true);
    EXPECT_GE(s.lambda, 0.5 - 1e-12);
}
