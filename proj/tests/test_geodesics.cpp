#include "drspace/geodesics.hpp"
#include "drspace/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drspace;

namespace {

DamekRicciSpace make(const std::string& preset) { return DamekRicciSpace(build_algebra(parse_preset(preset))); }

double point_gap(const GroupPoint& p, const GroupPoint& q) {
    return std::max({(p.U - q.U).cwiseAbs().maxCoeff(), (p.X - q.X).cwiseAbs().maxCoeff(), std::abs(p.a - q.a)});
}

GroupPoint gp(std::initializer_list<double> U, std::initializer_list<double> X, double a) {
    GroupPoint p;
    p.U = Eigen::Map<const Vec>(U.begin(), U.size());
    p.X = Eigen::Map<const Vec>(X.begin(), X.size());
    p.a = a;
    return p;
}

}  // namespace

TEST(Geodesics, TrivialCases) {
    const auto S = make("heisenberg");
    Rng rng(1);
    const Vec d = rng.unit_vec(4);
    EXPECT_LT(point_gap(geodesic_point(S, d, 0.0), S.identity()), 1e-15);
    EXPECT_LT((geodesic_velocity(S, d, 0.0) - d).norm(), 1e-15);
    for (double t : {-3.0, 0.5, 7.0}) {
        const auto p = geodesic_point(S, S.unit_A(), t);
        EXPECT_LT(p.U.norm() + p.X.norm(), 1e-15);
        EXPECT_NEAR(p.a / std::exp(t), 1.0, 1e-14);
    }
    EXPECT_THROW(geodesic_point(S, 2.0 * d, 1.0), std::invalid_argument);
}

TEST(Geodesics, ScalarsAlongA) {
    for (double t : {-4.0, -1.0, 0.3, 2.0, 10.0}) {
        const auto g = geodesic_scalars(1.0, 0.0, t);
        EXPECT_NEAR(std::log(g.h), t, 1e-12);
        EXPECT_NEAR(g.dlogh, 1.0, 1e-12);
    }
}

// Frozen from tests/oracles/metric_oracle.py: coordinate geodesic equation of
// the metric built from the group law, DOP853 at rtol 1e-13.
TEST(Geodesics, MatchesCoordinateOracle) {
    {
        const auto S = make("heisenberg");
        Vec d(4);
        d << 0.40824829046386296, -0.5443310539518174, 0.6804138174397717, 0.2721655269759087;
        EXPECT_LT(point_gap(geodesic_point(S, d, 1.5), gp({0.8356417706146408, -0.3993646302463634},
                                                          {0.9924346219034341}, 0.6850087491105115)),
                  1e-10);
        EXPECT_LT(point_gap(geodesic_point(S, d, -2.0), gp({-0.18602249160326803, 0.7666122626113996},
                                                           {-0.6004435593373918}, 0.2433146315532287)),
                  1e-10);
    }
    {
        const auto S = make("htype_k2");
        Vec d(7);
        d << 0.35792999176313617, -0.4772399890175149, 0.11930999725437873, 0.2982749931359468, 0.5965499862718936,
            -0.35792999176313617, 0.23861999450875745;
        EXPECT_LT(point_gap(geodesic_point(S, d, 1.5),
                            gp({0.7102235225559798, -0.4679473384237819, -0.12932012583898259, 0.263443654870079},
                               {0.8281034651887329, -0.49686207911323993}, 0.6519362021732418)),
                  1e-10);
        EXPECT_LT(point_gap(geodesic_point(S, d, -2.0),
                            gp({-0.15768450651618734, 0.5860199831297669, -0.33972501975837466, -0.3890304540647334},
                               {-0.5417663565155877, 0.3250598139093525}, 0.2504000154728788)),
                  1e-10);
    }
}

class CatalogGeodesics : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogGeodesics, ClosedFormMatchesRk4) {
    const auto S = make(GetParam());
    Rng rng(21);
    for (int i = 0; i < 10; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const double t = rng.uniform(-5.0, 5.0);
        const auto a = geodesic_point(S, d, t), b = geodesic_ode(S, d, t, 1e-3);
        EXPECT_LT(point_gap(a, b) / std::max(1.0, a.a), 1e-8) << "t = " << t;
    }
}

TEST_P(CatalogGeodesics, UnitSpeedAndHRatio) {
    const auto S = make(GetParam());
    Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const double t = rng.uniform(-6.0, 6.0);
        const Vec c = geodesic_velocity(S, d, t);
        EXPECT_NEAR(c.norm(), 1.0, 1e-12);
        const double v2 = S.vpart(d).squaredNorm();
        const auto g = geodesic_scalars(S.apart(d), S.zpart(d).squaredNorm(), t);
        EXPECT_NEAR(S.vpart(c).squaredNorm(), v2 * g.h, 1e-12);
        EXPECT_NEAR(S.zpart(c).squaredNorm(), S.zpart(d).squaredNorm() * g.h * g.h, 1e-12);
    }
}

TEST(Geodesics, HorizontalHBelowOne) {
    for (double y2 : {0.0, 0.2, 1.0 / 3.0, 0.9})
        for (double t : {-8.0, -1.0, -0.01, 0.01, 0.5, 3.0})
            EXPECT_LT(geodesic_scalars(0.0, y2, t).h, 1.0) << y2 << " " << t;
    EXPECT_DOUBLE_EQ(geodesic_scalars(0.0, 0.5, 0.0).h, 1.0);
}

TEST_P(CatalogGeodesics, DistanceAlongGeodesic) {
    const auto S = make(GetParam());
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const Vec d = rng.unit_vec(S.n());
        const double t = rng.uniform(-6.0, 6.0);
        EXPECT_NEAR(distance_from_identity(S, geodesic_point(S, d, t)), std::abs(t), 1e-10);
    }
}

INSTANTIATE_TEST_SUITE_P(All, CatalogGeodesics,
                         ::testing::Values("heisenberg", "htype_k2", "quaternionic", "cayley"));

TEST(Geodesics, Rk4ConvergesAtFourthOrder) {
    const auto S = make("quaternionic");
    Rng rng(24);
    const Vec d = rng.unit_vec(S.n());
    const auto exact = geodesic_point(S, d, 3.0);
    const double e1 = point_gap(geodesic_ode(S, d, 3.0, 0.1), exact);
    const double e2 = point_gap(geodesic_ode(S, d, 3.0, 0.05), exact);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
    const auto along_A = geodesic_ode(S, S.unit_A(), 2.0, 1e-2);
    EXPECT_NEAR(along_A.a, std::exp(2.0), 1e-8);
}

TEST(Geodesics, Rk4Reversal) {
    const auto S = make("htype_k2");
    Rng rng(25);
    const Vec d = rng.unit_vec(S.n());
    const auto p = geodesic_ode(S, d, 2.0, 1e-3);
    // walk back along the reversed velocity from p
    const Vec back = -geodesic_velocity(S, d, 2.0);
    EXPECT_LT(point_gap(exp_at(S, p, back, 2.0), S.identity()), 1e-9);
}

TEST(Geodesics, DistanceExamples) {
    const auto S = make("heisenberg");
    EXPECT_NEAR(distance_from_identity(S, S.identity()), 0.0, 1e-12);
    for (double r : {0.1, 1.0, 4.0}) EXPECT_NEAR(distance_from_identity(S, gp({0, 0}, {0}, std::exp(r))), r, 1e-12);
    Rng rng(26);
    const GroupPoint p = geodesic_point(S, rng.unit_vec(4), 1.3), q = geodesic_point(S, rng.unit_vec(4), -0.8);
    const double dpq = distance(S, p, q);
    EXPECT_NEAR(dpq, distance(S, q, p), 1e-10);
    EXPECT_LE(dpq, 1.3 + 0.8 + 1e-12);
    EXPECT_GE(dpq, 0.5 - 1e-12);
}

TEST(Geodesics, VolumeDensityOracle) {
    // mpmath derivative of log Theta (tests/oracles/metric_oracle.py)
    const auto H = make("heisenberg");
    EXPECT_NEAR(volume_density(H, 1.0).sigma, 3.4769886992379844, 1e-10);
    EXPECT_NEAR(volume_density(H, 30.0).sigma, 2.0, 1e-8);
    const auto Q = make("quaternionic");
    EXPECT_NEAR(volume_density(Q, 1.0).sigma, 8.267012683975299, 1e-10);
    EXPECT_NEAR(volume_density(Q, 30.0).sigma, Q.Q(), 1e-8);
}

TEST(Geodesics, PurelyExponentialGrowth) {
    for (const char* name : {"heisenberg", "cayley"}) {
        const auto S = make(name);
        double lo = 1e300, hi = 0;
        for (double r = 1.0; r <= 40.0; r += 0.5) {
            const double ratio = std::exp(volume_density(S, r).log_theta - S.Q() * r);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        EXPECT_GT(lo, 0.0) << name;
        EXPECT_LT(hi / lo, 1e3) << name;
        const auto [c2, c3] = fit_density_exponents(S);
        EXPECT_NEAR(c2, S.n() - 1, 1e-9) << name;
        EXPECT_NEAR(c3, 2 * S.Q() - (S.n() - 1), 1e-9) << name;
    }
}
