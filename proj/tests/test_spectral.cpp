#include "drspace/busemann.hpp"
#include "drspace/random.hpp"
#include "drspace/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drspace;

namespace {

DamekRicciSpace make(const std::string& preset) { return DamekRicciSpace(build_algebra(parse_preset(preset))); }

int count_near(const Vec& ev, double x, double tol = 1e-10) {
    int c = 0;
    for (int i = 0; i < ev.size(); ++i) c += std::abs(ev(i) - x) < tol;
    return c;
}

Vec generic_direction(const DamekRicciSpace& S, Rng& rng) {
    Vec d;
    do d = rng.unit_vec(S.n());
    while (!is_generic(S, d));
    return d;
}

}  // namespace

TEST(Spectral, KTrivialForK1) {
    const auto S = make("heisenberg");
    Rng rng(1);
    const auto K = k_endomorphism(S.algebra(), rng.gaussian_vec(2), rng.gaussian_vec(1));
    EXPECT_EQ(K.K.rows(), 0);
    EXPECT_EQ(K.yperp.cols(), 0);
    EXPECT_THROW(k_endomorphism(S.algebra(), Vec::Zero(2), rng.gaussian_vec(1)), std::invalid_argument);
}

TEST(Spectral, HtypeK2KVanishes) {
    const auto S = make("htype_k2");
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto K = k_endomorphism(S.algebra(), rng.gaussian_vec(4), rng.gaussian_vec(2));
        ASSERT_EQ(K.K.rows(), 1);
        EXPECT_LT(std::abs(K.K(0, 0)), 1e-14);
        const auto sp = ksquare_spectrum(K);
        ASSERT_EQ(sp.mu.size(), 1u);
        EXPECT_EQ(sp.mu[0], 0.0);
        const auto split = yperp_j_split(K, sp);
        EXPECT_EQ(split.J.cols(), 0);
        EXPECT_EQ(split.complement.cols(), 1);
    }
}

TEST(Spectral, QuaternionicKSquaredIsMinusIdentity) {
    const auto S = make("quaternionic");
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto K = k_endomorphism(S.algebra(), rng.gaussian_vec(4), rng.gaussian_vec(3));
        EXPECT_LT((K.K * K.K + Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(K.skew_residual, 1e-12);
        const auto sp = ksquare_spectrum(K);
        ASSERT_EQ(sp.mu.size(), 1u);
        EXPECT_NEAR(sp.mu[0], -1.0, 1e-12);
        const auto split = yperp_j_split(K, sp);
        EXPECT_EQ(split.J.cols(), 2);
        EXPECT_EQ(split.complement.cols(), 0);
    }
}

TEST(Spectral, MixedHasIntermediateMu) {
    const auto S = make("quaternionic_mixed");
    Rng rng(4);
    int interior = 0;
    for (int i = 0; i < 20; ++i) {
        const auto sp = ksquare_spectrum(k_endomorphism(S.algebra(), rng.gaussian_vec(8), rng.gaussian_vec(3)));
        for (double mu : sp.mu) {
            EXPECT_GE(mu, -1.0 - 1e-10);
            EXPECT_LE(mu, 1e-10);
            interior += (mu > -1.0 + 1e-8 && mu < -1e-8);
        }
    }
    EXPECT_GT(interior, 0);
}

TEST(Spectral, DimensionCounts) {
    Rng rng(5);
    {
        const auto S = make("quaternionic");
        const auto d = admissible_decomposition(S, generic_direction(S, rng));
        EXPECT_EQ(d.s4.cols(), 4);
        EXPECT_EQ(d.dim_p, 0);
        EXPECT_EQ(d.k1, 2);
        EXPECT_EQ(d.k2, 0);
        EXPECT_TRUE(d.dimension_identity);
    }
    {
        const auto S = make("htype_k2");
        const auto d = admissible_decomposition(S, generic_direction(S, rng));
        EXPECT_EQ(d.k1, 0);
        EXPECT_EQ(d.k2, 1);
        EXPECT_EQ(d.dim_p, 0);
        ASSERT_EQ(d.q.size(), 1u);
        EXPECT_EQ(d.q[0].basis.cols(), 3);
        EXPECT_TRUE(d.dimension_identity);
    }
}

class CatalogSpectral : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogSpectral, DecompositionAndBlocks) {
    const auto S = make(GetParam());
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        const Vec dir = generic_direction(S, rng);
        const auto d = admissible_decomposition(S, dir);
        EXPECT_LT(d.orthogonality_residual, 1e-10);
        EXPECT_LT(d.completeness_residual, 1e-12);
        EXPECT_TRUE(d.dimension_identity);
        const auto hb = hessian_blocks(S, d);
        EXPECT_LT(std::max({hb.null_residual, hb.cross_block_residual, hb.p_block_residual, hb.bracket_residual}),
                  1e-10);
        const auto s4 = s4_block(S, d);
        EXPECT_LT(s4.table_residual, 1e-10);
        EXPECT_LT(s4.jacobi_residual, 1e-10);
        EXPECT_LT(spectrum_distance(assembled_hessian_spectrum(S, d), sym_eigenvalues(hessian_at_identity(S, dir))),
                  1e-9);
        const auto cr = jacobi_cubic_check(S, d);
        EXPECT_LT(cr.root_residual, 1e-9);
        EXPECT_LT(cr.ell_residual, 1e-10);
        EXPECT_TRUE(cr.ordering_ok);
    }
}

TEST_P(CatalogSpectral, CommutationOnF) {
    const auto S = make(GetParam());
    Rng rng(7);
    const Vec dir = generic_direction(S, rng);
    Vec first;
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const auto c = commutation_check(S, dir, t);
        EXPECT_LT(c.commutator, 1e-8) << t;
        EXPECT_LT(c.pairing_residual, 1e-8) << t;
        if (first.size() == 0) first = c.shape_eigenvalues;
        EXPECT_LT(spectrum_distance(first, c.shape_eigenvalues), 1e-8) << t;
    }
}

INSTANTIATE_TEST_SUITE_P(All, CatalogSpectral,
                         ::testing::Values("heisenberg", "htype_k2", "quaternionic", "cayley", "quaternionic_mixed"));

TEST(Spectral, QEllBlock) {
    const auto S = make("quaternionic");
    Rng rng(8);
    const auto d = admissible_decomposition(S, generic_direction(S, rng));
    const auto r = q_ell_block(S, d);
    EXPECT_EQ(count_near(r.eigenvalues, 0.5, 1e-12), 2);
    EXPECT_EQ(count_near(r.eigenvalues, 1.0, 1e-12), 2);
    EXPECT_LT(r.characteristic_residual, 1e-12);
    EXPECT_LT(r.eigenvector_residual, 1e-10);
    EXPECT_LT(r.entry_residual, 1e-10);

    const auto H2 = make("htype_k2");
    const auto d2 = admissible_decomposition(H2, generic_direction(H2, rng));
    EXPECT_THROW(q_ell_block(H2, d2), std::invalid_argument);
}

TEST(Spectral, Q0BlockPositiveInHtypeK2) {
    const auto S = make("htype_k2");
    Rng rng(9);
    double lowest = 1e9;
    for (int i = 0; i < 200; ++i) {
        const auto d = admissible_decomposition(S, generic_direction(S, rng));
        const auto r = q0_block(S, d);
        EXPECT_LT(r.entry_residual, 1e-10);
        EXPECT_LT(r.completed_square_residual, 1e-12);
        lowest = std::min(lowest, r.min_eigenvalue);
    }
    EXPECT_GT(lowest, 0.05);
    const auto Q = make("quaternionic");
    EXPECT_THROW(q0_block(Q, admissible_decomposition(Q, generic_direction(Q, rng))), std::invalid_argument);
}

TEST(Spectral, QjHermitianMinors) {
    const auto S = make("quaternionic_mixed");
    Rng rng(10);
    int blocks = 0;
    for (int i = 0; i < 20; ++i) {
        const auto d = admissible_decomposition(S, generic_direction(S, rng));
        for (size_t j = 0; j < d.q.size(); ++j) {
            if (d.q[j].is_ell || d.q[j].mu == 0.0) {
                EXPECT_THROW(q_j_hermitian(S, d, static_cast<int>(j)), std::invalid_argument);
                continue;
            }
            const auto r = q_j_hermitian(S, d, static_cast<int>(j));
            ++blocks;
            EXPECT_LT(r.entry_residual, 1e-10);
            EXPECT_LT(r.pairing_residual, 1e-10);
            EXPECT_NEAR(r.det2, r.det2_formula, 1e-10);
            EXPECT_NEAR(r.det3, r.det3_formula, 1e-10);
            EXPECT_GT(r.det2, 0.0);
            EXPECT_GT(r.det3, r.det3_lower_bound);
            EXPECT_NEAR(r.cos_theta * r.cos_theta, -r.mu, 1e-12);
        }
    }
    EXPECT_GT(blocks, 0);
}

// Roots from numpy.roots in tests/oracles/metric_oracle.py.
TEST(Spectral, JacobiCubicRoots) {
    auto near = [](const std::array<double, 3>& r, double a, double b, double c, double tol) {
        EXPECT_NEAR(r[0], a, tol);
        EXPECT_NEAR(r[1], b, tol);
        EXPECT_NEAR(r[2], c, tol);
    };
    near(jacobi_cubic(2.0 / 3.0, 1.0 / 3.0, 0.0), -0.75, -0.75, 0.0, 1e-7);
    EXPECT_NEAR(jacobi_cubic(2.0 / 3.0, 1.0 / 3.0, 0.0)[2], 0.0, 1e-14);
    near(jacobi_cubic(0.0, 0.5, 0.0), -1.0, -0.25, -0.25, 1e-14);
    near(jacobi_cubic(0.5, 0.3, -0.4), -0.9626160579227218, -0.43297765883288925, -0.10440628324438812, 1e-12);
    near(jacobi_cubic(0.8, 0.15, -0.9), -0.9926569148377014, -0.32760984927631204, -0.17973323588598633, 1e-12);
}

TEST(Spectral, NonGenericCases) {
    const auto S = make("quaternionic");
    EXPECT_THROW(nongeneric_spectrum(S, S.join(Vec::Constant(4, 0.4), Vec::Constant(3, 0.3), 0.0).normalized()),
                 std::invalid_argument);
    Rng rng(11);
    const auto minusA = nongeneric_spectrum(S, -S.unit_A());
    EXPECT_LT(minusA.distance, 1e-12);
    EXPECT_EQ(count_near(minusA.direct, 0.5), 4);
    EXPECT_EQ(count_near(minusA.direct, 1.0), 3);

    const Vec vz = S.join(Vec::Zero(4), 0.8 * rng.unit_vec(3), 0.6);
    const auto r = nongeneric_spectrum(S, vz);
    EXPECT_EQ(r.which, NonGenericReport::Case::VZero);
    EXPECT_LT(r.distance, 1e-12);
    EXPECT_EQ(count_near(r.direct, 1.0), 3);  // Y^perp (2) and W1 = sY^ - |Y|A
    EXPECT_EQ(count_near(r.direct, 0.5), 4);

    const Vec yz = S.join(0.6 * rng.unit_vec(4), Vec::Zero(3), -0.8);
    const auto q = nongeneric_spectrum(S, yz);
    EXPECT_EQ(q.which, NonGenericReport::Case::YZero);
    EXPECT_LT(q.distance, 1e-12);
    EXPECT_GT(q.min_block_eigenvalue, 0.0);
}
