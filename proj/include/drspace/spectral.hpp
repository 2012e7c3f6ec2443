#pragma once

#include "drspace/space.hpp"

#include <array>
#include <complex>
#include <vector>

namespace drspace {

/// K(Z) = [V^, J_Z J_Y^ V^] on Y^perp, in an orthonormal basis of Y^perp.
struct KEndomorphism {
    Vec Vhat, Yhat;
    Mat yperp;  // k x (k-1), orthonormal basis of Y^perp in z
    Mat K;      // (k-1) x (k-1)
    Mat Kz;     // the same map on z: yperp K yperp^T
    double skew_residual = 0;   // |K + K^T|
    double range_residual = 0;  // component of K(Y^perp) along Y
};

/// Throws std::invalid_argument for V = 0 or Y = 0.
KEndomorphism k_endomorphism(const HeisenbergAlgebra& alg, const Vec& V, const Vec& Y);

/// Distinct eigenvalues of K^2 in decreasing order with eigenspaces (columns in z).
struct KSquareSpectrum {
    std::vector<double> mu;
    std::vector<Mat> L;
    Vec raw;                          // all eigenvalues of K^2, ascending
    double invariance_residual = 0;   // |(I - P_j) K L_j|
    double orthogonality_residual = 0;
};
KSquareSpectrum ksquare_spectrum(const KEndomorphism& K, double rel_tol = 1e-8);

/// (Y^perp)_J = Ker(K^2 + id) and its complement inside Y^perp.
struct YperpSplit {
    Mat J;           // k x k1
    Mat complement;  // k x k2
    double invariance_residual = 0;  // |(I - P_J) K (Y^perp)_J|
    double complement_max_mu = 0;    // largest eigenvalue of K^2 on the complement
    double complement_min_mu = 0;
};
YperpSplit yperp_j_split(const KEndomorphism& K, const KSquareSpectrum& spec, double tol = 1e-8);

/// One q-block. For -1 < mu < 0 the z-basis is paired, Z_{2a} = K^ Z_{2a-1} with
/// K^ = K / sqrt|mu|, and `raw` lists (W1, W2, W1', W2', Z1, Z2) per pair where
/// W = J_Z V^, W' = J_Z J_Y^ V^. For mu = 0 the raw triple per Z is (W, W', Z).
/// For mu = -1 (the block t1 + (Y^perp)_J) the pairing is Z2 = K Z1 and the raw
/// quadruple is (W1, W2, Z1, Z2).
struct QBlock {
    double mu = 0;
    bool is_ell = false;
    Mat L;      // k x dim L, paired orthonormal basis
    Mat raw;    // n x (3 or 2) dim L, non-orthonormal in general
    Mat basis;  // orthonormal basis of the same span
};

/// Orthogonal splitting s = s4 + p + q_0 + ... + q_l adapted to a generic direction.
struct AdmissibleDecomposition {
    Vec direction, V, Y;
    double s = 0, normV = 0, normY = 0, chi = 0;
    KEndomorphism K;
    KSquareSpectrum spectrum;
    Mat s4;    // n x 4, orthonormal basis of span{V, J_Y V, Y, A}
    Mat s4_0;  // n x 3, columns W1, W2, W3
    Mat p;     // n x dim p, Ker ad V cap Ker ad J_Y V inside v
    Mat yperp_J, yperp_Jc;  // in z
    Mat t1, t2, t3;         // in s
    std::vector<QBlock> q;
    int k1 = 0, k2 = 0, dim_p = 0;
    double orthogonality_residual = 0;
    double completeness_residual = 0;
    bool dimension_identity = false;  // m = 2 + dim p + k1 + 2 k2
};

/// |V|, |Y| above 1e-12.
bool is_generic(const DamekRicciSpace& S, const Vec& direction);

AdmissibleDecomposition admissible_decomposition(const DamekRicciSpace& S, const Vec& direction);

/// Cross-block entries of hessian_at_identity and the bracket containment
/// [v, J_Z V^] = (2|V|/chi)((1-s)Z - |Y| KZ), [v, J_Z J_Y^ V^] = (2|V|/chi)(|Y|Z + (1-s)KZ).
struct HessianBlockReport {
    double null_residual = 0;         // |H direction|
    double cross_block_residual = 0;  // max over pairs of distinct blocks
    double p_block_residual = 0;      // |H|_p - I/2|
    double bracket_residual = 0;
    double symmetry_residual = 0;
};
HessianBlockReport hessian_blocks(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// Hessian table on W1, W2, W3 and the Jacobi spectrum on s4^0.
struct S4Report {
    Mat table;                   // W_i^T H W_j
    double table_residual = 0;   // vs diag(1, 1/2, 1/2)
    double direction_residual = 0;
    Vec jacobi_eigenvalues;      // R restricted to s4^0
    double jacobi_residual = 0;  // vs {-1, -1/4, -1/4}
};
S4Report s4_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// The 4x4 block B on (W1, W2, Z1, Z2) per pair in t1 + (Y^perp)_J.
struct QEllReport {
    Mat B;
    Vec eigenvalues;
    double entry_residual = 0;        // H on the raw basis vs B
    double eigen_residual = 0;        // vs {1/2, 1/2, 1, 1}
    double characteristic_residual = 0;  // (a-l)(b-l) - c^2 - d^2 at l = 1, 1/2
    double eigenvector_residual = 0;  // H U1 = U1/2, H U2 = U2 for the displayed U1, U2
};
/// Throws std::invalid_argument when (Y^perp)_J = {0}.
QEllReport q_ell_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// The 3x3 blocks on (W_a, W_a', Z_a), Z_a in L_0.
struct Q0Report {
    Mat table;  // displayed entries
    double entry_residual = 0;
    double completed_square_residual = 0;
    double min_eigenvalue = 0;
};
/// Throws std::invalid_argument when mu = 0 does not occur.
Q0Report q0_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// Hermitian reduction of a block with -1 < mu < 0.
struct QjReport {
    double mu = 0, cos_theta = 0, sin_theta = 0;
    double a = 0, b = 0, c = 0, d = 0, f = 0, g = 0, h = 0, l = 0, t = 0;
    Eigen::Matrix3cd H;
    double det2 = 0, det3 = 0;                  // numeric leading minors
    double det2_formula = 0, det3_formula = 0;  // displayed closed forms
    double det3_lower_bound = 0;                // sin^4(2chi - |V|^4|Y|^2)/(8chi)
    double entry_residual = 0;     // raw-basis Hessian vs the real form of H
    double pairing_residual = 0;   // <W1, W2'> + sqrt|mu|
    Vec eigenvalues;               // of the Hessian endomorphism on q_j
};
/// Throws std::invalid_argument unless q[j] has -1 < mu < 0.
QjReport q_j_hermitian(const DamekRicciSpace& S, const AdmissibleDecomposition& d, int j);

/// Real roots of (kappa + 1)(kappa + 1/4)^2 = (27/64)|V|^4|Y|^2(1 + mu), ascending.
std::array<double, 3> jacobi_cubic(double v2, double y2, double mu);
std::array<double, 3> jacobi_cubic(const DamekRicciSpace& S, const Vec& direction, double mu);

/// Roots vs eigenvalues of R restricted to each q_j with mu_j > -1, plus the
/// ordering -1 < k1 <= -3/4 <= k2 < -1/4 < k3 <= 0.
struct CubicReport {
    double root_residual = 0;
    bool ordering_ok = true;
    int blocks = 0;
    double ell_residual = 0;  // R on q_l vs {-1, -1/4}
};
CubicReport jacobi_cubic_check(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// Spectrum of hessian_at_identity assembled from the block formulas.
Vec assembled_hessian_spectrum(const DamekRicciSpace& S, const AdmissibleDecomposition& d);

/// Non-generic directions: V = 0 or Y = 0 (s = +-1 included).
struct NonGenericReport {
    enum class Case { YZero, VZero, AxisA } which = Case::AxisA;
    Vec assembled;  // predicted spectrum including the 0 of the direction
    Vec direct;     // eigensolve of hessian_at_identity
    double distance = 0;
    double min_block_eigenvalue = 0;  // of the 2x2 {J_Z V^, Z} blocks (YZero)
};
/// Throws std::invalid_argument for a generic direction.
NonGenericReport nongeneric_spectrum(const DamekRicciSpace& S, const Vec& direction);

/// Commutation of S(t) = -Hessian with R_{gamma'(t)} on
/// f = s4^0 + p + t1 + (Y^perp)_J built from gamma'(t).
struct CommutationReport {
    double commutator = 0;
    double invariance_residual = 0;
    double pairing_residual = 0;  // each eigenvalue l < 0 of S|f has -l^2 in spec R|f
    Vec shape_eigenvalues;
};
CommutationReport commutation_check(const DamekRicciSpace& S, const Vec& direction, double t);

}  // namespace drspace
