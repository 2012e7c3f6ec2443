#pragma once

#include "drspace/algebra.hpp"
#include "drspace/linalg.hpp"

namespace drspace {

/// Element V + Y + sA of s = v + z + a, in the left-invariant orthonormal frame.
/// Flat layout used throughout: [V (m) | Y (k) | s].
struct AlgebraVector {
    Vec V;
    Vec Y;
    double s = 0.0;

    Vec flat() const;
    static AlgebraVector from_flat(const Vec& x, int m, int k);
    double norm() const { return flat().norm(); }
};

/// Point (U, X, a) of S = N x R_+, a > 0. The identity is (0, 0, 1).
struct GroupPoint {
    Vec U;
    Vec X;
    double a = 1.0;
};

/// Solvable extension of an H-type algebra with its left-invariant metric.
/// Tensors are point independent in the left-invariant frame.
class DamekRicciSpace {
public:
    explicit DamekRicciSpace(HeisenbergAlgebra alg);

    const HeisenbergAlgebra& algebra() const { return alg_; }
    int m() const { return alg_.m(); }
    int k() const { return alg_.k(); }
    int n() const { return alg_.m() + alg_.k() + 1; }
    /// Homogeneous dimension m/2 + k.
    double Q() const { return 0.5 * m() + k(); }

    // flat-vector views
    Vec join(const Vec& V, const Vec& Y, double s) const;
    Vec vpart(const Vec& x) const { return x.head(m()); }
    Vec zpart(const Vec& x) const { return x.segment(m(), k()); }
    double apart(const Vec& x) const { return x(n() - 1); }
    Vec unit_A() const;

    Vec bracket(const Vec& x, const Vec& y) const;
    AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;

    GroupPoint identity() const;
    GroupPoint multiply(const GroupPoint& p, const GroupPoint& q) const;
    GroupPoint inverse(const GroupPoint& p) const;

    /// Columns: V_i, Y_a, A at p expressed in (d/dv, d/dy, d/dlambda), lambda = log a.
    Mat frame_to_coordinates(const GroupPoint& p) const;
    /// Inverse change of basis: columns d/dv_i, d/dy_a, d/dlambda in the frame.
    Mat coordinates_to_frame(const GroupPoint& p) const;

    /// Levi-Civita connection on left-invariant fields.
    Vec nabla(const Vec& x, const Vec& y) const;
    /// Matrix of y -> nabla_x y.
    Mat nabla_matrix(const Vec& x) const;

    /// R(u,v)w = nabla_u nabla_v w - nabla_v nabla_u w - nabla_[u,v] w.
    Vec curvature(const Vec& u, const Vec& v, const Vec& w) const;
    /// n x n matrix of v -> R(v,u)u (u itself in the kernel).
    Mat jacobi_matrix(const Vec& u) const;
    /// Jacobi operator restricted to an orthonormal basis of u^perp; throws for non-unit u.
    Mat jacobi_operator(const Vec& u, Mat* basis_out = nullptr) const;

    /// <R(u,v)v,u> / (|u|^2|v|^2 - <u,v>^2); throws for a degenerate plane.
    double sectional_curvature(const Vec& u, const Vec& v) const;

    /// Ric(x,y) = sum_i <R(e_i,x)y, e_i>.
    Mat ricci() const;

private:
    HeisenbergAlgebra alg_;
};

/// Closed-form curvature of the plane {U+X+rA, V+Y} for orthonormal inputs
/// where the second vector has no A-component.
double sectional_closed_form(const DamekRicciSpace& S, const Vec& e1, const Vec& e2);

/// Both evaluations for an arbitrary plane; the closed form is applied after
/// rotating the plane so its second basis vector has no A-component.
struct PlaneCurvature {
    double direct = 0;
    double closed_form = 0;
};
PlaneCurvature sectional_curvature_both(const DamekRicciSpace& S, const Vec& u, const Vec& v);

/// Four non-positive summands of K for the plane {aA + b(U1+Y1), U2+Y2}.
struct CurvatureDecomposition {
    double a = 0, b = 0;
    Vec U1, Y1, U2, Y2;
    double term_a = 0;        // -a^2/4
    double term_bracket = 0;  // -3/4 |a Y2 + b [U1,U2]|^2
    double term_yy = 0;       // -3/4 b^2 <Y1,Y2>^2
    double term_t = 0;        // -3/4 b^2 T
    double T = 0;             // |Y1|^2|Y2|^2 + 2<J_Y1 U1, J_Y2 U2> + 1/3
    double total() const { return term_a + term_bracket + term_yy + term_t; }
};
CurvatureDecomposition curvature_decomposition(const DamekRicciSpace& S, const Vec& u, const Vec& v);

/// Residuals of the flat-plane conditions for a decomposed plane: a, b-1, [U1,U2],
/// <U1,U2>, <Y1,Y2>, J_Y1 U1 + J_Y2 U2, |U_i|^2 - 2/3, |Y_i|^2 - 1/3.
double flat_plane_condition_residual(const DamekRicciSpace& S, const CurvatureDecomposition& d);

}  // namespace drspace
