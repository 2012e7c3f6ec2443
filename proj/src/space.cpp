#include "drspace/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drspace {

Vec AlgebraVector::flat() const {
    Vec x(V.size() + Y.size() + 1);
    x << V, Y, s;
    return x;
}

AlgebraVector AlgebraVector::from_flat(const Vec& x, int m, int k) {
    return {x.head(m), x.segment(m, k), x(m + k)};
}

DamekRicciSpace::DamekRicciSpace(HeisenbergAlgebra alg) : alg_(std::move(alg)) {}

Vec DamekRicciSpace::join(const Vec& V, const Vec& Y, double s) const {
    Vec x(n());
    x << V, Y, s;
    return x;
}

Vec DamekRicciSpace::unit_A() const {
    Vec x = Vec::Zero(n());
    x(n() - 1) = 1.0;
    return x;
}

Vec DamekRicciSpace::bracket(const Vec& x, const Vec& y) const {
    const Vec V = vpart(x), V1 = vpart(y);
    const Vec Z = zpart(x), Z1 = zpart(y);
    const double l = apart(x), l1 = apart(y);
    return join(0.5 * l * V1 - 0.5 * l1 * V, l * Z1 - l1 * Z + alg_.bracket(V, V1), 0.0);
}

AlgebraVector DamekRicciSpace::bracket(const AlgebraVector& x, const AlgebraVector& y) const {
    return AlgebraVector::from_flat(bracket(x.flat(), y.flat()), m(), k());
}

GroupPoint DamekRicciSpace::identity() const { return {Vec::Zero(m()), Vec::Zero(k()), 1.0}; }

GroupPoint DamekRicciSpace::multiply(const GroupPoint& p, const GroupPoint& q) const {
    const double sa = std::sqrt(p.a);
    return {p.U + sa * q.U, p.X + p.a * q.X + 0.5 * sa * alg_.bracket(p.U, q.U), p.a * q.a};
}

GroupPoint DamekRicciSpace::inverse(const GroupPoint& p) const {
    return {-p.U / std::sqrt(p.a), -p.X / p.a, 1.0 / p.a};
}

Mat DamekRicciSpace::frame_to_coordinates(const GroupPoint& p) const {
    const int M = m(), K = k(), N = n();
    const double sa = std::sqrt(p.a);
    Mat F = Mat::Zero(N, N);
    for (int i = 0; i < M; ++i) {
        F(i, i) = sa;
        Vec ei = Vec::Zero(M);
        ei(i) = 1.0;
        F.block(M, i, K, 1) = 0.5 * sa * alg_.bracket(p.U, ei);
    }
    for (int a = 0; a < K; ++a) F(M + a, M + a) = p.a;
    F(N - 1, N - 1) = 1.0;
    return F;
}

Mat DamekRicciSpace::coordinates_to_frame(const GroupPoint& p) const {
    const int M = m(), K = k(), N = n();
    const double sa = std::sqrt(p.a);
    Mat G = Mat::Zero(N, N);
    for (int i = 0; i < M; ++i) {
        G(i, i) = 1.0 / sa;
        Vec ei = Vec::Zero(M);
        ei(i) = 1.0;
        // (1/(2a)) sum_j c[i][j][a] v_j = (1/(2a)) [e_i, U]_a
        G.block(M, i, K, 1) = alg_.bracket(ei, p.U) / (2.0 * p.a);
    }
    for (int a = 0; a < K; ++a) G(M + a, M + a) = 1.0 / p.a;
    G(N - 1, N - 1) = 1.0;
    return G;
}

Vec DamekRicciSpace::nabla(const Vec& x, const Vec& y) const {
    const Vec V = vpart(x), Y = zpart(x);
    const Vec U = vpart(y), X = zpart(y);
    const double r = apart(y);
    const Vec vcomp = -0.5 * alg_.j_map(X, V) - 0.5 * alg_.j_map(Y, U) - 0.5 * r * V;
    const Vec zcomp = -0.5 * alg_.bracket(U, V) - r * Y;
    const double acomp = 0.5 * U.dot(V) + X.dot(Y);
    return join(vcomp, zcomp, acomp);
}

Mat DamekRicciSpace::nabla_matrix(const Vec& x) const {
    Mat N(n(), n());
    Vec e = Vec::Zero(n());
    for (int j = 0; j < n(); ++j) {
        e.setZero();
        e(j) = 1.0;
        N.col(j) = nabla(x, e);
    }
    return N;
}

Vec DamekRicciSpace::curvature(const Vec& u, const Vec& v, const Vec& w) const {
    return nabla(u, nabla(v, w)) - nabla(v, nabla(u, w)) - nabla(bracket(u, v), w);
}

Mat DamekRicciSpace::jacobi_matrix(const Vec& u) const {
    Mat R(n(), n());
    Vec e = Vec::Zero(n());
    for (int j = 0; j < n(); ++j) {
        e.setZero();
        e(j) = 1.0;
        R.col(j) = curvature(e, u, u);
    }
    return R;
}

Mat DamekRicciSpace::jacobi_operator(const Vec& u, Mat* basis_out) const {
    if (std::abs(u.norm() - 1.0) > 1e-10) throw std::invalid_argument("jacobi_operator: u must be unit");
    Mat u_col = u;
    const Mat B = orthogonal_complement(u_col, n());
    if (basis_out) *basis_out = B;
    const Mat R = jacobi_matrix(u);
    Mat out = B.transpose() * R * B;
    return 0.5 * (out + out.transpose());
}

double DamekRicciSpace::sectional_curvature(const Vec& u, const Vec& v) const {
    const double den = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
    if (den <= 1e-14 * u.squaredNorm() * v.squaredNorm())
        throw std::invalid_argument("sectional_curvature: degenerate plane");
    return curvature(u, v, v).dot(u) / den;
}

Mat DamekRicciSpace::ricci() const {
    const int N = n();
    Mat Ric = Mat::Zero(N, N);
    std::vector<Vec> e(N, Vec::Zero(N));
    for (int i = 0; i < N; ++i) e[i](i) = 1.0;
    for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b) {
            double s = 0.0;
            for (int i = 0; i < N; ++i) s += curvature(e[i], e[a], e[b])(i);
            Ric(a, b) = Ric(b, a) = s;
        }
    return Ric;
}

double sectional_closed_form(const DamekRicciSpace& S, const Vec& e1, const Vec& e2) {
    const auto& alg = S.algebra();
    const Vec U = S.vpart(e1), X = S.zpart(e1);
    const double r = S.apart(e1);
    const Vec V = S.vpart(e2), Y = S.zpart(e2);
    const double UU = U.squaredNorm(), VV = V.squaredNorm(), XX = X.squaredNorm(), YY = Y.squaredNorm();
    const double UV = U.dot(V), XY = X.dot(Y);
    const Vec br = alg.bracket(U, V) + r * Y;
    double K = -0.75 * br.squaredNorm() - 0.25 * r * r * VV - 0.25 * r * r * YY;
    K += 0.25 * VV * XX + 0.25 * UU * YY;
    K += -alg.j_map(X, U).dot(alg.j_map(Y, V)) + 0.5 * alg.j_map(X, V).dot(alg.j_map(Y, U));
    K -= 0.5 * XX * VV + 0.5 * YY * UU + 0.25 * UU * VV + XX * YY - UV * XY - 0.25 * UV * UV - XY * XY;
    return K;
}

namespace {

// Orthonormal (e1, e2) spanning span{u, v} with e2 free of A-component.
std::pair<Vec, Vec> canonical_plane(const DamekRicciSpace& S, const Vec& u, const Vec& v) {
    Vec w = S.apart(v) * u - S.apart(u) * v;
    if (w.norm() < 1e-12 * (u.norm() * v.norm())) w = (std::abs(S.apart(u)) < std::abs(S.apart(v))) ? u : v;
    Vec e2 = w.normalized();
    Vec e1 = u - u.dot(e2) * e2;
    if (e1.norm() < 1e-8 * u.norm()) e1 = v - v.dot(e2) * e2;
    e1.normalize();
    return {e1, e2};
}

}  // namespace

PlaneCurvature sectional_curvature_both(const DamekRicciSpace& S, const Vec& u, const Vec& v) {
    PlaneCurvature pc;
    pc.direct = S.sectional_curvature(u, v);
    auto [e1, e2] = canonical_plane(S, u, v);
    pc.closed_form = sectional_closed_form(S, e1, e2);
    return pc;
}

CurvatureDecomposition curvature_decomposition(const DamekRicciSpace& S, const Vec& u, const Vec& v) {
    const auto& alg = S.algebra();
    auto [e1, e2] = canonical_plane(S, u, v);
    CurvatureDecomposition d;
    d.a = S.apart(e1);
    const Vec v1 = S.vpart(e1), z1 = S.zpart(e1);
    d.b = std::sqrt(v1.squaredNorm() + z1.squaredNorm());
    if (d.b > 1e-14) {
        d.U1 = v1 / d.b;
        d.Y1 = z1 / d.b;
    } else {
        d.U1 = Vec::Zero(S.m());
        d.Y1 = Vec::Zero(S.k());
    }
    d.U2 = S.vpart(e2);
    d.Y2 = S.zpart(e2);
    d.T = d.Y1.squaredNorm() * d.Y2.squaredNorm() +
          2.0 * alg.j_map(d.Y1, d.U1).dot(alg.j_map(d.Y2, d.U2)) + 1.0 / 3.0;
    d.term_a = -0.25 * d.a * d.a;
    d.term_bracket = -0.75 * (d.a * d.Y2 + d.b * alg.bracket(d.U1, d.U2)).squaredNorm();
    d.term_yy = -0.75 * d.b * d.b * std::pow(d.Y1.dot(d.Y2), 2);
    d.term_t = -0.75 * d.b * d.b * d.T;
    return d;
}

double flat_plane_condition_residual(const DamekRicciSpace& S, const CurvatureDecomposition& d) {
    const auto& alg = S.algebra();
    double r = std::max(std::abs(d.a), std::abs(d.b - 1.0));
    r = std::max(r, alg.bracket(d.U1, d.U2).norm());
    r = std::max(r, std::abs(d.U1.dot(d.U2)));
    r = std::max(r, std::abs(d.Y1.dot(d.Y2)));
    r = std::max(r, (alg.j_map(d.Y1, d.U1) + alg.j_map(d.Y2, d.U2)).norm());
    for (const Vec* U : {&d.U1, &d.U2}) r = std::max(r, std::abs(U->squaredNorm() - 2.0 / 3.0));
    for (const Vec* Y : {&d.Y1, &d.Y2}) r = std::max(r, std::abs(Y->squaredNorm() - 1.0 / 3.0));
    return r;
}

}  // namespace drspace
