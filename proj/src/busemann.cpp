#include "drspace/busemann.hpp"

#include "drspace/geodesics.hpp"

#include <cmath>

namespace drspace {

IdealBoundaryPoint boundary_coords(const DamekRicciSpace& S, const Vec& direction) {
    require_unit(direction, "boundary_coords");
    const Vec V = S.vpart(direction), Y = S.zpart(direction);
    const double s = S.apart(direction);
    const double chi = (1.0 - s) * (1.0 - s) + Y.squaredNorm();
    if (chi < 1e-20) return pole_point(S);
    IdealBoundaryPoint th;
    th.v = (2.0 / chi) * ((1.0 - s) * V + S.algebra().j_map(Y, V));
    th.y = (2.0 / chi) * Y;
    return th;
}

IdealBoundaryPoint pole_point(const DamekRicciSpace& S) {
    return {true, Vec::Zero(S.m()), Vec::Zero(S.k())};
}

IdealBoundaryPoint translate_boundary(const DamekRicciSpace& S, const GroupPoint& x, const IdealBoundaryPoint& th) {
    if (th.pole) return th;
    const double sa = std::sqrt(x.a);
    return {false, x.U + sa * th.v, x.X + x.a * th.y + 0.5 * sa * S.algebra().bracket(x.U, th.v)};
}

BusemannTerms busemann_terms(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th) {
    BusemannTerms t;
    t.calV = th.v - p.U;
    t.calY = th.y - p.X - 0.5 * S.algebra().bracket(p.U, th.v);
    t.f = p.a + 0.25 * t.calV.squaredNorm();
    t.F = t.f * t.f + t.calY.squaredNorm();
    const double w = 1.0 + 0.25 * th.v.squaredNorm();
    t.C = -std::log(w * w + th.y.squaredNorm());
    return t;
}

double busemann_value(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th) {
    if (th.pole) return -std::log(p.a);
    const auto t = busemann_terms(S, p, th);
    return std::log(t.F) - std::log(p.a) + t.C;
}

double busemann_limit_oracle(const DamekRicciSpace& S, const GroupPoint& p, const Vec& direction, double T) {
    return distance(S, p, geodesic_point(S, direction, T)) - T;
}

Vec busemann_gradient(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th) {
    if (th.pole) return -S.unit_A();
    const auto t = busemann_terms(S, p, th);
    const double a = p.a, sa = std::sqrt(a);
    const Vec W = t.f * t.calV - S.algebra().j_map(t.calY, t.calV);
    return S.join(-sa * W / t.F, -2.0 * a * t.calY / t.F, 2.0 * a * t.f / t.F - 1.0);
}

Mat hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th) {
    if (th.pole) throw std::invalid_argument("hessian: pole boundary point, use hessian_pole");
    const auto& alg = S.algebra();
    const int M = S.m(), K = S.k(), N = S.n(), iA = N - 1;
    const auto t = busemann_terms(S, p, th);
    const double a = p.a, sa = std::sqrt(a), f = t.f, F = t.F, F2 = F * F;
    const Vec& cV = t.calV;
    const Vec& cY = t.calY;
    const Vec JcV = alg.j_map(cY, cV);
    const Vec W = f * cV - JcV;

    Mat H = Mat::Zero(N, N);
    H(iA, iA) = (2.0 * a / F2) * (f * F + a * F - 2.0 * a * f * f);
    const Vec hAV = -(sa / (2.0 * F2)) * ((f * F + 2.0 * a * F - 4.0 * a * f * f) * cV + (4.0 * a * f - F) * JcV);
    const Vec hAY = (2.0 * a / F2) * (2.0 * a * f - F) * cY;
    H.block(iA, 0, 1, M) = hAV.transpose();
    H.block(0, iA, M, 1) = hAV;
    H.block(iA, M, 1, K) = hAY.transpose();
    H.block(M, iA, K, 1) = hAY;

    const Mat adV = alg.ad(cV);  // k x m, U -> [calV, U]
    Mat hVV = 0.5 * Mat::Identity(M, M) + (a / (2.0 * F)) * (cV * cV.transpose() + adV.transpose() * adV) -
              (a / F2) * (W * W.transpose());
    H.topLeftCorner(M, M) = hVV;

    // <[V_i, P], Y_a> = -(ad P)_{a i} with P = (f - 2a) calV - J_calY calV
    const Vec P = (f - 2.0 * a) * cV - JcV;
    const Mat adP = alg.ad(P);
    Mat hVY = -(2.0 * a * sa / F2) * (W * cY.transpose()) + (sa / (2.0 * F)) * adP.transpose();
    H.block(0, M, M, K) = hVY;
    H.block(M, 0, K, M) = hVY.transpose();

    H.block(M, M, K, K) = (1.0 / F) * (F - 2.0 * a * f + 2.0 * a * a) * Mat::Identity(K, K) -
                          (4.0 * a * a / F2) * (cY * cY.transpose());
    return H;
}

Mat hessian_pole(const DamekRicciSpace& S) {
    Mat H = Mat::Zero(S.n(), S.n());
    for (int i = 0; i < S.m(); ++i) H(i, i) = 0.5;
    for (int a = 0; a < S.k(); ++a) H(S.m() + a, S.m() + a) = 1.0;
    return H;
}

Mat busemann_hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th) {
    return th.pole ? hessian_pole(S) : hessian(S, p, th);
}

Mat hessian_at_identity(const DamekRicciSpace& S, const Vec& direction) {
    require_unit(direction, "hessian_at_identity");
    const auto th = boundary_coords(S, direction);
    if (th.pole) return hessian_pole(S);
    const auto& alg = S.algebra();
    const int M = S.m(), K = S.k(), N = S.n(), iA = N - 1;
    const double s = S.apart(direction);
    const double chi = std::pow(1.0 - s, 2) + S.zpart(direction).squaredNorm();
    const double f = 2.0 * (1.0 - s) / chi, F = 4.0 / chi, F2 = F * F;
    const Vec& v = th.v;
    const Vec& y = th.y;
    const Vec Jyv = alg.j_map(y, v);
    const Vec fvJ = f * v - Jyv;

    Mat H = Mat::Zero(N, N);
    H(iA, iA) = (2.0 / F2) * (f * F + F - 2.0 * f * f);
    const Vec hAW = -(1.0 / (2.0 * F2)) * ((f * F + 2.0 * F - 4.0 * f * f) * v + (4.0 * f - F) * Jyv);
    const Vec hAZ = (2.0 / F2) * (2.0 * f - F) * y;
    H.block(iA, 0, 1, M) = hAW.transpose();
    H.block(0, iA, M, 1) = hAW;
    H.block(iA, M, 1, K) = hAZ.transpose();
    H.block(M, iA, K, 1) = hAZ;

    const Mat adv = alg.ad(v);
    H.topLeftCorner(M, M) = 0.5 * Mat::Identity(M, M) + (1.0 / (2.0 * F)) * (v * v.transpose() + adv.transpose() * adv) -
                            (1.0 / F2) * (fvJ * fvJ.transpose());
    // <[W, f v - J_y v - 2v], Z> = -(ad(f v - J_y v - 2v))_{Z,W}
    const Mat adQ = alg.ad(Vec(fvJ - 2.0 * v));
    const Mat hWZ = -(2.0 / F2) * (fvJ * y.transpose()) + (1.0 / (2.0 * F)) * adQ.transpose();
    H.block(0, M, M, K) = hWZ;
    H.block(M, 0, K, M) = hWZ.transpose();
    H.block(M, M, K, K) = (1.0 / F) * (F - 2.0 * f + 2.0) * Mat::Identity(K, K) - (4.0 / F2) * (y * y.transpose());
    return H;
}

IdentityTerms identity_terms(const DamekRicciSpace& S, const Vec& direction) {
    require_unit(direction, "identity_terms");
    IdentityTerms r;
    const auto th = boundary_coords(S, direction);
    const double s = S.apart(direction);
    const Vec V = S.vpart(direction);
    r.chi = std::pow(1.0 - s, 2) + S.zpart(direction).squaredNorm();
    if (th.pole) return r;
    // f, F from the general definitions at U = X = 0, a = 1
    const auto t = busemann_terms(S, S.identity(), th);
    r.f = t.f;
    r.F = t.F;
    r.res_f = std::abs(t.f - 2.0 * (1.0 - s) / r.chi);
    r.res_F = std::abs(t.F - 4.0 / r.chi);
    r.res_fv = max_abs(Vec(t.f * th.v - S.algebra().j_map(th.y, th.v) - (4.0 / r.chi) * V));
    r.res_4f = std::abs(4.0 * t.f - t.F - 4.0 * (1.0 - 2.0 * s) / r.chi);
    return r;
}

Vec fd_gradient(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th, double h) {
    Vec g(S.n());
    Vec e = Vec::Zero(S.n());
    for (int i = 0; i < S.n(); ++i) {
        e.setZero();
        e(i) = 1.0;
        g(i) = (busemann_value(S, exp_at(S, p, e, h), th) - busemann_value(S, exp_at(S, p, e, -h), th)) / (2.0 * h);
    }
    return g;
}

namespace {

double second_derivative(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th, const Vec& u,
                         double h, double b0) {
    const double fp1 = busemann_value(S, exp_at(S, p, u, h), th);
    const double fm1 = busemann_value(S, exp_at(S, p, u, -h), th);
    const double fp2 = busemann_value(S, exp_at(S, p, u, 2 * h), th);
    const double fm2 = busemann_value(S, exp_at(S, p, u, -2 * h), th);
    return (-fp2 + 16.0 * fp1 - 30.0 * b0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

}  // namespace

Mat fd_hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th, double h) {
    const int N = S.n();
    const double b0 = busemann_value(S, p, th);
    Mat H(N, N);
    std::vector<Vec> e(N, Vec::Zero(N));
    for (int i = 0; i < N; ++i) e[i](i) = 1.0;
    for (int i = 0; i < N; ++i) H(i, i) = second_derivative(S, p, th, e[i], h, b0);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            const double dp = second_derivative(S, p, th, Vec(e[i] + e[j]), h, b0);
            const double dm = second_derivative(S, p, th, Vec(e[i] - e[j]), h, b0);
            H(i, j) = H(j, i) = 0.25 * (dp - dm);
        }
    return H;
}

}  // namespace drspace
