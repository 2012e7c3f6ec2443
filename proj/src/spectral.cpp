#include "drspace/spectral.hpp"

#include "drspace/busemann.hpp"
#include "drspace/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drspace {

namespace {

constexpr double kZeroNorm = 1e-12;

Mat column(const Vec& v) { return Mat(v); }

double proj_residual(const Mat& basis, const Mat& image) {
    if (image.cols() == 0) return 0.0;
    const Mat r = image - basis * (basis.transpose() * image);
    return max_abs(r);
}

// Orthonormal basis of L with Z_{2a} = Khat Z_{2a-1}; Khat^2 = -id on L.
Mat paired_basis(const Mat& L, const Mat& Khat) {
    const int d = static_cast<int>(L.cols());
    if (d % 2 != 0) throw std::logic_error("paired_basis: odd-dimensional eigenspace of K^2");
    Mat out(L.rows(), d);
    Mat rem = L;
    for (int c = 0; c < d; c += 2) {
        const Vec z1 = rem.col(0).normalized();
        Vec z2 = Khat * z1;
        z2 -= z2.dot(z1) * z1;
        z2.normalize();
        out.col(c) = z1;
        out.col(c + 1) = z2;
        if (c + 2 < d) {
            Mat r = rem - z1 * (z1.transpose() * rem) - z2 * (z2.transpose() * rem);
            rem = orthonormal_basis(r, 1e-8);
        }
    }
    return out;
}

Vec flat_v(const DamekRicciSpace& S, const Vec& v) { return S.join(v, Vec::Zero(S.k()), 0.0); }
Vec flat_z(const DamekRicciSpace& S, const Vec& z) { return S.join(Vec::Zero(S.m()), z, 0.0); }

// Real symmetric 6x6 form on (u1, u2, v1, v2, w1, w2) for the Hermitian matrix
// with real parts a, b, t, c, f, h and imaginary parts d, g, l.
Mat realified_form(double a, double b, double t, double c, double d, double f, double g, double h, double l) {
    Mat M = Mat::Zero(6, 6);
    enum { u1, u2, v1, v2, w1, w2 };
    auto set = [&](int i, int j, double x) { M(i, j) = M(j, i) = x; };
    set(u1, u1, a);
    set(u2, u2, a);
    set(v1, v1, b);
    set(v2, v2, b);
    set(w1, w1, t);
    set(w2, w2, t);
    set(u1, v1, c);
    set(u2, v2, c);
    set(u1, v2, d);
    set(u2, v1, -d);
    set(u1, w1, f);
    set(u2, w2, f);
    set(u1, w2, g);
    set(u2, w1, -g);
    set(v1, w1, h);
    set(v2, w2, h);
    set(v1, w2, l);
    set(v2, w1, -l);
    return M;
}

// Eigenvalues of the endomorphism of a form given on a non-orthonormal basis with Gram matrix G.
Vec generalized_eigenvalues(const Mat& form, const Mat& gram) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (form + form.transpose()), 0.5 * (gram + gram.transpose()));
    return es.eigenvalues();
}

Vec concat(const std::vector<Vec>& parts) {
    int n = 0;
    for (const auto& p : parts) n += static_cast<int>(p.size());
    Vec out(n);
    int c = 0;
    for (const auto& p : parts) {
        out.segment(c, p.size()) = p;
        c += static_cast<int>(p.size());
    }
    return out;
}

struct Scalars {
    double v = 0, y = 0, s = 0, chi = 0;
};

Scalars scalars_of(const AdmissibleDecomposition& d) { return {d.normV, d.normY, d.s, d.chi}; }

}  // namespace

KEndomorphism k_endomorphism(const HeisenbergAlgebra& alg, const Vec& V, const Vec& Y) {
    if (V.norm() < kZeroNorm || Y.norm() < kZeroNorm) throw std::invalid_argument("k_endomorphism: V and Y must be non-zero");
    KEndomorphism K;
    K.Vhat = V.normalized();
    K.Yhat = Y.normalized();
    const int k = alg.k();
    K.yperp = orthogonal_complement(column(K.Yhat), k);
    const int d = static_cast<int>(K.yperp.cols());
    const Vec JyV = alg.j_map(K.Yhat, K.Vhat);
    Mat img(k, d);
    for (int i = 0; i < d; ++i) img.col(i) = alg.bracket(K.Vhat, alg.j_map(K.yperp.col(i), JyV));
    K.K = K.yperp.transpose() * img;
    K.Kz = K.yperp * K.K * K.yperp.transpose();
    K.skew_residual = max_abs(Mat(K.K + K.K.transpose()));
    K.range_residual = d ? max_abs(Vec(img.transpose() * K.Yhat)) : 0.0;
    return K;
}

KSquareSpectrum ksquare_spectrum(const KEndomorphism& K, double rel_tol) {
    KSquareSpectrum sp;
    const int d = static_cast<int>(K.K.rows());
    if (d == 0) {
        sp.raw = Vec(0);
        return sp;
    }
    const Mat K2 = K.K * K.K;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (K2 + K2.transpose()));
    sp.raw = es.eigenvalues();
    // descending order, clustered
    int i = d - 1;
    while (i >= 0) {
        const double lead = sp.raw(i);
        int j = i;
        double sum = 0;
        while (j >= 0 && std::abs(sp.raw(j) - lead) <= rel_tol * std::max(1.0, std::abs(lead))) sum += sp.raw(j--);
        const int cnt = i - j;
        double mu = sum / cnt;
        if (std::abs(mu) <= rel_tol) mu = 0.0;
        if (std::abs(mu + 1.0) <= rel_tol) mu = -1.0;
        sp.mu.push_back(mu);
        sp.L.push_back(K.yperp * es.eigenvectors().middleCols(j + 1, cnt));
        i = j;
    }
    for (size_t a = 0; a < sp.L.size(); ++a) {
        sp.invariance_residual = std::max(sp.invariance_residual, proj_residual(sp.L[a], K.Kz * sp.L[a]));
        for (size_t b = a + 1; b < sp.L.size(); ++b)
            sp.orthogonality_residual = std::max(sp.orthogonality_residual, max_abs(Mat(sp.L[a].transpose() * sp.L[b])));
    }
    return sp;
}

YperpSplit yperp_j_split(const KEndomorphism& K, const KSquareSpectrum& spec, double tol) {
    YperpSplit out;
    const int k = static_cast<int>(K.Yhat.size());
    std::vector<Mat> J, C;
    out.complement_max_mu = -2.0;
    out.complement_min_mu = 2.0;
    for (size_t j = 0; j < spec.mu.size(); ++j) {
        if (std::abs(spec.mu[j] + 1.0) <= tol) {
            J.push_back(spec.L[j]);
        } else {
            C.push_back(spec.L[j]);
            out.complement_max_mu = std::max(out.complement_max_mu, spec.mu[j]);
            out.complement_min_mu = std::min(out.complement_min_mu, spec.mu[j]);
        }
    }
    out.J = hstack(J, k);
    out.complement = hstack(C, k);
    out.invariance_residual = proj_residual(out.J, K.Kz * out.J);
    return out;
}

bool is_generic(const DamekRicciSpace& S, const Vec& direction) {
    return S.vpart(direction).norm() >= kZeroNorm && S.zpart(direction).norm() >= kZeroNorm;
}

AdmissibleDecomposition admissible_decomposition(const DamekRicciSpace& S, const Vec& direction) {
    require_unit(direction, "admissible_decomposition");
    if (!is_generic(S, direction))
        throw std::invalid_argument("admissible_decomposition: non-generic direction, use nongeneric_spectrum");
    const auto& alg = S.algebra();
    const int m = S.m(), n = S.n();
    AdmissibleDecomposition d;
    d.direction = direction;
    d.V = S.vpart(direction);
    d.Y = S.zpart(direction);
    d.s = S.apart(direction);
    d.normV = d.V.norm();
    d.normY = d.Y.norm();
    d.chi = std::pow(1.0 - d.s, 2) + d.normY * d.normY;
    d.K = k_endomorphism(alg, d.V, d.Y);
    d.spectrum = ksquare_spectrum(d.K);
    const Vec& Vh = d.K.Vhat;
    const Vec& Yh = d.K.Yhat;
    const Vec JYV = alg.j_map(Yh, Vh);

    Mat s4raw(n, 4);
    s4raw << flat_v(S, d.V), flat_v(S, alg.j_map(d.Y, d.V)), flat_z(S, d.Y), S.unit_A();
    d.s4 = orthonormal_basis(s4raw);
    d.s4_0.resize(n, 3);
    d.s4_0.col(0) = S.join(d.normV * JYV, d.s * Yh, -d.normY);
    d.s4_0.col(1) = S.join(d.s * Vh - d.normY * JYV, Vec::Zero(S.k()), -d.normV);
    d.s4_0.col(2) = S.join(d.normY * Vh + d.s * JYV, -d.normV * Yh, 0.0);

    Mat stacked(2 * S.k(), m);
    stacked << alg.ad(d.V), alg.ad(alg.j_map(d.Y, d.V));
    const Mat pv = null_space(stacked);
    d.dim_p = static_cast<int>(pv.cols());
    d.p = Mat::Zero(n, d.dim_p);
    d.p.topRows(m) = pv;

    const auto split = yperp_j_split(d.K, d.spectrum);
    d.yperp_J = split.J;
    d.yperp_Jc = split.complement;
    d.k1 = static_cast<int>(d.yperp_J.cols());
    d.k2 = static_cast<int>(d.yperp_Jc.cols());
    auto image = [&](const Mat& zs, const Vec& v) {
        Mat out = Mat::Zero(n, zs.cols());
        for (int i = 0; i < zs.cols(); ++i) out.col(i).head(m) = alg.j_map(zs.col(i), v);
        return out;
    };
    d.t1 = image(d.yperp_J, Vh);
    d.t2 = image(d.yperp_Jc, Vh);
    d.t3 = image(d.yperp_Jc, JYV);

    for (size_t j = 0; j < d.spectrum.mu.size(); ++j) {
        QBlock b;
        b.mu = d.spectrum.mu[j];
        b.is_ell = (b.mu == -1.0);
        const Mat& L = d.spectrum.L[j];
        const int dl = static_cast<int>(L.cols());
        if (b.mu == 0.0) {
            b.L = L;
            b.raw.resize(n, 3 * dl);
            for (int a = 0; a < dl; ++a) {
                const Vec Z = L.col(a);
                b.raw.col(3 * a) = flat_v(S, alg.j_map(Z, Vh));
                b.raw.col(3 * a + 1) = flat_v(S, alg.j_map(Z, JYV));
                b.raw.col(3 * a + 2) = flat_z(S, Z);
            }
        } else {
            b.L = paired_basis(L, d.K.Kz / std::sqrt(std::abs(b.mu)));
            const int per = b.is_ell ? 4 : 6;
            b.raw.resize(n, per * dl / 2);
            for (int a = 0; a < dl / 2; ++a) {
                const Vec Z1 = b.L.col(2 * a), Z2 = b.L.col(2 * a + 1);
                int c = per * a;
                b.raw.col(c++) = flat_v(S, alg.j_map(Z1, Vh));
                b.raw.col(c++) = flat_v(S, alg.j_map(Z2, Vh));
                if (!b.is_ell) {
                    b.raw.col(c++) = flat_v(S, alg.j_map(Z1, JYV));
                    b.raw.col(c++) = flat_v(S, alg.j_map(Z2, JYV));
                }
                b.raw.col(c++) = flat_z(S, Z1);
                b.raw.col(c++) = flat_z(S, Z2);
            }
        }
        b.basis = orthonormal_basis(b.raw, 1e-10);
        d.q.push_back(std::move(b));
    }

    std::vector<Mat> all = {column(direction), d.s4_0, d.p};
    for (const auto& b : d.q) all.push_back(b.basis);
    const Mat Q = hstack(all, n);
    const Mat Gm = Q.transpose() * Q - Mat::Identity(Q.cols(), Q.cols());
    d.orthogonality_residual = max_abs(Gm);
    d.completeness_residual =
        Q.cols() == n ? max_abs(Mat(Q * Q.transpose() - Mat::Identity(n, n))) : std::numeric_limits<double>::infinity();
    d.dimension_identity = (m == 2 + d.dim_p + d.k1 + 2 * d.k2);
    return d;
}

HessianBlockReport hessian_blocks(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    const auto& alg = S.algebra();
    const Mat H = hessian_at_identity(S, d.direction);
    HessianBlockReport r;
    r.symmetry_residual = max_abs(Mat(H - H.transpose()));
    r.null_residual = max_abs(Vec(H * d.direction));
    std::vector<Mat> blocks = {d.s4_0, d.p};
    for (const auto& b : d.q) blocks.push_back(b.basis);
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[i].cols() && blocks[j].cols())
                r.cross_block_residual =
                    std::max(r.cross_block_residual, max_abs(Mat(blocks[i].transpose() * H * blocks[j])));
    if (d.dim_p)
        r.p_block_residual = max_abs(Mat(restrict_form(H, d.p) - 0.5 * Mat::Identity(d.dim_p, d.dim_p)));

    const auto th = boundary_coords(S, d.direction);
    const Vec& Vh = d.K.Vhat;
    const Vec JYV = alg.j_map(d.K.Yhat, Vh);
    const double coef = 2.0 * d.normV / d.chi;
    for (const auto& b : d.q)
        for (int a = 0; a < b.L.cols(); ++a) {
            const Vec Z = b.L.col(a);
            const Vec KZ = d.K.Kz * Z;
            const Vec e1 = alg.bracket(th.v, alg.j_map(Z, Vh)) - coef * ((1.0 - d.s) * Z - d.normY * KZ);
            const Vec e2 = alg.bracket(th.v, alg.j_map(Z, JYV)) - coef * (d.normY * Z + (1.0 - d.s) * KZ);
            r.bracket_residual = std::max({r.bracket_residual, max_abs(e1), max_abs(e2)});
        }
    return r;
}

S4Report s4_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    const Mat H = hessian_at_identity(S, d.direction);
    S4Report r;
    r.table = restrict_form(H, d.s4_0);
    Mat expect = Mat::Zero(3, 3);
    expect.diagonal() << 1.0, 0.5, 0.5;
    r.table_residual = max_abs(Mat(r.table - expect));
    r.direction_residual = max_abs(Vec(H * d.direction));
    const Mat R = S.jacobi_matrix(d.direction);
    r.jacobi_eigenvalues = sym_eigenvalues(restrict_form(R, d.s4_0));
    Vec want(3);
    want << -1.0, -0.25, -0.25;
    r.jacobi_residual = spectrum_distance(r.jacobi_eigenvalues, want);
    return r;
}

QEllReport q_ell_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    const QBlock* ell = nullptr;
    for (const auto& b : d.q)
        if (b.is_ell) ell = &b;
    if (!ell) throw std::invalid_argument("q_ell_block: (Y^perp)_J is trivial");
    const auto& alg = S.algebra();
    const auto [v, y, s, chi] = scalars_of(d);
    (void)chi;
    const double a = 0.5 * (1.0 + v * v), b = 0.5 * (1.0 + s * s + y * y), c = 0.5 * s * v, dd = 0.5 * y * v;
    QEllReport r;
    r.B.resize(4, 4);
    r.B << a, 0, c, dd,
           0, a, -dd, c,
           c, -dd, b, 0,
           dd, c, 0, b;
    r.eigenvalues = sym_eigenvalues(r.B);
    Vec want(4);
    want << 0.5, 0.5, 1.0, 1.0;
    r.eigen_residual = spectrum_distance(r.eigenvalues, want);
    for (double l : {1.0, 0.5})
        r.characteristic_residual = std::max(r.characteristic_residual, std::abs((a - l) * (b - l) - c * c - dd * dd));

    const Mat H = hessian_at_identity(S, d.direction);
    const int pairs = static_cast<int>(ell->L.cols()) / 2;
    for (int p = 0; p < pairs; ++p) {
        const Mat raw = ell->raw.middleCols(4 * p, 4);
        r.entry_residual = std::max(r.entry_residual, max_abs(Mat(restrict_form(H, raw) - r.B)));
    }
    const Vec JYVs = alg.j_map(d.Y, d.V) - s * d.V;
    for (int i = 0; i < ell->L.cols(); ++i) {
        const Vec Z = ell->L.col(i);
        const Vec JZ = alg.j_map(Z, JYVs);
        const Vec U1 = S.join(JZ, v * v * Z, 0.0);
        const Vec U2 = S.join(JZ, (v * v - 1.0) * Z, 0.0);
        r.eigenvector_residual = std::max(r.eigenvector_residual, max_abs(Vec(H * U1 - 0.5 * U1)) / U1.norm());
        r.eigenvector_residual = std::max(r.eigenvector_residual, max_abs(Vec(H * U2 - U2)) / U2.norm());
    }
    return r;
}

namespace {

Mat q0_table(double v, double y, double s, double chi) {
    Mat T(3, 3);
    const double ww = 0.5 + v * v * (1 - s) * (1 - s) / (2 * chi);
    const double w2 = 0.5 + v * v * y * y / (2 * chi);
    const double zz = 0.5 * (1 + s * s + y * y);
    const double wz = 0.5 * v * s, w2z = -0.5 * v * y, ww2 = 0.5 * v * v * (1 - s) * y / chi;
    T << ww, ww2, wz,
         ww2, w2, w2z,
         wz, w2z, zz;
    return T;
}

}  // namespace

Q0Report q0_block(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    const QBlock* q0 = nullptr;
    for (const auto& b : d.q)
        if (b.mu == 0.0) q0 = &b;
    if (!q0) throw std::invalid_argument("q0_block: mu = 0 does not occur");
    const auto [v, y, s, chi] = scalars_of(d);
    Q0Report r;
    r.table = q0_table(v, y, s, chi);
    const Mat H = hessian_at_identity(S, d.direction);
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int a = 0; a < q0->L.cols(); ++a) {
        const Mat raw = q0->raw.middleCols(3 * a, 3);
        const Mat blk = restrict_form(H, raw);
        r.entry_residual = std::max(r.entry_residual, max_abs(Mat(blk - r.table)));
        r.min_eigenvalue = std::min(r.min_eigenvalue, sym_eigenvalues(blk)(0));
    }
    // completed squares on a fixed set of (w, w', z)
    const double pts[][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -2, 0.5}, {-0.3, 0.7, 1.9}, {2, 1, -1}};
    for (const auto& p : pts) {
        Eigen::Vector3d x(p[0], p[1], p[2]);
        const double form = x.dot(r.table * x);
        const double w = p[0], w2 = p[1], z = p[2];
        const double sq = v * v / (2 * chi) * std::pow((1 - s) * w + y * w2, 2) + 0.5 * std::pow(w + s * v * z, 2) +
                          0.5 * std::pow(w2 - y * v * z, 2) + 0.5 * (1 + (s * s + y * y) * (1 - v * v)) * z * z;
        r.completed_square_residual = std::max(r.completed_square_residual, std::abs(form - sq));
    }
    return r;
}

QjReport q_j_hermitian(const DamekRicciSpace& S, const AdmissibleDecomposition& d, int j) {
    if (j < 0 || j >= static_cast<int>(d.q.size())) throw std::out_of_range("q_j_hermitian: block index");
    const QBlock& blk = d.q[j];
    if (!(blk.mu > -1.0 && blk.mu < 0.0)) throw std::invalid_argument("q_j_hermitian: mu_j outside (-1, 0)");
    const auto [v, y, s, chi] = scalars_of(d);
    QjReport r;
    r.mu = blk.mu;
    r.cos_theta = std::sqrt(-blk.mu);
    r.sin_theta = std::sqrt(1.0 + blk.mu);
    const double ct = r.cos_theta, st2 = 1.0 + blk.mu, v2 = v * v;
    r.a = 0.5 + v2 / (2 * chi) * ((1 - s) * (1 - s) + y * y * ct * ct);
    r.b = 0.5 + v2 / (2 * chi) * (y * y + (1 - s) * (1 - s) * ct * ct);
    r.c = v2 / (2 * chi) * (1 - s) * y * st2;
    r.d = -0.5 * (1 + v2) * ct;
    r.f = 0.5 * s * v;
    r.g = 0.5 * y * v * ct;
    r.h = -0.5 * y * v;
    r.l = 0.5 * s * v * ct;
    r.t = 0.5 * (1 + s * s + y * y);
    using C = std::complex<double>;
    const C I(0, 1);
    r.H << r.a, r.c - I * r.d, r.f - I * r.g,
           r.c + I * r.d, r.b, r.h - I * r.l,
           r.f + I * r.g, r.h + I * r.l, r.t;
    r.det2 = (r.H.topLeftCorner<2, 2>().determinant()).real();
    r.det3 = r.H.determinant().real();
    r.det2_formula = 0.25 * (1 + v2) * st2;
    r.det3_formula = 0.25 * st2 - v2 * v2 * y * y / (8 * chi) * st2 * st2;
    r.det3_lower_bound = st2 * st2 * (2 * chi - v2 * v2 * y * y) / (8 * chi);

    const Mat H = hessian_at_identity(S, d.direction);
    const Mat M = realified_form(r.a, r.b, r.t, r.c, r.d, r.f, r.g, r.h, r.l);
    std::vector<Vec> eig;
    const int pairs = static_cast<int>(blk.L.cols()) / 2;
    for (int p = 0; p < pairs; ++p) {
        const Mat raw = blk.raw.middleCols(6 * p, 6);
        r.entry_residual = std::max(r.entry_residual, max_abs(Mat(restrict_form(H, raw) - M)));
        const Mat G = raw.transpose() * raw;
        r.pairing_residual = std::max(r.pairing_residual, std::abs(G(0, 3) + ct));
        eig.push_back(generalized_eigenvalues(M, G));
    }
    r.eigenvalues = concat(eig);
    std::sort(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
    return r;
}

std::array<double, 3> jacobi_cubic(double v2, double y2, double mu) {
    const double rhs = 27.0 / 64.0 * v2 * v2 * y2 * (1.0 + mu);
    // kappa = x - 1/2: x^3 - (3/16) x + (1/32 - rhs) = 0
    const double q = 1.0 / 32.0 - rhs;
    const double arg = std::clamp(-32.0 * q, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::array<double, 3> k;
    for (int i = 0; i < 3; ++i) k[i] = 0.5 * std::cos(phi - 2.0 * M_PI * i / 3.0) - 0.5;
    auto poly = [&](double x) { return ((x + 1.5) * x + 9.0 / 16.0) * x + 1.0 / 16.0 - rhs; };
    auto dpoly = [&](double x) { return (3.0 * x + 3.0) * x + 9.0 / 16.0; };
    for (auto& x : k)
        for (int it = 0; it < 3; ++it) {
            const double dp = dpoly(x);
            if (std::abs(dp) < 1e-6) break;
            x -= poly(x) / dp;
        }
    std::sort(k.begin(), k.end());
    return k;
}

std::array<double, 3> jacobi_cubic(const DamekRicciSpace& S, const Vec& direction, double mu) {
    require_unit(direction, "jacobi_cubic");
    return jacobi_cubic(S.vpart(direction).squaredNorm(), S.zpart(direction).squaredNorm(), mu);
}

CubicReport jacobi_cubic_check(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    CubicReport r;
    const Mat R = S.jacobi_matrix(d.direction);
    for (const auto& b : d.q) {
        const Vec ev = sym_eigenvalues(restrict_form(R, b.basis));
        if (b.is_ell) {
            const int dl = static_cast<int>(b.L.cols());
            Vec want(2 * dl);
            want << Vec::Constant(dl, -1.0), Vec::Constant(dl, -0.25);
            r.ell_residual = std::max(r.ell_residual, spectrum_distance(ev, want));
            continue;
        }
        ++r.blocks;
        const auto k = jacobi_cubic(d.normV * d.normV, d.normY * d.normY, b.mu);
        const int dl = static_cast<int>(b.L.cols());
        Vec want(3 * dl);
        want << Vec::Constant(dl, k[0]), Vec::Constant(dl, k[1]), Vec::Constant(dl, k[2]);
        r.root_residual = std::max(r.root_residual, spectrum_distance(ev, want));
        const double eps = 1e-12;
        r.ordering_ok = r.ordering_ok && (k[0] > -1.0) && (k[0] <= -0.75 + eps) && (k[1] >= -0.75 - eps) &&
                        (k[1] < -0.25) && (k[2] > -0.25) && (k[2] <= eps);
    }
    return r;
}

Vec assembled_hessian_spectrum(const DamekRicciSpace& S, const AdmissibleDecomposition& d) {
    std::vector<Vec> parts;
    Vec s4(4);
    s4 << 0.0, 1.0, 0.5, 0.5;
    parts.push_back(s4);
    parts.push_back(Vec::Constant(d.dim_p, 0.5));
    for (size_t j = 0; j < d.q.size(); ++j) {
        const auto& b = d.q[j];
        if (b.is_ell) {
            const Vec e = q_ell_block(S, d).eigenvalues;
            for (int p = 0; p < b.L.cols() / 2; ++p) parts.push_back(e);
        } else if (b.mu == 0.0) {
            const auto [v, y, s, chi] = scalars_of(d);
            const Vec e = sym_eigenvalues(q0_table(v, y, s, chi));
            for (int a = 0; a < b.L.cols(); ++a) parts.push_back(e);
        } else {
            parts.push_back(q_j_hermitian(S, d, static_cast<int>(j)).eigenvalues);
        }
    }
    Vec out = concat(parts);
    std::sort(out.data(), out.data() + out.size());
    return out;
}

NonGenericReport nongeneric_spectrum(const DamekRicciSpace& S, const Vec& direction) {
    require_unit(direction, "nongeneric_spectrum");
    if (is_generic(S, direction)) throw std::invalid_argument("nongeneric_spectrum: direction is generic");
    const auto& alg = S.algebra();
    const int m = S.m(), k = S.k();
    const Vec V = S.vpart(direction), Y = S.zpart(direction);
    const double s = S.apart(direction), v = V.norm();
    const Mat H = hessian_at_identity(S, direction);
    NonGenericReport r;
    r.direct = sym_eigenvalues(H);
    std::vector<Vec> parts = {Vec::Zero(1)};
    if (v < kZeroNorm && Y.norm() < kZeroNorm) {
        r.which = NonGenericReport::Case::AxisA;
        parts.push_back(Vec::Constant(m, 0.5));
        parts.push_back(Vec::Constant(k, 1.0));
    } else if (v < kZeroNorm) {
        r.which = NonGenericReport::Case::VZero;
        // v at 1/2, Y^perp and s Y^ - |Y| A at 1
        parts.push_back(Vec::Constant(m, 0.5));
        parts.push_back(Vec::Constant(k, 1.0));
    } else {
        r.which = NonGenericReport::Case::YZero;
        // R W2 + p at 1/2, then k blocks on {J_Z V^, Z}
        parts.push_back(Vec::Constant(m - k, 0.5));
        Mat B(2, 2);
        B << 0.5 * (1 + v * v), 0.5 * s * v, 0.5 * s * v, 0.5 * (1 + s * s);
        const Vec e = sym_eigenvalues(B);
        for (int a = 0; a < k; ++a) parts.push_back(e);
        const Vec Vh = V / v;
        r.min_block_eigenvalue = std::numeric_limits<double>::infinity();
        for (int a = 0; a < k; ++a) {
            Vec Z = Vec::Zero(k);
            Z(a) = 1.0;
            Mat raw(S.n(), 2);
            raw << S.join(alg.j_map(Z, Vh), Vec::Zero(k), 0.0), S.join(Vec::Zero(m), Z, 0.0);
            r.min_block_eigenvalue = std::min(r.min_block_eigenvalue, sym_eigenvalues(restrict_form(H, raw))(0));
        }
    }
    r.assembled = concat(parts);
    std::sort(r.assembled.data(), r.assembled.data() + r.assembled.size());
    r.distance = spectrum_distance(r.assembled, r.direct);
    return r;
}

CommutationReport commutation_check(const DamekRicciSpace& S, const Vec& direction, double t) {
    require_unit(direction, "commutation_check");
    Vec u = geodesic_velocity(S, direction, t);
    u.normalize();
    const auto d = admissible_decomposition(S, u);
    std::vector<Mat> parts = {d.s4_0, d.p};
    for (const auto& b : d.q)
        if (b.is_ell) parts.push_back(b.basis);
    const Mat F = hstack(parts, S.n());
    const Mat Sh = -hessian_at_identity(S, u);
    const Mat R = S.jacobi_matrix(u);
    CommutationReport r;
    const Mat Sf = restrict_form(Sh, F), Rf = restrict_form(R, F);
    r.commutator = max_abs(Mat(Sf * Rf - Rf * Sf));
    r.invariance_residual = std::max(proj_residual(F, Sh * F), proj_residual(F, R * F));
    r.shape_eigenvalues = sym_eigenvalues(Sf);
    const Vec rev = sym_eigenvalues(Rf);
    for (int i = 0; i < r.shape_eigenvalues.size(); ++i) {
        const double l = r.shape_eigenvalues(i);
        if (l >= 0) continue;
        r.pairing_residual = std::max(r.pairing_residual, (rev.array() + l * l).abs().minCoeff());
    }
    return r;
}

}  // namespace drspace
