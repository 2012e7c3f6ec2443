#include "drspace/riccati.hpp"

#include "drspace/geodesics.hpp"
#include "drspace/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace drspace {

DamekRicciModel::DamekRicciModel(const DamekRicciSpace& S, Vec direction)
    : S_(S), dir_(std::move(direction)), theta_(boundary_coords(S, dir_)) {}

Vec DamekRicciModel::velocity(double t) const { return geodesic_velocity(S_, dir_, t); }

Mat DamekRicciModel::shape(double t) const {
    Mat H = busemann_hessian(S_, geodesic_point(S_, dir_, t), theta_);
    return -0.5 * (H + H.transpose());
}

Mat DamekRicciModel::jacobi(double t) const {
    const Mat R = S_.jacobi_matrix(velocity(t));
    return 0.5 * (R + R.transpose());
}

Mat DamekRicciModel::connection(double t) const { return S_.nabla_matrix(velocity(t)); }

ProductModel::ProductModel(const DamekRicciSpace& S, Vec direction, double alpha)
    : S_(S), dr_(S, direction), dir_(std::move(direction)), ca_(std::cos(alpha)), sa_(std::sin(alpha)) {}

Vec ProductModel::velocity(double t) const {
    Vec v(dim());
    v << ca_ * dr_.velocity(ca_ * t), sa_;
    return v;
}

namespace {

Mat pad(const Mat& m) {
    Mat out = Mat::Zero(m.rows() + 1, m.cols() + 1);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

Mat transport_step(const GeodesicModel& model, const Mat& P, double t, double h) {
    auto f = [&](double s, const Mat& Q) -> Mat { return -model.connection(s) * Q; };
    const Mat k1 = f(t, P);
    const Mat k2 = f(t + 0.5 * h, P + 0.5 * h * k1);
    const Mat k3 = f(t + 0.5 * h, P + 0.5 * h * k2);
    const Mat k4 = f(t + h, P + h * k3);
    return P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int step_count(double span, double step) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(span) / step - 1e-9)));
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Mat ProductModel::shape(double t) const { return ca_ * pad(dr_.shape(ca_ * t)); }
Mat ProductModel::jacobi(double t) const { return ca_ * ca_ * pad(dr_.jacobi(ca_ * t)); }
Mat ProductModel::connection(double t) const { return ca_ * pad(dr_.connection(ca_ * t)); }

Vec ProductModel::null_vector(double t) const {
    Vec u(dim());
    u << -sa_ * dr_.velocity(ca_ * t), ca_;
    return u;
}

Mat shape_operator(const DamekRicciSpace& S, const Vec& direction, double t) {
    require_unit(direction, "shape_operator");
    return DamekRicciModel(S, direction).shape(t);
}

Mat shape_operator_translated(const DamekRicciSpace& S, const Vec& direction, double t) {
    require_unit(direction, "shape_operator_translated");
    Vec u = geodesic_velocity(S, direction, t);
    u.normalize();
    return -hessian_at_identity(S, u);
}

Mat parallel_transport(const GeodesicModel& model, double t0, double t1, double step) {
    Mat P = Mat::Identity(model.dim(), model.dim());
    if (t1 == t0) return P;
    const int n = step_count(t1 - t0, step);
    const double h = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) P = transport_step(model, P, t0 + i * h, h);
    return P;
}

double riccati_residual(const GeodesicModel& model, double t, double dt) {
    const int n = model.dim();
    const Mat I = Mat::Identity(n, n);
    const Mat Pp = transport_step(model, I, t, dt);
    const Mat Pm = transport_step(model, I, t, -dt);
    const Mat Sp = Pp.transpose() * model.shape(t + dt) * Pp;
    const Mat Sm = Pm.transpose() * model.shape(t - dt) * Pm;
    const Mat S0 = model.shape(t);
    const Mat res = (Sp - Sm) / (2.0 * dt) + S0 * S0 + model.jacobi(t);
    return max_abs(res);
}

double riccati_residual(const DamekRicciSpace& S, const Vec& direction, double t, double dt) {
    require_unit(direction, "riccati_residual");
    return riccati_residual(DamekRicciModel(S, direction), t, dt);
}

ShapeOperatorPath riccati_integrate(const GeodesicModel& model, const Mat& S0, double t0, double t1, double step,
                                    int every, double blowup) {
    if (max_abs(Mat(S0 - S0.transpose())) > 1e-10) throw std::invalid_argument("riccati_integrate: S0 not symmetric");
    if (step <= 0 || every < 1) throw std::invalid_argument("riccati_integrate: bad step");
    const int n = model.dim();
    const int N = step_count(t1 - t0, step);
    const double h = (t1 - t0) / N;
    Mat P = Mat::Identity(n, n);
    Mat St = S0;
    ShapeOperatorPath path;
    path.t.push_back(t0);
    path.S.push_back(S0);
    struct D {
        Mat dP, dS;
    };
    auto rhs = [&](double s, const Mat& Pc, const Mat& Sc) -> D {
        return {-model.connection(s) * Pc, -Sc * Sc - Pc.transpose() * model.jacobi(s) * Pc};
    };
    for (int i = 0; i < N; ++i) {
        const double s = t0 + i * h;
        const D k1 = rhs(s, P, St);
        const D k2 = rhs(s + 0.5 * h, P + 0.5 * h * k1.dP, St + 0.5 * h * k1.dS);
        const D k3 = rhs(s + 0.5 * h, P + 0.5 * h * k2.dP, St + 0.5 * h * k2.dS);
        const D k4 = rhs(s + h, P + h * k3.dP, St + h * k3.dS);
        P += (h / 6.0) * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP);
        St += (h / 6.0) * (k1.dS + 2.0 * k2.dS + 2.0 * k3.dS + k4.dS);
        St = sym(St);
        const double norm = max_abs(St);
        if (!std::isfinite(norm) || norm > blowup)
            throw RiccatiBlowUp("riccati_integrate: |S| exceeded " + std::to_string(blowup) + " at t = " +
                                std::to_string(s + h));
        if ((i + 1) % every == 0 || i + 1 == N) {
            path.t.push_back(s + h);
            path.S.push_back(sym(P * St * P.transpose()));
        }
    }
    return path;
}

Mat sphere_shape_operator(const GeodesicModel& model, double t, double T, double step) {
    if (!(T - t > 10 * step)) throw std::invalid_argument("sphere_shape_operator: t too close to the center");
    const int n = model.dim();
    const Mat B0 = orthogonal_complement(Mat(model.velocity(T).normalized()), n);
    const int d = static_cast<int>(B0.cols());
    // s runs from T down to t; tau = T - s. dA/ds = -Ad, dAd/ds = R~ A.
    struct St {
        Mat P, A, Ad;
    };
    auto rhs = [&](double s, const St& z) -> St {
        const Mat PB = z.P * B0;
        const Mat Rt = PB.transpose() * model.jacobi(s) * PB;
        return {-model.connection(s) * z.P, -z.Ad, Rt * z.A};
    };
    auto axpy = [](const St& z, double h, const St& k) -> St { return {z.P + h * k.P, z.A + h * k.A, z.Ad + h * k.Ad}; };
    St z{Mat::Identity(n, n), Mat::Zero(d, d), Mat::Identity(d, d)};
    const int N = step_count(T - t, step);
    const double h = (t - T) / N;
    for (int i = 0; i < N; ++i) {
        const double s = T + i * h;
        const St k1 = rhs(s, z);
        const St k2 = rhs(s + 0.5 * h, axpy(z, 0.5 * h, k1));
        const St k3 = rhs(s + 0.5 * h, axpy(z, 0.5 * h, k2));
        const St k4 = rhs(s + h, axpy(z, h, k3));
        z.P += (h / 6.0) * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
        z.A += (h / 6.0) * (k1.A + 2.0 * k2.A + 2.0 * k3.A + k4.A);
        z.Ad += (h / 6.0) * (k1.Ad + 2.0 * k2.Ad + 2.0 * k3.Ad + k4.Ad);
    }
    Eigen::PartialPivLU<Mat> lu(z.A);
    if (std::abs(lu.determinant()) < 1e-300) throw std::runtime_error("sphere_shape_operator: A singular");
    // U = Ad A^{-1}, via A^T U^T = Ad^T
    const Mat U = sym(z.A.transpose().partialPivLu().solve(z.Ad.transpose()).transpose());
    const Mat PB = z.P * B0;
    return -sym(PB * U * PB.transpose());
}

RankReport rank_of_geodesic(const DamekRicciSpace& S, const Vec& direction, double tol,
                            const std::vector<double>& times) {
    require_unit(direction, "rank_of_geodesic");
    auto count = [&](const Mat& H, const Vec& u, double* floor) {
        const Mat B = orthogonal_complement(Mat(u.normalized()), S.n());
        const Vec ev = sym_eigenvalues(restrict_form(H, B));
        if (floor) *floor = ev(0);
        return static_cast<int>((ev.array().abs() < tol).count());
    };
    RankReport r;
    r.dim_E = count(hessian_at_identity(S, direction), direction, &r.floor);
    r.rank = r.dim_E + 1;
    const DamekRicciModel model(S, direction);
    for (double t : times) {
        const int c = count(Mat(-model.shape(t)), model.velocity(t), nullptr);
        r.dim_E_over_t.push_back(c);
        r.t_independent = r.t_independent && (c == r.dim_E);
    }
    return r;
}

KernelLocusReport jacobi_kernel_locus(const DamekRicciSpace& S, const Vec& direction, double tol) {
    require_unit(direction, "jacobi_kernel_locus");
    KernelLocusReport r;
    Mat B;
    const Mat R = S.jacobi_operator(direction, &B);
    Eigen::SelfAdjointEigenSolver<Mat> es(R);
    std::vector<Mat> cols;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < tol) cols.push_back(Mat(B * es.eigenvectors().col(i)));
    r.kernel = hstack(cols, S.n());
    r.dim_ker = 1 + static_cast<int>(cols.size());
    const double v2 = S.vpart(direction).squaredNorm(), y2 = S.zpart(direction).squaredNorm();
    const double s = S.apart(direction);
    r.on_locus = std::abs(v2 - 2.0 / 3.0) < 1e-9 && std::abs(y2 - 1.0 / 3.0) < 1e-9 && std::abs(s) < 1e-9;
    if (is_generic(S, direction)) {
        const auto d = admissible_decomposition(S, direction);
        for (double mu : d.spectrum.mu) r.has_mu_zero = r.has_mu_zero || mu == 0.0;
    }
    for (int i = 1; i <= 1000; ++i)
        for (double sign : {-1.0, 1.0}) r.max_h_off_zero = std::max(r.max_h_off_zero, geodesic_scalars(s, y2, sign * 0.01 * i).h);
    const Mat Bd = orthogonal_complement(Mat(direction), S.n());
    r.hessian_floor = sym_eigenvalues(restrict_form(hessian_at_identity(S, direction), Bd))(0);
    return r;
}

Vec locus_direction(const DamekRicciSpace& S, Rng& rng) {
    const Vec V = rng.unit_vec(S.m()) * std::sqrt(2.0 / 3.0);
    const Vec Y = rng.unit_vec(S.k()) * std::sqrt(1.0 / 3.0);
    return S.join(V, Y, 0.0);
}

FlatPlaneReport flat_plane_search(const DamekRicciSpace& S, const Vec& direction, const std::vector<double>& t_grid) {
    require_unit(direction, "flat_plane_search");
    FlatPlaneReport r;
    const double s = S.apart(direction), y2 = S.zpart(direction).squaredNorm();
    r.dlogh_at_zero = geodesic_scalars(s, y2, 0.0).dlogh;
    r.min_abs_dlogh_off_zero = std::numeric_limits<double>::infinity();
    r.max_curvature_off_zero = -std::numeric_limits<double>::infinity();
    const auto loc = jacobi_kernel_locus(S, direction);
    r.candidate = loc.kernel.cols() > 0;
    Vec xi0;
    if (r.candidate) {
        xi0 = loc.kernel.col(0);
        r.flat_curvature = S.sectional_curvature(direction, xi0);
        r.condition_residual = flat_plane_condition_residual(S, curvature_decomposition(S, direction, xi0));
    }
    const DamekRicciModel model(S, direction);
    for (double t : t_grid) {
        const double dl = geodesic_scalars(s, y2, t).dlogh;
        r.t.push_back(t);
        r.dlogh.push_back(dl);
        double K = 0.0;
        if (r.candidate) {
            const Vec xi = parallel_transport(model, 0.0, t) * xi0;
            K = S.sectional_curvature(model.velocity(t), xi);
        }
        r.curvature.push_back(K);
        if (t != 0.0) {
            r.min_abs_dlogh_off_zero = std::min(r.min_abs_dlogh_off_zero, std::abs(dl));
            if (r.candidate) r.max_curvature_off_zero = std::max(r.max_curvature_off_zero, K);
        }
    }
    return r;
}

double c0_estimate(const DamekRicciSpace& S, int samples, Rng& rng) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const Vec dir = rng.unit_vec(S.n());
        const Mat B = orthogonal_complement(Mat(dir), S.n());
        best = std::min(best, sym_eigenvalues(restrict_form(hessian_at_identity(S, dir), B))(0));
    }
    return best;
}

NullVectorReport null_vector_identities(const ProductModel& model, double t, double dt) {
    NullVectorReport r;
    const Vec u = model.null_vector(t);
    const Mat S0 = model.shape(t);
    r.shape = std::abs(u.dot(S0 * u));
    r.kernel = max_abs(Vec(S0 * u));
    r.jacobi = std::abs(u.dot(model.jacobi(t) * u));
    const int n = model.dim();
    const Mat I = Mat::Identity(n, n);
    const Mat Pp = transport_step(model, I, t, dt), Pm = transport_step(model, I, t, -dt);
    const double qp = u.dot(Pp.transpose() * model.shape(t + dt) * Pp * u);
    const double qm = u.dot(Pm.transpose() * model.shape(t - dt) * Pm * u);
    r.shape_derivative = std::abs(qp - qm) / (2.0 * dt);
    return r;
}

}  // namespace drspace
