#include "drspace/checks.hpp"

#include "drspace/busemann.hpp"
#include "drspace/geodesics.hpp"
#include "drspace/random.hpp"
#include "drspace/riccati.hpp"
#include "drspace/spectral.hpp"
#include "drspace/visibility.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace drspace {

double CheckConfig::tolerance(const std::string& id, double fallback) const {
    const auto it = tol.find(id);
    return it == tol.end() ? fallback : it->second;
}

namespace {

using Out = std::vector<CheckResult>;

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult make(const CheckConfig& cfg, const std::string& id, const std::string& anchor, double value,
                 double tol, Bound bound = Bound::Below, std::string note = {}) {
    CheckResult r;
    r.id = id;
    r.anchor = anchor;
    r.residual = value;
    r.tol = cfg.tolerance(id, tol);
    r.bound = bound;
    switch (bound) {
    case Bound::Below: r.pass = value < r.tol; break;
    case Bound::AtMost: r.pass = value <= r.tol; break;
    case Bound::AtLeast: r.pass = value >= r.tol; break;
    }
    r.note = std::move(note);
    return r;
}

// max that lets NaN through
void upd(double& acc, double v) {
    if (!(v <= acc)) acc = v;
}
void low(double& acc, double v) {
    if (!(v >= acc)) acc = v;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

GroupPoint random_point(const DamekRicciSpace& S, Rng& rng, double scale = 1.0) {
    GroupPoint p;
    p.U = scale * rng.gaussian_vec(S.m());
    p.X = scale * rng.gaussian_vec(S.k());
    p.a = std::exp(scale * rng.gaussian());
    return p;
}

double point_diff(const GroupPoint& p, const GroupPoint& q) {
    double d = std::abs(p.a - q.a) / std::max(1.0, std::abs(q.a));
    upd(d, max_abs(Vec(p.U - q.U)) / std::max(1.0, q.U.norm()));
    upd(d, max_abs(Vec(p.X - q.X)) / std::max(1.0, q.X.norm()));
    return d;
}

double coord_diff(const GroupPoint& p, const GroupPoint& q) {
    double d = std::abs(p.a - q.a);
    upd(d, max_abs(Vec(p.U - q.U)));
    upd(d, max_abs(Vec(p.X - q.X)));
    return d;
}

Vec axis_a(const DamekRicciSpace& S) {
    Vec a = Vec::Zero(S.n());
    a(S.n() - 1) = 1.0;
    return a;
}

// unit direction with s = 0 and both V, Y nonzero
Vec horizontal_direction(const DamekRicciSpace& S, Rng& rng) {
    Vec d = S.join(rng.gaussian_vec(S.m()), rng.gaussian_vec(S.k()), 0.0);
    return d / d.norm();
}

Vec a_spectrum(const DamekRicciSpace& S) {
    Vec e(S.n());
    e(0) = 0.0;
    for (int i = 0; i < S.m(); ++i) e(1 + i) = 0.5;
    for (int i = 0; i < S.k(); ++i) e(1 + S.m() + i) = 1.0;
    return e;
}

// ---------------------------------------------------------------- algebra

void algebra_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const auto& alg = S.algebra();
    const auto ir = sample_identities(alg, 1000, rng);
    out.push_back(make(cfg, "algebra.identities", "H-type identities", ir.max(), 1e-12));
    out.push_back(make(cfg, "algebra.adjoint", "bracket/J adjointness", ir.adjoint, 1e-12));
    out.push_back(make(cfg, "algebra.isometry", "|J_Z V| = |Z||V|", ir.isometry, 1e-12));
    double rel = 0;
    const int m = alg.m(), k = alg.k();
    const Mat I = Mat::Identity(m, m);
    for (int a = 0; a < k; ++a) {
        upd(rel, max_abs(Mat(alg.generator(a) + alg.generator(a).transpose())));
        for (int b = a; b < k; ++b) {
            const Mat c = alg.generator(a) * alg.generator(b) + alg.generator(b) * alg.generator(a);
            upd(rel, max_abs(Mat(c + (a == b ? 2.0 : 0.0) * I)));
        }
    }
    out.push_back(make(cfg, "algebra.clifford_relations", "Clifford relations", rel, 1e-12));
}

// ---------------------------------------------------------------- space

void space_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    double assoc = 0, inv = 0, frame = 0;
    for (int i = 0; i < 200; ++i) {
        const GroupPoint p = random_point(S, rng), q = random_point(S, rng), r = random_point(S, rng);
        upd(assoc, point_diff(S.multiply(S.multiply(p, q), r), S.multiply(p, S.multiply(q, r))));
        upd(inv, point_diff(S.multiply(p, S.inverse(p)), S.identity()));
        upd(inv, point_diff(S.multiply(S.inverse(p), p), S.identity()));
        upd(frame, max_abs(Mat(S.frame_to_coordinates(p) * S.coordinates_to_frame(p) - Mat::Identity(n, n))));
    }
    out.push_back(make(cfg, "space.group_law", "group law", std::max(assoc, inv), 1e-12));
    out.push_back(make(cfg, "space.frame", "frame/coordinate change", frame, 1e-12));

    double tors = 0, metric = 0, anti = 0, bianchi = 0, pair = 0, skew = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec x = rng.unit_vec(n), y = rng.unit_vec(n), z = rng.unit_vec(n), w = rng.unit_vec(n);
        upd(tors, max_abs(Vec(S.nabla(x, y) - S.nabla(y, x) - S.bracket(x, y))));
        upd(metric, std::abs(S.nabla(x, y).dot(z) + y.dot(S.nabla(x, z))));
        const Vec Rxyz = S.curvature(x, y, z);
        upd(anti, max_abs(Vec(Rxyz + S.curvature(y, x, z))));
        upd(bianchi, max_abs(Vec(Rxyz + S.curvature(y, z, x) + S.curvature(z, x, y))));
        upd(pair, std::abs(Rxyz.dot(w) - S.curvature(z, w, x).dot(y)));
        upd(skew, std::abs(Rxyz.dot(w) + S.curvature(x, y, w).dot(z)));
    }
    out.push_back(make(cfg, "space.torsion_free", "Levi-Civita connection", tors, 1e-12));
    out.push_back(make(cfg, "space.metric_compatibility", "Levi-Civita connection", metric, 1e-12));
    out.push_back(make(cfg, "space.curvature_symmetries", "curvature tensor symmetries",
                       std::max({anti, bianchi, pair, skew}), 1e-10));

    double closed = 0, kmax = -kInf, decomp = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec u = rng.gaussian_vec(n), v = rng.gaussian_vec(n);
        const auto pc = sectional_curvature_both(S, u, v);
        upd(closed, std::abs(pc.direct - pc.closed_form));
        upd(kmax, pc.direct);
        const auto d = curvature_decomposition(S, u, v);
        upd(decomp, std::abs(d.total() - pc.direct));
        upd(decomp, std::max({d.term_a, d.term_bracket, d.term_yy, d.term_t, 0.0}));
    }
    out.push_back(make(cfg, "space.sectional_closed_form", "sectional curvature closed form", closed, 1e-10));
    out.push_back(make(cfg, "space.nonpositive", "non-positive curvature", kmax, 0.0, Bound::AtMost));
    out.push_back(make(cfg, "space.curvature_decomposition", "four-term curvature decomposition", decomp, 1e-10));

    const Mat Ric = S.ricci();
    const double c = Ric.trace() / n;
    out.push_back(make(cfg, "space.einstein", "Einstein metric", max_abs(Mat(Ric - c * Mat::Identity(n, n))), 1e-10,
                       Bound::Below, fmt("c = %.6f", c)));

    double jac = 0;
    for (int i = 0; i < 200; ++i) {
        const Vec e = sym_eigenvalues(S.jacobi_operator(rng.unit_vec(n)));
        upd(jac, std::max(e(e.size() - 1), -1.0 - e(0)));
    }
    out.push_back(make(cfg, "space.jacobi_range", "Jacobi operator spectrum in [-1,0]", jac, 1e-12));

    Vec expect(n);
    expect << Vec::Constant(S.m(), -0.25), Vec::Constant(S.k(), -1.0), 0.0;
    const double ra = max_abs(Mat(S.jacobi_matrix(axis_a(S)) - Mat(expect.asDiagonal())));
    out.push_back(make(cfg, "space.jacobi_direction_a", "Jacobi operator along A", ra, 1e-12));
}

// ---------------------------------------------------------------- geodesics

void geodesics_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    double ode = 0;
    for (int i = 0; i < 10; ++i) {
        const Vec d = rng.unit_vec(n);
        for (double te : {5.0, -5.0})
            for (const auto& [t, p] : geodesic_ode_path(S, d, te, 1e-3, 250)) upd(ode, coord_diff(geodesic_point(S, d, t), p));
    }
    out.push_back(make(cfg, "geodesics.ode_oracle", "closed-form geodesic vs RK4", ode, 1e-8));

    double speed = 0, comp = 0;
    for (int i = 0; i < 20; ++i) {
        const Vec d = rng.unit_vec(n);
        const double v2 = S.vpart(d).squaredNorm(), y2 = S.zpart(d).squaredNorm(), s = S.apart(d);
        for (double t = -5.0; t <= 5.0; t += 0.5) {
            const Vec c = geodesic_velocity(S, d, t);
            const double h = geodesic_scalars(s, y2, t).h;
            upd(speed, std::abs(c.norm() - 1.0));
            upd(comp, std::abs(S.vpart(c).squaredNorm() - v2 * h));
            upd(comp, std::abs(S.zpart(c).squaredNorm() - y2 * h * h));
        }
    }
    out.push_back(make(cfg, "geodesics.unit_speed", "unit-speed geodesics", speed, 1e-10));
    out.push_back(make(cfg, "geodesics.velocity_components", "|V(t)|^2 = |V|^2 h, |Y(t)|^2 = |Y|^2 h^2", comp, 1e-10));

    double hmax = 0;
    for (int i = 0; i < 20; ++i) {
        const Vec d = horizontal_direction(S, rng);
        const double y2 = S.zpart(d).squaredNorm();
        for (int j = 1; j <= 1000; ++j)
            for (double sg : {-1.0, 1.0}) upd(hmax, geodesic_scalars(0.0, y2, sg * 0.01 * j).h);
    }
    out.push_back(make(cfg, "geodesics.h_below_one", "h(t) - 1 < 0 off t = 0 for s = 0", hmax - 1.0, 0.0));

    double along = 0;
    for (int i = 0; i < 20; ++i) {
        const Vec d = rng.unit_vec(n);
        const double t1 = rng.uniform(-5, 5), t2 = rng.uniform(-5, 5);
        const GroupPoint p1 = geodesic_point(S, d, t1), p2 = geodesic_point(S, d, t2);
        upd(along, std::abs(distance_from_identity(S, p1) - std::abs(t1)));
        upd(along, std::abs(distance(S, p1, p2) - std::abs(t1 - t2)));
        const GroupPoint p = random_point(S, rng);
        const Vec u = rng.unit_vec(n);
        upd(along, std::abs(distance(S, p, exp_at(S, p, u, t1)) - std::abs(t1)));
    }
    out.push_back(make(cfg, "geodesics.distance_along", "distance along geodesics", along, 1e-9));

    double pole = 0;
    for (double r = -10.0; r <= 10.0; r += 0.5) {
        GroupPoint p = S.identity();
        p.a = std::exp(r);
        upd(pole, std::abs(distance_from_identity(S, p) - std::abs(r)));
    }
    out.push_back(make(cfg, "geodesics.distance_pole", "distance to (0,0,e^r)", pole, 1e-12));

    double axioms = 0;
    for (int i = 0; i < 100; ++i) {
        const GroupPoint p = random_point(S, rng), q = random_point(S, rng), r = random_point(S, rng);
        const double pq = distance(S, p, q), qp = distance(S, q, p);
        upd(axioms, std::abs(pq - qp) / std::max(1.0, pq));
        upd(axioms, distance(S, p, r) - pq - distance(S, q, r));
        upd(axioms, distance(S, p, p));
    }
    out.push_back(make(cfg, "geodesics.metric_axioms", "distance symmetry and triangle inequality", axioms, 1e-10));
}

// ---------------------------------------------------------------- volume

void volume_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng&, Out& out) {
    const double Q = S.Q();
    const int n = S.n();
    // log(Theta e^{-Qr}) rises from its value at r = 1 to -(2Q - n + 1) log 2
    const double lo = volume_density(S, 1.0).log_theta - Q;
    const double hi = -(2.0 * Q - n + 1) * std::log(2.0);
    double viol = -kInf;
    for (int i = 0; i <= 390; ++i) {
        const double r = 1.0 + 0.1 * i;
        const double g = volume_density(S, r).log_theta - Q * r;
        upd(viol, std::max(lo - g, g - hi));
    }
    out.push_back(make(cfg, "volume.purely_exponential", "purely exponential volume growth", viol, 1e-12, Bound::Below,
                       fmt("Theta e^{-Qr} in [%.4e, %.4e]", std::exp(lo), std::exp(hi))));
    out.push_back(make(cfg, "volume.entropy", "sigma(r) -> Q", std::abs(volume_density(S, 30.0).sigma - Q), 1e-8));
    const auto [c2, c3] = fit_density_exponents(S);
    out.push_back(make(cfg, "volume.exponents", "hypergeometric exponents",
                       std::max(std::abs(c2 - (n - 1)), std::abs(c3 - (2.0 * Q - (n - 1)))), 1e-8, Bound::Below,
                       fmt("2c2 = %.10f, 2c3 = %.10f", c2, c3)));
}

// ---------------------------------------------------------------- busemann

void busemann_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    double norm = 0;
    for (int i = 0; i < 10; ++i) {
        const Vec d = rng.unit_vec(n);
        const auto th = boundary_coords(S, d);
        upd(norm, std::abs(busemann_value(S, S.identity(), th)));
        for (double t = -3.0; t <= 3.0; t += 1.0) upd(norm, std::abs(busemann_value(S, geodesic_point(S, d, t), th) + t));
    }
    for (double t = -3.0; t <= 3.0; t += 1.0)
        upd(norm, std::abs(busemann_value(S, geodesic_point(S, axis_a(S), t), pole_point(S)) + t));
    out.push_back(make(cfg, "busemann.normalization", "b(e) = 0, b(gamma(t)) = -t", norm, 1e-10));

    double lim = 0;
    for (int i = 0; i < 10; ++i) {
        const Vec d = rng.unit_vec(n);
        const GroupPoint p = random_point(S, rng);
        upd(lim, std::abs(busemann_value(S, p, boundary_coords(S, d)) - busemann_limit_oracle(S, p, d, 30.0)));
        upd(lim, std::abs(busemann_value(S, p, pole_point(S)) - busemann_limit_oracle(S, p, axis_a(S), 30.0)));
    }
    out.push_back(make(cfg, "busemann.limit_oracle", "Busemann closed form vs d(p,gamma(T)) - T", lim, 1e-6));

    double grad = 0, grad_geo = 0, fd = 0, null = 0;
    for (int i = 0; i < 10; ++i) {
        const Vec d = rng.unit_vec(n);
        const auto th = boundary_coords(S, d);
        const GroupPoint p = random_point(S, rng);
        const Vec g = busemann_gradient(S, p, th);
        upd(grad, std::abs(g.norm() - 1.0));
        upd(grad, max_abs(Vec(g - fd_gradient(S, p, th))));
        const Mat H = hessian(S, p, th);
        upd(fd, max_abs(Mat(H - fd_hessian(S, p, th))));
        upd(null, max_abs(Vec(H * g)));
        const double t = rng.uniform(-3, 3);
        upd(grad_geo, max_abs(Vec(busemann_gradient(S, geodesic_point(S, d, t), th) + geodesic_velocity(S, d, t))));
    }
    out.push_back(make(cfg, "busemann.gradient", "|grad b| = 1, finite differences", grad, 1e-6));
    out.push_back(make(cfg, "busemann.gradient_along_geodesic", "grad b = -gamma'", grad_geo, 1e-10));
    out.push_back(make(cfg, "busemann.hessian_fd", "Hessian vs covariant finite differences", fd, 1e-5));
    out.push_back(make(cfg, "busemann.hessian_null", "Hess b (grad b) = 0", null, 1e-10));

    double ident = 0, terms = 0;
    for (int i = 0; i < 20; ++i) {
        const Vec d = rng.unit_vec(n);
        upd(ident, max_abs(Mat(hessian(S, S.identity(), boundary_coords(S, d)) - hessian_at_identity(S, d))));
        const auto it = identity_terms(S, d);
        upd(terms, std::max({it.res_fv, it.res_4f, it.res_f, it.res_F}));
    }
    out.push_back(make(cfg, "busemann.identity_form", "Hessian at e from the direction", ident, 1e-12));
    out.push_back(make(cfg, "busemann.identity_terms", "f and F identities at e", terms, 1e-12));

    double trans = 0;
    for (int i = 0; i < 10; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(n));
        const GroupPoint x = random_point(S, rng), y = random_point(S, rng);
        const auto xth = translate_boundary(S, x, th);
        const GroupPoint xy = S.multiply(x, y);
        upd(trans, max_abs(Mat(busemann_hessian(S, xy, xth) - busemann_hessian(S, y, th))));
        upd(trans, std::abs(busemann_value(S, xy, xth) - busemann_value(S, x, xth) - busemann_value(S, y, th)));
    }
    out.push_back(make(cfg, "busemann.translation", "left-translation equivariance", trans, 1e-10));

    double convex = kInf;
    for (int i = 0; i < 200; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(n));
        const GroupPoint p = random_point(S, rng, 0.5);
        const Vec u = rng.unit_vec(n);
        for (double t = -3.0; t <= 3.0; t += 0.5) {
            const GroupPoint q = exp_at(S, p, u, t);
            const Vec c = geodesic_velocity(S, u, t);
            low(convex, c.dot(busemann_hessian(S, q, th) * c));
        }
    }
    out.push_back(make(cfg, "busemann.convexity", "convexity along geodesics", convex, -1e-10, Bound::AtLeast));

    double emax = -kInf, emin = kInf;
    for (int i = 0; i < 100; ++i) {
        const auto th = boundary_coords(S, rng.unit_vec(n));
        const GroupPoint p = random_point(S, rng);
        const Vec g = busemann_gradient(S, p, th);
        const Vec e = sym_eigenvalues(restrict_form(hessian(S, p, th), orthogonal_complement(Mat(g), n)));
        upd(emax, e(e.size() - 1));
        low(emin, e(0));
    }
    out.push_back(make(cfg, "busemann.eigen_upper", "Hessian eigenvalues <= 1", emax - 1.0, 1e-10));
    out.push_back(make(cfg, "busemann.eigen_floor", "Hessian positive on grad b^perp", emin, 1e-6, Bound::AtLeast));
}

// ---------------------------------------------------------------- spectral

struct SpectralTally {
    double kskew = 0, k2range = 0, decomp = 0, blocks = 0, s4 = 0, ell = 0, q0 = 0, qj = 0, unionspec = 0;
    double cubic = 0, range = 0;
    double q0min = kInf, qjmin = kInf;
    int bad_dim = 0, bad_order = 0, n_ell = 0, n_q0 = 0, n_qj = 0;
    double max_eig = -kInf, min_eig = kInf;
    bool has_half = false, has_one = false;
};

void spectral_direction(const DamekRicciSpace& S, const Vec& dir, SpectralTally& t) {
    const auto d = admissible_decomposition(S, dir);
    upd(t.kskew, std::max(d.K.skew_residual, d.K.range_residual));
    if (d.spectrum.raw.size() > 0)
        upd(t.k2range, std::max(d.spectrum.raw.maxCoeff(), -1.0 - d.spectrum.raw.minCoeff()));
    upd(t.decomp, std::max(d.orthogonality_residual, d.completeness_residual));
    t.bad_dim += d.dimension_identity ? 0 : 1;
    const auto hb = hessian_blocks(S, d);
    upd(t.blocks, std::max({hb.null_residual, hb.cross_block_residual, hb.p_block_residual, hb.bracket_residual,
                            hb.symmetry_residual}));
    const auto s4 = s4_block(S, d);
    upd(t.s4, std::max({s4.table_residual, s4.direction_residual, s4.jacobi_residual}));
    for (size_t j = 0; j < d.q.size(); ++j) {
        if (d.q[j].is_ell) {
            const auto e = q_ell_block(S, d);
            upd(t.ell, std::max({e.entry_residual, e.eigen_residual, e.characteristic_residual, e.eigenvector_residual}));
            ++t.n_ell;
        } else if (d.q[j].mu == 0.0) {
            const auto e = q0_block(S, d);
            upd(t.q0, std::max(e.entry_residual, e.completed_square_residual));
            low(t.q0min, e.min_eigenvalue);
            ++t.n_q0;
        } else {
            const auto e = q_j_hermitian(S, d, static_cast<int>(j));
            upd(t.qj, std::max({e.entry_residual, e.pairing_residual, std::abs(e.det2 - e.det2_formula),
                                std::abs(e.det3 - e.det3_formula)}));
            low(t.qjmin, std::min({e.det2, e.det3, e.det3 - e.det3_lower_bound}));
            ++t.n_qj;
        }
    }
    const auto cr = jacobi_cubic_check(S, d);
    upd(t.cubic, std::max(cr.root_residual, cr.ell_residual));
    t.bad_order += cr.ordering_ok ? 0 : 1;
    const Mat H = hessian_at_identity(S, dir);
    upd(t.unionspec, spectrum_distance(assembled_hessian_spectrum(S, d), sym_eigenvalues(H)));
    const Vec e = sym_eigenvalues(restrict_form(H, orthogonal_complement(Mat(dir), S.n())));
    upd(t.max_eig, e(e.size() - 1));
    low(t.min_eig, e(0));
    for (int i = 0; i < e.size(); ++i) {
        t.has_half = t.has_half || std::abs(e(i) - 0.5) < 1e-10;
        t.has_one = t.has_one || std::abs(e(i) - 1.0) < 1e-10;
    }
}

void spectral_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    SpectralTally t;
    for (int i = 0; i < 50; ++i) spectral_direction(S, rng.unit_vec(n), t);
    out.push_back(make(cfg, "spectral.k_skew", "K skew on Y^perp", t.kskew, 1e-12));
    out.push_back(make(cfg, "spectral.k2_range", "spec K^2 in [-1,0]", t.k2range, 1e-10));
    out.push_back(make(cfg, "spectral.decomposition", "admissible decomposition", t.decomp, 1e-10));
    out.push_back(make(cfg, "spectral.dimension_identity", "m = 2 + dim p + k1 + 2 k2", t.bad_dim, 0, Bound::AtMost));
    out.push_back(make(cfg, "spectral.hessian_blocks", "block-diagonal Hessian", t.blocks, 1e-10));
    out.push_back(make(cfg, "spectral.s4_block", "s4 block {1, 1/2, 1/2}", t.s4, 1e-10));
    if (t.n_ell)
        out.push_back(make(cfg, "spectral.q_ell_block", "q_l block {1, 1/2}", t.ell, 1e-10, Bound::Below,
                           std::to_string(t.n_ell) + " blocks"));
    if (t.n_q0) {
        out.push_back(make(cfg, "spectral.q0_block", "q_0 block entries", t.q0, 1e-10, Bound::Below,
                           std::to_string(t.n_q0) + " blocks"));
        out.push_back(make(cfg, "spectral.q0_positive", "q_0 block positive definite", t.q0min, 1e-12, Bound::AtLeast));
    }
    if (t.n_qj) {
        out.push_back(make(cfg, "spectral.qj_minors", "q_j Hermitian minors", t.qj, 1e-10, Bound::Below,
                           std::to_string(t.n_qj) + " blocks"));
        out.push_back(make(cfg, "spectral.qj_positive", "q_j minors positive", t.qjmin, 0.0, Bound::AtLeast));
    }
    out.push_back(make(cfg, "spectral.union", "union of block spectra", t.unionspec, 1e-9));
    out.push_back(make(cfg, "spectral.jacobi_cubic", "Jacobi cubic roots", t.cubic, 1e-9));
    out.push_back(make(cfg, "spectral.cubic_ordering", "Jacobi root ordering", t.bad_order, 0, Bound::AtMost));
    out.push_back(make(cfg, "spectral.hessian_upper", "Hessian spectrum <= 1", t.max_eig - 1.0, 1e-12));
    out.push_back(make(cfg, "spectral.hessian_floor", "Hessian spectrum > 0", t.min_eig, 1e-6, Bound::AtLeast));
    out.push_back(make(cfg, "spectral.values_attained", "1/2 and 1 attained", (t.has_half && t.has_one) ? 0 : 1, 0,
                       Bound::AtMost));

    double ng = 0;
    std::vector<Vec> dirs{axis_a(S), Vec(-axis_a(S))};
    for (int i = 0; i < 5; ++i) {
        const double s = rng.uniform(-0.9, 0.9), r = std::sqrt(1.0 - s * s);
        dirs.push_back(S.join(r * rng.unit_vec(S.m()), Vec::Zero(S.k()), s));
        dirs.push_back(S.join(Vec::Zero(S.m()), r * rng.unit_vec(S.k()), s));
    }
    for (const Vec& d : dirs) upd(ng, nongeneric_spectrum(S, d).distance);
    out.push_back(make(cfg, "spectral.nongeneric", "spectrum for V = 0 or Y = 0", ng, 1e-12));
    const double da = spectrum_distance(sym_eigenvalues(hessian_at_identity(S, axis_a(S))), a_spectrum(S));
    out.push_back(make(cfg, "spectral.direction_a", "spectrum {0, 1/2, 1} along A", da, 1e-12));

    double comm = 0;
    for (int i = 0; i < 10; ++i) {
        const auto c = commutation_check(S, rng.unit_vec(n), rng.uniform(-2, 2));
        upd(comm, std::max({c.commutator, c.invariance_residual, c.pairing_residual}));
    }
    out.push_back(make(cfg, "spectral.commutation", "S and R commute on f", comm, 1e-8));
}

// ---------------------------------------------------------------- riccati

struct OrderReport {
    double residual = 0;  // max at dt
    double coarse = 0;    // max at 8 dt
    double order = 0;
};

OrderReport riccati_order(const GeodesicModel& model, double dt) {
    OrderReport r;
    double r4 = 0;
    for (double t = -3.0; t <= 3.0; t += 1.0) {
        upd(r.residual, riccati_residual(model, t, dt));
        upd(r4, riccati_residual(model, t, 4 * dt));
        upd(r.coarse, riccati_residual(model, t, 8 * dt));
    }
    r.order = std::log2(r.coarse / r4);
    return r;
}

// Order check: the truncation term of the central difference vanishes when S is
// parallel along the geodesic, leaving only round-off.
CheckResult order_check(const CheckConfig& cfg, const std::string& id, const OrderReport& o) {
    if (o.coarse < 1e-9)
        return make(cfg, id, "Riccati residual O(dt^2)", o.coarse, 1e-9, Bound::Below,
                    "S parallel: residual at round-off for dt up to 8e-3");
    return make(cfg, id, "Riccati residual O(dt^2)", std::abs(o.order - 2.0), 0.25, Bound::Below,
                fmt("observed order %.3f", o.order));
}

void riccati_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    double trans = 0;
    for (int i = 0; i < 5; ++i) {
        const Vec d = rng.unit_vec(n);
        for (double t : {-2.0, 0.5, 2.0})
            upd(trans, max_abs(Mat(shape_operator(S, d, t) - shape_operator_translated(S, d, t))));
    }
    out.push_back(make(cfg, "riccati.shape_translated", "shape operator by left translation", trans, 1e-12));

    const Vec d = rng.unit_vec(n);
    const DamekRicciModel model(S, d);
    const auto o = riccati_order(model, 1e-3);
    out.push_back(make(cfg, "riccati.residual", "Riccati equation S' + S^2 + R = 0", o.residual, 1e-6));
    out.push_back(order_check(cfg, "riccati.residual_order", o));

    const Vec A = axis_a(S);
    double fa = riccati_residual(S, A, 0.5, 1e-3);
    upd(fa, max_abs(Mat(shape_operator(S, A, 1.3) - shape_operator(S, A, 0.0))));
    out.push_back(make(cfg, "riccati.direction_a", "fixed point along A", fa, 1e-10));

    double path = 0;
    for (double t1 : {3.0, -3.0}) {
        const auto p = riccati_integrate(model, model.shape(0.0), 0.0, t1, 1e-3, 500);
        for (size_t i = 0; i < p.t.size(); ++i) upd(path, max_abs(Mat(p.S[i] - model.shape(p.t[i]))));
    }
    out.push_back(make(cfg, "riccati.integration", "integrated S matches the Hessian", path, 1e-8));

    std::vector<double> dev;
    for (double T : {4.0, 8.0, 16.0}) dev.push_back(max_abs(Mat(sphere_shape_operator(model, 0.0, T) - model.shape(0.0))));
    int bad = 0;
    for (size_t i = 1; i < dev.size(); ++i) bad += dev[i] < dev[i - 1] ? 0 : 1;
    out.push_back(make(cfg, "riccati.sphere_limit", "sphere shape operators -> horosphere", bad, 0, Bound::AtMost,
                       fmt("deviation %.2e at T = 4, ", dev[0]) + fmt("%.2e at T = 8, %.2e at T = 16", dev[1], dev[2])));

    int not_one = 0, tdep = 0, kerdim = 0;
    double floor = kInf;
    for (int i = 0; i < 50; ++i) {
        const Vec u = rng.unit_vec(n);
        const auto rk = rank_of_geodesic(S, u);
        not_one += rk.rank == 1 ? 0 : 1;
        tdep += rk.t_independent ? 0 : 1;
        low(floor, rk.floor);
        kerdim += jacobi_kernel_locus(S, u).dim_ker == 1 ? 0 : 1;
    }
    out.push_back(make(cfg, "riccati.rank_one", "every geodesic has rank one", not_one + tdep, 0, Bound::AtMost));
    out.push_back(make(cfg, "riccati.rank_floor", "Hessian floor on direction^perp", floor, 0.01, Bound::AtLeast));
    out.push_back(make(cfg, "riccati.jacobi_kernel", "Ker R = span{direction} off the locus", kerdim, 0, Bound::AtMost));

    const Vec ld = locus_direction(S, rng);
    const auto kl = jacobi_kernel_locus(S, ld);
    if (kl.has_mu_zero) {
        out.push_back(make(cfg, "riccati.locus_kernel", "dim Ker R = 2 at the locus", std::abs(kl.dim_ker - 2), 0,
                           Bound::AtMost));
        out.push_back(make(cfg, "riccati.locus_floor", "Hessian positive at the locus", kl.hessian_floor, 0.01,
                           Bound::AtLeast));
        out.push_back(make(cfg, "riccati.locus_h", "h(t) - 1 < 0 for 0 < |t| <= 10", kl.max_h_off_zero - 1.0, 0.0));
        const auto fp = flat_plane_search(S, ld, {-2, -1, -0.5, 0, 0.5, 1, 2});
        out.push_back(make(cfg, "riccati.flat_plane", "flat plane at t = 0",
                           std::max(std::abs(fp.flat_curvature), fp.condition_residual), 1e-12));
        out.push_back(make(cfg, "riccati.flat_plane_off_zero", "K(P(t)) < 0 for t != 0", fp.max_curvature_off_zero,
                           0.0));
    }

    const ProductModel pm(S, d, 0.6);
    double nv = 0;
    for (double t : {-1.0, 0.3, 1.0}) {
        const auto r = null_vector_identities(pm, t);
        upd(nv, std::max({r.shape, r.shape_derivative, r.jacobi, r.kernel}));
    }
    out.push_back(make(cfg, "riccati.null_vector", "null-vector identities on DR x R", nv, 1e-10));
    out.push_back(make(cfg, "riccati.product_residual", "Riccati equation on DR x R", riccati_residual(pm, 0.3, 1e-3),
                       1e-6));

    Rng crng(static_cast<std::uint64_t>(rng.uniform() * 1e9));
    const double c1 = c0_estimate(S, 1000, crng), c2 = c0_estimate(S, 2000, crng);
    out.push_back(make(cfg, "riccati.c0_positive", "uniform lower bound C0 > 0", std::min(c1, c2), 1e-3, Bound::AtLeast,
                       fmt("C0_est = %.4f (1000), %.4f (2000)", c1, c2)));
    out.push_back(make(cfg, "riccati.c0_stable", "C0 stable under doubling", std::abs(c1 - c2) / c2, 0.1));
}

// ---------------------------------------------------------------- visibility

TransverseProbe random_probe(const DamekRicciSpace& S, Rng& rng, int obtuse) {
    const auto th = boundary_coords(S, rng.unit_vec(S.n()));
    GroupPoint p0{0.5 * rng.gaussian_vec(S.m()), 0.5 * rng.gaussian_vec(S.k()), std::exp(rng.gaussian())};
    Vec u = rng.unit_vec(S.n());
    // obtuse: +1 force q'(0) < 0, -1 force q'(0) > 0, 0 leave as drawn
    if (obtuse != 0 && obtuse * busemann_gradient(S, p0, th).dot(u) > 0) u = -u;
    return make_probe(S, th, p0, u);
}

struct ProbeTally {
    double min_d2q = kInf, dbound = kInf, gronwall = kInf;
    int bad_shape = 0;
};

void tally_shape(const ProbeShapeReport& sh, ProbeTally& t) {
    low(t.min_d2q, sh.min_d2q);
    low(t.dbound, sh.derivative_bound_margin);
    low(t.gronwall, sh.gronwall_margin);
    t.bad_shape += (sh.sign_changes == 1 && sh.increasing_after_min) ? 0 : 1;
}

void visibility_suite(const DamekRicciSpace& S, const CheckConfig& cfg, Rng& rng, Out& out) {
    const int n = S.n();
    ProbeTally t;
    int obtuse = 0, obtuse_missed = 0;
    double ftc = 0;
    std::vector<TransverseProbe> probes;
    for (int i = 0; i < 10; ++i) probes.push_back(random_probe(S, rng, i % 2 ? -1 : 1));
    for (const auto& pr : probes) {
        tally_shape(probe_shape(S, pr, -15.0, 15.0), t);
        const double I = visibility_integral(S, pr, 0.0, 10.0);
        upd(ftc, std::abs(I - (probe_sample(S, pr, 10.0, false).dq - probe_sample(S, pr, 0.0, false).dq)));
        const auto r = find_T_reaching_one(S, pr);
        if (r.dq_start < 0) {
            ++obtuse;
            obtuse_missed += r.found ? 0 : 1;
        }
    }
    out.push_back(make(cfg, "visibility.convexity", "q'' > 0 on transverse probes", t.min_d2q, 1e-12, Bound::AtLeast));
    out.push_back(make(cfg, "visibility.unique_minimum", "q has one minimum and increases after it", t.bad_shape, 0,
                       Bound::AtMost));
    out.push_back(make(cfg, "visibility.derivative_bound", "(cos phi)' >= lambda (1 - cos^2 phi)", t.dbound, -1e-10,
                       Bound::AtLeast));
    out.push_back(make(cfg, "visibility.gronwall", "Gronwall bound on (1+y)/(1-y)", t.gronwall, -1e-6, Bound::AtLeast));
    out.push_back(make(cfg, "visibility.integral_identity", "int q'' = q'(T) - q'(0)", ftc, 1e-7));
    out.push_back(make(cfg, "visibility.reach_one_obtuse", "integral reaches 1 when q'(0) < 0", obtuse_missed, 0,
                       Bound::AtMost, std::to_string(obtuse) + " probes with q'(0) < 0"));

    Rng crng(static_cast<std::uint64_t>(rng.uniform() * 1e9));
    const double c0 = c0_estimate(S, 1000, crng);
    double margin = kInf, lmax = -kInf;
    for (int i = 0; i < 3; ++i) {
        const auto ld = least_eigenvalue_divergence(S, probes[i], 0.0, 10.0, c0);
        low(margin, ld.min_margin);
        upd(lmax, ld.max_lambda);
    }
    out.push_back(make(cfg, "visibility.lambda_divergence", "int lambda >= C0 (t - t1)", margin, -1e-9, Bound::AtLeast,
                       fmt("C0_est = %.4f", c0)));
    out.push_back(make(cfg, "visibility.lambda_upper", "lambda <= 1", lmax - 1.0, 1e-10));

    const GroupPoint p0 = random_point(S, rng, 0.5);
    Vec u = rng.unit_vec(n);
    const auto pp = make_probe(S, pole_point(S), p0, u);
    const auto ld = least_eigenvalue_divergence(S, pp, 0.0, 5.0, 0.5);
    double pole = std::max(std::abs(ld.max_lambda - 0.5), std::abs(ld.min_lambda - 0.5));
    upd(pole, std::abs(ld.min_margin));
    out.push_back(make(cfg, "visibility.pole_lambda", "lambda = 1/2 for the pole", pole, 1e-12));
}

struct SuiteEntry {
    const char* name;
    void (*run)(const DamekRicciSpace&, const CheckConfig&, Rng&, Out&);
};

const std::vector<SuiteEntry>& suites() {
    static const std::vector<SuiteEntry> s{{"algebra", algebra_suite},   {"space", space_suite},
                                           {"geodesics", geodesics_suite}, {"volume", volume_suite},
                                           {"busemann", busemann_suite}, {"spectral", spectral_suite},
                                           {"riccati", riccati_suite},   {"visibility", visibility_suite}};
    return s;
}

// ---------------------------------------------------------------- acceptance

struct Instance {
    std::string name;
    DamekRicciSpace S;
};

std::vector<Instance> catalog(bool with_mixed) {
    std::vector<Instance> v;
    for (const char* p : {"heisenberg", "htype_k2", "quaternionic", "cayley"})
        v.push_back({p, DamekRicciSpace(build_algebra(parse_preset(p)))});
    if (with_mixed) v.push_back({"quaternionic_mixed", DamekRicciSpace(build_algebra(parse_preset("quaternionic_mixed")))});
    return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rng criterion_rng(const CheckConfig& cfg, int index) { return Rng(cfg.seed * 1000003ULL + index); }

Out ac01(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 1);
    for (const auto& in : catalog(false)) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto ir = sample_identities(in.S.algebra(), 1000, rng);
        const double secs = seconds_since(t0);
        out.push_back(make(cfg, "AC01.identities." + in.name, "H-type identities", ir.max(), 1e-12));
        out.push_back(make(cfg, "AC01.runtime." + in.name, "runtime per preset [s]", secs, 1.0));
    }
    return out;
}

Out ac02(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 2);
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& in : catalog(false)) {
        double dev = 0;
        for (int i = 0; i < 50; ++i) {
            const Vec d = rng.unit_vec(in.S.n());
            for (double te : {5.0, -5.0})
                for (const auto& [t, p] : geodesic_ode_path(in.S, d, te, 1e-3, 100))
                    upd(dev, coord_diff(geodesic_point(in.S, d, t), p));
        }
        out.push_back(make(cfg, "AC02.ode." + in.name, "closed-form geodesic vs RK4", dev, 1e-8));
    }
    out.push_back(make(cfg, "AC02.runtime", "runtime, all presets [s]", seconds_since(t0), 30.0));
    return out;
}

Out ac03(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 3);
    for (const auto& in : catalog(false)) {
        double dev = 0, pole = 0;
        for (int i = 0; i < 200; ++i) {
            const Vec d = rng.unit_vec(in.S.n());
            const double t = rng.uniform(-10, 10);
            upd(dev, std::abs(distance_from_identity(in.S, geodesic_point(in.S, d, t)) - std::abs(t)));
        }
        for (int i = -40; i <= 40; ++i) {
            const double r = 0.25 * i;
            GroupPoint p = in.S.identity();
            p.a = std::exp(r);
            upd(pole, std::abs(distance_from_identity(in.S, p) - std::abs(r)) / std::max(1.0, std::abs(r)));
        }
        out.push_back(make(cfg, "AC03.distance." + in.name, "d(e, gamma(t)) = |t|", dev, 1e-10));
        out.push_back(make(cfg, "AC03.pole." + in.name, "d((0,0,e^r)) = |r|", pole, 1e-14));
    }
    return out;
}

Out ac04(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 4);
    for (const auto& in : catalog(false)) {
        double dev = 0, pole = 0;
        for (int i = 0; i < 50; ++i) {
            const Vec d = rng.unit_vec(in.S.n());
            const GroupPoint p = random_point(in.S, rng);
            upd(dev, std::abs(busemann_value(in.S, p, boundary_coords(in.S, d)) - busemann_limit_oracle(in.S, p, d, 30.0)));
            upd(pole, std::abs(busemann_value(in.S, p, pole_point(in.S)) -
                               busemann_limit_oracle(in.S, p, axis_a(in.S), 30.0)));
        }
        out.push_back(make(cfg, "AC04.busemann." + in.name, "Busemann closed form vs limit", dev, 1e-6));
        out.push_back(make(cfg, "AC04.pole." + in.name, "b = -log a vs limit", pole, 1e-6));
    }
    return out;
}

Out ac05(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 5);
    for (const auto& in : catalog(false)) {
        double fd = 0, ident = 0;
        for (int i = 0; i < 100; ++i) {
            const Vec d = rng.unit_vec(in.S.n());
            const auto th = boundary_coords(in.S, d);
            const GroupPoint p = random_point(in.S, rng);
            upd(fd, max_abs(Mat(hessian(in.S, p, th) - fd_hessian(in.S, p, th))));
            upd(ident, max_abs(Mat(hessian(in.S, in.S.identity(), th) - hessian_at_identity(in.S, d))));
        }
        out.push_back(make(cfg, "AC05.fd." + in.name, "Hessian vs covariant finite differences", fd, 1e-5));
        out.push_back(make(cfg, "AC05.identity." + in.name, "Hessian at e from the direction", ident, 1e-12));
    }
    return out;
}

Out ac06(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 6);
    SpectralTally all;
    double pblock = 0;
    for (const auto& in : catalog(true)) {
        SpectralTally t;
        for (int i = 0; i < 100; ++i) {
            const Vec d = rng.unit_vec(in.S.n());
            spectral_direction(in.S, d, t);
            const auto dec = admissible_decomposition(in.S, d);
            upd(pblock, hessian_blocks(in.S, dec).p_block_residual);
        }
        out.push_back(make(cfg, "AC06.s4." + in.name, "s4^0 eigenvalues {1, 1/2, 1/2}", t.s4, 1e-10));
        out.push_back(make(cfg, "AC06.union." + in.name, "union of block spectra = eigensolve", t.unionspec, 1e-9));
        upd(all.ell, t.ell);
        upd(all.q0, t.q0);
        upd(all.qj, t.qj);
        low(all.q0min, t.q0min);
        low(all.qjmin, t.qjmin);
        all.n_ell += t.n_ell;
        all.n_q0 += t.n_q0;
        all.n_qj += t.n_qj;
    }
    out.push_back(make(cfg, "AC06.p", "p block = I/2", pblock, 1e-10));
    out.push_back(make(cfg, "AC06.q_ell", "q_l eigenvalues {1, 1/2}", all.ell, 1e-10, Bound::Below,
                       std::to_string(all.n_ell) + " blocks"));
    out.push_back(make(cfg, "AC06.q0", "q_0 entries and completed square", all.q0, 1e-10, Bound::Below,
                       std::to_string(all.n_q0) + " blocks"));
    out.push_back(make(cfg, "AC06.q0_positive", "q_0 positive definite", all.q0min, 1e-12, Bound::AtLeast));
    out.push_back(make(cfg, "AC06.qj", "q_j minors vs closed forms", all.qj, 1e-10, Bound::Below,
                       std::to_string(all.n_qj) + " blocks"));
    out.push_back(make(cfg, "AC06.qj_positive", "q_j positive definite", all.qjmin, 0.0, Bound::AtLeast));
    // every block type must actually have been exercised
    out.push_back(make(cfg, "AC06.coverage", "all block types sampled",
                       (all.n_ell > 0) + (all.n_q0 > 0) + (all.n_qj > 0), 3, Bound::AtLeast));
    return out;
}

Out ac07(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 7);
    for (const auto& in : catalog(true)) {
        double res = 0;
        int bad = 0, blocks = 0;
        for (int i = 0; i < 100; ++i) {
            const auto d = admissible_decomposition(in.S, rng.unit_vec(in.S.n()));
            const auto cr = jacobi_cubic_check(in.S, d);
            upd(res, cr.root_residual);
            bad += cr.ordering_ok ? 0 : 1;
            blocks += cr.blocks;
        }
        out.push_back(make(cfg, "AC07.roots." + in.name, "cubic roots vs eigensolve of R|q_j", res, 1e-9, Bound::Below,
                           std::to_string(blocks) + " blocks"));
        out.push_back(make(cfg, "AC07.ordering." + in.name, "root ordering", bad, 0, Bound::AtMost));
    }
    const auto k = jacobi_cubic(2.0 / 3.0, 1.0 / 3.0, 0.0);
    double locus = std::abs(k[2]);
    // the same zero as an eigenvalue of R at a locus direction of htype_k2
    const DamekRicciSpace S(build_algebra(parse_preset("htype_k2")));
    const Vec ld = locus_direction(S, rng);
    const Vec e = sym_eigenvalues(S.jacobi_operator(ld));
    upd(locus, std::abs(e(e.size() - 1)));
    out.push_back(make(cfg, "AC07.locus", "kappa_3 = 0 at |V|^2 = 2/3, |Y|^2 = 1/3", locus, 1e-12));
    return out;
}

Out ac08(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 8);
    for (const auto& in : catalog(false)) {
        int bad = 0;
        double floor = kInf;
        for (int i = 0; i < 500; ++i) {
            const auto rk = rank_of_geodesic(in.S, rng.unit_vec(in.S.n()));
            bad += (rk.rank == 1 && rk.t_independent) ? 0 : 1;
            low(floor, rk.floor);
        }
        out.push_back(make(cfg, "AC08.rank." + in.name, "rank one", bad, 0, Bound::AtMost));
        out.push_back(make(cfg, "AC08.floor." + in.name, "spectral floor", floor, 0.01, Bound::AtLeast));
    }
    const DamekRicciSpace S(build_algebra(parse_preset("htype_k2")));
    const auto kl = jacobi_kernel_locus(S, locus_direction(S, rng));
    out.push_back(make(cfg, "AC08.locus_kernel", "dim Ker R = 2 at the locus", std::abs(kl.dim_ker - 2), 0, Bound::AtMost));
    out.push_back(make(cfg, "AC08.locus_definite", "Hessian positive definite at the locus", kl.hessian_floor, 0.01,
                       Bound::AtLeast));
    out.push_back(make(cfg, "AC08.locus_h", "h(t) - 1 < 0 for 0 < |t| <= 10", kl.max_h_off_zero - 1.0, 0.0));
    return out;
}

Out ac09(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 9);
    for (const auto& in : catalog(true)) {
        const Vec d = rng.unit_vec(in.S.n());
        const DamekRicciModel model(in.S, d);
        const auto o = riccati_order(model, 1e-3);
        out.push_back(make(cfg, "AC09.residual." + in.name, "S' + S^2 + R = 0 at dt = 1e-3", o.residual, 1e-6));
        out.push_back(order_check(cfg, "AC09.order." + in.name, o));
        double fa = riccati_residual(in.S, axis_a(in.S), 0.5, 1e-3);
        upd(fa, max_abs(Mat(shape_operator(in.S, axis_a(in.S), 1.3) + hessian_pole(in.S))));
        out.push_back(make(cfg, "AC09.direction_a." + in.name, "fixed point along A", fa, 1e-10));
        double comm = 0, pair = 0;
        for (int i = 0; i < 20; ++i) {
            const auto c = commutation_check(in.S, rng.unit_vec(in.S.n()), rng.uniform(-2, 2));
            upd(comm, std::max(c.commutator, c.invariance_residual));
            upd(pair, c.pairing_residual);
        }
        out.push_back(make(cfg, "AC09.commutation." + in.name, "[S, R] = 0 on f", comm, 1e-8));
        out.push_back(make(cfg, "AC09.pairing." + in.name, "eigenvalue pairing l <-> -l^2", pair, 1e-8));
    }
    return out;
}

Out ac10(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 10);
    for (const auto& in : catalog(false)) {
        const int n = in.S.n();
        double closed = 0, kmax = -kInf;
        for (int i = 0; i < 10000; ++i) {
            const auto pc = sectional_curvature_both(in.S, rng.gaussian_vec(n), rng.gaussian_vec(n));
            upd(closed, std::abs(pc.direct - pc.closed_form));
            upd(kmax, pc.direct);
        }
        const Mat Ric = in.S.ricci();
        const double c = Ric.trace() / n;
        double spread = 0;
        for (int i = 0; i < 100; ++i) {
            const Vec u = rng.unit_vec(n);
            upd(spread, std::abs(u.dot(Ric * u) - c));
        }
        out.push_back(make(cfg, "AC10.closed_form." + in.name, "closed form vs tensor", closed, 1e-10));
        out.push_back(make(cfg, "AC10.nonpositive." + in.name, "K(P) <= 0", kmax, 0.0, Bound::AtMost));
        out.push_back(make(cfg, "AC10.einstein." + in.name, "Ric = c I", spread, 1e-10, Bound::Below,
                           fmt("c = %.6f", c)));
    }
    return out;
}

Out ac11(const CheckConfig& cfg) {
    Out out;
    for (const auto& in : catalog(false)) {
        Rng rng = criterion_rng(cfg, 11);
        Out v;
        volume_suite(in.S, cfg, rng, v);
        for (auto& r : v) {
            const std::string tail = r.id.substr(r.id.find('.') + 1);
            out.push_back(make(cfg, "AC11." + tail + "." + in.name, r.anchor, r.residual, r.tol, r.bound, r.note));
        }
    }
    return out;
}

Out ac12(const CheckConfig& cfg) {
    Out out;
    Rng rng = criterion_rng(cfg, 12);
    for (const auto& in : catalog(false)) {
        ProbeTally t;
        int found = 0, obtuse = 0, obtuse_found = 0;
        double sup_gap = -kInf;
        for (int i = 0; i < 100; ++i) {
            const auto pr = random_probe(in.S, rng, 0);
            const auto r = find_T_reaching_one(in.S, pr, 0.0, 50.0);
            found += r.found;
            if (r.dq_start < 0) {
                ++obtuse;
                obtuse_found += r.found;
            } else {
                upd(sup_gap, r.integral_at_horizon - (1.0 - r.dq_start));
            }
            tally_shape(probe_shape(in.S, pr, -15.0, 15.0), t);
        }
        std::string note = std::to_string(found) + "/100 reached 1; " + std::to_string(obtuse_found) + "/" +
                           std::to_string(obtuse) + " with q'(0) < 0";
        if (obtuse < 100) note += fmt("; others: max of int - (1 - q'(0)) = %.2e", sup_gap);
        out.push_back(make(cfg, "AC12.reach_one." + in.name, "finite T with integral >= 1 within horizon 50", 100 - found,
                           0, Bound::AtMost, note));
        out.push_back(make(cfg, "AC12.gronwall." + in.name, "Gronwall bound at all sample pairs", t.gronwall, -1e-6,
                           Bound::AtLeast));
        out.push_back(make(cfg, "AC12.convex." + in.name, "q'' > 0", t.min_d2q, 1e-12, Bound::AtLeast));
        out.push_back(make(cfg, "AC12.unique_minimum." + in.name, "unique minimum, increasing afterward", t.bad_shape, 0,
                           Bound::AtMost));
    }
    return out;
}

struct Criterion {
    const char* id;
    const char* name;
    const char* anchor;
    Out (*run)(const CheckConfig&);
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c{
        {"AC01", "htype_axioms", "H-type identities", ac01},
        {"AC02", "geodesic_closed_form", "closed-form geodesics", ac02},
        {"AC03", "distance", "distance formula", ac03},
        {"AC04", "busemann_closed_form", "Busemann closed form", ac04},
        {"AC05", "hessian_formulas", "Busemann Hessian formulas", ac05},
        {"AC06", "block_spectra", "Hessian block spectra", ac06},
        {"AC07", "jacobi_cubic", "Jacobi cubic", ac07},
        {"AC08", "rank_one", "rank one", ac08},
        {"AC09", "riccati", "Riccati equation", ac09},
        {"AC10", "curvature", "sectional and Ricci curvature", ac10},
        {"AC11", "volume_growth", "volume growth", ac11},
        {"AC12", "visibility", "visibility criterion", ac12},
    };
    return c;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const char* bound_symbol(Bound b) {
    switch (b) {
    case Bound::Below: return "<";
    case Bound::AtMost: return "<=";
    case Bound::AtLeast: return ">=";
    }
    return "?";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

const std::vector<std::string>& suite_modules() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : suites()) v.push_back(s.name);
        return v;
    }();
    return names;
}

std::vector<CheckResult> run_instance_suite(const DamekRicciSpace& S, const CheckConfig& cfg, const std::string& module) {
    bool known = module.empty();
    for (const auto& s : suites()) known = known || module == s.name;
    if (!known) throw std::invalid_argument("unknown module '" + module + "'");
    Out out;
    int index = 0;
    for (const auto& s : suites()) {
        ++index;
        if (!module.empty() && module != s.name) continue;
        // each module draws from its own stream so filtering does not change results
        Rng rng(cfg.seed * 7919ULL + index);
        s.run(S, cfg, rng, out);
    }
    return out;
}

const std::vector<std::pair<std::string, std::string>>& acceptance_criteria() {
    static const std::vector<std::pair<std::string, std::string>> v = [] {
        std::vector<std::pair<std::string, std::string>> r;
        for (const auto& c : criteria()) r.push_back({c.id, c.name});
        return r;
    }();
    return v;
}

CriterionResult run_acceptance(const std::string& id, const CheckConfig& cfg) {
    for (const auto& c : criteria()) {
        if (id != c.id && id != std::string(c.id) + "_" + c.name) continue;
        CriterionResult r;
        r.parts = c.run(cfg);
        int failed = 0;
        std::string which;
        for (const auto& p : r.parts) {
            if (p.pass) continue;
            ++failed;
            which += (which.empty() ? "failed: " : ", ") + p.id;
        }
        r.summary = make(cfg, std::string(c.id) + "_" + c.name, c.anchor, failed, 0, Bound::AtMost,
                         failed ? which : std::to_string(r.parts.size()) + " parts");
        return r;
    }
    throw std::invalid_argument("unknown acceptance criterion '" + id + "'");
}

std::string format_check_text(const CheckResult& r) {
    std::string s = r.id + "  " + r.anchor + "  " + num(r.residual) + "  " + bound_symbol(r.bound) + num(r.tol) + "  " +
                    (r.pass ? "PASS" : "FAIL");
    if (!r.note.empty()) s += "  (" + r.note + ")";
    return s;
}

std::string csv_header() { return "check_id,anchor,residual,bound,tol,status,note"; }

std::string format_check_csv(const CheckResult& r) {
    return csv_field(r.id) + "," + csv_field(r.anchor) + "," + num(r.residual) + "," + bound_symbol(r.bound) + "," +
           num(r.tol) + "," + (r.pass ? "PASS" : "FAIL") + "," + csv_field(r.note);
}

std::string format_check_json(const CheckResult& r) {
    nlohmann::ordered_json j;
    j["check_id"] = r.id;
    j["anchor"] = r.anchor;
    j["residual"] = r.residual;
    j["bound"] = bound_symbol(r.bound);
    j["tol"] = r.tol;
    j["status"] = r.pass ? "PASS" : "FAIL";
    if (!r.note.empty()) j["note"] = r.note;
    return j.dump();
}

}  // namespace drspace
