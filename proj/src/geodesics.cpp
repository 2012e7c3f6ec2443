#include "drspace/geodesics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drspace {

GeodesicScalars geodesic_scalars(double s, double y2, double t) {
    GeodesicScalars g;
    g.theta = std::tanh(0.5 * t);
    const double omt = 2.0 / (1.0 + std::exp(t));   // 1 - theta
    const double opt = 2.0 / (1.0 + std::exp(-t));  // 1 + theta
    g.one_m_theta2 = omt * opt;
    g.one_m_stheta = (s >= 0.0) ? (1.0 - s) + s * omt : (1.0 + s) - s * opt;
    g.chi = g.one_m_stheta * g.one_m_stheta + y2 * g.theta * g.theta;
    g.h = g.one_m_theta2 / g.chi;
    g.dlogh = -g.theta - g.one_m_theta2 * (-s * g.one_m_stheta + y2 * g.theta) / g.chi;
    return g;
}

void require_unit(const Vec& direction, const char* who) {
    if (std::abs(direction.norm() - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(who) + ": direction must have unit norm");
}

GroupPoint geodesic_point(const DamekRicciSpace& S, const Vec& direction, double t) {
    require_unit(direction, "geodesic_point");
    const Vec V = S.vpart(direction), Y = S.zpart(direction);
    const double s = S.apart(direction);
    const auto g = geodesic_scalars(s, Y.squaredNorm(), t);
    GroupPoint p;
    p.U = (2.0 * g.theta * g.one_m_stheta / g.chi) * V +
          (2.0 * g.theta * g.theta / g.chi) * S.algebra().j_map(Y, V);
    p.X = (2.0 * g.theta / g.chi) * Y;
    p.a = g.h;
    return p;
}

Vec geodesic_velocity(const DamekRicciSpace& S, const Vec& direction, double t) {
    require_unit(direction, "geodesic_velocity");
    const Vec V = S.vpart(direction), Y = S.zpart(direction);
    const double s = S.apart(direction);
    const double y2 = Y.squaredNorm();
    const auto g = geodesic_scalars(s, y2, t);
    const double sh = std::sqrt(g.h);
    const Vec vpart = (sh / g.chi) * (g.one_m_stheta * g.one_m_stheta - g.theta * g.theta * y2) * V +
                      (2.0 * sh / g.chi) * g.theta * g.one_m_stheta * S.algebra().j_map(Y, V);
    return S.join(vpart, g.h * Y, g.dlogh);
}

namespace {

struct OdeState {
    Vec U, X, c;
    double lam = 0;
};

OdeState ode_rhs(const DamekRicciSpace& S, const OdeState& z) {
    const double a = std::exp(z.lam);
    const double sa = std::sqrt(a);
    const Vec cV = S.vpart(z.c);
    OdeState d;
    d.U = sa * cV;
    d.X = a * S.zpart(z.c) + 0.5 * sa * S.algebra().bracket(z.U, cV);
    d.lam = S.apart(z.c);
    d.c = -S.nabla(z.c, z.c);
    return d;
}

OdeState axpy(const OdeState& z, double h, const OdeState& d) {
    return {z.U + h * d.U, z.X + h * d.X, z.c + h * d.c, z.lam + h * d.lam};
}

void rk4_step(const DamekRicciSpace& S, OdeState& z, double h) {
    const OdeState k1 = ode_rhs(S, z);
    const OdeState k2 = ode_rhs(S, axpy(z, 0.5 * h, k1));
    const OdeState k3 = ode_rhs(S, axpy(z, 0.5 * h, k2));
    const OdeState k4 = ode_rhs(S, axpy(z, h, k3));
    z.U += (h / 6.0) * (k1.U + 2.0 * k2.U + 2.0 * k3.U + k4.U);
    z.X += (h / 6.0) * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
    z.c += (h / 6.0) * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c);
    z.lam += (h / 6.0) * (k1.lam + 2.0 * k2.lam + 2.0 * k3.lam + k4.lam);
}

OdeState start_state(const DamekRicciSpace& S, const Vec& direction) {
    return {Vec::Zero(S.m()), Vec::Zero(S.k()), direction, 0.0};
}

}  // namespace

GroupPoint geodesic_ode(const DamekRicciSpace& S, const Vec& direction, double t, double step) {
    if (step <= 0) throw std::invalid_argument("geodesic_ode: step must be positive");
    OdeState z = start_state(S, direction);
    const int nsteps = static_cast<int>(std::ceil(std::abs(t) / step - 1e-9));
    if (nsteps > 0) {
        const double h = t / nsteps;
        for (int i = 0; i < nsteps; ++i) rk4_step(S, z, h);
    }
    return {z.U, z.X, std::exp(z.lam)};
}

std::vector<std::pair<double, GroupPoint>> geodesic_ode_path(const DamekRicciSpace& S, const Vec& direction,
                                                             double t_end, double step, int every) {
    if (step <= 0 || every < 1) throw std::invalid_argument("geodesic_ode_path: bad step");
    OdeState z = start_state(S, direction);
    const int nsteps = static_cast<int>(std::ceil(std::abs(t_end) / step - 1e-9));
    const double h = nsteps > 0 ? t_end / nsteps : 0.0;
    std::vector<std::pair<double, GroupPoint>> out;
    out.push_back({0.0, {z.U, z.X, 1.0}});
    for (int i = 1; i <= nsteps; ++i) {
        rk4_step(S, z, h);
        if (i % every == 0 || i == nsteps) out.push_back({i * h, {z.U, z.X, std::exp(z.lam)}});
    }
    return out;
}

GroupPoint exp_at(const DamekRicciSpace& S, const GroupPoint& p, const Vec& u, double t) {
    const double nu = u.norm();
    if (nu == 0.0) return p;
    return S.multiply(p, geodesic_point(S, u / nu, t * nu));
}

double distance_from_identity(const DamekRicciSpace& S, const GroupPoint& p) {
    (void)S;
    if (!(p.a > 0)) throw std::invalid_argument("distance: a must be positive");
    // lambda - 4 = ((1 - a)^2 + 2w(1 + a) + w^2 + |X|^2) / a with w = |U|^2/4
    const double w = 0.25 * p.U.squaredNorm();
    double mu = ((1.0 - p.a) * (1.0 - p.a) + 2.0 * w * (1.0 + p.a) + w * w + p.X.squaredNorm()) / p.a;
    if (mu < 0.0) {
        if (mu > -1e-12)
            mu = 0.0;
        else
            throw std::domain_error("distance: lambda < 4");
    }
    // log((lambda - 2 + sqrt(lambda^2 - 4 lambda)) / 2) written around mu = lambda - 4
    return std::log1p(0.5 * mu + 0.5 * std::sqrt(mu * (mu + 4.0)));
}

double distance(const DamekRicciSpace& S, const GroupPoint& p, const GroupPoint& q) {
    return distance_from_identity(S, S.multiply(S.inverse(p), q));
}

VolumeDensity volume_density(const DamekRicciSpace& S, double r) {
    if (!(r > 0)) throw std::invalid_argument("volume_density: r must be positive");
    const double e1 = S.n() - 1;
    const double e2 = 2.0 * S.Q() - e1;
    const double x = 0.5 * r;
    VolumeDensity v;
    // log sinh x = x + log1p(-e^{-2x}) - log 2, likewise for cosh
    const double lsinh = x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
    const double lcosh = x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
    v.log_theta = e1 * std::log(2.0) + e1 * lsinh + e2 * lcosh;
    v.theta = std::exp(v.log_theta);
    v.sigma = 0.5 * e1 / std::tanh(x) + 0.5 * e2 * std::tanh(x);
    return v;
}

std::pair<double, double> fit_density_exponents(const DamekRicciSpace& S) {
    const int N = 40;
    Mat A(N, 3);
    Vec b(N);
    for (int i = 0; i < N; ++i) {
        const double r = 0.25 + 0.5 * i;
        A(i, 0) = 1.0;
        A(i, 1) = std::log(std::sinh(0.5 * r));
        A(i, 2) = std::log(std::cosh(0.5 * r));
        b(i) = volume_density(S, r).log_theta;
    }
    const Vec c = A.colPivHouseholderQr().solve(b);
    return {c(1), c(2)};
}

}  // namespace drspace
