#include "drspace/visibility.hpp"

#include "drspace/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drspace {

TransverseProbe make_probe(const DamekRicciSpace& S, const IdealBoundaryPoint& theta, const GroupPoint& p0,
                           const Vec& u) {
    require_unit(u, "make_probe");
    const Vec g = busemann_gradient(S, p0, theta);
    if (1.0 - std::abs(g.dot(u)) < 1e-6) throw std::invalid_argument("make_probe: probe is not transverse to theta");
    return {theta, p0, u};
}

ProbeSample probe_sample(const DamekRicciSpace& S, const TransverseProbe& pr, double t, bool with_lambda) {
    ProbeSample s;
    s.t = t;
    const GroupPoint p = exp_at(S, pr.p0, pr.u, t);
    const Vec c = geodesic_velocity(S, pr.u, t);
    s.q = busemann_value(S, p, pr.theta);
    const Vec g = busemann_gradient(S, p, pr.theta);
    s.dq = g.dot(c);
    const Mat H = busemann_hessian(S, p, pr.theta);
    s.d2q = c.dot(H * c);
    if (with_lambda) {
        const Mat B = orthogonal_complement(Mat(g.normalized()), S.n());
        s.lambda = sym_eigenvalues(restrict_form(H, B))(0);
    }
    return s;
}

std::vector<ProbeSample> probe_samples(const DamekRicciSpace& S, const TransverseProbe& pr, double t0, double t1,
                                       double h, bool with_lambda) {
    if (!(h > 0) || t1 < t0) throw std::invalid_argument("probe_samples: bad grid");
    const int n = static_cast<int>(std::llround((t1 - t0) / h));
    std::vector<ProbeSample> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) out.push_back(probe_sample(S, pr, t0 + i * h, with_lambda));
    return out;
}

double visibility_integral(const DamekRicciSpace& S, const TransverseProbe& pr, double t, double T, double h) {
    if (T == t) return 0.0;
    int n = std::max(2, static_cast<int>(std::ceil(std::abs(T - t) / h)));
    if (n % 2) ++n;
    const double w = (T - t) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double f = probe_sample(S, pr, t + i * w, false).d2q;
        sum += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return sum * w / 3.0;
}

ReachOneReport find_T_reaching_one(const DamekRicciSpace& S, const TransverseProbe& pr, double t0, double horizon,
                                   double h) {
    ReachOneReport r;
    const int panels = static_cast<int>(std::llround(horizon / (2.0 * h)));
    ProbeSample prev = probe_sample(S, pr, t0, false);
    r.dq_start = prev.dq;
    double acc = 0.0;
    for (int k = 1; k <= panels; ++k) {
        const double mid = probe_sample(S, pr, t0 + (2 * k - 1) * h, false).d2q;
        const ProbeSample end = probe_sample(S, pr, t0 + 2 * k * h, false);
        acc += h / 3.0 * (prev.d2q + 4.0 * mid + end.d2q);
        prev = end;
        if (acc >= 1.0 && !r.found) {
            r.found = true;
            r.T = end.t;
            break;
        }
    }
    r.integral_at_horizon = acc;
    r.dq_horizon = prev.dq;
    return r;
}

LambdaDivergence least_eigenvalue_divergence(const DamekRicciSpace& S, const TransverseProbe& pr, double t1,
                                             double t_max, double c0, double h) {
    const auto sm = probe_samples(S, pr, t1, t_max, h, true);
    LambdaDivergence r;
    r.min_margin = std::numeric_limits<double>::infinity();
    r.max_lambda = -std::numeric_limits<double>::infinity();
    r.min_lambda = std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (size_t i = 0; i < sm.size(); ++i) {
        if (i > 0) acc += 0.5 * (sm[i].t - sm[i - 1].t) * (sm[i].lambda + sm[i - 1].lambda);
        r.t.push_back(sm[i].t);
        r.integral.push_back(acc);
        r.min_margin = std::min(r.min_margin, acc - c0 * (sm[i].t - t1));
        r.max_lambda = std::max(r.max_lambda, sm[i].lambda);
        r.min_lambda = std::min(r.min_lambda, sm[i].lambda);
    }
    return r;
}

std::vector<double> busemann_divergence_probe(const DamekRicciSpace& S, const TransverseProbe& pr,
                                              const std::vector<double>& T_grid) {
    std::vector<double> out;
    for (double T : T_grid) out.push_back(busemann_value(S, exp_at(S, pr.p0, pr.u, T), pr.theta));
    return out;
}

ProbeShapeReport probe_shape(const DamekRicciSpace& S, const TransverseProbe& pr, double t0, double t1, double h,
                             int pair_stride) {
    const auto sm = probe_samples(S, pr, t0, t1, h, true);
    ProbeShapeReport r;
    r.min_d2q = std::numeric_limits<double>::infinity();
    r.derivative_bound_margin = std::numeric_limits<double>::infinity();
    r.gronwall_margin = std::numeric_limits<double>::infinity();
    size_t imin = 0;
    std::vector<double> lam_int(sm.size(), 0.0);
    for (size_t i = 0; i < sm.size(); ++i) {
        r.min_d2q = std::min(r.min_d2q, sm[i].d2q);
        r.derivative_bound_margin =
            std::min(r.derivative_bound_margin, sm[i].d2q - sm[i].lambda * (1.0 - sm[i].dq * sm[i].dq));
        if (sm[i].q < sm[imin].q) imin = i;
        if (i > 0) {
            if ((sm[i - 1].dq < 0) != (sm[i].dq < 0)) ++r.sign_changes;
            lam_int[i] = lam_int[i - 1] + 0.5 * h * (sm[i].lambda + sm[i - 1].lambda);
        }
    }
    r.t_min = sm[imin].t;
    for (size_t i = imin + 1; i < sm.size(); ++i)
        if (sm[i].q <= sm[i - 1].q) r.increasing_after_min = false;
    // 1 - |y| must stay resolvable for atanh
    auto ok = [&](size_t i) { return 1.0 - std::abs(sm[i].dq) > 1e-8; };
    for (size_t i = 0; i < sm.size(); i += pair_stride) {
        if (!ok(i)) continue;
        for (size_t j = i + pair_stride; j < sm.size(); j += pair_stride) {
            if (!ok(j)) continue;
            const double lhs = 2.0 * (std::atanh(sm[j].dq) - std::atanh(sm[i].dq));
            r.gronwall_margin = std::min(r.gronwall_margin, lhs - 2.0 * (lam_int[j] - lam_int[i]));
            ++r.gronwall_pairs;
        }
    }
    return r;
}

}  // namespace drspace
