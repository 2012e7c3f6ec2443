#pragma once

#include "drspace/busemann.hpp"

#include <vector>

namespace drspace {

/// Geodesic gamma1(t) = p0 * gamma_u(t) tested against the Busemann function of theta.
struct TransverseProbe {
    IdealBoundaryPoint theta;
    GroupPoint p0;
    Vec u;  // unit frame velocity at p0
};

/// Throws std::invalid_argument when u is within 1e-6 of +-grad b_theta(p0).
TransverseProbe make_probe(const DamekRicciSpace& S, const IdealBoundaryPoint& theta, const GroupPoint& p0,
                           const Vec& u);

struct ProbeSample {
    double t = 0;
    double q = 0;       // b_theta(gamma1(t))
    double dq = 0;      // cos phi(t)
    double d2q = 0;     // Hess b(gamma1', gamma1')
    double lambda = 0;  // least eigenvalue of Hess b on grad b^perp (if requested)
};

ProbeSample probe_sample(const DamekRicciSpace& S, const TransverseProbe& pr, double t, bool with_lambda);

/// Samples on t0, t0 + h, ..., t1.
std::vector<ProbeSample> probe_samples(const DamekRicciSpace& S, const TransverseProbe& pr, double t0, double t1,
                                       double h, bool with_lambda);

/// Composite Simpson of Hess b(gamma1', gamma1') over [t, T] with step close to h.
double visibility_integral(const DamekRicciSpace& S, const TransverseProbe& pr, double t, double T, double h = 1e-2);

struct ReachOneReport {
    bool found = false;
    double T = 0;                    // smallest grid T with integral >= 1
    double integral_at_horizon = 0;
    double dq_start = 0;             // q'(t0)
    double dq_horizon = 0;           // q'(t0 + horizon)
};
/// Scans T = t0 + 2h, t0 + 4h, ... up to t0 + horizon.
ReachOneReport find_T_reaching_one(const DamekRicciSpace& S, const TransverseProbe& pr, double t0 = 0.0,
                                   double horizon = 50.0, double h = 1e-2);

/// Cumulative trapezoid integrals of lambda from t1 and the margin against c0 (t - t1).
struct LambdaDivergence {
    std::vector<double> t, integral;
    double min_margin = 0;  // min over samples of integral - c0 (t - t1)
    double max_lambda = 0;
    double min_lambda = 0;
};
LambdaDivergence least_eigenvalue_divergence(const DamekRicciSpace& S, const TransverseProbe& pr, double t1,
                                             double t_max, double c0, double h = 1e-2);

/// b_theta(gamma1(T)) on the grid.
std::vector<double> busemann_divergence_probe(const DamekRicciSpace& S, const TransverseProbe& pr,
                                              const std::vector<double>& T_grid);

/// Shape of q on [t0, t1]: convexity, a single sign change of q', growth after the minimum,
/// the pointwise bound q'' >= lambda (1 - q'^2) and the integrated bound
/// atanh y(t) - atanh y(t1) >= int lambda (log form of the Gronwall inequality).
struct ProbeShapeReport {
    double min_d2q = 0;
    int sign_changes = 0;
    double t_min = 0;               // grid argmin of q
    bool increasing_after_min = true;
    double derivative_bound_margin = 0;  // min of q'' - lambda (1 - q'^2)
    double gronwall_margin = 0;          // min over sample pairs
    int gronwall_pairs = 0;
};
ProbeShapeReport probe_shape(const DamekRicciSpace& S, const TransverseProbe& pr, double t0, double t1,
                             double h = 1e-2, int pair_stride = 10);

}  // namespace drspace
