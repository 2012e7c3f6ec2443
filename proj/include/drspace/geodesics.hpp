#pragma once

#include "drspace/space.hpp"

#include <utility>
#include <vector>

namespace drspace {

/// Scalar profile of the geodesic through e with unit direction (V, Y, s).
/// Differences such as 1 - theta^2 and 1 - s*theta are formed without cancellation.
struct GeodesicScalars {
    double theta = 0;         // tanh(t/2)
    double one_m_theta2 = 1;  // 1 - theta^2
    double one_m_stheta = 1;  // 1 - s theta
    double chi = 1;           // (1 - s theta)^2 + |Y|^2 theta^2
    double h = 1;             // (1 - theta^2) / chi
    double dlogh = 0;         // (log h)'
};

GeodesicScalars geodesic_scalars(double s, double y2, double t);

/// Throws std::invalid_argument unless |direction| = 1 within 1e-10.
void require_unit(const Vec& direction, const char* who);

GroupPoint geodesic_point(const DamekRicciSpace& S, const Vec& direction, double t);

/// Velocity in the left-invariant frame at gamma(t).
Vec geodesic_velocity(const DamekRicciSpace& S, const Vec& direction, double t);

/// Fixed-step RK4 oracle: frame components c of gamma' obey c' = -nabla_c c,
/// coordinates (U, X, log a) move by the frame-to-coordinate map.
GroupPoint geodesic_ode(const DamekRicciSpace& S, const Vec& direction, double t, double step = 1e-3);

/// Same integration, reporting the point every `every` steps (plus the start).
std::vector<std::pair<double, GroupPoint>> geodesic_ode_path(const DamekRicciSpace& S, const Vec& direction,
                                                             double t_end, double step, int every);

/// Geodesic through p with initial frame velocity u (any length): p * gamma_{u/|u|}(t|u|).
GroupPoint exp_at(const DamekRicciSpace& S, const GroupPoint& p, const Vec& u, double t);

double distance_from_identity(const DamekRicciSpace& S, const GroupPoint& p);
double distance(const DamekRicciSpace& S, const GroupPoint& p, const GroupPoint& q);

/// Volume density of geodesic spheres, normalized so Theta(r) ~ r^(n-1) at 0:
/// Theta = 2^(n-1) sinh^(n-1)(r/2) cosh^(2Q-n+1)(r/2); sigma = Theta'/Theta.
struct VolumeDensity {
    double theta = 0;
    double log_theta = 0;
    double sigma = 0;
};
VolumeDensity volume_density(const DamekRicciSpace& S, double r);

/// Exponents (2c2, 2c3) in Theta = c1 sinh^(2c2)(r/2) cosh^(2c3)(r/2), recovered
/// by least squares from sampled log Theta.
std::pair<double, double> fit_density_exponents(const DamekRicciSpace& S);

}  // namespace drspace
