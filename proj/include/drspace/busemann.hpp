#pragma once

#include "drspace/space.hpp"

namespace drspace {

/// Ideal boundary point in the (v, y) chart, or the pole (direction A).
struct IdealBoundaryPoint {
    bool pole = false;
    Vec v;
    Vec y;
};

IdealBoundaryPoint boundary_coords(const DamekRicciSpace& S, const Vec& direction);
IdealBoundaryPoint pole_point(const DamekRicciSpace& S);

/// Image of the boundary point under left translation by x.
IdealBoundaryPoint translate_boundary(const DamekRicciSpace& S, const GroupPoint& x, const IdealBoundaryPoint& th);

/// Scratch quantities at p for a non-pole boundary point.
struct BusemannTerms {
    Vec calV;  // v - U
    Vec calY;  // y - X - [U, v]/2
    double f = 0;  // a + |calV|^2/4
    double F = 0;  // f^2 + |calY|^2
    double C = 0;  // -log((1 + |v|^2/4)^2 + |y|^2)
};
BusemannTerms busemann_terms(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th);

/// b = log F - log a + C, or -log a at the pole; b(e) = 0.
double busemann_value(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th);

/// d(p, gamma(T)) - T for the geodesic through e with the given direction.
double busemann_limit_oracle(const DamekRicciSpace& S, const GroupPoint& p, const Vec& direction, double T);

/// Gradient in the left-invariant frame at p (unit length).
Vec busemann_gradient(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th);

/// Hessian components in the frame at p (non-pole boundary point).
Mat hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th);
/// Hessian of -log a: 1/2 on v, 1 on z, 0 on A.
Mat hessian_pole(const DamekRicciSpace& S);
/// Dispatches to hessian or hessian_pole.
Mat busemann_hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th);

/// Hessian at e written directly in terms of the direction (V, Y, s).
Mat hessian_at_identity(const DamekRicciSpace& S, const Vec& direction);

/// Sub-expressions at e: f, F and the residuals of
/// f v - J_y v = (4/chi) V and 4f - F = 4(1 - 2s)/chi.
struct IdentityTerms {
    double chi = 0, f = 0, F = 0;
    double res_fv = 0, res_4f = 0, res_f = 0, res_F = 0;
};
IdentityTerms identity_terms(const DamekRicciSpace& S, const Vec& direction);

/// Central differences of b along frame geodesics through p.
Vec fd_gradient(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th, double h = 1e-5);
/// Five-point second differences of b along geodesics through p; off-diagonal
/// entries by polarization.
Mat fd_hessian(const DamekRicciSpace& S, const GroupPoint& p, const IdealBoundaryPoint& th, double h = 1e-3);

}  // namespace drspace
