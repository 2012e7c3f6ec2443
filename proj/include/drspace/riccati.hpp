#pragma once

#include "drspace/busemann.hpp"
#include "drspace/random.hpp"
#include "drspace/space.hpp"

#include <memory>
#include <vector>

namespace drspace {

/// A unit-speed geodesic with a horosphere family along it, described in an
/// orthonormal frame along the curve.
class GeodesicModel {
public:
    virtual ~GeodesicModel() = default;
    virtual int dim() const = 0;
    /// Frame components of gamma'(t).
    virtual Vec velocity(double t) const = 0;
    /// Horosphere shape operator S(t) = -Hess b at gamma(t); gamma'(t) is in its kernel.
    virtual Mat shape(double t) const = 0;
    /// Matrix of v -> R(v, gamma'(t)) gamma'(t).
    virtual Mat jacobi(double t) const = 0;
    /// Columns nabla_{gamma'(t)} e_j for the frame e_j.
    virtual Mat connection(double t) const = 0;
};

/// Geodesic through e in a Damek-Ricci space with the Busemann function of its endpoint.
class DamekRicciModel : public GeodesicModel {
public:
    DamekRicciModel(const DamekRicciSpace& S, Vec direction);
    int dim() const override { return S_.n(); }
    Vec velocity(double t) const override;
    Mat shape(double t) const override;
    Mat jacobi(double t) const override;
    Mat connection(double t) const override;

private:
    const DamekRicciSpace& S_;
    Vec dir_;
    IdealBoundaryPoint theta_;
};

/// Test model DR x R with gamma(t) = (gamma_d(t cos a), t sin a) and
/// b = cos(a) b_d - sin(a) r. The last frame vector is d/dr; the field
/// u = (-sin(a) gamma_d', cos(a)) is parallel and lies in the kernel of S.
class ProductModel : public GeodesicModel {
public:
    ProductModel(const DamekRicciSpace& S, Vec direction, double alpha);
    int dim() const override { return S_.n() + 1; }
    Vec velocity(double t) const override;
    Mat shape(double t) const override;
    Mat jacobi(double t) const override;
    Mat connection(double t) const override;
    /// The null field u at time t in frame components.
    Vec null_vector(double t) const;

private:
    const DamekRicciSpace& S_;
    DamekRicciModel dr_;
    Vec dir_;
    double ca_, sa_;
};

/// S(t) = -Hess b_theta at gamma(t) in the frame at gamma(t), theta the endpoint of gamma.
Mat shape_operator(const DamekRicciSpace& S, const Vec& direction, double t);
/// Same operator via left-invariance: -hessian_at_identity(gamma'(t)).
Mat shape_operator_translated(const DamekRicciSpace& S, const Vec& direction, double t);

/// Parallel transport matrix from t0 to t1 (columns: transported frame vectors), RK4.
Mat parallel_transport(const GeodesicModel& model, double t0, double t1, double step = 1e-3);

/// max |S~' + S^2 + R| at t, S~' by central differences in a parallel frame.
double riccati_residual(const GeodesicModel& model, double t, double dt);
double riccati_residual(const DamekRicciSpace& S, const Vec& direction, double t, double dt);

struct ShapeOperatorPath {
    std::vector<double> t;
    std::vector<Mat> S;  // frame components at gamma(t)
};

/// Thrown when |S| exceeds the blow-up bound during integration.
class RiccatiBlowUp : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// RK4 for S~' = -S~^2 - R~ in the parallel frame from t0 to t1 (either direction),
/// S0 given in the frame at gamma(t0). Records every `every` steps and the endpoint.
ShapeOperatorPath riccati_integrate(const GeodesicModel& model, const Mat& S0, double t0, double t1,
                                    double step = 1e-3, int every = 100, double blowup = 1e8);

/// -A'A^{-1} for the Jacobi tensor along the reversed geodesic from gamma(T),
/// A(0) = 0, A'(0) = id on the normal space, evaluated at gamma(t). Frame at gamma(t).
Mat sphere_shape_operator(const GeodesicModel& model, double t, double T, double step = 1e-3);

struct RankReport {
    int dim_E = 0;
    int rank = 0;
    double floor = 0;  // smallest Hessian eigenvalue on direction^perp
    std::vector<int> dim_E_over_t;
    bool t_independent = true;
};
RankReport rank_of_geodesic(const DamekRicciSpace& S, const Vec& direction, double tol = 1e-6,
                            const std::vector<double>& times = {-2.0, 0.0, 2.0});

struct KernelLocusReport {
    int dim_ker = 0;             // of R_direction on all of s
    bool on_locus = false;       // |V|^2 = 2/3, |Y|^2 = 1/3, s = 0
    bool has_mu_zero = false;
    Mat kernel;                  // orthonormal basis of Ker R within direction^perp
    double max_h_off_zero = 0;   // max h(t) for 0 < |t| <= 10
    double hessian_floor = 0;
};
KernelLocusReport jacobi_kernel_locus(const DamekRicciSpace& S, const Vec& direction, double tol = 1e-9);

/// A direction on the locus in htype_k2-like algebras: |V|^2 = 2/3, |Y|^2 = 1/3,
/// s = 0, with mu = 0 present. Built from random V and Y.
Vec locus_direction(const DamekRicciSpace& S, Rng& rng);

struct FlatPlaneReport {
    bool candidate = false;           // Ker R_direction contains xi perp direction
    double flat_curvature = 0;        // K(P(0))
    double condition_residual = 0;    // flat-plane conditions at t = 0
    double max_curvature_off_zero = 0;  // max K(P(t)) over t != 0 in the grid
    double min_abs_dlogh_off_zero = 0;  // min |(log h)'(t)| over t != 0
    double dlogh_at_zero = 0;
    std::vector<double> t, curvature, dlogh;
};
FlatPlaneReport flat_plane_search(const DamekRicciSpace& S, const Vec& direction, const std::vector<double>& t_grid);

/// Minimum over random directions of the least Hessian eigenvalue on direction^perp,
/// i.e. of Hess b(u, u) over unit u perp direction taken exactly rather than sampled.
double c0_estimate(const DamekRicciSpace& S, int samples, Rng& rng);

/// Identities for the null field of ProductModel at t: <S u,u>, <S'u,u>, <R u,u>, |S u|.
struct NullVectorReport {
    double shape = 0, shape_derivative = 0, jacobi = 0, kernel = 0;
};
NullVectorReport null_vector_identities(const ProductModel& model, double t, double dt = 1e-3);

}  // namespace drspace
