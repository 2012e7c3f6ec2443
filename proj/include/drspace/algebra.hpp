#pragma once

#include "drspace/linalg.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace drspace {

class Rng;

/// Raw Clifford-module data: k skew m x m generators with J_a J_b + J_b J_a = -2 delta_ab I.
struct CliffordModuleSpec {
    int m = 0;
    int k = 0;
    std::vector<Mat> generators;
};

/// Raised when generator data violates a Clifford relation; the message names
/// the relation, the generator indices and the residual.
class CliffordRelationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed spec files (field-level diagnostics).
class SpecFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Generalized Heisenberg algebra v + z. Bracket constants
/// c[i][j][a] = <[V_i,V_j], Y_a> = <J_a V_i, V_j> are derived from the generators.
class HeisenbergAlgebra {
public:
    HeisenbergAlgebra(CliffordModuleSpec spec, double tol = 1e-10);

    int m() const { return spec_.m; }
    int k() const { return spec_.k; }
    const CliffordModuleSpec& spec() const { return spec_; }
    const Mat& generator(int a) const { return spec_.generators[a]; }
    double c(int i, int j, int a) const { return gen_t_[a](i, j); }

    /// J_Z = sum_a Z^a J_a.
    Mat j_matrix(const Vec& Z) const;
    Vec j_map(const Vec& Z, const Vec& V) const;
    /// [V, V1] in z, defined by <[V,V1], Z> = <J_Z V, V1>.
    Vec bracket(const Vec& V, const Vec& V1) const;
    /// k x m matrix of U -> [V, U].
    Mat ad(const Vec& V) const;

private:
    CliffordModuleSpec spec_;
    std::vector<Mat> gen_t_;  // transposed generators, gen_t_[a](i,j) = (J_a)_{ji}
};

HeisenbergAlgebra build_algebra(const CliffordModuleSpec& spec, double tol = 1e-10);

/// Throws CliffordRelationError on the first relation exceeding tol (max-abs entry).
void validate_generators(const CliffordModuleSpec& spec, double tol = 1e-10);

/// Catalog: "heisenberg_q" (k=1, m=2q), "quaternionic_q" (k=3, m=4q),
/// "cayley" (k=7, m=8), "htype_k2" (k=2, m=4), and "quaternionic_mixed"
/// (k=3, m=8q: q copies of H with left and q with right multiplication).
CliffordModuleSpec standard_instance(const std::string& name, int q = 1);

/// Accepts "name" or "name=q", e.g. "quaternionic_q=2".
CliffordModuleSpec parse_preset(const std::string& preset);

/// Imaginary-unit triples (a, b, c) with e_a e_b = e_c used for the octonions.
const std::array<std::array<int, 3>, 7>& octonion_triples();

CliffordModuleSpec spec_from_json_text(const std::string& text);
CliffordModuleSpec load_spec_file(const std::string& path);
std::string spec_to_json_text(const CliffordModuleSpec& spec);

/// Max residuals of the H-type identities over random samples.
struct IdentityResiduals {
    double jz_square = 0;     // J_Z^2 V + |Z|^2 V
    double polarized = 0;     // <J_Z U, J_Z' V> + <J_Z' U, J_Z V> - 2<U,V><Z,Z'>
    double adjoint = 0;       // <[V,V1],Z> - <J_Z V, V1>
    double isometry = 0;      // |J_Z V| - |Z||V|
    double bracket_j = 0;     // [J_Z U, V] - [U, J_Z V] + 2<U,V> Z
    double bracket_jj = 0;    // [J_Z U, J_Z V] + |Z|^2 [U,V] + 2<U, J_Z V> Z
    double bracket_vjv = 0;   // [V, J_Z V] - |V|^2 Z
    double antisymmetry = 0;  // [V,V1] + [V1,V]
    double max() const;
};

IdentityResiduals sample_identities(const HeisenbergAlgebra& alg, int samples, Rng& rng);

}  // namespace drspace
