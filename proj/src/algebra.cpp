#include "drspace/algebra.hpp"

#include "drspace/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace drspace {

namespace {

std::string fmt_residual(double r) {
    char buf[64];
    if (r >= 0.05)
        std::snprintf(buf, sizeof buf, "%.1f", r);
    else
        std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
}

Mat quaternion_left(int unit) {
    // basis (1, i, j, k); column c holds unit * e_c
    static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    static const int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    Mat L = Mat::Zero(4, 4);
    for (int c = 0; c < 4; ++c) L(idx[unit][c], c) = sign[unit][c];
    return L;
}

// x -> x * e_unit
Mat quaternion_right(int unit) {
    Mat R(4, 4);
    for (int c = 0; c < 4; ++c) R.col(c) = quaternion_left(c).col(unit);
    return R;
}

Mat block_diag(const Mat& b, int copies) {
    const auto s = b.rows();
    Mat out = Mat::Zero(s * copies, s * copies);
    for (int c = 0; c < copies; ++c) out.block(c * s, c * s, s, s) = b;
    return out;
}

// e_a e_b for imaginary units a, b in 1..7, returned as (sign, index)
std::pair<int, int> octonion_product(int a, int b) {
    if (a == b) return {-1, 0};
    for (const auto& t : octonion_triples()) {
        for (int r = 0; r < 3; ++r) {
            const int x = t[r], y = t[(r + 1) % 3], z = t[(r + 2) % 3];
            if (a == x && b == y) return {1, z};
            if (a == y && b == x) return {-1, z};
        }
    }
    throw std::logic_error("octonion table incomplete");
}

Mat octonion_left(int a) {
    Mat L = Mat::Zero(8, 8);
    L(a, 0) = 1.0;  // e_a * 1
    for (int b = 1; b < 8; ++b) {
        auto [sg, c] = octonion_product(a, b);
        L(c, b) = sg;
    }
    return L;
}

}  // namespace

const std::array<std::array<int, 3>, 7>& octonion_triples() {
    static const std::array<std::array<int, 3>, 7> t{
        {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}}};
    return t;
}

void validate_generators(const CliffordModuleSpec& spec, double tol) {
    if (spec.m < 1 || spec.k < 1)
        throw CliffordRelationError("dimensions must satisfy m >= 1 and k >= 1");
    if (static_cast<int>(spec.generators.size()) != spec.k)
        throw CliffordRelationError("expected " + std::to_string(spec.k) + " generators, got " +
                                    std::to_string(spec.generators.size()));
    for (int a = 0; a < spec.k; ++a) {
        const Mat& J = spec.generators[a];
        if (J.rows() != spec.m || J.cols() != spec.m)
            throw CliffordRelationError("generator " + std::to_string(a + 1) + " is not " +
                                        std::to_string(spec.m) + "x" + std::to_string(spec.m));
    }
    const Mat I = Mat::Identity(spec.m, spec.m);
    for (int a = 0; a < spec.k; ++a) {
        const Mat& J = spec.generators[a];
        const double sq = max_abs(Mat(J * J + I));
        if (sq > tol)
            throw CliffordRelationError("generator " + std::to_string(a + 1) +
                                        ": J² = −I violated, residual " + fmt_residual(sq));
        const double sk = max_abs(Mat(J + J.transpose()));
        if (sk > tol)
            throw CliffordRelationError("generator " + std::to_string(a + 1) +
                                        ": skew-symmetry violated, residual " + fmt_residual(sk));
    }
    for (int a = 0; a < spec.k; ++a)
        for (int b = a + 1; b < spec.k; ++b) {
            const Mat& A = spec.generators[a];
            const Mat& B = spec.generators[b];
            const double r = max_abs(Mat(A * B + B * A));
            if (r > tol)
                throw CliffordRelationError("generators (" + std::to_string(a + 1) + "," +
                                            std::to_string(b + 1) +
                                            "): J_a J_b + J_b J_a = 0 violated, residual " +
                                            fmt_residual(r));
        }
}

HeisenbergAlgebra::HeisenbergAlgebra(CliffordModuleSpec spec, double tol) : spec_(std::move(spec)) {
    validate_generators(spec_, tol);
    gen_t_.reserve(spec_.k);
    for (const auto& J : spec_.generators) gen_t_.push_back(J.transpose());
}

Mat HeisenbergAlgebra::j_matrix(const Vec& Z) const {
    Mat J = Mat::Zero(m(), m());
    for (int a = 0; a < k(); ++a)
        if (Z(a) != 0.0) J += Z(a) * spec_.generators[a];
    return J;
}

Vec HeisenbergAlgebra::j_map(const Vec& Z, const Vec& V) const {
    Vec out = Vec::Zero(m());
    for (int a = 0; a < k(); ++a)
        if (Z(a) != 0.0) out.noalias() += Z(a) * (spec_.generators[a] * V);
    return out;
}

Vec HeisenbergAlgebra::bracket(const Vec& V, const Vec& V1) const {
    Vec out(k());
    for (int a = 0; a < k(); ++a) out(a) = V1.dot(spec_.generators[a] * V);
    return out;
}

Mat HeisenbergAlgebra::ad(const Vec& V) const {
    Mat out(k(), m());
    for (int a = 0; a < k(); ++a) out.row(a) = (spec_.generators[a] * V).transpose();
    return out;
}

HeisenbergAlgebra build_algebra(const CliffordModuleSpec& spec, double tol) {
    return HeisenbergAlgebra(spec, tol);
}

CliffordModuleSpec standard_instance(const std::string& name, int q) {
    if (q < 1) throw std::invalid_argument("catalog multiplicity q must be >= 1");
    CliffordModuleSpec s;
    if (name == "heisenberg_q" || name == "heisenberg") {
        Mat J(2, 2);
        J << 0, -1, 1, 0;
        s.m = 2 * q;
        s.k = 1;
        s.generators = {block_diag(J, q)};
    } else if (name == "quaternionic_q" || name == "quaternionic") {
        s.m = 4 * q;
        s.k = 3;
        for (int u = 1; u <= 3; ++u) s.generators.push_back(block_diag(quaternion_left(u), q));
    } else if (name == "quaternionic_mixed") {
        // q left copies and q right copies of H; K^2 has eigenvalues strictly inside (-1, 0)
        s.m = 8 * q;
        s.k = 3;
        for (int u = 1; u <= 3; ++u) {
            Mat J = Mat::Zero(s.m, s.m);
            J.topLeftCorner(4 * q, 4 * q) = block_diag(quaternion_left(u), q);
            J.bottomRightCorner(4 * q, 4 * q) = block_diag(quaternion_right(u), q);
            s.generators.push_back(J);
        }
    } else if (name == "cayley") {
        s.m = 8;
        s.k = 7;
        for (int a = 1; a <= 7; ++a) s.generators.push_back(octonion_left(a));
    } else if (name == "htype_k2") {
        s.m = 4;
        s.k = 2;
        s.generators = {quaternion_left(1), quaternion_left(2)};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return s;
}

CliffordModuleSpec parse_preset(const std::string& preset) {
    const auto eq = preset.find('=');
    if (eq == std::string::npos) return standard_instance(preset, 1);
    const std::string name = preset.substr(0, eq);
    const std::string qs = preset.substr(eq + 1);
    std::size_t used = 0;
    int q = 0;
    try {
        q = std::stoi(qs, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != qs.size() || qs.empty())
        throw std::invalid_argument("bad multiplicity in preset '" + preset + "'");
    return standard_instance(name, q);
}

CliffordModuleSpec spec_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecFormatError(std::string("spec parse error: ") + e.what());
    }
    auto need_int = [&](const char* key) {
        if (!j.contains(key)) throw SpecFormatError(std::string("missing field '") + key + "'");
        if (!j[key].is_number_integer())
            throw SpecFormatError(std::string("field '") + key + "' must be an integer");
        return j[key].get<int>();
    };
    CliffordModuleSpec s;
    s.m = need_int("m");
    s.k = need_int("k");
    if (s.m < 1 || s.k < 1) throw SpecFormatError("fields 'm' and 'k' must be positive");
    if (!j.contains("generators") || !j["generators"].is_array())
        throw SpecFormatError("missing array field 'generators'");
    const auto& g = j["generators"];
    if (static_cast<int>(g.size()) != s.k)
        throw SpecFormatError("'generators' has " + std::to_string(g.size()) + " entries, k = " +
                              std::to_string(s.k));
    for (int a = 0; a < s.k; ++a) {
        const auto& ga = g[a];
        const std::string where = "generators[" + std::to_string(a) + "]";
        if (!ga.is_array() || static_cast<int>(ga.size()) != s.m)
            throw SpecFormatError(where + " must have " + std::to_string(s.m) + " rows");
        Mat J(s.m, s.m);
        for (int r = 0; r < s.m; ++r) {
            const auto& row = ga[r];
            if (!row.is_array() || static_cast<int>(row.size()) != s.m)
                throw SpecFormatError(where + "[" + std::to_string(r) + "] must have " +
                                      std::to_string(s.m) + " entries");
            for (int c = 0; c < s.m; ++c) {
                if (!row[c].is_number())
                    throw SpecFormatError(where + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                          "] is not a number");
                J(r, c) = row[c].get<double>();
            }
        }
        s.generators.push_back(J);
    }
    return s;
}

CliffordModuleSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return spec_from_json_text(ss.str());
}

std::string spec_to_json_text(const CliffordModuleSpec& spec) {
    nlohmann::json j;
    j["m"] = spec.m;
    j["k"] = spec.k;
    j["generators"] = nlohmann::json::array();
    for (const auto& J : spec.generators) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < J.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < J.cols(); ++c) row.push_back(J(r, c));
            rows.push_back(row);
        }
        j["generators"].push_back(rows);
    }
    return j.dump();
}

double IdentityResiduals::max() const {
    return std::max({jz_square, polarized, adjoint, isometry, bracket_j, bracket_jj, bracket_vjv,
                     antisymmetry});
}

IdentityResiduals sample_identities(const HeisenbergAlgebra& alg, int samples, Rng& rng) {
    IdentityResiduals r;
    const int m = alg.m(), k = alg.k();
    for (int i = 0; i < samples; ++i) {
        const Vec Z = rng.gaussian_vec(k), Z1 = rng.gaussian_vec(k);
        const Vec U = rng.gaussian_vec(m), V = rng.gaussian_vec(m);
        const Vec JzU = alg.j_map(Z, U), JzV = alg.j_map(Z, V);
        const Vec Jz1U = alg.j_map(Z1, U), Jz1V = alg.j_map(Z1, V);
        auto upd = [](double& slot, double v) { slot = std::max(slot, std::abs(v)); };
        upd(r.jz_square, max_abs(Vec(alg.j_map(Z, JzV) + Z.squaredNorm() * V)));
        upd(r.polarized, JzU.dot(Jz1V) + Jz1U.dot(JzV) - 2.0 * U.dot(V) * Z.dot(Z1));
        upd(r.adjoint, alg.bracket(V, U).dot(Z) - JzV.dot(U));
        upd(r.isometry, JzV.norm() - Z.norm() * V.norm());
        upd(r.bracket_j, max_abs(Vec(alg.bracket(JzU, V) - alg.bracket(U, JzV) + 2.0 * U.dot(V) * Z)));
        upd(r.bracket_jj, max_abs(Vec(alg.bracket(JzU, JzV) + Z.squaredNorm() * alg.bracket(U, V) +
                                      2.0 * U.dot(JzV) * Z)));
        upd(r.bracket_vjv, max_abs(Vec(alg.bracket(V, JzV) - V.squaredNorm() * Z)));
        upd(r.antisymmetry, max_abs(Vec(alg.bracket(U, V) + alg.bracket(V, U))));
    }
    return r;
}

}  // namespace drspace
