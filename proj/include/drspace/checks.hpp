#pragma once

#include "drspace/space.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace drspace {

/// How a residual is compared with its tolerance.
enum class Bound {
    Below,    // residual < tol
    AtMost,   // residual <= tol (counts)
    AtLeast,  // residual >= tol (spectral floors, margins)
};

/// One named check. NaN residuals fail under every bound.
struct CheckResult {
    std::string id;
    std::string anchor;
    double residual = 0;
    double tol = 0;
    Bound bound = Bound::Below;
    bool pass = false;
    std::string note;
};

struct CheckConfig {
    std::uint64_t seed = 1;
    /// Overrides keyed by check id, e.g. "busemann.hessian_fd" or "AC05.fd".
    std::map<std::string, double> tol;
    double tolerance(const std::string& id, double fallback) const;
};

/// Module names accepted by run_instance_suite, in report order.
const std::vector<std::string>& suite_modules();

/// Invariant checks of every module on one instance. `module` restricts the
/// run to one entry of suite_modules(); empty runs all.
std::vector<CheckResult> run_instance_suite(const DamekRicciSpace& S, const CheckConfig& cfg,
                                            const std::string& module = "");

/// An acceptance criterion: a summary line plus the sub-checks it is made of.
struct CriterionResult {
    CheckResult summary;  // residual = number of failed parts, tol = 0
    std::vector<CheckResult> parts;
};

/// Criterion ids AC01 .. AC12 with their short names, e.g. "AC07" -> "jacobi_cubic".
const std::vector<std::pair<std::string, std::string>>& acceptance_criteria();

/// Accepts "AC07" or "AC07_jacobi_cubic". Throws std::invalid_argument otherwise.
CriterionResult run_acceptance(const std::string& id, const CheckConfig& cfg);

/// `check_id  anchor  residual  tol  PASS|FAIL` with a trailing note when present.
std::string format_check_text(const CheckResult& r);
std::string format_check_csv(const CheckResult& r);
std::string format_check_json(const CheckResult& r);
std::string csv_header();

}  // namespace drspace
