#include "drspace/checks.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <limits>

using namespace drspace;

namespace {

DamekRicciSpace make(const std::string& preset) { return DamekRicciSpace(build_algebra(parse_preset(preset))); }

const CheckResult* find(const std::vector<CheckResult>& rs, const std::string& id) {
    for (const auto& r : rs)
        if (r.id == id) return &r;
    return nullptr;
}

}  // namespace

TEST(Checks, ModulesListed) {
    const auto& m = suite_modules();
    EXPECT_EQ(m.front(), "algebra");
    EXPECT_EQ(m.back(), "visibility");
    EXPECT_EQ(m.size(), 8u);
}

TEST(Checks, AlgebraModulePasses) {
    const auto S = make("quaternionic");
    const auto rs = run_instance_suite(S, CheckConfig{}, "algebra");
    ASSERT_FALSE(rs.empty());
    for (const auto& r : rs) {
        EXPECT_EQ(r.id.rfind("algebra.", 0), 0u) << r.id;
        EXPECT_TRUE(r.pass) << format_check_text(r);
    }
}

TEST(Checks, UnknownModuleRejected) {
    const auto S = make("heisenberg");
    EXPECT_THROW(run_instance_suite(S, CheckConfig{}, "astrology"), std::invalid_argument);
    EXPECT_THROW(run_acceptance("AC99", CheckConfig{}), std::invalid_argument);
    EXPECT_THROW(run_acceptance("AC01_wrong_name", CheckConfig{}), std::invalid_argument);
}

TEST(Checks, ToleranceOverrideApplies) {
    const auto S = make("heisenberg");
    CheckConfig cfg;
    cfg.tol["algebra.identities"] = 0.0;
    const auto rs = run_instance_suite(S, cfg, "algebra");
    const auto* r = find(rs, "algebra.identities");
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->tol, 0.0);
    // a residual of exactly 0 is not below 0
    EXPECT_EQ(r->pass, r->residual < 0.0);
    EXPECT_EQ(cfg.tolerance("other", 3.5), 3.5);
}

TEST(Checks, SameSeedSameReport) {
    const auto S = make("htype_k2");
    CheckConfig cfg;
    cfg.seed = 42;
    const auto a = run_instance_suite(S, cfg, "busemann"), b = run_instance_suite(S, cfg, "busemann");
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(format_check_csv(a[i]), format_check_csv(b[i]));
    cfg.seed = 43;
    const auto c = run_instance_suite(S, cfg, "busemann");
    bool differs = false;
    for (size_t i = 0; i < a.size(); ++i) differs = differs || a[i].residual != c[i].residual;
    EXPECT_TRUE(differs);
}

TEST(Checks, Formatting) {
    CheckResult r;
    r.id = "space.einstein";
    r.anchor = "Ric = c g, c = -(m/4 + k)";
    r.residual = 1.5e-13;
    r.tol = 1e-10;
    r.bound = Bound::Below;
    r.pass = true;
    const std::string text = format_check_text(r);
    EXPECT_NE(text.find("space.einstein"), std::string::npos);
    EXPECT_NE(text.find("PASS"), std::string::npos);
    EXPECT_NE(text.find("1.500e-13"), std::string::npos);

    // anchors with commas are quoted
    const std::string csv = format_check_csv(r);
    EXPECT_EQ(csv.rfind("space.einstein,\"Ric = c g, c = -(m/4 + k)\",", 0), 0u) << csv;
    EXPECT_EQ(csv_header(), "check_id,anchor,residual,bound,tol,status,note");

    const auto j = nlohmann::json::parse(format_check_json(r));
    EXPECT_EQ(j["check_id"], "space.einstein");
    EXPECT_EQ(j["status"], "PASS");
    EXPECT_DOUBLE_EQ(j["residual"].get<double>(), 1.5e-13);
    EXPECT_FALSE(j.contains("note"));

    r.note = "3 blocks";
    r.pass = false;
    EXPECT_NE(format_check_text(r).find("FAIL  (3 blocks)"), std::string::npos);
}

TEST(Checks, CriteriaTable) {
    const auto& c = acceptance_criteria();
    ASSERT_EQ(c.size(), 12u);
    EXPECT_EQ(c.front().first, "AC01");
    EXPECT_EQ(c[6].second, "jacobi_cubic");
    EXPECT_EQ(c.back().first, "AC12");
}

TEST(Checks, CriterionSummaryCountsFailedParts) {
    const auto r = run_acceptance("AC01_htype_axioms", CheckConfig{});
    ASSERT_FALSE(r.parts.empty());
    int failed = 0;
    for (const auto& p : r.parts) failed += !p.pass;
    EXPECT_EQ(r.summary.residual, failed);
    EXPECT_EQ(r.summary.bound, Bound::AtMost);
    EXPECT_EQ(r.summary.pass, failed == 0);
    EXPECT_EQ(r.summary.id, "AC01_htype_axioms");
}
