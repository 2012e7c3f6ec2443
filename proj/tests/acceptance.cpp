// One summary line per criterion, its parts indented below. Exit status 1 when
// any selected criterion fails.

#include "drspace/checks.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace drspace;

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<std::string> only;
    std::uint64_t seed = 1;
    bool quiet = false;
    app.add_option("--only", only, "criterion id, e.g. AC07 (repeatable)");
    app.add_option("--seed", seed, "base seed");
    app.add_flag("--quiet", quiet, "summary lines only");
    CLI11_PARSE(app, argc, argv);

    if (only.empty())
        for (const auto& [id, name] : acceptance_criteria()) only.push_back(id);

    CheckConfig cfg;
    cfg.seed = seed;
    int failed = 0;
    for (const auto& id : only) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = run_acceptance(id, cfg);
        } catch (const std::exception& e) {
            std::printf("%s  ERROR  %s\n", id.c_str(), e.what());
            ++failed;
            continue;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  [%.1f s]\n", format_check_text(r.summary).c_str(), secs);
        if (!quiet)
            for (const auto& p : r.parts) std::printf("    %s\n", format_check_text(p).c_str());
        std::fflush(stdout);
        failed += r.summary.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
