// Release gate: one line per criterion, nonzero exit if any of them fails.
#include <cstdio>

#include "entlaw/acceptance.hpp"

int main() {
    const auto results = entlaw::run_acceptance_battery({}, [](const entlaw::CriterionResult& r) {
        std::printf("[%s] %d. %s: %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
    });
    const bool ok = entlaw::all_passed(results);
    std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILURES PRESENT");
    return ok ? 0 : 1;
}
