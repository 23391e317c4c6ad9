// Acceptance gate: runs every top-level criterion and prints one line each.
#include <cstdio>
#include <vector>

#include "zd/verify.hpp"

int main(int argc, char** argv) {
    zd::CheckOptions opt;
    if (argc > 1) opt.fixture_dir = argv[1];
    const std::vector<zd::CheckResult> results = zd::run_suite("acceptance", opt);
    int failures = 0;
    for (const zd::CheckResult& r : results) {
        std::printf("%s  %s: %s  [%.1fs]\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        if (!r.passed) ++failures;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
    return failures == 0 ? 0 : 1;
}
