#pragma once

#include <string>
#include <vector>

namespace zd {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // measured quantity vs its bound
    double seconds = 0.0;
};

struct CheckOptions {
    std::string fixture_dir = "data";
};

// suite is "acceptance", "invariants", or "all". Every check is deterministic
// (fixed seeds) and records the measured value it judged.
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const CheckOptions& opt = {});

}  // namespace zd
