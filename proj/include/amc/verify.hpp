#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace amc {

struct CheckResult {
    std::string label;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    bool passed = false;
    std::vector<CheckResult> checks;
};

// Self-contained verification suites shared by the CLI and the test binaries.
// Names: dependence, profiles, first-one, tau, two-opt, walkthrough.
std::vector<std::string> verify_suite_names();
SuiteReport run_verify_suite(const std::string& name, uint64_t seed);
std::vector<SuiteReport> run_all_verify_suites(uint64_t seed);

}  // namespace amc
