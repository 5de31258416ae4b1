#pragma once

#include <functional>
#include <string>
#include <vector>

namespace iomma {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;  // first failure, or a one-line summary on success
    std::size_t cases = 0;
};

struct VerifyOptions {
    bool quick = false;
    bool stop_on_failure = true;
};

/// Small-scale invariant checks across all modules. Suites run in a fixed
/// order, starting with "schedule/prediction agreement".
std::vector<SuiteResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const SuiteResult&)>& on_result = {});

} // namespace iomma
