#pragma once

#include <string>
#include <vector>

namespace bandspec {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Self-check suite behind `bandspec verify`. The fast subset covers the exact
/// combinatorial identities and the kernel identities; the full suite adds
/// Monte Carlo, resolvent and Fourier-embedding checks.
std::vector<CheckResult> run_verify(bool fast, int workers = 1);

}  // namespace bandspec
