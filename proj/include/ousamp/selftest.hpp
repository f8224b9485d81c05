// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace ousamp {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    bool passed() const;
    std::string text() const;
};

/// Invariant checks of every module at reduced sample sizes.
SelftestReport run_selftest(unsigned threads = 0);

}  // namespace ousamp
