#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xcube::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Cross-engine oracle suite: brute-force classical enumeration vs the exact
// structure ensemble vs Monte Carlo at L = 2, 3. `quick` skips the
// long-running MC and 2^27-configuration comparisons.
std::vector<Check> run_checks(bool quick, std::uint64_t seed = 20240551);

bool all_pass(const std::vector<Check>& checks);

}  // namespace xcube::verify
