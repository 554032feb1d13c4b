//==============================================================================
// verify.hpp
// One-shot verification: every identity the artifact can check, each tied to
// an anchor string, a measured value, and an admissible interval. The
// acceptance driver groups the same checks by criterion.
//==============================================================================
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hw {

struct VerifyCheck {
    std::string name;
    std::string anchor;
    double value = 0.0;
    double lo = 0.0;   // admissible interval [lo, hi]
    double hi = 0.0;
    bool pass = false;
    bool gating = true;  // non-gating checks are recorded but never fail the run
    int criterion = 0;   // acceptance criterion this check belongs to (0 = none)
};

enum class VerifyLevel { core, full };

struct VerificationReport {
    std::string level;
    std::uint64_t seed = 0;
    std::vector<VerifyCheck> checks;
    bool all_pass = false;

    std::string to_json() const;
    void recompute_overall();
};

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::core;
    std::uint64_t seed = 20240817;
    bool echo = false;  // one line per check on stderr as it lands
};

VerificationReport run_verification(const VerifyOptions& opts);

}  // namespace hw
