#ifndef T310_SELFTEST_HPP
#define T310_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace t310 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestOptions {
    uint64_t seed = 1;
    int jobs = 1;
    // The statistical runs of the full suite (1e4 trials / contexts per item)
    // finish in well under a minute; quick mode trims them for smoke use.
    bool quick = false;
};

// Runs the fixture acceptance suite (12 criteria) and returns one result per
// criterion.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opt = {});

} // namespace t310

#endif
