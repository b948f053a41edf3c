#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamclust {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;  // deterministic given the seed: no timings, no paths
};

// Criteria 1..11. Criterion 12 (byte-identical verify-all output) has to be
// checked from outside by invoking the CLI twice.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed);

// One line per criterion plus a tally; bytes depend only on the results.
std::string format_acceptance_summary(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace streamclust
