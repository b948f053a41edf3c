#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "streamclust/adversary.hpp"
#include "streamclust/generators.hpp"
#include "streamclust/stream.hpp"

namespace streamclust {

enum class ExperimentAlgorithm { SeqLMeans, Subsample };
enum class OrderingMode { Random, ClusterSorted, File };

std::string to_string(ExperimentAlgorithm algorithm);
std::string to_string(OrderingMode mode);

struct ExperimentSpec {
    ExperimentAlgorithm algorithm = ExperimentAlgorithm::Subsample;
    GeneratorSpec instance;
    std::size_t ell = 10;
    int trials = 2000;
    OrderingMode ordering = OrderingMode::Random;
    std::filesystem::path ordering_file;  // OrderingMode::File only
    std::uint64_t seed = 0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    int trials = 0;
    int successes = 0;
    double rate = 0.0;
    double measured_beta = 0.0;
    double bound = 0.0;   // 1 - k*exp(-beta*ell), beta measured off the instance
    double sigma = 0.0;   // binomial standard error at the bound
    bool pass = false;    // rate >= bound - 3*sigma
    bool ell_below_k = false;
    int generator_retries = 0;
    std::vector<std::uint64_t> trial_seeds;
    std::int64_t wall_ms = 0;

    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

// One instance per spec (generated from spec.instance.seed), `trials`
// independent runs varying only the ordering and the reservoir draws.
// Success means the final induced clustering on all n points refines the
// planted one. Hypothesis mismatches (seq-l-means off random orderings or
// off convex-nice instances; subsample off core instances) are rejected
// before anything runs.
ExperimentReport run_probability_experiment(const ExperimentSpec& spec);

double theoretical_bound(int k, double beta, std::size_t ell);

struct OrderingCheckResult {
    std::size_t total = 0;
    std::size_t successes = 0;
    std::vector<std::size_t> first_failure;  // empty when none
    bool all_pass() const { return successes == total; }
    bool all_fail() const { return successes == 0; }
};

using RunPredicate = std::function<bool(const RunRecord& record, const DistanceSpace& space,
                                        const Clustering& planted)>;

// Runs every one of the n! orderings (n <= 8) and counts predicate hits.
OrderingCheckResult exhaustive_ordering_check(const AlgorithmFactory& factory,
                                              const DistanceSpace& space,
                                              const Clustering& planted,
                                              const RunPredicate& success);

// Standard success predicates.
RunPredicate recovers_planted();      // induced final clustering == planted
RunPredicate covers_every_cluster();  // every planted cluster meets the final centers

}  // namespace streamclust
