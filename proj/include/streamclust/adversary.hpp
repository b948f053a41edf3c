#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streamclust/clustering.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/stream.hpp"

namespace streamclust {

// Index map of a hub-and-spokes configuration: a hub x_o, M spoke points
// x_1..x_M and their antipodes x'_1..x'_M, with the distance profile that
// makes {x_o, x'_j} + {x_i : i in S} admit a nice 2-clustering exactly when
// j is outside S.
struct MConfiguration {
    int m = 0;
    std::size_t hub = 0;                  // x_o
    std::vector<std::size_t> spokes;      // spokes[i-1] = x_i
    std::vector<std::size_t> antipodes;  // antipodes[i-1] = x'_i

    std::vector<std::size_t> all_items() const;
};

struct MConfigurationInstance {
    DistanceSpace space;
    MConfiguration config;
    int attempts = 1;  // draws used by the rejection sampler (1 for matrix)
};

struct ClauseViolation {
    int clause = 0;  // 1: range [1,2]; 2: hub (3/2,2]; 3: cross [1,3/2]; 4: antipode > hub
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    std::string describe() const;
};

struct MVerification {
    std::vector<ClauseViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Exhaustive check of all four distance clauses.
MVerification verify_m_configuration(const DistanceSpace& space, const MConfiguration& config);

// Explicit matrix realization: hub distances 1.6, clique distances 1.2,
// antipode pairs 1.7. All values sit strictly inside the clause intervals and
// within [1,2], so the triangle inequality holds for free.
MConfigurationInstance build_matrix_m_configuration(int m);

// Euclidean realization in R^p: spokes c + r*u_i and antipodes c - r*u_i for
// near-orthogonal unit directions u_i drawn by rejection, hub at height h
// along an axis orthogonal to every u_i. Throws when the attempt budget runs
// out, which happens once M outgrows what dimension p can keep near-orthogonal.
MConfigurationInstance build_euclidean_m_configuration(int m, std::size_t p, std::uint64_t seed,
                                                       int max_attempts = 1000);

// Answers "does {x_o, x'_j} + {x_i : i in S} have a nice 2-clustering?" by
// brute-force enumeration (never by the closed-form predicate, which tests
// assert separately). Indices j and S are 1-based spoke labels; |S| >= 2.
bool configuration_subset_nice2(const DistanceSpace& space, const MConfiguration& config, int j,
                                const std::vector<int>& subset);

// One rigged feed: items of the combined space in batch order, the space
// restricted to exactly those items, and the unique nice 3-clustering of that
// restriction (certified by enumeration at build time).
struct RiggedSequence {
    std::vector<std::size_t> feed;         // combined-space ids, feed order
    std::vector<std::size_t> batch_sizes;  // (2, b, b, 2)
    DistanceSpace space;                   // restriction to `feed`, in feed order
    Clustering planted;                    // over feed positions
    bool spokes_together;  // true: the x side stays whole and the z side splits
};

struct LowerBoundInstance {
    DistanceSpace combined;
    MConfiguration first;   // the x side
    MConfiguration second;  // the z side
    double min_cross_distance = 0.0;
    int batch_size = 0;
    RiggedSequence sequence_a;  // keeps the x side together
    RiggedSequence sequence_b;  // keeps the z side together
};

enum class MConfigMode { Matrix, Euclidean };

// Two configurations at cross distance >= 4.5, plus the two batch feeds that
// differ only in which side retains a nice 2-clustering. Requires m > b so
// the two spoke subsets {1..b} and {2..b+1} differ. Both planted clusterings
// are enumeration-certified unique on every build.
LowerBoundInstance build_lower_bound_instance(int m, int b, MConfigMode mode,
                                              std::size_t p = 32, std::uint64_t seed = 0);

// Writes space/index-map/protocol/planted files under `dir`.
void save_lower_bound_bundle(const LowerBoundInstance& instance,
                             const std::filesystem::path& dir);

using AlgorithmFactory =
    std::function<std::unique_ptr<StreamAlgorithm>(const DistanceSpace& space)>;

struct GameRecord {
    std::string algorithm;
    bool solved_a = false;
    bool solved_b = false;
    Clustering induced_a;
    Clustering induced_b;
    bool solved_both() const { return solved_a && solved_b; }
};

// Feeds both rigged sequences to fresh algorithm instances and records
// whether each final induced clustering matches the planted one.
GameRecord run_lower_bound_game(const AlgorithmFactory& factory,
                                const LowerBoundInstance& instance);

// Unbounded-state reference learner: stores everything, then reads the unique
// nice k-clustering off the full point set. Exists to demonstrate the gap
// between batch access and bounded incremental state.
std::unique_ptr<StreamAlgorithm> make_batch_enumeration_algorithm(const DistanceSpace& space,
                                                                  int k);

struct OrderingTrace {
    std::vector<std::size_t> order;
    std::vector<std::vector<double>> final_centers;
    std::vector<int> induced_labels;
    bool recovered = false;
};

// Four points whose unique perfect 2-clustering is the strict global k-means
// optimum, yet online 2-means misses it under every ordering.
struct KMeansBadcase {
    PointSet points;
    Clustering perfect;
    // Cost of assignment {0} + mask vs complement, indexed by mask over items
    // {1,2,3}; entry `perfect_mask` is the planted bipartition.
    std::vector<double> bipartition_costs;
    std::size_t perfect_mask = 0;
    std::vector<OrderingTrace> traces;  // all 24 orderings
    int attempts = 0;
    std::uint64_t seed = 0;
};

// Seeded search: a skew-segments family first (two orthogonal point pairs at
// calibrated heights), then uniform points in the unit cube. Every returned
// witness has passed all three checks; nullopt means the budget ran out.
std::optional<KMeansBadcase> find_kmeans_badcase(std::uint64_t seed, int budget = 10000);

struct LineOrderingCertificate {
    Ordering ordering;
    Clustering induced;      // final induced clustering, not a refinement
    std::size_t witness_a = 0;  // same induced cluster ...
    std::size_t witness_b = 0;  // ... different planted clusters
    int attempts = 0;
};

// Ordering of a 1-D instance under which sequential ell-means fails to refine
// the planted clustering: front-load one cluster so it soaks up every center,
// then walk the rest inward; randomized fallback. Certificates replay
// deterministically.
std::optional<LineOrderingCertificate> adversarial_line_ordering(const PointSet& points,
                                                                 const Clustering& planted,
                                                                 std::size_t ell,
                                                                 std::uint64_t seed,
                                                                 int budget = 2000);

}  // namespace streamclust
