#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamclust/metric_space.hpp"

namespace streamclust {

// A partition of item indices into k non-empty clusters.
struct Clustering {
    std::vector<int> labels;  // per-item cluster id in [0,k)
    int k = 0;

    std::size_t size() const { return labels.size(); }
    bool same_cluster(std::size_t a, std::size_t b) const { return labels[a] == labels[b]; }
    std::vector<std::vector<std::size_t>> clusters() const;

    // Validates the partition invariants: ids in range, every id used.
    static Clustering from_labels(std::vector<int> labels, int k);
    // Renumbers arbitrary ids into 0..k-1 by first appearance.
    static Clustering from_raw_labels(const std::vector<int>& labels);
};

// Same partition regardless of label names.
bool equivalent(const Clustering& a, const Clustering& b);

// Ordered list of exemplar items, or synthesized coordinates (e.g. the output
// of sequential k-means). Exactly one of the two representations is used.
struct CenterSet {
    std::vector<std::size_t> items;
    std::vector<std::vector<double>> coords;

    bool exemplar() const { return coords.empty(); }
    std::size_t count() const { return exemplar() ? items.size() : coords.size(); }

    static CenterSet of_items(std::vector<std::size_t> items);
    static CenterSet of_coords(std::vector<std::vector<double>> coords);
};

struct InducedClustering {
    Clustering clustering;
    // center position -> cluster id, or -1 if the center captured no items and
    // its cluster was dropped during renumbering.
    std::vector<int> center_cluster;
};

// Nearest-center assignment; exact distance ties go to the smallest center
// position. Empty induced clusters are dropped and labels renumbered.
InducedClustering induce_clustering(const DistanceSpace& space, const CenterSet& centers);

struct NicenessWitness {
    std::size_t x;      // the point whose neighborhood is violated
    std::size_t same;   // same-cluster point with d(x,same) >= d(x,other)
    std::size_t other;  // offending point outside x's cluster
};

struct NicenessResult {
    bool nice = false;
    std::optional<NicenessWitness> witness;
    explicit operator bool() const { return nice; }
};

// Every point strictly closer to all of its own cluster than to anything
// outside. O(n^2) scan; exact comparisons (generators own the margins).
NicenessResult is_nice(const DistanceSpace& space, const Clustering& c);

// Every intra-cluster distance strictly below every inter-cluster distance.
// A missing side (k=1, or all singletons) is vacuously true.
bool is_perfect(const DistanceSpace& space, const Clustering& c);

struct CoreAnnotation {
    std::vector<std::vector<std::size_t>> cores;  // per-cluster core item sets
    double beta = 0.0;                            // min_i |core_i| / n
};

// Core of cluster C_i: all z in C_i with d(x,z) < d(x,y) for every x in C_i
// and every y outside C_i. The predicate is pointwise in z, so this is the
// maximal such subset.
CoreAnnotation compute_cores(const DistanceSpace& space, const Clustering& c);

// True iff every cluster of `fine` lies inside a single cluster of `coarse`.
bool is_refinement(const Clustering& fine, const Clustering& coarse);

inline constexpr std::size_t kEnumerationLimit = 14;

// Brute-force oracles: all partitions into exactly k non-empty clusters that
// pass the checker, in canonical (restricted-growth) label order. DFS over
// restricted-growth strings, pruning any prefix that already violates the
// predicate. Guarded to n <= 14; throws if the cap would be exceeded.
std::vector<Clustering> enumerate_nice_clusterings(const DistanceSpace& space, int k,
                                                   std::size_t cap = 4096);
std::vector<Clustering> enumerate_perfect_clusterings(const DistanceSpace& space, int k,
                                                      std::size_t cap = 4096);

// Sum of squared L2 distances to the nearest center.
double kmeans_cost(const PointSet& points, const std::vector<std::vector<double>>& centers);

struct HullDistanceResult {
    double distance = 0.0;     // upper estimate sqrt(f(u)) at the final iterate
    double lower_bound = 0.0;  // certified via the final Frank-Wolfe dual gap
    int iterations = 0;
};

// Minimum distance between the convex hulls of two point subsets, by
// Frank-Wolfe with exact line search on the difference polytope.
HullDistanceResult hull_distance(const PointSet& points, std::span<const std::size_t> a,
                                 std::span<const std::size_t> b, double rel_tol = 1e-7);

double cluster_diameter(const DistanceSpace& space, std::span<const std::size_t> items);

// Sufficient certificate for convex-niceness: diam(C_i) < hull_distance(C_i, C_j)
// for all i != j. False means "not certified", not "violated" (the exact
// definition quantifies over all hull points).
bool is_convex_nice_sufficient(const PointSet& points, const Clustering& c);

// Clustering file format: one line with k, one line of comma-separated labels.
void save_clustering(const Clustering& c, const std::filesystem::path& path);
Clustering load_clustering(const std::filesystem::path& path);

}  // namespace streamclust
