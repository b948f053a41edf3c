#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "streamclust/metric_space.hpp"

namespace streamclust {

// Binary merge tree produced by single linkage. Leaves carry the input items;
// each internal node records the merge height and inherits the representative
// of the child whose representative has the smaller item index (which makes
// every node's representative the smallest item in its subtree).
struct MergeNode {
    int left = -1;   // node ids; -1 on leaves
    int right = -1;
    double height = 0.0;
    std::size_t representative = 0;
    int depth = 0;  // tree-edge distance from the root

    bool leaf() const { return left < 0; }
};

struct MergeTree {
    std::vector<MergeNode> nodes;  // leaves first, then merges in creation order
    int root = -1;

    std::size_t leaf_count() const;
    // Nested parenthesized form with heights, e.g. "((1 2):1 (4 5):1):2".
    std::string dump() const;
};

// Agglomerative single linkage over the given items: repeatedly merge the two
// components at minimum cross distance. Ties pick the pair minimizing
// (smallest item of one side, smallest item of the other); the side with the
// smaller minimum item becomes the left child.
MergeTree single_linkage_tree(const DistanceSpace& space, std::span<const std::size_t> items);

// Distinct representatives of all tree nodes at depth < k, ascending. At most
// 2^{k-1} items; if the input has a nice l-clustering with l <= k, the output
// meets every one of its clusters.
std::vector<std::size_t> candidates(const DistanceSpace& space,
                                    std::span<const std::size_t> items, int k);

}  // namespace streamclust
