#include "streamclust/linkage.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace streamclust {

std::size_t MergeTree::leaf_count() const {
    std::size_t count = 0;
    for (const auto& node : nodes) {
        if (node.leaf()) ++count;
    }
    return count;
}

namespace {

void dump_node(const MergeTree& tree, int id, std::ostringstream& out) {
    const MergeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.leaf()) {
        out << node.representative;
        return;
    }
    out << "(";
    dump_node(tree, node.left, out);
    out << " ";
    dump_node(tree, node.right, out);
    out << "):" << format_double(node.height);
}

void assign_depths(MergeTree& tree, int id, int depth) {
    MergeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.depth = depth;
    if (!node.leaf()) {
        assign_depths(tree, node.left, depth + 1);
        assign_depths(tree, node.right, depth + 1);
    }
}

}  // namespace

std::string MergeTree::dump() const {
    std::ostringstream out;
    if (root >= 0) dump_node(*this, root, out);
    return out.str();
}

MergeTree single_linkage_tree(const DistanceSpace& space, std::span<const std::size_t> items) {
    if (items.empty()) throw std::invalid_argument("single linkage over empty item set");
    const std::size_t m = items.size();

    MergeTree tree;
    tree.nodes.reserve(2 * m - 1);
    struct Component {
        int node;
        std::size_t min_item;
    };
    std::vector<Component> active;
    active.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        MergeNode leaf;
        leaf.representative = items[i];
        tree.nodes.push_back(leaf);
        active.push_back({static_cast<int>(i), items[i]});
    }

    // Cross-distance table between active components; merging takes the
    // pointwise minimum of the two merged rows (single linkage).
    std::vector<std::vector<double>> cross(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            cross[i][j] = cross[j][i] = space.distance(items[i], items[j]);
        }
    }

    while (active.size() > 1) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        auto key = [&](std::size_t a, std::size_t b) {
            return active[a].min_item <= active[b].min_item
                       ? std::pair{active[a].min_item, active[b].min_item}
                       : std::pair{active[b].min_item, active[a].min_item};
        };
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double d = cross[a][b];
                if (d < best || (d == best && key(a, b) < key(best_a, best_b))) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }

        // The component holding the smaller minimum item becomes the left child.
        std::size_t left = best_a, right = best_b;
        if (active[right].min_item < active[left].min_item) std::swap(left, right);

        MergeNode parent;
        parent.left = active[left].node;
        parent.right = active[right].node;
        parent.height = best;
        parent.representative = std::min(tree.nodes[static_cast<std::size_t>(parent.left)].representative,
                                         tree.nodes[static_cast<std::size_t>(parent.right)].representative);
        const int parent_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(parent);

        for (std::size_t c = 0; c < active.size(); ++c) {
            if (c == best_a || c == best_b) continue;
            cross[best_a][c] = cross[c][best_a] = std::min(cross[best_a][c], cross[best_b][c]);
        }
        active[best_a] = {parent_id, std::min(active[left].min_item, active[right].min_item)};
        // Move the last component into slot best_b to keep the table dense.
        const std::size_t last = active.size() - 1;
        if (best_b != last) {
            active[best_b] = active[last];
            for (std::size_t c = 0; c < active.size(); ++c) {
                cross[best_b][c] = cross[last][c];
                cross[c][best_b] = cross[c][last];
            }
            cross[best_b][best_b] = 0.0;
        }
        active.pop_back();
    }

    tree.root = active[0].node;
    assign_depths(tree, tree.root, 0);
    return tree;
}

std::vector<std::size_t> candidates(const DistanceSpace& space,
                                    std::span<const std::size_t> items, int k) {
    if (k < 1) throw std::invalid_argument("candidates requires k >= 1");
    const MergeTree tree = single_linkage_tree(space, items);
    std::vector<std::size_t> reps;
    for (const auto& node : tree.nodes) {
        if (node.depth < k) reps.push_back(node.representative);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    return reps;
}

}  // namespace streamclust
