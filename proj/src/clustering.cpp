#include "streamclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace streamclust {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<std::vector<std::size_t>> Clustering::clusters() const {
    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        groups[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    return groups;
}

Clustering Clustering::from_labels(std::vector<int> labels, int k) {
    if (k < 1) throw std::invalid_argument("cluster count must be positive");
    if (labels.empty()) throw std::invalid_argument("clustering over empty item set");
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    for (int label : labels) {
        if (label < 0 || label >= k) {
            throw std::invalid_argument("cluster id " + std::to_string(label) +
                                        " outside [0," + std::to_string(k) + ")");
        }
        used[static_cast<std::size_t>(label)] = true;
    }
    for (int c = 0; c < k; ++c) {
        if (!used[static_cast<std::size_t>(c)]) {
            throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
        }
    }
    return Clustering{std::move(labels), k};
}

Clustering Clustering::from_raw_labels(const std::vector<int>& labels) {
    std::vector<int> renumbered(labels.size());
    std::vector<std::pair<int, int>> seen;  // raw id -> new id, in first-appearance order
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int id = -1;
        for (const auto& [raw, fresh] : seen) {
            if (raw == labels[i]) {
                id = fresh;
                break;
            }
        }
        if (id < 0) {
            id = static_cast<int>(seen.size());
            seen.emplace_back(labels[i], id);
        }
        renumbered[i] = id;
    }
    return Clustering{std::move(renumbered), static_cast<int>(seen.size())};
}

bool equivalent(const Clustering& a, const Clustering& b) {
    if (a.size() != b.size() || a.k != b.k) return false;
    std::vector<int> a_to_b(static_cast<std::size_t>(a.k), -1);
    std::vector<int> b_to_a(static_cast<std::size_t>(b.k), -1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int la = a.labels[i], lb = b.labels[i];
        if (a_to_b[la] == -1) a_to_b[la] = lb;
        if (b_to_a[lb] == -1) b_to_a[lb] = la;
        if (a_to_b[la] != lb || b_to_a[lb] != la) return false;
    }
    return true;
}

CenterSet CenterSet::of_items(std::vector<std::size_t> items) {
    CenterSet set;
    set.items = std::move(items);
    return set;
}

CenterSet CenterSet::of_coords(std::vector<std::vector<double>> coords) {
    CenterSet set;
    set.coords = std::move(coords);
    return set;
}

InducedClustering induce_clustering(const DistanceSpace& space, const CenterSet& centers) {
    const std::size_t m = centers.count();
    if (m == 0) throw std::invalid_argument("empty center list");
    if (!centers.exemplar() && !space.euclidean()) {
        throw std::invalid_argument("coordinate centers need a point-backed space");
    }

    const std::size_t n = space.size();
    std::vector<int> nearest(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = kInf;
        int best_center = 0;
        for (std::size_t c = 0; c < m; ++c) {
            const double d = centers.exemplar()
                                 ? space.distance(i, centers.items[c])
                                 : PointSet::euclidean(space.points()[i], centers.coords[c]);
            if (d < best) {  // ties keep the smallest center position
                best = d;
                best_center = static_cast<int>(c);
            }
        }
        nearest[i] = best_center;
    }

    // Drop centers that captured nothing, renumbering the remaining clusters
    // in center order.
    std::vector<int> center_cluster(m, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (center_cluster[static_cast<std::size_t>(nearest[i])] == -1) {
            center_cluster[static_cast<std::size_t>(nearest[i])] = -2;  // mark occupied
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        if (center_cluster[c] == -2) center_cluster[c] = next++;
    }
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = center_cluster[static_cast<std::size_t>(nearest[i])];
    }
    return {Clustering::from_labels(std::move(labels), next), std::move(center_cluster)};
}

NicenessResult is_nice(const DistanceSpace& space, const Clustering& c) {
    const std::size_t n = space.size();
    if (c.size() != n) throw std::invalid_argument("clustering does not match space size");
    for (std::size_t x = 0; x < n; ++x) {
        double max_same = -kInf, min_other = kInf;
        std::size_t arg_same = x, arg_other = x;
        for (std::size_t y = 0; y < n; ++y) {
            if (y == x) continue;
            const double d = space.distance(x, y);
            if (c.same_cluster(x, y)) {
                if (d > max_same) {
                    max_same = d;
                    arg_same = y;
                }
            } else if (d < min_other) {
                min_other = d;
                arg_other = y;
            }
        }
        if (max_same >= min_other) {
            return {false, NicenessWitness{x, arg_same, arg_other}};
        }
    }
    return {true, std::nullopt};
}

bool is_perfect(const DistanceSpace& space, const Clustering& c) {
    const std::size_t n = space.size();
    if (c.size() != n) throw std::invalid_argument("clustering does not match space size");
    double max_intra = -kInf, min_inter = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = space.distance(i, j);
            if (c.same_cluster(i, j)) {
                max_intra = std::max(max_intra, d);
            } else {
                min_inter = std::min(min_inter, d);
            }
        }
    }
    return max_intra < min_inter;  // vacuous sides are +-inf
}

CoreAnnotation compute_cores(const DistanceSpace& space, const Clustering& c) {
    const std::size_t n = space.size();
    if (c.size() != n) throw std::invalid_argument("clustering does not match space size");

    // min_out[x]: closest point outside x's cluster (+inf when k=1).
    std::vector<double> min_out(n, kInf);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (y == x || c.same_cluster(x, y)) continue;
            min_out[x] = std::min(min_out[x], space.distance(x, y));
        }
    }

    CoreAnnotation result;
    result.cores.resize(static_cast<std::size_t>(c.k));
    const auto groups = c.clusters();
    std::size_t smallest_core = n;
    for (int i = 0; i < c.k; ++i) {
        const auto& members = groups[static_cast<std::size_t>(i)];
        auto& core = result.cores[static_cast<std::size_t>(i)];
        for (std::size_t z : members) {
            bool in_core = true;
            for (std::size_t x : members) {
                if (space.distance(x, z) >= min_out[x]) {
                    in_core = false;
                    break;
                }
            }
            if (in_core) core.push_back(z);
        }
        smallest_core = std::min(smallest_core, core.size());
    }
    result.beta = static_cast<double>(smallest_core) / static_cast<double>(n);
    return result;
}

bool is_refinement(const Clustering& fine, const Clustering& coarse) {
    if (fine.size() != coarse.size()) {
        throw std::invalid_argument("refinement check over mismatched item sets");
    }
    std::vector<int> containing(static_cast<std::size_t>(fine.k), -1);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        int& slot = containing[static_cast<std::size_t>(fine.labels[i])];
        if (slot == -1) {
            slot = coarse.labels[i];
        } else if (slot != coarse.labels[i]) {
            return false;
        }
    }
    return true;
}

namespace {

// DFS over restricted-growth strings. Derived classes supply the incremental
// feasibility check; any prefix violation persists under extension, so the
// whole subtree is pruned.
class PartitionEnumerator {
public:
    PartitionEnumerator(const DistanceSpace& space, int k, std::size_t cap)
        : space_(space), n_(space.size()), k_(k), cap_(cap) {
        if (k < 1) throw std::invalid_argument("cluster count must be positive");
        if (n_ > kEnumerationLimit) {
            throw std::invalid_argument("enumeration limited to " +
                                        std::to_string(kEnumerationLimit) + " items, got " +
                                        std::to_string(n_));
        }
        labels_.assign(n_, -1);
    }

    virtual ~PartitionEnumerator() = default;

    std::vector<Clustering> run() {
        if (static_cast<std::size_t>(k_) <= n_) descend(0, 0);
        return std::move(results_);
    }

protected:
    // Returns false if assigning `item` to `block` creates an unfixable
    // violation; on true, state was pushed and pop() must undo it.
    virtual bool push(std::size_t item, int block) = 0;
    virtual void pop(std::size_t item) = 0;

    const DistanceSpace& space_;
    const std::size_t n_;
    std::vector<int> labels_;

private:
    void descend(std::size_t item, int blocks_used) {
        if (item == n_) {
            if (blocks_used == k_) {
                if (results_.size() == cap_) {
                    throw std::runtime_error("enumeration cap of " + std::to_string(cap_) +
                                             " clusterings exceeded");
                }
                results_.push_back(Clustering::from_labels(labels_, k_));
            }
            return;
        }
        // Remaining items must still be able to open k blocks.
        if (blocks_used + static_cast<int>(n_ - item) < k_) return;
        const int max_block = std::min(blocks_used, k_ - 1);
        for (int block = 0; block <= max_block; ++block) {
            labels_[item] = block;
            if (push(item, block)) {
                descend(item + 1, std::max(blocks_used, block + 1));
                pop(item);
            }
            labels_[item] = -1;
        }
    }

    const int k_;
    const std::size_t cap_;
    std::vector<Clustering> results_;
};

class NiceEnumerator : public PartitionEnumerator {
public:
    using PartitionEnumerator::PartitionEnumerator;

protected:
    bool push(std::size_t item, int block) override {
        (void)block;
        Bounds mine{-kInf, kInf};
        auto& undo = undo_stack_.emplace_back();
        for (std::size_t x = 0; x < item; ++x) {
            const double d = space_.distance(item, x);
            auto& theirs = bounds_[x];
            const Bounds before = theirs;
            if (labels_[x] == labels_[item]) {
                mine.max_same = std::max(mine.max_same, d);
                theirs.max_same = std::max(theirs.max_same, d);
            } else {
                mine.min_other = std::min(mine.min_other, d);
                theirs.min_other = std::min(theirs.min_other, d);
            }
            if (before.max_same != theirs.max_same || before.min_other != theirs.min_other) {
                undo.emplace_back(x, before);
            }
        }
        bounds_.push_back(mine);
        if (mine.max_same >= mine.min_other) return rollback(item);
        for (const auto& [x, before] : undo) {
            if (bounds_[x].max_same >= bounds_[x].min_other) return rollback(item);
        }
        return true;
    }

    void pop(std::size_t item) override {
        (void)item;
        bounds_.pop_back();
        for (const auto& [x, before] : undo_stack_.back()) bounds_[x] = before;
        undo_stack_.pop_back();
    }

private:
    struct Bounds {
        double max_same;
        double min_other;
    };

    bool rollback(std::size_t item) {
        pop(item);
        return false;
    }

    std::vector<Bounds> bounds_;
    std::vector<std::vector<std::pair<std::size_t, Bounds>>> undo_stack_;
};

class PerfectEnumerator : public PartitionEnumerator {
public:
    PerfectEnumerator(const DistanceSpace& space, int k, std::size_t cap)
        : PartitionEnumerator(space, k, cap) {
        history_.push_back({-kInf, kInf});
    }

protected:
    bool push(std::size_t item, int block) override {
        (void)block;
        auto [max_intra, min_inter] = history_.back();
        for (std::size_t x = 0; x < item; ++x) {
            const double d = space_.distance(item, x);
            if (labels_[x] == labels_[item]) {
                max_intra = std::max(max_intra, d);
            } else {
                min_inter = std::min(min_inter, d);
            }
        }
        if (max_intra >= min_inter) return false;
        history_.push_back({max_intra, min_inter});
        return true;
    }

    void pop(std::size_t item) override {
        (void)item;
        history_.pop_back();
    }

private:
    std::vector<std::pair<double, double>> history_;
};

}  // namespace

std::vector<Clustering> enumerate_nice_clusterings(const DistanceSpace& space, int k,
                                                   std::size_t cap) {
    return NiceEnumerator(space, k, cap).run();
}

std::vector<Clustering> enumerate_perfect_clusterings(const DistanceSpace& space, int k,
                                                      std::size_t cap) {
    return PerfectEnumerator(space, k, cap).run();
}

double kmeans_cost(const PointSet& points, const std::vector<std::vector<double>>& centers) {
    if (centers.empty()) throw std::invalid_argument("empty center list");
    double cost = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = kInf;
        for (const auto& center : centers) {
            best = std::min(best, PointSet::squared(points[i], center));
        }
        cost += best;
    }
    return cost;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

HullDistanceResult hull_distance(const PointSet& points, std::span<const std::size_t> a,
                                 std::span<const std::size_t> b, double rel_tol) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hull distance of empty set");
    const std::size_t dim = points.dim();

    // Minimize ||u||^2 over the difference polytope conv(A) - conv(B), whose
    // vertices are point pairs; the linear oracle splits over the two hulls.
    // Away steps give linear convergence, so tight tolerances stay cheap.
    struct Vertex {
        std::size_t ia, ib;
        double weight;
    };
    std::vector<Vertex> active{{a[0], b[0], 1.0}};
    std::vector<double> u(dim), vertex(dim), direction(dim);
    auto vertex_coords = [&](std::size_t ia, std::size_t ib, std::vector<double>& out) {
        const auto& pa = points[ia];
        const auto& pb = points[ib];
        for (std::size_t d = 0; d < dim; ++d) out[d] = pa[d] - pb[d];
    };
    auto rebuild_u = [&] {
        std::fill(u.begin(), u.end(), 0.0);
        for (const auto& v : active) {
            vertex_coords(v.ia, v.ib, vertex);
            for (std::size_t d = 0; d < dim; ++d) u[d] += v.weight * vertex[d];
        }
    };
    rebuild_u();

    constexpr int kMaxIterations = 50000;
    int iter = 0;
    double f = dot(u, u);
    double gap = 0.0;
    for (; iter < kMaxIterations; ++iter) {
        // Linear minimization over the difference polytope.
        std::size_t best_a = a[0], best_b = b[0];
        double lo = kInf, hi = -kInf;
        for (std::size_t ia : a) {
            const double s = dot(u, points[ia]);
            if (s < lo) {
                lo = s;
                best_a = ia;
            }
        }
        for (std::size_t ib : b) {
            const double s = dot(u, points[ib]);
            if (s > hi) {
                hi = s;
                best_b = ib;
            }
        }
        vertex_coords(best_a, best_b, vertex);

        f = dot(u, u);
        gap = 2.0 * (f - dot(u, vertex));
        if (gap < 0.0) gap = 0.0;
        const double upper = std::sqrt(f);
        const double lower = std::sqrt(std::max(f - gap, 0.0));
        if (upper - lower <= rel_tol * upper + 1e-12) break;

        // Away vertex: active direction most aligned with the gradient.
        std::size_t away = 0;
        double away_score = -kInf;
        for (std::size_t s = 0; s < active.size(); ++s) {
            vertex_coords(active[s].ia, active[s].ib, direction);
            const double score = dot(u, direction);
            if (score > away_score) {
                away_score = score;
                away = s;
            }
        }

        const double fw_gain = f - dot(u, vertex);        // <grad/2, u - v_fw>
        const double away_gain = away_score - f;          // <grad/2, v_away - u>
        if (fw_gain >= away_gain || active.size() == 1) {
            for (std::size_t d = 0; d < dim; ++d) direction[d] = vertex[d] - u[d];
            const double denom = dot(direction, direction);
            if (denom == 0.0) break;
            double step = -dot(u, direction) / denom;
            step = std::clamp(step, 0.0, 1.0);
            for (auto& v : active) v.weight *= 1.0 - step;
            bool merged = false;
            for (auto& v : active) {
                if (v.ia == best_a && v.ib == best_b) {
                    v.weight += step;
                    merged = true;
                    break;
                }
            }
            if (!merged) active.push_back({best_a, best_b, step});
        } else {
            vertex_coords(active[away].ia, active[away].ib, vertex);
            for (std::size_t d = 0; d < dim; ++d) direction[d] = u[d] - vertex[d];
            const double denom = dot(direction, direction);
            if (denom == 0.0) break;
            const double w = active[away].weight;
            if (w >= 1.0) break;
            double step = -dot(u, direction) / denom;
            step = std::clamp(step, 0.0, w / (1.0 - w));
            for (auto& v : active) v.weight *= 1.0 + step;
            active[away].weight -= step;
        }
        std::erase_if(active, [](const Vertex& v) { return v.weight <= 1e-15; });
        rebuild_u();
    }

    HullDistanceResult result;
    result.iterations = iter;
    result.distance = std::sqrt(f);
    result.lower_bound = std::sqrt(std::max(f - gap, 0.0));
    if (result.distance < 1e-9) {  // overlap, up to solver resolution
        result.distance = 0.0;
        result.lower_bound = 0.0;
    }
    return result;
}

double cluster_diameter(const DistanceSpace& space, std::span<const std::size_t> items) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            diameter = std::max(diameter, space.distance(items[i], items[j]));
        }
    }
    return diameter;
}

bool is_convex_nice_sufficient(const PointSet& points, const Clustering& c) {
    if (c.size() != points.size()) {
        throw std::invalid_argument("clustering does not match point count");
    }
    DistanceSpace space{points};
    const auto groups = c.clusters();
    std::vector<double> diameters(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        diameters[i] = cluster_diameter(space, groups[i]);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const auto hd = hull_distance(points, groups[i], groups[j]);
            // Certify against the guaranteed lower bound, not the estimate.
            if (std::max(diameters[i], diameters[j]) >= hd.lower_bound) return false;
        }
    }
    return true;
}

void save_clustering(const Clustering& c, const std::filesystem::path& path) {
    std::ostringstream out;
    out << c.k << "\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out << ",";
        out << c.labels[i];
    }
    out << "\n";
    write_file_atomic(path, out.str());
}

Clustering load_clustering(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    const int k = static_cast<int>(parse_double(line, 1));
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": missing label line");
    }
    std::vector<int> labels;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        const std::string field =
            line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        labels.push_back(static_cast<int>(parse_double(field, 2)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return Clustering::from_labels(std::move(labels), k);
}

}  // namespace streamclust
