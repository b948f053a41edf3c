#include "streamclust/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "streamclust/rng.hpp"

namespace streamclust {

std::vector<std::size_t> MConfiguration::all_items() const {
    std::vector<std::size_t> items{hub};
    items.insert(items.end(), spokes.begin(), spokes.end());
    items.insert(items.end(), antipodes.begin(), antipodes.end());
    return items;
}

std::string ClauseViolation::describe() const {
    std::ostringstream out;
    out << "clause " << clause << ": d(" << i << "," << j << ") = " << format_double(value);
    switch (clause) {
        case 1: out << " outside [1,2]"; break;
        case 2: out << " outside (3/2,2]"; break;
        case 3: out << " outside [1,3/2]"; break;
        case 4: out << " not above the hub distance"; break;
    }
    return out.str();
}

MVerification verify_m_configuration(const DistanceSpace& space, const MConfiguration& config) {
    MVerification result;
    const auto items = config.all_items();
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            const double d = space.distance(items[a], items[b]);
            if (d < 1.0 || d > 2.0) {
                result.violations.push_back({1, items[a], items[b], d});
            }
        }
    }
    for (int i = 1; i <= config.m; ++i) {
        for (std::size_t side = 0; side < 2; ++side) {
            const std::size_t other =
                side == 0 ? config.spokes[i - 1] : config.antipodes[i - 1];
            const double d = space.distance(config.hub, other);
            if (!(d > 1.5 && d <= 2.0)) {
                result.violations.push_back({2, config.hub, other, d});
            }
        }
    }
    auto check_clique = [&](std::size_t a, std::size_t b) {
        const double d = space.distance(a, b);
        if (!(d >= 1.0 && d <= 1.5)) result.violations.push_back({3, a, b, d});
    };
    for (int i = 1; i <= config.m; ++i) {
        for (int j = i + 1; j <= config.m; ++j) {
            check_clique(config.spokes[i - 1], config.spokes[j - 1]);
            check_clique(config.antipodes[i - 1], config.antipodes[j - 1]);
        }
        for (int j = 1; j <= config.m; ++j) {
            if (j != i) check_clique(config.spokes[i - 1], config.antipodes[j - 1]);
        }
    }
    for (int i = 1; i <= config.m; ++i) {
        const double pair = space.distance(config.spokes[i - 1], config.antipodes[i - 1]);
        const double hub = space.distance(config.hub, config.spokes[i - 1]);
        if (!(pair > hub)) {
            result.violations.push_back({4, config.spokes[i - 1], config.antipodes[i - 1], pair});
        }
    }
    return result;
}

namespace {

MConfiguration layout(int m, std::size_t offset) {
    MConfiguration config;
    config.m = m;
    config.hub = offset;
    for (int i = 1; i <= m; ++i) {
        config.spokes.push_back(offset + static_cast<std::size_t>(i));
        config.antipodes.push_back(offset + static_cast<std::size_t>(m + i));
    }
    return config;
}

constexpr double kHubDistance = 1.6;
constexpr double kCliqueDistance = 1.2;
constexpr double kAntipodeDistance = 1.7;

void fill_matrix_block(DistanceMatrix& matrix, const MConfiguration& config) {
    const auto items = config.all_items();
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            matrix.set(items[a], items[b], kCliqueDistance);
        }
    }
    for (int i = 1; i <= config.m; ++i) {
        matrix.set(config.hub, config.spokes[i - 1], kHubDistance);
        matrix.set(config.hub, config.antipodes[i - 1], kHubDistance);
        matrix.set(config.spokes[i - 1], config.antipodes[i - 1], kAntipodeDistance);
    }
}

}  // namespace

MConfigurationInstance build_matrix_m_configuration(int m) {
    if (m < 1) throw std::invalid_argument("m-configuration needs m >= 1");
    const std::size_t n = 2 * static_cast<std::size_t>(m) + 1;
    DistanceMatrix matrix(n);
    MConfiguration config = layout(m, 0);
    fill_matrix_block(matrix, config);
    DistanceSpace space{std::move(matrix), true};
    MConfigurationInstance instance{std::move(space), std::move(config), 1};
    if (!verify_m_configuration(instance.space, instance.config).ok()) {
        throw std::logic_error("matrix m-configuration failed its own verification");
    }
    return instance;
}

MConfigurationInstance build_euclidean_m_configuration(int m, std::size_t p, std::uint64_t seed,
                                                       int max_attempts) {
    if (m < 1) throw std::invalid_argument("m-configuration needs m >= 1");
    if (p < 2) throw std::invalid_argument("euclidean realization needs dimension >= 2");

    const double r = 1.25 / std::sqrt(2.0);
    const double h = std::sqrt(kHubDistance * kHubDistance - r * r);
    constexpr double kMaxDot = 0.3;  // keeps clique distances in [1.04, 1.43]

    Rng rng = Rng(seed).fork("m-config");
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        std::vector<std::vector<double>> dirs;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            auto u = rng.unit_vector(p - 1);
            for (const auto& v : dirs) {
                const double dot = std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
                if (std::abs(dot) > kMaxDot) {
                    ok = false;
                    break;
                }
            }
            if (ok) dirs.push_back(std::move(u));
        }
        if (!ok) continue;

        PointSet points;
        std::vector<double> hub(p, 0.0);
        hub[0] = h;
        points.add(hub);
        for (int sign : {+1, -1}) {
            for (const auto& u : dirs) {
                std::vector<double> point(p, 0.0);
                for (std::size_t d = 1; d < p; ++d) point[d] = sign * r * u[d - 1];
                points.add(std::move(point));
            }
        }
        DistanceSpace space{std::move(points)};
        MConfiguration config = layout(m, 0);
        if (!verify_m_configuration(space, config).ok()) continue;

        // Accept only with real slack against every clause boundary.
        constexpr double kMargin = 1e-6;
        const auto& ps = space.points();
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < ps.size(); ++a) {
            for (std::size_t b = a + 1; b < ps.size(); ++b) {
                const double d = space.distance(a, b);
                slack = std::min({slack, d - 1.0, 2.0 - d});
            }
        }
        for (int i = 1; i <= m; ++i) {
            slack = std::min(slack, space.distance(config.hub, config.spokes[i - 1]) - 1.5);
            slack = std::min(slack, space.distance(config.spokes[i - 1], config.antipodes[i - 1]) -
                                        space.distance(config.hub, config.spokes[i - 1]));
            for (int j = 1; j <= m; ++j) {
                if (j == i) continue;
                slack = std::min(slack,
                                 1.5 - space.distance(config.spokes[i - 1], config.spokes[j - 1]));
                slack = std::min(
                    slack, 1.5 - space.distance(config.spokes[i - 1], config.antipodes[j - 1]));
                slack = std::min(slack, 1.5 - space.distance(config.antipodes[i - 1],
                                                             config.antipodes[j - 1]));
            }
        }
        if (slack < kMargin) continue;
        return {std::move(space), std::move(config), attempt};
    }
    throw std::runtime_error("no euclidean m-configuration with m=" + std::to_string(m) +
                             " in dimension " + std::to_string(p) + " within " +
                             std::to_string(max_attempts) +
                             " attempts; m may exceed what this dimension supports");
}

bool configuration_subset_nice2(const DistanceSpace& space, const MConfiguration& config, int j,
                                const std::vector<int>& subset) {
    if (j < 1 || j > config.m) throw std::invalid_argument("spoke label out of range");
    if (subset.size() < 2) throw std::invalid_argument("subset needs at least two spokes");
    std::vector<std::size_t> items{config.hub, config.antipodes[j - 1]};
    for (int s : subset) {
        if (s < 1 || s > config.m) throw std::invalid_argument("subset label out of range");
        items.push_back(config.spokes[s - 1]);
    }
    const DistanceSpace restricted = space.restrict_to(items);
    return !enumerate_nice_clusterings(restricted, 2).empty();
}

namespace {

RiggedSequence make_sequence(const DistanceSpace& combined, const MConfiguration& x,
                             const MConfiguration& z, int b, bool spokes_together) {
    // Spoke subsets {1..b} and {2..b+1}; the dropped label 1 returns as the
    // final antipode x'_1 / z'_1. The side fed {1..b} contains its antipode's
    // partner and therefore cannot split nicely; the side fed {2..b+1} can.
    std::vector<std::size_t> feed{x.hub, z.hub};
    const int x_low = spokes_together ? 1 : 2;
    const int z_low = spokes_together ? 2 : 1;
    for (int i = 0; i < b; ++i) feed.push_back(x.spokes[x_low + i - 1]);
    for (int i = 0; i < b; ++i) feed.push_back(z.spokes[z_low + i - 1]);
    feed.push_back(x.antipodes[0]);
    feed.push_back(z.antipodes[0]);

    const std::size_t n = feed.size();
    std::vector<int> labels(n);
    const std::size_t bs = static_cast<std::size_t>(b);
    if (spokes_together) {
        // {all x points}, {z_o}, {z spokes + z'_1}
        labels[0] = 0;
        labels[1] = 1;
        for (std::size_t i = 0; i < bs; ++i) labels[2 + i] = 0;
        for (std::size_t i = 0; i < bs; ++i) labels[2 + bs + i] = 2;
        labels[n - 2] = 0;
        labels[n - 1] = 2;
    } else {
        // {x_o}, {x spokes + x'_1}, {all z points}
        labels[0] = 0;
        labels[1] = 2;
        for (std::size_t i = 0; i < bs; ++i) labels[2 + i] = 1;
        for (std::size_t i = 0; i < bs; ++i) labels[2 + bs + i] = 2;
        labels[n - 2] = 1;
        labels[n - 1] = 2;
    }

    DistanceSpace restricted = combined.restrict_to(feed);
    RiggedSequence seq{std::move(feed),
                       {2, bs, bs, 2},
                       std::move(restricted),
                       Clustering::from_labels(std::move(labels), 3),
                       spokes_together};
    const auto all = enumerate_nice_clusterings(seq.space, 3);
    if (all.size() != 1 || !equivalent(all[0], seq.planted)) {
        throw std::runtime_error("rigged sequence lost its unique nice 3-clustering");
    }
    return seq;
}

}  // namespace

LowerBoundInstance build_lower_bound_instance(int m, int b, MConfigMode mode, std::size_t p,
                                              std::uint64_t seed) {
    if (b < 2) throw std::invalid_argument("batch size must be at least 2");
    if (m <= b) {
        throw std::invalid_argument("m must exceed the batch size (got m=" + std::to_string(m) +
                                    ", b=" + std::to_string(b) + ")");
    }
    const std::size_t per = 2 * static_cast<std::size_t>(m) + 1;

    DistanceSpace combined{PointSet{}};
    MConfiguration first, second;
    if (mode == MConfigMode::Matrix) {
        DistanceMatrix matrix(2 * per);
        first = layout(m, 0);
        second = layout(m, per);
        fill_matrix_block(matrix, first);
        fill_matrix_block(matrix, second);
        for (std::size_t a = 0; a < per; ++a) {
            for (std::size_t z = per; z < 2 * per; ++z) {
                matrix.set(a, z, 4.5);
            }
        }
        combined = DistanceSpace{std::move(matrix), true};
    } else {
        auto left = build_euclidean_m_configuration(m, p, Rng(seed).fork("left").seed());
        auto right = build_euclidean_m_configuration(m, p, Rng(seed).fork("right").seed());
        double reach = 0.0;
        auto max_norm = [](const PointSet& ps) {
            double worst = 0.0;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                worst = std::max(worst, PointSet::euclidean(ps[i], std::vector<double>(ps.dim(), 0.0)));
            }
            return worst;
        };
        reach = max_norm(left.space.points()) + max_norm(right.space.points());
        const double shift = 4.5 + reach + 0.5;

        PointSet all;
        for (std::size_t i = 0; i < per; ++i) all.add(left.space.points()[i]);
        for (std::size_t i = 0; i < per; ++i) {
            auto point = right.space.points()[i];
            point[0] += shift;
            all.add(std::move(point));
        }
        first = layout(m, 0);
        second = layout(m, per);
        combined = DistanceSpace{std::move(all)};
    }

    double min_cross = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < per; ++a) {
        for (std::size_t z = per; z < 2 * per; ++z) {
            min_cross = std::min(min_cross, combined.distance(a, z));
        }
    }
    if (min_cross < 4.0) {
        throw std::logic_error("configurations ended up closer than the protocol allows");
    }

    RiggedSequence a = make_sequence(combined, first, second, b, true);
    RiggedSequence bb = make_sequence(combined, first, second, b, false);
    return {std::move(combined), std::move(first), std::move(second),
            min_cross,           b,                std::move(a),
            std::move(bb)};
}

void save_lower_bound_bundle(const LowerBoundInstance& instance,
                             const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_space(instance.combined, dir / "space.txt");

    std::ostringstream map;
    auto dump_config = [&](const char* prefix, const MConfiguration& config) {
        map << prefix << "_o " << config.hub << "\n";
        for (int i = 1; i <= config.m; ++i) {
            map << prefix << "_" << i << " " << config.spokes[i - 1] << "\n";
        }
        for (int i = 1; i <= config.m; ++i) {
            map << prefix << "'_" << i << " " << config.antipodes[i - 1] << "\n";
        }
    };
    dump_config("x", instance.first);
    dump_config("z", instance.second);
    write_file_atomic(dir / "index-map.txt", map.str());

    std::ostringstream protocol;
    auto dump_sequence = [&](const char* name, const RiggedSequence& seq) {
        protocol << "sequence " << name << "\n";
        std::size_t cursor = 0;
        for (std::size_t batch = 0; batch < seq.batch_sizes.size(); ++batch) {
            protocol << "batch " << batch + 1 << ":";
            for (std::size_t i = 0; i < seq.batch_sizes[batch]; ++i) {
                protocol << " " << seq.feed[cursor++];
            }
            protocol << "\n";
        }
    };
    dump_sequence("a", instance.sequence_a);
    dump_sequence("b", instance.sequence_b);
    write_file_atomic(dir / "protocol.txt", protocol.str());

    save_clustering(instance.sequence_a.planted, dir / "planted-a.txt");
    save_clustering(instance.sequence_b.planted, dir / "planted-b.txt");
}

GameRecord run_lower_bound_game(const AlgorithmFactory& factory,
                                const LowerBoundInstance& instance) {
    GameRecord record;
    auto play = [&](const RiggedSequence& seq, bool& solved, Clustering& induced) {
        auto algorithm = factory(seq.space);
        record.algorithm = algorithm->name();
        const RunRecord run = run_stream(*algorithm, Ordering::identity(seq.feed.size()));
        induced = induce_clustering(seq.space, run.final_centers).clustering;
        solved = equivalent(induced, seq.planted);
    };
    play(instance.sequence_a, record.solved_a, record.induced_a);
    play(instance.sequence_b, record.solved_b, record.induced_b);
    return record;
}

namespace {

class BatchEnumerationAlgorithm : public StreamAlgorithm {
public:
    BatchEnumerationAlgorithm(const DistanceSpace& space, int k) : space_(space), k_(k) {}

    void observe(std::size_t item) override { seen_.push_back(item); }

    CenterSet centers() const override {
        const DistanceSpace sub = space_.restrict_to(seen_);
        const auto nice = enumerate_nice_clusterings(sub, std::min<int>(k_, static_cast<int>(seen_.size())));
        if (nice.empty()) return CenterSet::of_items(seen_);
        // One exemplar per cluster induces the clustering it came from.
        std::vector<std::size_t> exemplars;
        for (const auto& members : nice.front().clusters()) {
            std::size_t best = seen_[members.front()];
            for (std::size_t pos : members) best = std::min(best, seen_[pos]);
            exemplars.push_back(best);
        }
        return CenterSet::of_items(std::move(exemplars));
    }

    std::size_t center_bound() const override { return static_cast<std::size_t>(k_); }
    std::size_t state_footprint() const override { return seen_.size(); }
    std::string name() const override { return "batch-enumeration-" + std::to_string(k_); }
    const DistanceSpace& space() const override { return space_; }

private:
    const DistanceSpace& space_;
    int k_;
    std::vector<std::size_t> seen_;
};

}  // namespace

std::unique_ptr<StreamAlgorithm> make_batch_enumeration_algorithm(const DistanceSpace& space,
                                                                  int k) {
    return std::make_unique<BatchEnumerationAlgorithm>(space, k);
}

namespace {

double partition_cost(const PointSet& points, const std::vector<int>& labels, int k) {
    std::vector<std::vector<double>> centroids(static_cast<std::size_t>(k),
                                               std::vector<double>(points.dim(), 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& c = centroids[static_cast<std::size_t>(labels[i])];
        for (std::size_t d = 0; d < points.dim(); ++d) c[d] += points[i][d];
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (int g = 0; g < k; ++g) {
        for (auto& v : centroids[static_cast<std::size_t>(g)]) {
            v /= static_cast<double>(counts[static_cast<std::size_t>(g)]);
        }
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        cost += PointSet::squared(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    }
    return cost;
}

}  // namespace

std::optional<KMeansBadcase> find_kmeans_badcase(std::uint64_t seed, int budget) {
    std::vector<std::vector<std::size_t>> orders;
    {
        std::vector<std::size_t> perm{0, 1, 2, 3};
        do {
            orders.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    for (int attempt = 0; attempt < budget; ++attempt) {
        Rng rng = Rng(seed).fork("badcase").fork(static_cast<std::uint64_t>(attempt));
        PointSet points;
        if (attempt < budget / 2) {
            // Two orthogonal segments at skewed heights: the pairing is
            // perfect and optimal, but any two initial centers leave one
            // segment endpoint to be absorbed across the gap.
            const double s = rng.uniform(0.9, 1.1);
            const double u = rng.uniform(0.9, 1.1);
            const double w = rng.uniform(1.5, 1.68);
            auto jitter = [&] { return rng.uniform(-0.03, 0.03); };
            points.add({-s + jitter(), jitter(), jitter()});
            points.add({s + jitter(), jitter(), jitter()});
            points.add({jitter(), -u + jitter(), w + jitter()});
            points.add({jitter(), u + jitter(), w + jitter()});
        } else {
            for (int i = 0; i < 4; ++i) {
                points.add({rng.uniform(), rng.uniform(), rng.uniform()});
            }
        }

        DistanceSpace space{points};
        const auto perfect_list = enumerate_perfect_clusterings(space, 2);
        if (perfect_list.size() != 1) continue;
        const Clustering& perfect = perfect_list.front();

        std::vector<double> costs(7, 0.0);
        std::size_t perfect_mask = 7;
        for (std::size_t mask = 0; mask < 7; ++mask) {
            std::vector<int> labels(4, 1);
            labels[0] = 0;
            for (std::size_t bit = 0; bit < 3; ++bit) {
                if (mask & (std::size_t{1} << bit)) labels[bit + 1] = 0;
            }
            costs[mask] = partition_cost(points, labels, 2);
            if (equivalent(Clustering::from_labels(labels, 2), perfect)) perfect_mask = mask;
        }
        bool strict_optimum = perfect_mask < 7;
        for (std::size_t mask = 0; mask < 7 && strict_optimum; ++mask) {
            if (mask != perfect_mask && costs[mask] <= costs[perfect_mask]) {
                strict_optimum = false;
            }
        }
        if (!strict_optimum) continue;

        std::vector<OrderingTrace> traces;
        bool any_recovered = false;
        for (const auto& order : orders) {
            SequentialKMeans alg(space, 2);
            for (std::size_t item : order) alg.observe(item);
            const auto induced = induce_clustering(space, alg.centers());
            OrderingTrace trace{order, alg.center_coords(), induced.clustering.labels,
                                equivalent(induced.clustering, perfect)};
            any_recovered |= trace.recovered;
            traces.push_back(std::move(trace));
            if (any_recovered) break;
        }
        if (any_recovered) continue;

        return KMeansBadcase{std::move(points), perfect,        std::move(costs), perfect_mask,
                             std::move(traces), attempt + 1, seed};
    }
    return std::nullopt;
}

std::optional<LineOrderingCertificate> adversarial_line_ordering(const PointSet& points,
                                                                 const Clustering& planted,
                                                                 std::size_t ell,
                                                                 std::uint64_t seed, int budget) {
    if (points.dim() != 1) throw std::invalid_argument("adversary works on 1-D data");
    if (planted.size() != points.size()) {
        throw std::invalid_argument("clustering does not match point count");
    }
    if (planted.k < 3) throw std::invalid_argument("needs at least 3 planted clusters");
    if (ell < 1) throw std::invalid_argument("needs at least one center");
    const auto groups = planted.clusters();
    for (const auto& members : groups) {
        if (ell > members.size()) {
            throw std::invalid_argument("center count exceeds the smallest cluster");
        }
    }

    DistanceSpace space{points};
    auto by_coord = [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; };

    auto attempt_order = [&](std::vector<std::size_t> order, const std::string& provenance,
                             int attempts) -> std::optional<LineOrderingCertificate> {
        SequentialKMeans alg(space, static_cast<int>(ell));
        const Ordering ordering = Ordering::of(std::move(order), provenance);
        run_stream(alg, ordering);
        const Clustering induced = induce_clustering(space, alg.centers()).clustering;
        if (is_refinement(induced, planted)) return std::nullopt;
        for (std::size_t a = 0; a < induced.size(); ++a) {
            for (std::size_t b = a + 1; b < induced.size(); ++b) {
                if (induced.same_cluster(a, b) && !planted.same_cluster(a, b)) {
                    return LineOrderingCertificate{ordering, induced, a, b, attempts};
                }
            }
        }
        return std::nullopt;  // unreachable: non-refinement implies a witness
    };

    int attempts = 0;
    // Front-load one cluster so it captures every center, then walk the rest
    // of the line so the dragged center absorbs whole foreign clusters.
    for (int front = 0; front < planted.k; ++front) {
        for (const bool ascending : {true, false}) {
            std::vector<std::size_t> lead = groups[static_cast<std::size_t>(front)];
            std::sort(lead.begin(), lead.end(), by_coord);
            std::vector<std::size_t> rest;
            for (int c = 0; c < planted.k; ++c) {
                if (c == front) continue;
                const auto& members = groups[static_cast<std::size_t>(c)];
                rest.insert(rest.end(), members.begin(), members.end());
            }
            std::sort(rest.begin(), rest.end(), by_coord);
            if (!ascending) std::reverse(rest.begin(), rest.end());
            lead.insert(lead.end(), rest.begin(), rest.end());
            ++attempts;
            auto found = attempt_order(std::move(lead),
                                       "adversarial:front=" + std::to_string(front) +
                                           (ascending ? ":asc" : ":desc"),
                                       attempts);
            if (found) return found;
            if (attempts >= budget) return std::nullopt;
        }
    }

    Rng rng = Rng(seed).fork("line-ordering");
    while (attempts < budget) {
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        ++attempts;
        auto found = attempt_order(std::move(order),
                                   "adversarial:random-seed=" + std::to_string(seed) +
                                       ":attempt=" + std::to_string(attempts),
                                   attempts);
        if (found) return found;
    }
    return std::nullopt;
}

}  // namespace streamclust
