#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "streamclust/adversary.hpp"
#include "streamclust/clustering.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/stream.hpp"

using namespace streamclust;

namespace {

bool has_clause(const MVerification& v, int clause) {
    return std::any_of(v.violations.begin(), v.violations.end(),
                       [&](const ClauseViolation& c) { return c.clause == clause; });
}

DistanceSpace perturbed(const MConfigurationInstance& inst, std::size_t i, std::size_t j,
                        double value) {
    DistanceMatrix m = inst.space.matrix();
    m.set(i, j, value);
    return DistanceSpace{std::move(m), true};
}

double sse_of_split(const PointSet& points, const std::vector<int>& labels) {
    std::vector<double> mean[2] = {std::vector<double>(points.dim(), 0.0),
                                   std::vector<double>(points.dim(), 0.0)};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto g = static_cast<std::size_t>(labels[i]);
        for (std::size_t d = 0; d < points.dim(); ++d) mean[g][d] += points[i][d];
        ++count[g];
    }
    for (int g = 0; g < 2; ++g)
        for (auto& v : mean[g]) v /= static_cast<double>(count[g]);
    double cost = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        cost += PointSet::squared(points[i], mean[static_cast<std::size_t>(labels[i])]);
    return cost;
}

}  // namespace

TEST_CASE("matrix hub-and-spokes configuration") {
    MConfigurationInstance inst = build_matrix_m_configuration(3);
    REQUIRE(inst.space.size() == 7);
    CHECK(inst.config.m == 3);
    CHECK(inst.config.all_items() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
    CHECK(inst.attempts == 1);

    SUBCASE("planted distance profile") {
        for (int i = 1; i <= 3; ++i) {
            CHECK(inst.space.distance(inst.config.hub, inst.config.spokes[i - 1]) == 1.6);
            CHECK(inst.space.distance(inst.config.hub, inst.config.antipodes[i - 1]) == 1.6);
            CHECK(inst.space.distance(inst.config.spokes[i - 1], inst.config.antipodes[i - 1]) ==
                  1.7);
        }
        CHECK(inst.space.distance(inst.config.spokes[0], inst.config.spokes[1]) == 1.2);
        CHECK(inst.space.distance(inst.config.spokes[0], inst.config.antipodes[1]) == 1.2);
        for (std::size_t a = 0; a < 7; ++a)
            for (std::size_t b = a + 1; b < 7; ++b) {
                CHECK(inst.space.distance(a, b) >= 1.0);
                CHECK(inst.space.distance(a, b) <= 2.0);
            }
    }
    SUBCASE("verification accepts the build and the metric axioms hold") {
        CHECK(verify_m_configuration(inst.space, inst.config).ok());
        CHECK(validate_space(inst.space).empty());
    }
    SUBCASE("each perturbation trips its own clause") {
        auto& c = inst.config;
        MVerification v1 = verify_m_configuration(perturbed(inst, c.spokes[0], c.spokes[1], 2.3), c);
        CHECK(has_clause(v1, 1));
        CHECK(!v1.ok());
        CHECK(!v1.violations.front().describe().empty());

        MVerification v2 = verify_m_configuration(perturbed(inst, c.hub, c.spokes[0], 1.4), c);
        CHECK(v2.violations.size() == 1);
        CHECK(has_clause(v2, 2));

        MVerification v3 =
            verify_m_configuration(perturbed(inst, c.spokes[0], c.antipodes[1], 1.55), c);
        CHECK(v3.violations.size() == 1);
        CHECK(has_clause(v3, 3));
        CHECK(v3.violations.front().i == c.spokes[0]);
        CHECK(v3.violations.front().j == c.antipodes[1]);

        MVerification v4 =
            verify_m_configuration(perturbed(inst, c.spokes[0], c.antipodes[0], 1.5), c);
        CHECK(v4.violations.size() == 1);
        CHECK(has_clause(v4, 4));
    }
    SUBCASE("m must be positive") {
        CHECK_THROWS_AS(build_matrix_m_configuration(0), std::invalid_argument);
    }
}

TEST_CASE("euclidean hub-and-spokes realization") {
    SUBCASE("a single spoke pair fits in the plane") {
        MConfigurationInstance inst = build_euclidean_m_configuration(1, 2, 11);
        CHECK(inst.space.size() == 3);
        CHECK(verify_m_configuration(inst.space, inst.config).ok());
        CHECK(inst.space.distance(0, 1) == doctest::Approx(1.6).epsilon(1e-12));
        CHECK(inst.space.distance(1, 2) ==
              doctest::Approx(2.0 * 1.25 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("two spoke pairs cannot fit in the plane") {
        CHECK_THROWS_AS(build_euclidean_m_configuration(2, 2, 11, 50), std::runtime_error);
    }
    SUBCASE("many spokes fit in a high dimension") {
        MConfigurationInstance inst = build_euclidean_m_configuration(8, 50, 3);
        CHECK(inst.space.size() == 17);
        CHECK(inst.attempts >= 1);
        CHECK(verify_m_configuration(inst.space, inst.config).ok());
        CHECK(validate_space(inst.space).empty());
    }
}

TEST_CASE("subset niceness flips on antipode membership") {
    MConfigurationInstance inst = build_matrix_m_configuration(5);
    const DistanceSpace& s = inst.space;
    const MConfiguration& c = inst.config;

    CHECK(configuration_subset_nice2(s, c, 2, {1, 3}));
    CHECK(!configuration_subset_nice2(s, c, 2, {1, 2}));
    CHECK(configuration_subset_nice2(s, c, 1, {2, 3, 4, 5}));
    CHECK(!configuration_subset_nice2(s, c, 1, {1, 2, 3, 4, 5}));

    SUBCASE("iff across every subset of a 3-configuration") {
        MConfigurationInstance small = build_matrix_m_configuration(3);
        const std::vector<std::vector<int>> subsets{{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
        for (int j = 1; j <= 3; ++j) {
            for (const auto& subset : subsets) {
                bool j_outside =
                    std::find(subset.begin(), subset.end(), j) == subset.end();
                CHECK(configuration_subset_nice2(small.space, small.config, j, subset) ==
                      j_outside);
            }
        }
    }
    SUBCASE("when nice, the split isolates the hub") {
        std::vector<std::size_t> items{c.hub, c.antipodes[1], c.spokes[0], c.spokes[2],
                                       c.spokes[3]};
        DistanceSpace restricted = s.restrict_to(items);
        auto nice = enumerate_nice_clusterings(restricted, 2);
        REQUIRE(nice.size() == 1);
        CHECK(equivalent(nice[0], Clustering::from_labels({0, 1, 1, 1, 1}, 2)));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(configuration_subset_nice2(s, c, 0, {1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(configuration_subset_nice2(s, c, 6, {1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(configuration_subset_nice2(s, c, 1, {2}), std::invalid_argument);
        CHECK_THROWS_AS(configuration_subset_nice2(s, c, 1, {2, 7}), std::invalid_argument);
    }
}

TEST_CASE("two-configuration protocol instance") {
    LowerBoundInstance inst = build_lower_bound_instance(5, 3, MConfigMode::Matrix);
    CHECK(inst.combined.size() == 22);
    CHECK(inst.min_cross_distance == 4.5);
    CHECK(inst.batch_size == 3);

    SUBCASE("feeds follow the batch schedule") {
        for (const RiggedSequence* seq : {&inst.sequence_a, &inst.sequence_b}) {
            CHECK(seq->batch_sizes == std::vector<std::size_t>{2, 3, 3, 2});
            CHECK(seq->feed.size() == 10);
            CHECK(seq->space.size() == 10);
            CHECK(seq->feed[0] == inst.first.hub);
            CHECK(seq->feed[1] == inst.second.hub);
            CHECK(seq->feed[8] == inst.first.antipodes[0]);
            CHECK(seq->feed[9] == inst.second.antipodes[0]);
        }
        CHECK(inst.sequence_a.feed[2] == inst.first.spokes[0]);
        CHECK(inst.sequence_a.feed[5] == inst.second.spokes[1]);
        CHECK(inst.sequence_b.feed[2] == inst.first.spokes[1]);
        CHECK(inst.sequence_b.feed[5] == inst.second.spokes[0]);
    }
    SUBCASE("each planted clustering is the unique nice 3-clustering of its feed") {
        for (const RiggedSequence* seq : {&inst.sequence_a, &inst.sequence_b}) {
            auto nice = enumerate_nice_clusterings(seq->space, 3);
            REQUIRE(nice.size() == 1);
            CHECK(equivalent(nice[0], seq->planted));
        }
    }
    SUBCASE("polarity: one side stays whole, the other splits off its hub") {
        const Clustering& a = inst.sequence_a.planted;
        CHECK(a.same_cluster(0, 2));   // x hub with x spokes
        CHECK(a.same_cluster(0, 8));   // ... and with x'_1
        CHECK(!a.same_cluster(1, 5));  // z hub apart from z spokes
        CHECK(a.same_cluster(5, 9));   // z spokes with z'_1

        const Clustering& b = inst.sequence_b.planted;
        CHECK(!b.same_cluster(0, 2));
        CHECK(b.same_cluster(2, 8));
        CHECK(b.same_cluster(1, 5));
        CHECK(b.same_cluster(5, 9));
    }
    SUBCASE("unbounded batch learner wins the game, greedy exemplars lose it") {
        GameRecord batch = run_lower_bound_game(
            [](const DistanceSpace& s) { return make_batch_enumeration_algorithm(s, 3); }, inst);
        CHECK(batch.solved_a);
        CHECK(batch.solved_b);

        GameRecord greedy = run_lower_bound_game(
            [](const DistanceSpace& s) {
                return std::make_unique<SequentialNearestNeighbour>(s, 3);
            },
            inst);
        CHECK(greedy.algorithm == "seq-nn-3");
        CHECK(!greedy.solved_both());
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(build_lower_bound_instance(3, 3, MConfigMode::Matrix),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_lower_bound_instance(5, 1, MConfigMode::Matrix),
                        std::invalid_argument);
    }
}

TEST_CASE("euclidean protocol instance keeps the separation") {
    LowerBoundInstance inst = build_lower_bound_instance(4, 2, MConfigMode::Euclidean, 16, 5);
    CHECK(inst.combined.size() == 18);
    CHECK(inst.min_cross_distance >= 4.5);
    for (const RiggedSequence* seq : {&inst.sequence_a, &inst.sequence_b}) {
        auto nice = enumerate_nice_clusterings(seq->space, 3);
        REQUIRE(nice.size() == 1);
        CHECK(equivalent(nice[0], seq->planted));
    }
}

TEST_CASE("protocol bundle files round trip") {
    namespace fs = std::filesystem;
    LowerBoundInstance inst = build_lower_bound_instance(5, 3, MConfigMode::Matrix);
    fs::path dir = fs::temp_directory_path() / "streamclust_test_bundle";
    save_lower_bound_bundle(inst, dir);

    DistanceSpace space = load_space(dir / "space.txt", SpaceFormat::Matrix);
    REQUIRE(space.size() == 22);
    for (std::size_t i = 0; i < 22; ++i)
        for (std::size_t j = 0; j < 22; ++j)
            CHECK(space.matrix().at(i, j) == inst.combined.matrix().at(i, j));

    Clustering planted_a = load_clustering(dir / "planted-a.txt");
    CHECK(equivalent(planted_a, inst.sequence_a.planted));
    CHECK(fs::exists(dir / "index-map.txt"));
    CHECK(fs::exists(dir / "protocol.txt"));
    fs::remove_all(dir);
}

TEST_CASE("online 2-means witness survives independent re-verification") {
    std::optional<KMeansBadcase> found = find_kmeans_badcase(7);
    REQUIRE(found.has_value());
    const KMeansBadcase& bad = *found;
    REQUIRE(bad.points.size() == 4);
    DistanceSpace space{bad.points};

    SUBCASE("the planted split is the unique perfect 2-clustering") {
        CHECK(is_perfect(space, bad.perfect));
        auto all = enumerate_perfect_clusterings(space, 2);
        REQUIRE(all.size() == 1);
        CHECK(equivalent(all[0], bad.perfect));
    }
    SUBCASE("recorded costs match a from-scratch sweep and the optimum is strict") {
        REQUIRE(bad.bipartition_costs.size() == 7);
        REQUIRE(bad.perfect_mask < 7);
        for (std::size_t mask = 0; mask < 7; ++mask) {
            std::vector<int> labels(4, 1);
            labels[0] = 0;
            for (std::size_t bit = 0; bit < 3; ++bit)
                if (mask & (std::size_t{1} << bit)) labels[bit + 1] = 0;
            CHECK(bad.bipartition_costs[mask] ==
                  doctest::Approx(sse_of_split(bad.points, labels)).epsilon(1e-12));
            if (mask == bad.perfect_mask) {
                CHECK(equivalent(Clustering::from_labels(labels, 2), bad.perfect));
            } else {
                CHECK(bad.bipartition_costs[mask] > bad.bipartition_costs[bad.perfect_mask]);
            }
        }
    }
    SUBCASE("all 24 orderings replay to a miss") {
        REQUIRE(bad.traces.size() == 24);
        std::vector<std::vector<std::size_t>> seen;
        for (const OrderingTrace& trace : bad.traces) {
            CHECK(!trace.recovered);
            seen.push_back(trace.order);

            SequentialKMeans alg(space, 2);
            for (std::size_t item : trace.order) alg.observe(item);
            CHECK(alg.center_coords() == trace.final_centers);
            InducedClustering induced = induce_clustering(space, alg.centers());
            CHECK(induced.clustering.labels == trace.induced_labels);
            CHECK(!equivalent(induced.clustering, bad.perfect));
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("adversarial line ordering breaks refinement") {
    std::vector<std::vector<double>> coords;
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < 5; ++j) {
            coords.push_back({10.0 * c + j});
            labels.push_back(c);
        }
    PointSet points(coords);
    Clustering planted = Clustering::from_labels(labels, 3);

    std::optional<LineOrderingCertificate> cert =
        adversarial_line_ordering(points, planted, 5, 17);
    REQUIRE(cert.has_value());
    CHECK(cert->attempts >= 1);
    CHECK(!is_refinement(cert->induced, planted));
    CHECK(cert->induced.labels[cert->witness_a] == cert->induced.labels[cert->witness_b]);
    CHECK(planted.labels[cert->witness_a] != planted.labels[cert->witness_b]);

    SUBCASE("certificates replay deterministically") {
        DistanceSpace space{points};
        for (int round = 0; round < 2; ++round) {
            SequentialKMeans alg(space, 5);
            run_stream(alg, cert->ordering);
            Clustering induced = induce_clustering(space, alg.centers()).clustering;
            CHECK(induced.labels == cert->induced.labels);
        }
    }
    SUBCASE("argument validation") {
        PointSet flat({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
        CHECK_THROWS_AS(
            adversarial_line_ordering(flat, Clustering::from_labels({0, 1, 2}, 3), 1, 0),
            std::invalid_argument);
        CHECK_THROWS_AS(adversarial_line_ordering(points, Clustering::from_labels(
                                                      std::vector<int>(15, 0), 1),
                                                  5, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(adversarial_line_ordering(points, planted, 6, 0), std::invalid_argument);
    }
}
