#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <vector>

#include "streamclust/clustering.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/rng.hpp"

using namespace streamclust;

namespace {

DistanceSpace line_1245() { return DistanceSpace{PointSet({{1.0}, {2.0}, {4.0}, {5.0}})}; }

Clustering make(std::vector<int> labels, int k) { return Clustering::from_labels(labels, k); }

// Test-local oracles, written independently of the library implementations.

bool oracle_nice(const DistanceSpace& s, const Clustering& c) {
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t y = 0; y < s.size(); ++y)
            for (std::size_t z = 0; z < s.size(); ++z) {
                if (y == x || z == x) continue;
                if (c.labels[y] == c.labels[x] && c.labels[z] != c.labels[x] &&
                    !(s.distance(x, y) < s.distance(x, z)))
                    return false;
            }
    return true;
}

bool oracle_perfect(const DistanceSpace& s, const Clustering& c) {
    double max_intra = -std::numeric_limits<double>::infinity();
    double min_inter = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (c.labels[i] == c.labels[j])
                max_intra = std::max(max_intra, s.distance(i, j));
            else
                min_inter = std::min(min_inter, s.distance(i, j));
        }
    return max_intra < min_inter;
}

std::vector<std::vector<std::size_t>> oracle_cores(const DistanceSpace& s, const Clustering& c) {
    std::vector<std::vector<std::size_t>> cores(static_cast<std::size_t>(c.k));
    for (std::size_t z = 0; z < s.size(); ++z) {
        bool in_core = true;
        for (std::size_t x = 0; x < s.size() && in_core; ++x) {
            if (c.labels[x] != c.labels[z]) continue;
            for (std::size_t y = 0; y < s.size(); ++y)
                if (c.labels[y] != c.labels[x] && !(s.distance(x, z) < s.distance(x, y))) {
                    in_core = false;
                    break;
                }
        }
        if (in_core) cores[static_cast<std::size_t>(c.labels[z])].push_back(z);
    }
    return cores;
}

void all_partitions(std::size_t n, int k, std::vector<int>& labels, int used,
                    const std::function<void(const std::vector<int>&)>& emit) {
    if (labels.size() == n) {
        if (used == k) emit(labels);
        return;
    }
    if (used + static_cast<int>(n - labels.size()) < k) return;
    int top = std::min(used, k - 1);
    for (int b = 0; b <= top; ++b) {
        labels.push_back(b);
        all_partitions(n, k, labels, b == used ? used + 1 : used, emit);
        labels.pop_back();
    }
}

std::vector<Clustering> oracle_enumerate(const DistanceSpace& s, int k,
                                         bool (*pred)(const DistanceSpace&, const Clustering&)) {
    std::vector<Clustering> found;
    std::vector<int> labels;
    all_partitions(s.size(), k, labels, 0, [&](const std::vector<int>& l) {
        Clustering c{l, k};
        if (pred(s, c)) found.push_back(c);
    });
    return found;
}

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    double vx = bx - ax, vy = by - ay;
    double t = ((px - ax) * vx + (py - ay) * vy) / (vx * vx + vy * vy);
    t = std::clamp(t, 0.0, 1.0);
    double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

double segment_segment_distance(double ax, double ay, double bx, double by, double cx, double cy,
                                double dx, double dy) {
    // 2-D segments either intersect or realize the minimum at an endpoint.
    auto orient = [](double ox, double oy, double px, double py, double qx, double qy) {
        return (px - ox) * (qy - oy) - (py - oy) * (qx - ox);
    };
    double o1 = orient(ax, ay, bx, by, cx, cy), o2 = orient(ax, ay, bx, by, dx, dy);
    double o3 = orient(cx, cy, dx, dy, ax, ay), o4 = orient(cx, cy, dx, dy, bx, by);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;
    return std::min({point_segment_distance(ax, ay, cx, cy, dx, dy),
                     point_segment_distance(bx, by, cx, cy, dx, dy),
                     point_segment_distance(cx, cy, ax, ay, bx, by),
                     point_segment_distance(dx, dy, ax, ay, bx, by)});
}

}  // namespace

TEST_CASE("clustering construction validates the partition") {
    CHECK_THROWS_AS(make({0, 0, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(make({0, 1, 3}, 3), std::invalid_argument);
    CHECK_THROWS_AS(make({}, 1), std::invalid_argument);
    Clustering c = Clustering::from_raw_labels({7, 7, 2, 9});
    CHECK(c.k == 3);
    CHECK(c.labels == std::vector<int>{0, 0, 1, 2});
}

TEST_CASE("equivalence ignores label names") {
    CHECK(equivalent(make({0, 0, 1}, 2), make({1, 1, 0}, 2)));
    CHECK(!equivalent(make({0, 1, 0}, 2), make({0, 0, 1}, 2)));
    CHECK(!equivalent(make({0, 0, 1}, 2), make({0, 0, 0}, 1)));
}

TEST_CASE("induced clustering assigns to the nearest center") {
    DistanceSpace space = line_1245();

    SUBCASE("two exemplar centers split the line") {
        InducedClustering r = induce_clustering(space, CenterSet::of_items({0, 2}));
        CHECK(equivalent(r.clustering, make({0, 0, 1, 1}, 2)));
        CHECK(r.center_cluster == std::vector<int>{0, 1});
    }
    SUBCASE("exact ties go to the earlier center position") {
        DistanceSpace odd{PointSet({{1.0}, {3.0}, {5.0}})};
        InducedClustering r = induce_clustering(odd, CenterSet::of_items({0, 2}));
        CHECK(r.clustering.labels == std::vector<int>{0, 0, 1});
        InducedClustering swapped = induce_clustering(odd, CenterSet::of_items({2, 0}));
        CHECK(swapped.clustering.labels == std::vector<int>{1, 0, 0});
    }
    SUBCASE("a single center captures everything") {
        InducedClustering r = induce_clustering(space, CenterSet::of_items({3}));
        CHECK(r.clustering.k == 1);
        CHECK(r.clustering.labels == std::vector<int>{0, 0, 0, 0});
    }
    SUBCASE("centers that capture nothing are dropped and renumbered") {
        InducedClustering r =
            induce_clustering(space, CenterSet::of_coords({{1.0}, {1.0}, {4.0}}));
        CHECK(r.clustering.k == 2);
        CHECK(equivalent(r.clustering, make({0, 0, 1, 1}, 2)));
        CHECK(r.center_cluster == std::vector<int>{0, -1, 1});
    }
    SUBCASE("empty center list is an error") {
        CHECK_THROWS_AS(induce_clustering(space, CenterSet::of_items({})), std::invalid_argument);
    }
}

TEST_CASE("appending a duplicate center never changes the partition") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 4 + rng.index(8);
        std::vector<std::vector<double>> coords(n);
        for (auto& c : coords) c = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
        DistanceSpace space{PointSet(coords)};

        std::size_t m = 1 + rng.index(3);
        std::vector<std::vector<double>> centers;
        for (std::size_t i = 0; i < m; ++i)
            centers.push_back(coords[rng.index(n)]);
        InducedClustering base = induce_clustering(space, CenterSet::of_coords(centers));

        centers.push_back(centers[rng.index(m)]);
        InducedClustering extended = induce_clustering(space, CenterSet::of_coords(centers));
        CHECK(equivalent(base.clustering, extended.clustering));
    }
}

TEST_CASE("niceness matches the named three-clusterings of the line") {
    DistanceSpace space = line_1245();
    CHECK(is_nice(space, make({0, 1, 2, 2}, 3)).nice);
    CHECK(is_nice(space, make({0, 0, 1, 2}, 3)).nice);

    NicenessResult bad = is_nice(space, make({0, 1, 0, 1}, 2));
    CHECK(!bad.nice);
    REQUIRE(bad.witness.has_value());
    const NicenessWitness& w = *bad.witness;
    CHECK(space.distance(w.x, w.same) >= space.distance(w.x, w.other));

    CHECK(is_nice(space, make({0, 0, 0, 0}, 1)).nice);
    CHECK(is_nice(space, make({0, 1, 2, 3}, 4)).nice);
}

TEST_CASE("duplicate points in different clusters break niceness") {
    DistanceSpace space{PointSet({{0.0}, {0.0}, {1.0}})};
    CHECK(!is_nice(space, make({0, 1, 0}, 2)).nice);
    CHECK(oracle_nice(space, make({0, 1, 0}, 2)) == false);
}

TEST_CASE("perfectness compares global extremes") {
    DistanceSpace space = line_1245();
    CHECK(is_perfect(space, make({0, 0, 1, 1}, 2)));
    CHECK(!is_perfect(space, make({0, 1, 2, 2}, 3)));
    CHECK(is_perfect(space, make({0, 1, 2, 3}, 4)));
    CHECK(is_perfect(space, make({0, 0, 0, 0}, 1)));
}

TEST_CASE("niceness and perfectness agree with brute-force oracles") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 3 + rng.index(5);
        std::vector<std::vector<double>> coords(n);
        for (auto& c : coords) c = {rng.uniform(0.0, 4.0)};
        DistanceSpace space{PointSet(coords)};
        int k = 2 + static_cast<int>(rng.index(2));
        if (static_cast<std::size_t>(k) > n) k = static_cast<int>(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.index(k));
        for (int b = 0; b < k; ++b) labels[rng.index(n)] = b;
        bool valid = true;
        for (int b = 0; b < k; ++b)
            valid = valid && std::count(labels.begin(), labels.end(), b) > 0;
        if (!valid) continue;
        Clustering c{labels, k};
        CHECK(is_nice(space, c).nice == oracle_nice(space, c));
        CHECK(is_perfect(space, c) == oracle_perfect(space, c));
        if (is_perfect(space, c)) CHECK(is_nice(space, c).nice);
    }
}

TEST_CASE("cores") {
    SUBCASE("core of a nice clustering is the whole cluster") {
        DistanceSpace space = line_1245();
        CoreAnnotation cores = compute_cores(space, make({0, 0, 1, 1}, 2));
        CHECK(cores.cores[0] == std::vector<std::size_t>{0, 1});
        CHECK(cores.cores[1] == std::vector<std::size_t>{2, 3});
        CHECK(cores.beta == 0.5);
    }
    SUBCASE("k=1 makes the whole space the core") {
        DistanceSpace space = line_1245();
        CoreAnnotation cores = compute_cores(space, make({0, 0, 0, 0}, 1));
        CHECK(cores.cores[0].size() == 4);
        CHECK(cores.beta == 1.0);
    }
    SUBCASE("a stretched point shrinks its cluster's core") {
        DistanceSpace space{PointSet({{0.0}, {1.0}, {3.5}, {6.0}, {7.0}})};
        Clustering c = make({0, 0, 0, 1, 1}, 2);
        REQUIRE(!is_nice(space, c).nice);
        CoreAnnotation cores = compute_cores(space, c);
        CHECK(cores.cores[0] == std::vector<std::size_t>{2});
        CHECK(cores.cores[1] == std::vector<std::size_t>{3, 4});
        CHECK(cores.beta == doctest::Approx(0.2));
    }
    SUBCASE("agrees with the pointwise oracle on random instances") {
        Rng rng(13);
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t n = 4 + rng.index(6);
            std::vector<std::vector<double>> coords(n);
            for (auto& c : coords) c = {rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0)};
            DistanceSpace space{PointSet(coords)};
            std::vector<int> labels(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.index(2));
            labels[0] = 0;
            labels[1] = 1;
            Clustering c{labels, 2};
            CHECK(compute_cores(space, c).cores == oracle_cores(space, c));
        }
    }
}

TEST_CASE("refinement") {
    Clustering fine = make({0, 1, 2, 2}, 3);
    Clustering coarse = make({0, 0, 1, 1}, 2);
    CHECK(is_refinement(fine, coarse));
    CHECK(is_refinement(fine, fine));
    CHECK(is_refinement(make({0, 1, 2, 3}, 4), coarse));
    CHECK(!is_refinement(make({0, 1, 0}, 2), make({0, 0, 1}, 2)));

    SUBCASE("straddling cluster from the module contract") {
        // items 1,4 grouped while the coarse clustering separates them
        Clustering straddle = make({0, 1, 0, 1}, 2);
        CHECK(!is_refinement(straddle, make({0, 0, 1, 1}, 2)));
    }
    SUBCASE("transitive over random chains") {
        Rng rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t n = 6 + rng.index(6);
            std::vector<int> coarse_labels(n), mid_labels(n), fine_labels(n);
            for (std::size_t i = 0; i < n; ++i) coarse_labels[i] = static_cast<int>(rng.index(2));
            coarse_labels[0] = 0;
            coarse_labels[1] = 1;
            // split each coarse cluster in two, then each mid cluster in two
            for (std::size_t i = 0; i < n; ++i)
                mid_labels[i] = coarse_labels[i] * 2 + static_cast<int>(rng.below(2));
            for (std::size_t i = 0; i < n; ++i)
                fine_labels[i] = mid_labels[i] * 2 + static_cast<int>(rng.below(2));
            Clustering a = Clustering::from_raw_labels(fine_labels);
            Clustering b = Clustering::from_raw_labels(mid_labels);
            Clustering c = Clustering::from_raw_labels(coarse_labels);
            CHECK(is_refinement(a, b));
            CHECK(is_refinement(b, c));
            CHECK(is_refinement(a, c));
        }
    }
    SUBCASE("item count mismatch is an error") {
        CHECK_THROWS_AS(is_refinement(make({0, 1}, 2), make({0, 1, 1}, 2)),
                        std::invalid_argument);
    }
}

TEST_CASE("enumeration oracles") {
    DistanceSpace space = line_1245();

    SUBCASE("the line has exactly the two named nice 3-clusterings") {
        auto found = enumerate_nice_clusterings(space, 3);
        REQUIRE(found.size() == 2);
        bool saw_a = false, saw_b = false;
        for (const Clustering& c : found) {
            if (equivalent(c, make({0, 1, 2, 2}, 3))) saw_a = true;
            if (equivalent(c, make({0, 0, 1, 2}, 3))) saw_b = true;
        }
        CHECK(saw_a);
        CHECK(saw_b);
    }
    SUBCASE("k=1 and k=n are singletons of the enumeration") {
        CHECK(enumerate_nice_clusterings(space, 1).size() == 1);
        CHECK(enumerate_nice_clusterings(space, 4).size() == 1);
        CHECK(enumerate_perfect_clusterings(space, 1).size() == 1);
        CHECK(enumerate_perfect_clusterings(space, 4).size() == 1);
    }
    SUBCASE("the unique perfect bipartition matches the 7-case oracle") {
        auto found = enumerate_perfect_clusterings(space, 2);
        auto expect = oracle_enumerate(space, 2, [](const DistanceSpace& s, const Clustering& c) {
            return oracle_perfect(s, c);
        });
        REQUIRE(found.size() == 1);
        REQUIRE(expect.size() == 1);
        CHECK(equivalent(found[0], expect[0]));
        CHECK(equivalent(found[0], make({0, 0, 1, 1}, 2)));
    }
    SUBCASE("pruned enumeration matches the unfiltered oracle on random spaces") {
        Rng rng(55);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t n = 3 + rng.index(5);
            std::vector<std::vector<double>> coords(n);
            for (auto& c : coords) c = {rng.uniform(0.0, 5.0)};
            DistanceSpace s{PointSet(coords)};
            for (int k = 1; k <= static_cast<int>(n); ++k) {
                auto nice_found = enumerate_nice_clusterings(s, k);
                auto nice_expect = oracle_enumerate(
                    s, k,
                    [](const DistanceSpace& sp, const Clustering& c) { return oracle_nice(sp, c); });
                REQUIRE(nice_found.size() == nice_expect.size());
                for (std::size_t i = 0; i < nice_found.size(); ++i) {
                    bool matched = false;
                    for (const Clustering& e : nice_expect)
                        if (equivalent(nice_found[i], e)) matched = true;
                    CHECK(matched);
                }
                auto perfect_found = enumerate_perfect_clusterings(s, k);
                CHECK(perfect_found.size() <= 1);
            }
        }
    }
    SUBCASE("guards") {
        std::vector<std::vector<double>> big(15, std::vector<double>{0.0});
        for (std::size_t i = 0; i < big.size(); ++i) big[i][0] = static_cast<double>(i);
        DistanceSpace s{PointSet(big)};
        CHECK_THROWS_AS(enumerate_nice_clusterings(s, 3), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_nice_clusterings(space, 3, 1), std::runtime_error);
    }
}

TEST_CASE("k-means cost") {
    PointSet points({{0.0}, {2.0}});
    CHECK(kmeans_cost(points, {{0.0}, {2.0}}) == 0.0);
    CHECK(kmeans_cost(points, {{1.0}}) == 2.0);

    SUBCASE("optimal bipartition cost equals the centroid SSE oracle") {
        Rng rng(21);
        std::vector<std::vector<double>> coords(6);
        for (auto& c : coords) c = {rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
        PointSet ps(coords);

        double best_by_cost = std::numeric_limits<double>::infinity();
        double best_by_sse = std::numeric_limits<double>::infinity();
        for (unsigned mask = 1; mask < 31; ++mask) {  // item 5 fixed to side B
            std::vector<std::vector<double>> sides[2];
            for (std::size_t i = 0; i < 6; ++i)
                sides[i < 5 && (mask >> i & 1) ? 0 : 1].push_back(coords[i]);
            if (sides[0].empty() || sides[1].empty()) continue;
            std::vector<std::vector<double>> centroids;
            double sse = 0.0;
            for (auto& side : sides) {
                std::vector<double> mean(2, 0.0);
                for (auto& p : side)
                    for (int d = 0; d < 2; ++d) mean[d] += p[d];
                for (int d = 0; d < 2; ++d) mean[d] /= static_cast<double>(side.size());
                for (auto& p : side)
                    for (int d = 0; d < 2; ++d) sse += (p[d] - mean[d]) * (p[d] - mean[d]);
                centroids.push_back(mean);
            }
            best_by_sse = std::min(best_by_sse, sse);
            best_by_cost = std::min(best_by_cost, kmeans_cost(ps, centroids));
        }
        CHECK(best_by_cost == doctest::Approx(best_by_sse).epsilon(1e-12));
    }
}

TEST_CASE("hull distances") {
    SUBCASE("disjoint intervals on the line") {
        PointSet points({{0.0}, {1.0}, {3.0}, {5.0}});
        HullDistanceResult r = hull_distance(points, std::vector<std::size_t>{0, 1},
                                             std::vector<std::size_t>{2, 3});
        CHECK(r.distance == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.lower_bound <= r.distance);
        CHECK(r.lower_bound == doctest::Approx(2.0).epsilon(1e-5));
    }
    SUBCASE("overlapping hulls have distance zero") {
        PointSet points({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {0.5, 0.5}, {3.0, 3.0}, {3.0, 0.0}});
        HullDistanceResult r = hull_distance(points, std::vector<std::size_t>{0, 1, 2},
                                             std::vector<std::size_t>{3, 4, 5});
        CHECK(r.distance == 0.0);
    }
    SUBCASE("closest point can sit inside a facet") {
        PointSet points({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {3.0, 0.5}});
        HullDistanceResult r = hull_distance(points, std::vector<std::size_t>{0, 1, 2, 3},
                                             std::vector<std::size_t>{4});
        CHECK(r.distance == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("matches the exact segment oracle and a fine grid") {
        double ax = 0.3, ay = 0.2, bx = 1.7, by = 1.1;
        double cx = 2.4, cy = -0.3, dx = 3.1, dy = 1.9;
        PointSet points({{ax, ay}, {bx, by}, {cx, cy}, {dx, dy}});
        HullDistanceResult r = hull_distance(points, std::vector<std::size_t>{0, 1},
                                             std::vector<std::size_t>{2, 3});
        double exact = segment_segment_distance(ax, ay, bx, by, cx, cy, dx, dy);
        CHECK(std::fabs(r.distance - exact) <= 1e-5 * (1.0 + exact));
        CHECK(r.lower_bound <= exact + 1e-9);

        double grid_min = std::numeric_limits<double>::infinity();
        const int steps = 800;
        for (int i = 0; i <= steps; ++i) {
            double t = static_cast<double>(i) / steps;
            double px = ax + t * (bx - ax), py = ay + t * (by - ay);
            for (int j = 0; j <= steps; ++j) {
                double u = static_cast<double>(j) / steps;
                double qx = cx + u * (dx - cx), qy = cy + u * (dy - cy);
                grid_min = std::min(grid_min, std::hypot(px - qx, py - qy));
            }
        }
        CHECK(std::fabs(r.distance - grid_min) <= 5e-3);
    }
}

TEST_CASE("convex-nice sufficient certificate") {
    SUBCASE("unit clusters three apart certify") {
        PointSet points({{0.0, 0.0}, {1.0, 0.0}, {4.0, 0.0}, {5.0, 0.0}});
        CHECK(is_convex_nice_sufficient(points, make({0, 0, 1, 1}, 2)));
    }
    SUBCASE("touching hulls do not certify") {
        PointSet points({{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}});
        CHECK(!is_convex_nice_sufficient(points, make({0, 0, 1, 1}, 2)));
    }
}

TEST_CASE("clustering files round trip") {
    namespace fs = std::filesystem;
    Clustering c = make({0, 0, 1, 2, 1}, 3);
    fs::path path = fs::temp_directory_path() / "streamclust_test_clustering.txt";
    save_clustering(c, path);
    Clustering back = load_clustering(path);
    CHECK(back.k == c.k);
    CHECK(back.labels == c.labels);
    fs::remove(path);
}
