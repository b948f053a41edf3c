#include "streamclust/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "streamclust/rng.hpp"

namespace streamclust {

std::string to_string(InstanceClass cls) {
    switch (cls) {
        case InstanceClass::Perfect: return "perfect";
        case InstanceClass::Nice: return "nice";
        case InstanceClass::ConvexNice: return "convex-nice";
        case InstanceClass::Core: return "core";
    }
    return "?";
}

InstanceClass instance_class_from_string(const std::string& name) {
    if (name == "perfect") return InstanceClass::Perfect;
    if (name == "nice") return InstanceClass::Nice;
    if (name == "convex-nice" || name == "convex_nice") return InstanceClass::ConvexNice;
    if (name == "core") return InstanceClass::Core;
    throw std::invalid_argument("unknown instance class: " + name);
}

namespace {

constexpr int kMaxGeneratorRetries = 50;

void check_basics(const GeneratorSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("cluster count must be positive");
    if (spec.n < static_cast<std::size_t>(spec.k)) {
        throw std::invalid_argument("need at least one item per cluster: n=" +
                                    std::to_string(spec.n) + " < k=" + std::to_string(spec.k));
    }
    if (spec.dim < 1) throw std::invalid_argument("dimension must be positive");
    if (spec.margin < 0.0) throw std::invalid_argument("margin must be non-negative");
}

std::vector<std::size_t> split_sizes(std::size_t n, int k) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), n / static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n % static_cast<std::size_t>(k); ++i) ++sizes[i];
    return sizes;
}

std::vector<double> ball_point(const std::vector<double>& center, double radius, Rng& rng) {
    const std::size_t dim = center.size();
    auto dir = rng.unit_vector(dim);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    std::vector<double> p(dim);
    for (std::size_t d = 0; d < dim; ++d) p[d] = center[d] + r * dir[d];
    return p;
}

// k centers pairwise at least min_sep apart, rejection-sampled in a box wide
// enough that placement rarely fails.
std::vector<std::vector<double>> place_centers(int k, std::size_t dim, double min_sep, Rng& rng) {
    const double box = min_sep * static_cast<double>(k + 1);
    for (int attempt = 0; attempt < 500; ++attempt) {
        std::vector<std::vector<double>> centers;
        bool ok = true;
        for (int c = 0; c < k && ok; ++c) {
            std::vector<double> candidate(dim);
            bool placed = false;
            for (int tries = 0; tries < 200 && !placed; ++tries) {
                for (std::size_t d = 0; d < dim; ++d) candidate[d] = rng.uniform(0.0, box);
                placed = std::all_of(centers.begin(), centers.end(), [&](const auto& other) {
                    return PointSet::euclidean(candidate, other) >= min_sep;
                });
            }
            if (placed) {
                centers.push_back(candidate);
            } else {
                ok = false;
            }
        }
        if (ok) return centers;
    }
    throw std::runtime_error("could not place " + std::to_string(k) +
                             " separated centers in dimension " + std::to_string(dim));
}

// Builds the point set in shuffled item order so labels never correlate with
// stream position by construction.
struct LabelledPoints {
    PointSet points;
    Clustering planted;
};

LabelledPoints assemble(std::vector<std::pair<std::vector<double>, int>> labelled, int k,
                        Rng& rng) {
    rng.shuffle(labelled);
    PointSet points;
    std::vector<int> labels;
    labels.reserve(labelled.size());
    for (auto& [coords, label] : labelled) {
        points.add(std::move(coords));
        labels.push_back(label);
    }
    return {std::move(points), Clustering::from_labels(std::move(labels), k)};
}

}  // namespace

GeneratedInstance gen_perfect(const GeneratorSpec& spec) {
    check_basics(spec);
    const auto sizes = split_sizes(spec.n, spec.k);
    const double radius = 1.0;
    const double min_sep = 5.0 * (1.0 + spec.margin);

    for (int retry = 0; retry <= kMaxGeneratorRetries; ++retry) {
        Rng rng = Rng(spec.seed).fork("perfect").fork(static_cast<std::uint64_t>(retry));
        const auto centers = place_centers(spec.k, spec.dim, min_sep, rng);
        std::vector<std::pair<std::vector<double>, int>> labelled;
        for (int c = 0; c < spec.k; ++c) {
            for (std::size_t i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) {
                labelled.emplace_back(ball_point(centers[static_cast<std::size_t>(c)], radius, rng), c);
            }
        }
        auto [points, planted] = assemble(std::move(labelled), spec.k, rng);
        DistanceSpace space{std::move(points)};
        if (!is_perfect(space, planted)) continue;
        const std::size_t min_size = *std::min_element(sizes.begin(), sizes.end());
        return {std::move(space), std::move(planted), std::nullopt,
                static_cast<double>(min_size) / static_cast<double>(spec.n), retry, false};
    }
    throw std::runtime_error("perfect instance generation failed validation repeatedly");
}

GeneratedInstance gen_nice(const GeneratorSpec& spec) {
    check_basics(spec);
    if (spec.k > 20) throw std::invalid_argument("nice generator supports k <= 20");
    if (spec.certify_unique && spec.n > kEnumerationLimit) {
        throw std::invalid_argument("uniqueness certification limited to " +
                                    std::to_string(kEnumerationLimit) + " items");
    }
    auto sizes = split_sizes(spec.n, spec.k);

    for (int retry = 0; retry <= kMaxGeneratorRetries; ++retry) {
        Rng rng = Rng(spec.seed).fork("nice").fork(static_cast<std::uint64_t>(retry));
        rng.shuffle(sizes);

        // Exact integer layout: cluster j has sizes[j] points spaced 3^j
        // apart; every inter-cluster gap equals G > max diameter. Equal
        // spacings and equal gaps make every deviation from the planted
        // partition fail the strict niceness comparisons.
        double max_width = 0.0;
        std::vector<double> spacing(sizes.size());
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            spacing[j] = std::pow(3.0, static_cast<double>(j));
            max_width = std::max(max_width, static_cast<double>(sizes[j] - 1) * spacing[j]);
        }
        const double gap = std::ceil(2.0 * (1.0 + spec.margin) * max_width) + 1.0;

        std::vector<std::pair<std::vector<double>, int>> labelled;
        double position = static_cast<double>(rng.below(1000));
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            for (std::size_t t = 0; t < sizes[j]; ++t) {
                std::vector<double> coords(spec.dim, 0.0);
                coords[0] = position + static_cast<double>(t) * spacing[j];
                labelled.emplace_back(std::move(coords), static_cast<int>(j));
            }
            position += static_cast<double>(sizes[j] - 1) * spacing[j] + gap;
        }

        auto [points, planted] = assemble(std::move(labelled), spec.k, rng);
        DistanceSpace space{std::move(points)};
        if (!is_nice(space, planted).nice) continue;

        bool certified = false;
        if (spec.certify_unique) {
            if (enumerate_nice_clusterings(space, spec.k).size() != 1) continue;
            certified = true;
        }
        const std::size_t min_size = *std::min_element(sizes.begin(), sizes.end());
        return {std::move(space), std::move(planted), std::nullopt,
                static_cast<double>(min_size) / static_cast<double>(spec.n), retry, certified};
    }
    throw std::runtime_error("nice instance generation failed validation repeatedly");
}

GeneratedInstance gen_convex_nice(const GeneratorSpec& spec) {
    check_basics(spec);
    const double balance = spec.beta > 0.0 ? spec.beta : 1.0 / static_cast<double>(spec.k);
    if (balance > 1.0 / static_cast<double>(spec.k) + 1e-9) {
        throw std::invalid_argument("min-cluster fraction above 1/k is impossible");
    }

    // Smallest cluster pinned to the requested fraction, remainder balanced.
    std::vector<std::size_t> sizes(static_cast<std::size_t>(spec.k));
    const auto smallest = static_cast<std::size_t>(std::llround(
        std::max(1.0, balance * static_cast<double>(spec.n))));
    sizes[0] = std::min(smallest, spec.n - static_cast<std::size_t>(spec.k) + 1);
    if (spec.k > 1) {
        const auto rest = split_sizes(spec.n - sizes[0], spec.k - 1);
        std::copy(rest.begin(), rest.end(), sizes.begin() + 1);
    }

    const double radius = 1.0;
    const double min_sep = 4.0 * radius * (1.0 + spec.margin) + 2.0 * radius * spec.margin;

    for (int retry = 0; retry <= kMaxGeneratorRetries; ++retry) {
        Rng rng = Rng(spec.seed).fork("convex-nice").fork(static_cast<std::uint64_t>(retry));
        const auto centers = place_centers(spec.k, spec.dim, min_sep, rng);
        std::vector<std::pair<std::vector<double>, int>> labelled;
        for (int c = 0; c < spec.k; ++c) {
            for (std::size_t i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) {
                labelled.emplace_back(ball_point(centers[static_cast<std::size_t>(c)], radius, rng), c);
            }
        }
        auto [points, planted] = assemble(std::move(labelled), spec.k, rng);
        if (!is_convex_nice_sufficient(points, planted)) continue;
        const std::size_t min_size = *std::min_element(sizes.begin(), sizes.end());
        DistanceSpace space{std::move(points)};
        return {std::move(space), std::move(planted), std::nullopt,
                static_cast<double>(min_size) / static_cast<double>(spec.n), retry, false};
    }
    throw std::runtime_error("convex-nice instance generation failed validation repeatedly");
}

GeneratedInstance gen_core_clustering(const GeneratorSpec& spec) {
    check_basics(spec);
    if (spec.dim < 2) throw std::invalid_argument("core instances need dim >= 2");
    const double target = spec.beta > 0.0 ? spec.beta : 0.5 / static_cast<double>(spec.k);
    if (target > 1.0) throw std::invalid_argument("core fraction above 1 is impossible");

    const auto sizes = split_sizes(spec.n, spec.k);
    const auto core_size = static_cast<std::size_t>(
        std::ceil(target * static_cast<double>(spec.n) - 1e-9));
    for (std::size_t m : sizes) {
        if (core_size > m) {
            throw std::invalid_argument("core fraction " + std::to_string(target) +
                                        " needs " + std::to_string(core_size) +
                                        " core points per cluster, but a cluster has only " +
                                        std::to_string(m) + " items");
        }
    }

    for (int retry = 0; retry <= kMaxGeneratorRetries; ++retry) {
        Rng rng = Rng(spec.seed).fork("core").fork(static_cast<std::uint64_t>(retry));
        std::vector<std::pair<std::vector<double>, int>> labelled;
        bool any_halo = false;
        for (int c = 0; c < spec.k; ++c) {
            std::vector<double> center(spec.dim, 0.0);
            center[0] = 10.0 * static_cast<double>(c);
            std::size_t cores = core_size;
            std::size_t halos = sizes[static_cast<std::size_t>(c)] - core_size;
            // A lone halo has no distant partner, so it would sit inside the
            // core and leave the cluster nice; absorb it instead.
            if (halos == 1) {
                cores += 1;
                halos = 0;
            }
            for (std::size_t i = 0; i < cores; ++i) {
                labelled.emplace_back(ball_point(center, 0.45, rng), c);
            }
            for (std::size_t i = 0; i < halos; ++i) {
                any_halo = true;
                std::vector<double> anchor = center;
                anchor[1] += (i % 2 == 0 ? 6.0 : -6.0);
                labelled.emplace_back(ball_point(anchor, 0.2, rng), c);
            }
        }

        auto [points, planted] = assemble(std::move(labelled), spec.k, rng);
        DistanceSpace space{std::move(points)};
        const CoreAnnotation annotation = compute_cores(space, planted);
        if (annotation.beta + 1e-12 < target) continue;
        if (is_nice(space, planted).nice == any_halo) continue;
        return {std::move(space), std::move(planted), annotation, annotation.beta, retry,
                false};
    }
    throw std::runtime_error("core instance generation failed validation repeatedly");
}

GeneratedInstance generate(const GeneratorSpec& spec) {
    switch (spec.cls) {
        case InstanceClass::Perfect: return gen_perfect(spec);
        case InstanceClass::Nice: return gen_nice(spec);
        case InstanceClass::ConvexNice: return gen_convex_nice(spec);
        case InstanceClass::Core: return gen_core_clustering(spec);
    }
    throw std::invalid_argument("unknown instance class");
}

}  // namespace streamclust
