#include "streamclust/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace streamclust {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_permutation(const std::vector<std::size_t>& order) {
    std::vector<bool> seen(order.size(), false);
    for (std::size_t v : order) {
        if (v >= order.size() || seen[v]) {
            throw std::invalid_argument("ordering is not a permutation of 0.." +
                                        std::to_string(order.size() - 1));
        }
        seen[v] = true;
    }
}
}  // namespace

Ordering Ordering::identity(std::size_t n) {
    Ordering o;
    o.order.resize(n);
    std::iota(o.order.begin(), o.order.end(), std::size_t{0});
    o.provenance = "identity";
    return o;
}

Ordering Ordering::random(std::size_t n, std::uint64_t seed) {
    Ordering o = identity(n);
    Rng rng(seed);
    rng.shuffle(o.order);
    o.provenance = "random:seed=" + std::to_string(seed);
    return o;
}

Ordering Ordering::of(std::vector<std::size_t> order, std::string provenance) {
    check_permutation(order);
    return Ordering{std::move(order), std::move(provenance)};
}

Ordering Ordering::from_file(const std::filesystem::path& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::size_t> order;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const double value = parse_double(line, line_number);
        order.push_back(static_cast<std::size_t>(value));
    }
    if (order.size() != n) {
        throw std::runtime_error(path.string() + ": has " + std::to_string(order.size()) +
                                 " indices, expected " + std::to_string(n));
    }
    return of(std::move(order), "file:" + path.string());
}

void Ordering::save(const std::filesystem::path& path) const {
    std::ostringstream out;
    for (std::size_t v : order) out << v << "\n";
    write_file_atomic(path, out.str());
}

SequentialKMeans::SequentialKMeans(const DistanceSpace& space, int k) : space_(space), k_(k) {
    if (k < 1) throw std::invalid_argument("center count must be positive");
    if (!space.euclidean()) {
        throw std::invalid_argument("sequential k-means needs coordinate data");
    }
}

void SequentialKMeans::observe(std::size_t item) { step(space_.points()[item]); }

void SequentialKMeans::step(std::span<const double> x) {
    if (!centers_.empty() && x.size() != centers_[0].size()) {
        throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                    " does not match centers of dimension " +
                                    std::to_string(centers_[0].size()));
    }
    if (centers_.size() < static_cast<std::size_t>(k_)) {
        centers_.emplace_back(x.begin(), x.end());
        counts_.push_back(1);
        return;
    }
    std::size_t nearest = 0;
    double best = kInf;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        const double d = PointSet::euclidean(centers_[i], x);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    auto& center = centers_[nearest];
    const double n = static_cast<double>(++counts_[nearest]);
    for (std::size_t d = 0; d < center.size(); ++d) {
        center[d] += (x[d] - center[d]) / n;
    }
}

CenterSet SequentialKMeans::centers() const { return CenterSet::of_coords(centers_); }

std::size_t SequentialKMeans::state_footprint() const { return centers_.size() + counts_.size(); }

std::string SequentialKMeans::name() const {
    return "seq-" + std::to_string(k_) + "-means";
}

void SequentialKMeans::set_centers(std::vector<std::vector<double>> centers,
                                   std::vector<std::size_t> counts) {
    if (centers.size() != counts.size() || centers.size() > static_cast<std::size_t>(k_)) {
        throw std::invalid_argument("seeded centers inconsistent with k");
    }
    centers_ = std::move(centers);
    counts_ = std::move(counts);
}

MergeHooks nearest_neighbour_hooks() {
    return MergeHooks{
        "nearest-neighbour",
        [](const AgglomCenter& a, const AgglomCenter& b) {
            return PointSet::euclidean(a.coords, b.coords);
        },
        [](const AgglomCenter& a, const AgglomCenter& b) {
            AgglomCenter kept = a.arrival <= b.arrival ? a : b;
            kept.count = a.count + b.count;
            return kept;
        },
    };
}

MergeHooks centroid_hooks() {
    return MergeHooks{
        "centroid",
        [](const AgglomCenter& a, const AgglomCenter& b) {
            return PointSet::euclidean(a.coords, b.coords);
        },
        [](const AgglomCenter& a, const AgglomCenter& b) {
            AgglomCenter merged;
            const double total = a.count + b.count;
            merged.coords.resize(a.coords.size());
            for (std::size_t d = 0; d < a.coords.size(); ++d) {
                merged.coords[d] = (a.count * a.coords[d] + b.count * b.coords[d]) / total;
            }
            merged.count = total;
            merged.arrival = std::min(a.arrival, b.arrival);
            return merged;
        },
    };
}

SequentialAgglomerative::SequentialAgglomerative(const DistanceSpace& space, int k,
                                                 MergeHooks hooks)
    : space_(space), k_(k), hooks_(std::move(hooks)) {
    if (k < 1) throw std::invalid_argument("center count must be positive");
    if (!space.euclidean()) {
        throw std::invalid_argument("sequential agglomerative needs coordinate data");
    }
    if (!hooks_.dist || !hooks_.merge) throw std::invalid_argument("missing merge hooks");
}

void SequentialAgglomerative::observe(std::size_t item) { step(space_.points()[item]); }

void SequentialAgglomerative::step(std::span<const double> x) {
    AgglomCenter fresh;
    fresh.coords.assign(x.begin(), x.end());
    fresh.arrival = step_count_++;
    centers_.push_back(std::move(fresh));
    if (centers_.size() <= static_cast<std::size_t>(k_)) return;

    std::size_t best_i = 0, best_j = 1;
    double best = kInf;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        for (std::size_t j = i + 1; j < centers_.size(); ++j) {
            const double d = hooks_.dist(centers_[i], centers_[j]);
            if (!std::isfinite(d)) {
                throw std::runtime_error("distance hook returned a non-finite value");
            }
            if (d < best) {
                best = d;
                best_i = i;
                best_j = j;
            }
        }
    }
    centers_[best_i] = hooks_.merge(centers_[best_i], centers_[best_j]);
    centers_.erase(centers_.begin() + static_cast<std::ptrdiff_t>(best_j));
}

CenterSet SequentialAgglomerative::centers() const {
    std::vector<std::vector<double>> coords;
    coords.reserve(centers_.size());
    for (const auto& c : centers_) coords.push_back(c.coords);
    return CenterSet::of_coords(std::move(coords));
}

std::size_t SequentialAgglomerative::state_footprint() const { return 2 * centers_.size() + 1; }

std::string SequentialAgglomerative::name() const {
    return "seq-agglomerative-" + hooks_.name + "-" + std::to_string(k_);
}

SequentialNearestNeighbour::SequentialNearestNeighbour(const DistanceSpace& space, int k)
    : space_(space), k_(k) {
    if (k < 1) throw std::invalid_argument("center count must be positive");
}

void SequentialNearestNeighbour::observe(std::size_t item) {
    exemplars_.push_back(item);
    if (exemplars_.size() <= static_cast<std::size_t>(k_)) return;

    std::size_t best_i = 0, best_j = 1;
    double best = kInf;
    for (std::size_t i = 0; i < exemplars_.size(); ++i) {
        for (std::size_t j = i + 1; j < exemplars_.size(); ++j) {
            const double d = space_.distance(exemplars_[i], exemplars_[j]);
            if (d < best) {  // ties keep the lexicographically smallest (i,j)
                best = d;
                best_i = i;
                best_j = j;
            }
        }
    }
    // Collapse to the earlier arrival: drop position j.
    exemplars_.erase(exemplars_.begin() + static_cast<std::ptrdiff_t>(best_j));
    (void)best_i;
}

CenterSet SequentialNearestNeighbour::centers() const {
    return CenterSet::of_items(exemplars_);
}

std::string SequentialNearestNeighbour::name() const {
    return "seq-nn-" + std::to_string(k_);
}

ExtraCentersAlgorithm::ExtraCentersAlgorithm(const DistanceSpace& space, int k)
    : space_(space), k_(k) {
    if (k < 1) throw std::invalid_argument("center count must be positive");
    if (k > 20) throw std::invalid_argument("center bound 2^(k-1) too large for k > 20");
    bound_ = std::size_t{1} << (k - 1);
}

void ExtraCentersAlgorithm::observe(std::size_t item) {
    kept_.push_back(item);
    if (kept_.size() > bound_) {
        kept_ = candidates(space_, kept_, k_);
    }
}

CenterSet ExtraCentersAlgorithm::centers() const { return CenterSet::of_items(kept_); }

std::string ExtraCentersAlgorithm::name() const {
    return "extra-centers-" + std::to_string(k_);
}

SubsampleAlgorithm::SubsampleAlgorithm(const DistanceSpace& space, std::size_t capacity,
                                       std::uint64_t seed)
    : space_(space), capacity_(capacity), rng_(seed) {
    if (capacity < 1) throw std::invalid_argument("reservoir capacity must be positive");
}

void SubsampleAlgorithm::observe(std::size_t item) {
    if (t_ < capacity_) {
        observe_forced(item, false, 0);
        return;
    }
    // One inclusion draw and one victim draw per step, in that order.
    const bool replace =
        rng_.uniform() < static_cast<double>(capacity_) / static_cast<double>(t_ + 1);
    const std::size_t victim = replace ? rng_.index(capacity_) : 0;
    observe_forced(item, replace, victim);
}

void SubsampleAlgorithm::observe_forced(std::size_t item, bool replace, std::size_t victim) {
    if (replace && victim >= capacity_) {
        throw std::out_of_range("victim slot " + std::to_string(victim) +
                                " outside reservoir of capacity " + std::to_string(capacity_));
    }
    ++t_;
    if (reservoir_.size() < capacity_) {
        reservoir_.push_back(item);
        return;
    }
    if (replace) {
        reservoir_[victim] = item;
    }
}

CenterSet SubsampleAlgorithm::centers() const { return CenterSet::of_items(reservoir_); }

std::string SubsampleAlgorithm::name() const {
    return "subsample-" + std::to_string(capacity_);
}

RunRecord run_stream(StreamAlgorithm& algorithm, const Ordering& ordering,
                     std::size_t snapshot_every) {
    if (ordering.size() != algorithm.space().size()) {
        throw std::invalid_argument("ordering covers " + std::to_string(ordering.size()) +
                                    " items, space has " +
                                    std::to_string(algorithm.space().size()));
    }
    check_permutation(ordering.order);

    RunRecord record;
    record.algorithm = algorithm.name();
    record.provenance = ordering.provenance;
    for (std::size_t step = 0; step < ordering.size(); ++step) {
        algorithm.observe(ordering.order[step]);
        ++record.steps;
        const bool last = step + 1 == ordering.size();
        if (snapshot_every > 0 && ((step + 1) % snapshot_every == 0 || last)) {
            record.snapshot_steps.push_back(step + 1);
            record.snapshots.push_back(algorithm.centers());
        }
    }
    record.final_centers = algorithm.centers();
    return record;
}

}  // namespace streamclust
