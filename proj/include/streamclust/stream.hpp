#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "streamclust/clustering.hpp"
#include "streamclust/linkage.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/rng.hpp"

namespace streamclust {

// A permutation of item indices plus a note about where it came from.
struct Ordering {
    std::vector<std::size_t> order;
    std::string provenance;

    std::size_t size() const { return order.size(); }

    static Ordering identity(std::size_t n);
    static Ordering random(std::size_t n, std::uint64_t seed);
    // Validates that `order` is a permutation of 0..n-1.
    static Ordering of(std::vector<std::size_t> order, std::string provenance);
    static Ordering from_file(const std::filesystem::path& path, std::size_t n);
    void save(const std::filesystem::path& path) const;
};

// One pass of an order-dependent algorithm over a fixed distance space. State
// must stay bounded by a function of the clustering parameter alone, never of
// the stream position; state_footprint() exposes the retained item count so
// tests can assert that structurally.
class StreamAlgorithm {
public:
    virtual ~StreamAlgorithm() = default;

    virtual void observe(std::size_t item) = 0;
    virtual CenterSet centers() const = 0;
    virtual std::size_t center_bound() const = 0;
    virtual std::size_t state_footprint() const = 0;
    virtual std::string name() const = 0;
    virtual const DistanceSpace& space() const = 0;
};

// Online k-means: the first k points become centers; afterwards the nearest
// center t_i (ties to the smallest position) is pulled to
// t_i + (1/n_i)(x - t_i) with its count n_i incremented first.
class SequentialKMeans : public StreamAlgorithm {
public:
    SequentialKMeans(const DistanceSpace& space, int k);

    void observe(std::size_t item) override;
    // Direct coordinate feed; observe() routes through this.
    void step(std::span<const double> x);

    CenterSet centers() const override;
    std::size_t center_bound() const override { return static_cast<std::size_t>(k_); }
    std::size_t state_footprint() const override;
    std::string name() const override;
    const DistanceSpace& space() const override { return space_; }

    const std::vector<std::vector<double>>& center_coords() const { return centers_; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    // Seed centers directly (replaces the warm-up phase).
    void set_centers(std::vector<std::vector<double>> centers, std::vector<std::size_t> counts);

private:
    const DistanceSpace& space_;
    int k_;
    std::vector<std::vector<double>> centers_;
    std::vector<std::size_t> counts_;
};

// Center record for the agglomerative scheme: a position, a weight, and the
// arrival step of its oldest constituent (used by tie-breaks and the
// keep-the-older merge).
struct AgglomCenter {
    std::vector<double> coords;
    double count = 1.0;
    std::size_t arrival = 0;
};

struct MergeHooks {
    std::string name;
    std::function<double(const AgglomCenter&, const AgglomCenter&)> dist;
    std::function<AgglomCenter(const AgglomCenter&, const AgglomCenter&)> merge;
};

// dist = euclidean distance, merge keeps the earlier-arrived center.
MergeHooks nearest_neighbour_hooks();
// dist = euclidean distance, merge = count-weighted mean with summed counts.
MergeHooks centroid_hooks();

// Agglomerative streaming: keep k centers; each arrival joins as a center,
// then the closest pair under the dist hook collapses via the merge hook.
class SequentialAgglomerative : public StreamAlgorithm {
public:
    SequentialAgglomerative(const DistanceSpace& space, int k, MergeHooks hooks);

    void observe(std::size_t item) override;
    void step(std::span<const double> x);

    CenterSet centers() const override;
    std::size_t center_bound() const override { return static_cast<std::size_t>(k_); }
    std::size_t state_footprint() const override;
    std::string name() const override;
    const DistanceSpace& space() const override { return space_; }

    const std::vector<AgglomCenter>& raw_centers() const { return centers_; }

private:
    const DistanceSpace& space_;
    int k_;
    MergeHooks hooks_;
    std::vector<AgglomCenter> centers_;
    std::size_t step_count_ = 0;
};

// Exemplar version for arbitrary distance spaces: each arrival joins T, then
// the closest pair in T collapses to its earlier-arrived member.
class SequentialNearestNeighbour : public StreamAlgorithm {
public:
    SequentialNearestNeighbour(const DistanceSpace& space, int k);

    void observe(std::size_t item) override;

    CenterSet centers() const override;
    std::size_t center_bound() const override { return static_cast<std::size_t>(k_); }
    std::size_t state_footprint() const override { return exemplars_.size(); }
    std::string name() const override;
    const DistanceSpace& space() const override { return space_; }

private:
    const DistanceSpace& space_;
    int k_;
    std::vector<std::size_t> exemplars_;  // arrival order
};

// Keeps every arrival until the set exceeds 2^(k-1), then compresses through
// the single-linkage candidate representatives.
class ExtraCentersAlgorithm : public StreamAlgorithm {
public:
    ExtraCentersAlgorithm(const DistanceSpace& space, int k);

    void observe(std::size_t item) override;

    CenterSet centers() const override;
    std::size_t center_bound() const override { return bound_; }
    std::size_t state_footprint() const override { return kept_.size(); }
    std::string name() const override;
    const DistanceSpace& space() const override { return space_; }

private:
    const DistanceSpace& space_;
    int k_;
    std::size_t bound_;
    std::vector<std::size_t> kept_;
};

// Reservoir sample of fixed capacity: item t replaces a uniform victim with
// probability l/t, so the reservoir is always a uniform l-subset of the
// prefix. observe() draws from the owned generator; observe_forced() takes
// the branch explicitly and is the single code path both share, which lets
// tests enumerate the whole branch tree.
class SubsampleAlgorithm : public StreamAlgorithm {
public:
    SubsampleAlgorithm(const DistanceSpace& space, std::size_t capacity, std::uint64_t seed);

    void observe(std::size_t item) override;
    void observe_forced(std::size_t item, bool replace, std::size_t victim);

    CenterSet centers() const override;
    std::size_t center_bound() const override { return capacity_; }
    std::size_t state_footprint() const override { return reservoir_.size() + 1; }
    std::string name() const override;
    const DistanceSpace& space() const override { return space_; }

    std::size_t time() const { return t_; }

private:
    const DistanceSpace& space_;
    std::size_t capacity_;
    Rng rng_;
    std::vector<std::size_t> reservoir_;
    std::size_t t_ = 0;
};

struct RunRecord {
    std::string algorithm;
    std::string provenance;
    std::size_t steps = 0;
    CenterSet final_centers;
    std::vector<std::size_t> snapshot_steps;
    std::vector<CenterSet> snapshots;  // copies, taken every snapshot_every steps
};

// Feeds the ordering through the algorithm. snapshot_every = 0 disables
// snapshots; otherwise a copy of the center set is stored after steps
// snapshot_every, 2*snapshot_every, ... and always after the last step.
RunRecord run_stream(StreamAlgorithm& algorithm, const Ordering& ordering,
                     std::size_t snapshot_every = 0);

}  // namespace streamclust
