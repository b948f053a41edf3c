#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "streamclust/clustering.hpp"
#include "streamclust/metric_space.hpp"

namespace streamclust {

enum class InstanceClass { Perfect, Nice, ConvexNice, Core };

std::string to_string(InstanceClass cls);
InstanceClass instance_class_from_string(const std::string& name);

struct GeneratorSpec {
    InstanceClass cls = InstanceClass::Perfect;
    int k = 2;
    std::size_t n = 20;
    std::size_t dim = 2;
    // Extra slack on the separation guaranteeing the class property; the
    // checkers always re-verify, whatever the value.
    double margin = 0.1;
    // Core class: target min_i |core_i|/n. Convex-nice: target min cluster
    // fraction. <= 0 means balanced (1/k).
    double beta = 0.0;
    std::uint64_t seed = 0;
    // Nice class only: require the planted clustering to be the only nice
    // k-clustering, certified by enumeration (n <= 14).
    bool certify_unique = false;
};

struct GeneratedInstance {
    DistanceSpace space;
    Clustering planted;
    std::optional<CoreAnnotation> cores;  // filled for the core class
    double measured_beta = 0.0;  // min cluster (resp. core) fraction of n
    int retries = 0;
    bool unique_certified = false;
};

// Each generator validates its output with the matching checker and retries
// with a fresh sub-seed on failure (count reported in `retries`); what they
// return always passes.

// k well-separated balls: every intra-cluster distance below every
// inter-cluster one.
GeneratedInstance gen_perfect(const GeneratorSpec& spec);

// Collinear clusters with exactly equal in-cluster spacing (geometric across
// clusters, so diameters differ widely) and exactly equal inter-cluster gaps
// sized against the largest diameter. Integer coordinates make the strict
// comparisons exact; the planted clustering is the unique nice k-clustering.
GeneratedInstance gen_nice(const GeneratorSpec& spec);

// Disjoint balls with hull gaps exceeding every diameter; cluster sizes hit
// the requested balance within one item.
GeneratedInstance gen_convex_nice(const GeneratorSpec& spec);

// Tight core balls plus halo pairs stretched far enough to break niceness but
// not the core condition; needs dim >= 2. Halos are created in opposing pairs
// (never a single lone halo), so halo-bearing outputs are never nice.
GeneratedInstance gen_core_clustering(const GeneratorSpec& spec);

GeneratedInstance generate(const GeneratorSpec& spec);

}  // namespace streamclust
