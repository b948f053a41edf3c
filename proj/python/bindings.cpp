#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamclust/adversary.hpp"
#include "streamclust/clustering.hpp"
#include "streamclust/experiments.hpp"
#include "streamclust/generators.hpp"
#include "streamclust/linkage.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/stream.hpp"

namespace py = pybind11;
using namespace streamclust;

namespace {

Clustering as_clustering(const std::vector<int>& labels) {
    return Clustering::from_raw_labels(labels);
}

std::vector<std::vector<int>> label_lists(const std::vector<Clustering>& clusterings) {
    std::vector<std::vector<int>> out;
    out.reserve(clusterings.size());
    for (const Clustering& c : clusterings) out.push_back(c.labels);
    return out;
}

py::dict center_set_dict(const CenterSet& centers) {
    py::dict out;
    if (centers.exemplar()) {
        out["items"] = centers.items;
    } else {
        out["coords"] = centers.coords;
    }
    return out;
}

std::unique_ptr<StreamAlgorithm> make_algorithm(const DistanceSpace& space,
                                                const std::string& name, int k,
                                                std::uint64_t seed) {
    if (name == "seq-k-means") return std::make_unique<SequentialKMeans>(space, k);
    if (name == "seq-nn") return std::make_unique<SequentialNearestNeighbour>(space, k);
    if (name == "agglom-nn")
        return std::make_unique<SequentialAgglomerative>(space, k, nearest_neighbour_hooks());
    if (name == "agglom-centroid")
        return std::make_unique<SequentialAgglomerative>(space, k, centroid_hooks());
    if (name == "extra-centers") return std::make_unique<ExtraCentersAlgorithm>(space, k);
    if (name == "subsample") {
        if (k < 1) throw std::invalid_argument("capacity must be positive");
        return std::make_unique<SubsampleAlgorithm>(space, static_cast<std::size_t>(k), seed);
    }
    throw std::invalid_argument("unknown algorithm: " + name);
}

py::dict instance_dict(GeneratedInstance inst) {
    py::dict out;
    out["labels"] = inst.planted.labels;
    out["k"] = inst.planted.k;
    out["measured_beta"] = inst.measured_beta;
    out["retries"] = inst.retries;
    out["unique_certified"] = inst.unique_certified;
    if (inst.cores) {
        out["cores"] = inst.cores->cores;
    }
    out["space"] = std::move(inst.space);
    return out;
}

GeneratorSpec generator_spec(const std::string& cls, int k, std::size_t n, std::size_t dim,
                             double margin, double beta, std::uint64_t seed,
                             bool certify_unique) {
    GeneratorSpec spec;
    spec.cls = instance_class_from_string(cls);
    spec.k = k;
    spec.n = n;
    spec.dim = dim;
    spec.margin = margin;
    spec.beta = beta;
    spec.seed = seed;
    spec.certify_unique = certify_unique;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "streaming clustering structures, algorithms and experiments";

    py::class_<DistanceSpace>(m, "Space")
        .def(py::init([](const std::vector<std::vector<double>>& points) {
                 return DistanceSpace{PointSet(points)};
             }),
             py::arg("points"))
        .def_static(
            "from_matrix",
            [](const std::vector<std::vector<double>>& rows, bool metric) {
                const std::size_t n = rows.size();
                DistanceMatrix matrix(n);
                for (std::size_t i = 0; i < n; ++i) {
                    if (rows[i].size() != n) {
                        throw std::invalid_argument("matrix row " + std::to_string(i) +
                                                    " has " + std::to_string(rows[i].size()) +
                                                    " entries, expected " + std::to_string(n));
                    }
                    for (std::size_t j = 0; j < n; ++j) matrix.raw(i, j) = rows[i][j];
                }
                return DistanceSpace{std::move(matrix), metric};
            },
            py::arg("rows"), py::arg("metric") = false)
        .def_static(
            "load",
            [](const std::filesystem::path& path, const std::string& format) {
                return load_space(path, format == "matrix" ? SpaceFormat::Matrix
                                                           : SpaceFormat::Coordinates);
            },
            py::arg("path"), py::arg("format") = "coords")
        .def("save", [](const DistanceSpace& s, const std::filesystem::path& path) {
            save_space(s, path);
        })
        .def("__len__", &DistanceSpace::size)
        .def("distance", &DistanceSpace::distance, py::arg("i"), py::arg("j"))
        .def_property_readonly("euclidean", &DistanceSpace::euclidean)
        .def_property_readonly("metric_claimed", &DistanceSpace::metric_claimed)
        .def_property_readonly("points",
                               [](const DistanceSpace& s) { return s.points().points(); })
        .def("restrict_to",
             [](const DistanceSpace& s, const std::vector<std::size_t>& items) {
                 return s.restrict_to(items);
             })
        .def("validate", [](const DistanceSpace& s) {
            std::vector<std::string> out;
            for (const AxiomViolation& v : validate_space(s)) out.push_back(v.describe());
            return out;
        });

    m.def(
        "induce",
        [](const DistanceSpace& space, const std::vector<std::size_t>& items,
           const std::vector<std::vector<double>>& coords) {
            if (items.empty() == coords.empty()) {
                throw std::invalid_argument("pass exactly one of items= or coords=");
            }
            const CenterSet centers =
                items.empty() ? CenterSet::of_coords(coords) : CenterSet::of_items(items);
            InducedClustering induced = induce_clustering(space, centers);
            return py::make_tuple(induced.clustering.labels, induced.center_cluster);
        },
        py::arg("space"), py::arg("items") = std::vector<std::size_t>{},
        py::arg("coords") = std::vector<std::vector<double>>{},
        "Nearest-center labels plus a per-center cluster id (-1 when dropped).");

    m.def("is_nice", [](const DistanceSpace& space, const std::vector<int>& labels) {
        NicenessResult r = is_nice(space, as_clustering(labels));
        py::object witness = py::none();
        if (r.witness) {
            witness = py::make_tuple(r.witness->x, r.witness->same, r.witness->other);
        }
        return py::make_tuple(r.nice, witness);
    });
    m.def("is_perfect", [](const DistanceSpace& space, const std::vector<int>& labels) {
        return is_perfect(space, as_clustering(labels));
    });
    m.def("cores", [](const DistanceSpace& space, const std::vector<int>& labels) {
        CoreAnnotation annotation = compute_cores(space, as_clustering(labels));
        return py::make_tuple(annotation.cores, annotation.beta);
    });
    m.def("is_refinement", [](const std::vector<int>& fine, const std::vector<int>& coarse) {
        return is_refinement(as_clustering(fine), as_clustering(coarse));
    });
    m.def(
        "enumerate_nice",
        [](const DistanceSpace& space, int k, std::size_t cap) {
            return label_lists(enumerate_nice_clusterings(space, k, cap));
        },
        py::arg("space"), py::arg("k"), py::arg("cap") = 4096);
    m.def(
        "enumerate_perfect",
        [](const DistanceSpace& space, int k, std::size_t cap) {
            return label_lists(enumerate_perfect_clusterings(space, k, cap));
        },
        py::arg("space"), py::arg("k"), py::arg("cap") = 4096);

    m.def(
        "linkage_dump",
        [](const DistanceSpace& space, std::vector<std::size_t> items) {
            if (items.empty()) {
                items.resize(space.size());
                std::iota(items.begin(), items.end(), std::size_t{0});
            }
            return single_linkage_tree(space, items).dump();
        },
        py::arg("space"), py::arg("items") = std::vector<std::size_t>{});
    m.def(
        "candidates",
        [](const DistanceSpace& space, int k, std::vector<std::size_t> items) {
            if (items.empty()) {
                items.resize(space.size());
                std::iota(items.begin(), items.end(), std::size_t{0});
            }
            return candidates(space, items, k);
        },
        py::arg("space"), py::arg("k"), py::arg("items") = std::vector<std::size_t>{});

    m.def(
        "hull_distance",
        [](const std::vector<std::vector<double>>& points, const std::vector<std::size_t>& a,
           const std::vector<std::size_t>& b) {
            HullDistanceResult r = hull_distance(PointSet(points), a, b);
            return py::make_tuple(r.distance, r.lower_bound, r.iterations);
        },
        py::arg("points"), py::arg("a"), py::arg("b"));

    m.def(
        "generate",
        [](const std::string& cls, int k, std::size_t n, std::size_t dim, double margin,
           double beta, std::uint64_t seed, bool certify_unique) {
            return instance_dict(
                generate(generator_spec(cls, k, n, dim, margin, beta, seed, certify_unique)));
        },
        py::arg("cls"), py::arg("k"), py::arg("n"), py::arg("dim") = 2,
        py::arg("margin") = 0.1, py::arg("beta") = 0.0, py::arg("seed") = 0,
        py::arg("certify_unique") = false,
        "Instance classes: perfect, nice, convex-nice, core.");

    m.def(
        "run",
        [](const DistanceSpace& space, const std::string& algorithm, int k,
           const std::vector<std::size_t>& order, std::uint64_t seed,
           std::size_t snapshot_every) {
            const Ordering ordering = order.empty()
                                          ? Ordering::random(space.size(), seed)
                                          : Ordering::of(order, "explicit");
            auto alg = make_algorithm(space, algorithm, k, seed);
            RunRecord record = run_stream(*alg, ordering, snapshot_every);
            py::dict out;
            out["algorithm"] = record.algorithm;
            out["ordering"] = ordering.order;
            out["provenance"] = record.provenance;
            out["steps"] = record.steps;
            out["final_centers"] = center_set_dict(record.final_centers);
            py::list snaps;
            for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
                py::dict snap;
                snap["step"] = record.snapshot_steps[i];
                snap["centers"] = center_set_dict(record.snapshots[i]);
                snaps.append(snap);
            }
            out["snapshots"] = snaps;
            InducedClustering induced = induce_clustering(space, record.final_centers);
            out["induced_labels"] = induced.clustering.labels;
            return out;
        },
        py::arg("space"), py::arg("algorithm"), py::arg("k"),
        py::arg("order") = std::vector<std::size_t>{}, py::arg("seed") = 0,
        py::arg("snapshot_every") = 0,
        "Algorithms: seq-k-means, seq-nn, agglom-nn, agglom-centroid, extra-centers, "
        "subsample (k = capacity).");

    m.def("theoretical_bound", &theoretical_bound, py::arg("k"), py::arg("beta"),
          py::arg("ell"));
    m.def(
        "experiment",
        [](const std::string& algorithm, const std::string& cls, int k, std::size_t n,
           std::size_t dim, double beta, std::size_t ell, int trials,
           const std::string& ordering, std::uint64_t seed) {
            ExperimentSpec spec;
            if (algorithm == "seq-l-means") {
                spec.algorithm = ExperimentAlgorithm::SeqLMeans;
            } else if (algorithm == "subsample") {
                spec.algorithm = ExperimentAlgorithm::Subsample;
            } else {
                throw std::invalid_argument("unknown experiment algorithm: " + algorithm);
            }
            spec.instance = generator_spec(cls, k, n, dim, 0.1, beta, seed, false);
            spec.ell = ell;
            spec.trials = trials;
            if (ordering == "random") {
                spec.ordering = OrderingMode::Random;
            } else if (ordering == "cluster-sorted") {
                spec.ordering = OrderingMode::ClusterSorted;
            } else {
                throw std::invalid_argument("unknown ordering mode: " + ordering);
            }
            spec.seed = seed;
            ExperimentReport report = run_probability_experiment(spec);
            py::dict out;
            out["trials"] = report.trials;
            out["successes"] = report.successes;
            out["rate"] = report.rate;
            out["measured_beta"] = report.measured_beta;
            out["bound"] = report.bound;
            out["sigma"] = report.sigma;
            out["pass"] = report.pass;
            out["ell_below_k"] = report.ell_below_k;
            out["json"] = report.to_json();
            return out;
        },
        py::arg("algorithm"), py::arg("cls"), py::arg("k"), py::arg("n"), py::arg("dim") = 2,
        py::arg("beta") = 0.0, py::arg("ell") = 10, py::arg("trials") = 2000,
        py::arg("ordering") = "random", py::arg("seed") = 0);

    m.def(
        "kmeans_badcase",
        [](std::uint64_t seed, int budget) -> py::object {
            std::optional<KMeansBadcase> bad = find_kmeans_badcase(seed, budget);
            if (!bad) return py::none();
            py::dict out;
            out["points"] = bad->points.points();
            out["perfect_labels"] = bad->perfect.labels;
            out["bipartition_costs"] = bad->bipartition_costs;
            out["orderings_tried"] = bad->traces.size();
            out["attempts"] = bad->attempts;
            return out;
        },
        py::arg("seed") = 0, py::arg("budget") = 10000);

    m.def(
        "build_m_configuration",
        [](int m, const std::string& mode, std::size_t p, std::uint64_t seed) {
            MConfigurationInstance inst = mode == "matrix"
                                              ? build_matrix_m_configuration(m)
                                              : build_euclidean_m_configuration(m, p, seed);
            py::dict out;
            out["hub"] = inst.config.hub;
            out["spokes"] = inst.config.spokes;
            out["antipodes"] = inst.config.antipodes;
            out["attempts"] = inst.attempts;
            out["verified"] = verify_m_configuration(inst.space, inst.config).ok();
            out["space"] = std::move(inst.space);
            return out;
        },
        py::arg("m"), py::arg("mode") = "matrix", py::arg("p") = 32, py::arg("seed") = 0);
    m.def(
        "subset_nice2",
        [](const DistanceSpace& space, std::size_t hub, const std::vector<std::size_t>& spokes,
           const std::vector<std::size_t>& antipodes, int j, const std::vector<int>& subset) {
            MConfiguration config;
            config.m = static_cast<int>(spokes.size());
            config.hub = hub;
            config.spokes = spokes;
            config.antipodes = antipodes;
            return configuration_subset_nice2(space, config, j, subset);
        },
        py::arg("space"), py::arg("hub"), py::arg("spokes"), py::arg("antipodes"), py::arg("j"),
        py::arg("subset"));
}
