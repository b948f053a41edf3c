#include "streamclust/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "streamclust/rng.hpp"

namespace streamclust {

std::string to_string(ExperimentAlgorithm algorithm) {
    switch (algorithm) {
        case ExperimentAlgorithm::SeqLMeans: return "seq-l-means";
        case ExperimentAlgorithm::Subsample: return "subsample";
    }
    return "?";
}

std::string to_string(OrderingMode mode) {
    switch (mode) {
        case OrderingMode::Random: return "random";
        case OrderingMode::ClusterSorted: return "cluster-sorted";
        case OrderingMode::File: return "file";
    }
    return "?";
}

double theoretical_bound(int k, double beta, std::size_t ell) {
    return 1.0 - static_cast<double>(k) * std::exp(-beta * static_cast<double>(ell));
}

namespace {

Ordering cluster_sorted_ordering(const Clustering& planted) {
    std::vector<std::size_t> order(planted.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return planted.labels[a] < planted.labels[b];
    });
    return Ordering::of(std::move(order), "cluster-sorted");
}

}  // namespace

ExperimentReport run_probability_experiment(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("need at least one trial");
    if (spec.ell < 1) throw std::invalid_argument("need at least one center");
    if (spec.algorithm == ExperimentAlgorithm::SeqLMeans) {
        if (spec.ordering != OrderingMode::Random) {
            throw std::invalid_argument(
                "seq-l-means is only covered on uniformly random orderings; "
                "adversarial modes violate the hypothesis");
        }
        if (spec.instance.cls != InstanceClass::ConvexNice) {
            throw std::invalid_argument("seq-l-means experiments need convex-nice instances");
        }
    } else if (spec.instance.cls != InstanceClass::Core) {
        throw std::invalid_argument("subsample experiments need core instances");
    }

    const auto started = std::chrono::steady_clock::now();
    const GeneratedInstance instance = generate(spec.instance);
    const std::size_t n = instance.space.size();

    ExperimentReport report;
    report.spec = spec;
    report.trials = spec.trials;
    report.measured_beta = instance.measured_beta;
    report.bound = theoretical_bound(spec.instance.k, instance.measured_beta, spec.ell);
    report.sigma = std::sqrt(std::max(report.bound * (1.0 - report.bound), 0.0) /
                             static_cast<double>(spec.trials));
    report.ell_below_k = spec.ell < static_cast<std::size_t>(spec.instance.k);
    report.generator_retries = instance.retries;

    Ordering fixed = Ordering::identity(n);
    if (spec.ordering == OrderingMode::ClusterSorted) {
        fixed = cluster_sorted_ordering(instance.planted);
    } else if (spec.ordering == OrderingMode::File) {
        fixed = Ordering::from_file(spec.ordering_file, n);
    }

    const Rng master(spec.seed);
    for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t trial_seed =
            master.fork("trial").fork(static_cast<std::uint64_t>(trial)).seed();
        report.trial_seeds.push_back(trial_seed);

        const Ordering& ordering = spec.ordering == OrderingMode::Random
                                       ? Ordering::random(n, trial_seed)
                                       : fixed;
        std::unique_ptr<StreamAlgorithm> algorithm;
        if (spec.algorithm == ExperimentAlgorithm::SeqLMeans) {
            algorithm = std::make_unique<SequentialKMeans>(instance.space,
                                                           static_cast<int>(spec.ell));
        } else {
            algorithm = std::make_unique<SubsampleAlgorithm>(
                instance.space, spec.ell, Rng(trial_seed).fork("reservoir").seed());
        }
        const RunRecord run = run_stream(*algorithm, ordering);
        const Clustering induced = induce_clustering(instance.space, run.final_centers).clustering;
        if (is_refinement(induced, instance.planted)) ++report.successes;
    }

    report.rate = static_cast<double>(report.successes) / static_cast<double>(report.trials);
    report.pass = report.rate >= report.bound - 3.0 * report.sigma;
    report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    return report;
}

std::string ExperimentReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["algorithm"] = to_string(spec.algorithm);
    doc["instance"] = {
        {"class", to_string(spec.instance.cls)}, {"k", spec.instance.k},
        {"n", spec.instance.n},                  {"dim", spec.instance.dim},
        {"margin", spec.instance.margin},        {"beta_target", spec.instance.beta},
        {"seed", spec.instance.seed},
    };
    doc["ell"] = spec.ell;
    doc["trials"] = trials;
    doc["successes"] = successes;
    doc["rate"] = rate;
    doc["measured_beta"] = measured_beta;
    doc["bound"] = bound;
    doc["sigma"] = sigma;
    doc["pass"] = pass;
    doc["ell_below_k"] = ell_below_k;
    doc["ordering_mode"] = to_string(spec.ordering);
    if (spec.ordering == OrderingMode::File) doc["ordering_file"] = spec.ordering_file.string();
    doc["generator_retries"] = generator_retries;
    doc["seed"] = spec.seed;
    doc["trial_seeds"] = trial_seeds;
    doc["wall_ms"] = wall_ms;
    return doc.dump(2);
}

std::string ExperimentReport::csv_header() {
    return "algorithm,class,k,n,dim,ell,trials,successes,rate,measured_beta,bound,sigma,pass,"
           "ell_below_k,ordering,seed,wall_ms";
}

std::string ExperimentReport::csv_row() const {
    std::ostringstream out;
    out << to_string(spec.algorithm) << "," << to_string(spec.instance.cls) << ","
        << spec.instance.k << "," << spec.instance.n << "," << spec.instance.dim << "," << spec.ell
        << "," << trials << "," << successes << "," << format_double(rate) << ","
        << format_double(measured_beta) << "," << format_double(bound) << ","
        << format_double(sigma) << "," << (pass ? "true" : "false") << ","
        << (ell_below_k ? "true" : "false") << "," << to_string(spec.ordering) << "," << spec.seed
        << "," << wall_ms;
    return out.str();
}

OrderingCheckResult exhaustive_ordering_check(const AlgorithmFactory& factory,
                                              const DistanceSpace& space,
                                              const Clustering& planted,
                                              const RunPredicate& success) {
    const std::size_t n = space.size();
    if (n > 8) {
        throw std::invalid_argument("exhaustive ordering check limited to 8 items, got " +
                                    std::to_string(n));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    OrderingCheckResult result;
    do {
        auto algorithm = factory(space);
        const RunRecord record =
            run_stream(*algorithm, Ordering::of(perm, "exhaustive"));
        ++result.total;
        if (success(record, space, planted)) {
            ++result.successes;
        } else if (result.first_failure.empty()) {
            result.first_failure = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return result;
}

RunPredicate recovers_planted() {
    return [](const RunRecord& record, const DistanceSpace& space, const Clustering& planted) {
        const Clustering induced = induce_clustering(space, record.final_centers).clustering;
        return equivalent(induced, planted);
    };
}

RunPredicate covers_every_cluster() {
    return [](const RunRecord& record, const DistanceSpace& space, const Clustering& planted) {
        (void)space;
        const auto& centers = record.final_centers;
        if (!centers.exemplar()) return false;
        std::vector<bool> hit(static_cast<std::size_t>(planted.k), false);
        for (std::size_t item : centers.items) {
            hit[static_cast<std::size_t>(planted.labels[item])] = true;
        }
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    };
}

}  // namespace streamclust
