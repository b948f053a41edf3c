#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamclust/acceptance.hpp"
#include "streamclust/adversary.hpp"
#include "streamclust/clustering.hpp"
#include "streamclust/experiments.hpp"
#include "streamclust/generators.hpp"
#include "streamclust/linkage.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/rng.hpp"
#include "streamclust/stream.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace streamclust;

namespace {

// Exit codes: 0 success / verdict true, 1 verdict false, 2 usage, 3
// infeasible or budget exhausted.
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

SpaceFormat sniff_space_format(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    if (lines.empty()) return SpaceFormat::Coordinates;
    std::istringstream head(lines[0]);
    long long n = 0;
    char extra = 0;
    if (!(head >> n) || head >> extra || n <= 0) return SpaceFormat::Coordinates;
    if (static_cast<std::size_t>(n) + 1 != lines.size()) return SpaceFormat::Coordinates;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::size_t fields = 1 + static_cast<std::size_t>(
                                     std::count(lines[i].begin(), lines[i].end(), ','));
        if (fields != static_cast<std::size_t>(n)) return SpaceFormat::Coordinates;
    }
    return SpaceFormat::Matrix;
}

DistanceSpace load_space_flag(const fs::path& path, const std::string& format) {
    if (format == "coords") return load_space(path, SpaceFormat::Coordinates);
    if (format == "matrix") return load_space(path, SpaceFormat::Matrix);
    return load_space(path, sniff_space_format(path));
}

Ordering make_ordering(const std::string& source, std::size_t n, std::uint64_t seed) {
    if (source == "random") return Ordering::random(n, seed);
    if (source == "identity") return Ordering::identity(n);
    if (source.rfind("file:", 0) == 0) return Ordering::from_file(source.substr(5), n);
    throw std::invalid_argument("unknown ordering source: " + source);
}

ordered_json centers_json(const CenterSet& centers) {
    ordered_json out;
    if (centers.exemplar()) {
        out["items"] = centers.items;
    } else {
        out["coords"] = centers.coords;
    }
    return out;
}

// ---- generate ----

struct GenerateArgs {
    std::string cls;
    int k = 0;
    std::size_t n = 0;
    std::size_t dim = 2;
    double margin = 0.1;
    double beta = 0.0;
    std::optional<std::uint64_t> seed;
    bool certify_unique = false;
    std::string out = ".";
};

int cmd_generate(const GenerateArgs& args) {
    GeneratorSpec spec;
    spec.cls = instance_class_from_string(args.cls);
    spec.k = args.k;
    spec.n = args.n;
    spec.dim = args.dim;
    spec.margin = args.margin;
    spec.beta = args.beta;
    spec.seed = resolve_seed(args.seed);
    spec.certify_unique = args.certify_unique;

    GeneratedInstance inst = generate(spec);

    fs::path dir(args.out);
    fs::create_directories(dir);
    fs::path space_path = dir / "space.txt";
    fs::path planted_path = dir / "planted.txt";
    save_space(inst.space, space_path);
    save_clustering(inst.planted, planted_path);

    std::cout << "class: " << to_string(spec.cls) << "\n";
    std::cout << "seed: " << spec.seed << "\n";
    std::cout << "n: " << spec.n << " k: " << spec.k << " dim: " << spec.dim << "\n";
    std::cout << "retries: " << inst.retries << "\n";
    std::cout << "wrote: " << space_path.string() << " " << planted_path.string();

    if (inst.cores) {
        fs::path cores_path = dir / "cores.txt";
        std::ostringstream body;
        for (const auto& core : inst.cores->cores) {
            for (std::size_t i = 0; i < core.size(); ++i) body << (i ? "," : "") << core[i];
            body << "\n";
        }
        write_file_atomic(cores_path, body.str());
        std::cout << " " << cores_path.string();
    }
    std::cout << "\n";

    switch (spec.cls) {
        case InstanceClass::Perfect:
            std::cout << "perfect: " << (is_perfect(inst.space, inst.planted) ? "true" : "false")
                      << "\n";
            break;
        case InstanceClass::Nice:
            std::cout << "nice: " << (is_nice(inst.space, inst.planted).nice ? "true" : "false")
                      << "\n";
            if (spec.certify_unique)
                std::cout << "unique: " << (inst.unique_certified ? "true" : "false") << "\n";
            break;
        case InstanceClass::ConvexNice:
            std::cout << "convex-nice: "
                      << (is_convex_nice_sufficient(inst.space.points(), inst.planted) ? "true"
                                                                                       : "false")
                      << "\n";
            break;
        case InstanceClass::Core:
            std::cout << "nice: " << (is_nice(inst.space, inst.planted).nice ? "true" : "false")
                      << "\n";
            break;
    }
    std::cout << "measured beta: " << format_double(inst.measured_beta) << "\n";
    return 0;
}

// ---- run ----

struct RunArgs {
    std::string alg;
    int k = 0;
    std::size_t ell = 0;
    std::string space;
    std::string space_format = "auto";
    std::string order = "random";
    std::optional<std::uint64_t> seed;
    std::size_t snapshots = 0;
    std::string planted;
    std::string out = "run_record.json";
};

int cmd_run(const RunArgs& args) {
    DistanceSpace space = load_space_flag(args.space, args.space_format);
    std::uint64_t seed = resolve_seed(args.seed);

    std::unique_ptr<StreamAlgorithm> alg;
    if (args.alg == "seq-k-means") {
        if (args.k <= 0) throw std::invalid_argument("--k required for seq-k-means");
        alg = std::make_unique<SequentialKMeans>(space, args.k);
    } else if (args.alg == "seq-nn") {
        if (args.k <= 0) throw std::invalid_argument("--k required for seq-nn");
        alg = std::make_unique<SequentialNearestNeighbour>(space, args.k);
    } else if (args.alg == "agglom-nn") {
        if (args.k <= 0) throw std::invalid_argument("--k required for agglom-nn");
        alg = std::make_unique<SequentialAgglomerative>(space, args.k, nearest_neighbour_hooks());
    } else if (args.alg == "agglom-centroid") {
        if (args.k <= 0) throw std::invalid_argument("--k required for agglom-centroid");
        alg = std::make_unique<SequentialAgglomerative>(space, args.k, centroid_hooks());
    } else if (args.alg == "extra-centers") {
        if (args.k <= 0) throw std::invalid_argument("--k required for extra-centers");
        alg = std::make_unique<ExtraCentersAlgorithm>(space, args.k);
    } else if (args.alg == "subsample") {
        if (args.ell == 0) throw std::invalid_argument("--l required for subsample");
        alg = std::make_unique<SubsampleAlgorithm>(space, args.ell,
                                                   Rng(seed).fork("reservoir").seed());
    } else {
        throw std::invalid_argument("unknown algorithm: " + args.alg);
    }

    Ordering order = make_ordering(args.order, space.size(), Rng(seed).fork("order").seed());
    RunRecord record = run_stream(*alg, order, args.snapshots);
    InducedClustering induced = induce_clustering(space, record.final_centers);

    ordered_json doc;
    doc["algorithm"] = record.algorithm;
    doc["space"] = args.space;
    doc["seed"] = seed;
    doc["ordering"] = {{"provenance", record.provenance}, {"order", order.order}};
    doc["steps"] = record.steps;
    doc["final_centers"] = centers_json(record.final_centers);
    doc["induced"] = {{"k", induced.clustering.k}, {"labels", induced.clustering.labels}};
    if (!record.snapshot_steps.empty()) {
        doc["snapshot_steps"] = record.snapshot_steps;
        ordered_json snaps = ordered_json::array();
        for (const CenterSet& s : record.snapshots) snaps.push_back(centers_json(s));
        doc["snapshots"] = snaps;
    }

    std::cout << "algorithm: " << record.algorithm << "\n";
    std::cout << "seed: " << seed << "\n";
    std::cout << "steps: " << record.steps << "\n";
    std::cout << "centers: " << record.final_centers.count() << " (bound "
              << alg->center_bound() << ")\n";
    std::cout << "induced k: " << induced.clustering.k << "\n";

    if (!args.planted.empty()) {
        Clustering planted = load_clustering(args.planted);
        bool recovered = equivalent(induced.clustering, planted);
        bool refines = is_refinement(induced.clustering, planted);
        doc["planted"] = args.planted;
        doc["recovered_planted"] = recovered;
        doc["refines_planted"] = refines;
        std::cout << "recovered planted: " << (recovered ? "true" : "false") << "\n";
        std::cout << "refines planted: " << (refines ? "true" : "false") << "\n";
    }

    write_file_atomic(args.out, doc.dump(2) + "\n");
    std::cout << "wrote: " << args.out << "\n";
    return 0;
}

// ---- check ----

struct CheckArgs {
    std::string what;
    std::vector<std::string> files;
    std::string space_format = "auto";
    bool metric = false;
    double beta = 0.0;
};

void need_files(const CheckArgs& args, std::size_t count, const std::string& usage) {
    if (args.files.size() != count)
        throw std::invalid_argument("check " + args.what + " expects " + usage);
}

int cmd_check(const CheckArgs& args) {
    if (args.what == "space") {
        need_files(args, 1, "<space>");
        DistanceSpace space = load_space_flag(args.files[0], args.space_format);
        if (args.metric && !space.euclidean())
            space = DistanceSpace(DistanceMatrix(space.matrix()), true);
        auto violations = validate_space(space);
        for (const auto& v : violations) std::cout << "violation: " << v.describe() << "\n";
        std::cout << "space: " << (violations.empty() ? "valid" : "invalid") << "\n";
        return violations.empty() ? 0 : kExitFalse;
    }
    if (args.what == "refinement") {
        need_files(args, 2, "<fine> <coarse>");
        Clustering fine = load_clustering(args.files[0]);
        Clustering coarse = load_clustering(args.files[1]);
        if (fine.size() != coarse.size())
            throw std::invalid_argument("clusterings cover different item counts");
        bool ok = is_refinement(fine, coarse);
        if (!ok) {
            for (std::size_t a = 0; a < fine.size() && ok == false; ++a)
                for (std::size_t b = a + 1; b < fine.size(); ++b)
                    if (fine.labels[a] == fine.labels[b] && coarse.labels[a] != coarse.labels[b]) {
                        std::cout << "witness: items " << a << " and " << b
                                  << " share a fine cluster but not a coarse one\n";
                        a = fine.size();
                        break;
                    }
        }
        std::cout << "refinement: " << (ok ? "true" : "false") << "\n";
        return ok ? 0 : kExitFalse;
    }

    need_files(args, 2, "<space> <clustering>");
    DistanceSpace space = load_space_flag(args.files[0], args.space_format);
    Clustering clustering = load_clustering(args.files[1]);
    if (clustering.size() != space.size())
        throw std::invalid_argument("clustering covers a different item count than the space");

    if (args.what == "nice") {
        NicenessResult res = is_nice(space, clustering);
        if (!res.nice && res.witness)
            std::cout << "witness: point " << res.witness->x << " has same-cluster "
                      << res.witness->same << " at distance >= other-cluster " << res.witness->other
                      << "\n";
        std::cout << "nice: " << (res.nice ? "true" : "false") << "\n";
        return res.nice ? 0 : kExitFalse;
    }
    if (args.what == "perfect") {
        bool ok = is_perfect(space, clustering);
        std::cout << "perfect: " << (ok ? "true" : "false") << "\n";
        return ok ? 0 : kExitFalse;
    }
    if (args.what == "convex-nice") {
        if (!space.euclidean())
            throw std::invalid_argument("convex-nice needs a coordinate-backed space");
        bool ok = is_convex_nice_sufficient(space.points(), clustering);
        std::cout << "convex-nice (certified): " << (ok ? "true" : "false") << "\n";
        return ok ? 0 : kExitFalse;
    }
    if (args.what == "core") {
        CoreAnnotation cores = compute_cores(space, clustering);
        for (std::size_t i = 0; i < cores.cores.size(); ++i)
            std::cout << "core " << i << ": " << cores.cores[i].size() << " items\n";
        std::cout << "beta: " << format_double(cores.beta) << "\n";
        bool ok = cores.beta > 0.0 && cores.beta >= args.beta;
        std::cout << "core: " << (ok ? "true" : "false") << "\n";
        return ok ? 0 : kExitFalse;
    }
    throw std::invalid_argument("unknown check: " + args.what);
}

// ---- adversary ----

struct MconfigArgs {
    int m = 5;
    std::string mode = "matrix";
    std::size_t p = 32;
    std::optional<std::uint64_t> seed;
    int max_attempts = 1000;
    std::string out = ".";
};

int cmd_adversary_mconfig(const MconfigArgs& args) {
    std::uint64_t seed = resolve_seed(args.seed);
    MConfigurationInstance inst = args.mode == "matrix"
                                      ? build_matrix_m_configuration(args.m)
                                      : build_euclidean_m_configuration(args.m, args.p, seed,
                                                                        args.max_attempts);

    fs::path dir(args.out);
    fs::create_directories(dir);
    fs::path space_path = dir / "space.txt";
    save_space(inst.space, space_path);

    ordered_json doc;
    doc["m"] = inst.config.m;
    doc["mode"] = args.mode;
    doc["seed"] = seed;
    doc["hub"] = inst.config.hub;
    doc["spokes"] = inst.config.spokes;
    doc["antipodes"] = inst.config.antipodes;
    doc["attempts"] = inst.attempts;
    fs::path config_path = dir / "config.json";
    write_file_atomic(config_path, doc.dump(2) + "\n");

    MVerification ver = verify_m_configuration(inst.space, inst.config);
    for (const auto& v : ver.violations) std::cout << "violation: " << v.describe() << "\n";
    std::cout << "m: " << inst.config.m << "\n";
    std::cout << "attempts: " << inst.attempts << "\n";
    std::cout << "wrote: " << space_path.string() << " " << config_path.string() << "\n";
    std::cout << "verify: " << (ver.ok() ? "ok" : "FAILED") << "\n";
    return ver.ok() ? 0 : kExitFalse;
}

struct LowerBoundArgs {
    int m = 5;
    int b = 3;
    std::string mode = "matrix";
    std::size_t p = 32;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
};

int cmd_adversary_lower_bound(const LowerBoundArgs& args) {
    std::uint64_t seed = resolve_seed(args.seed);
    MConfigMode mode = args.mode == "matrix" ? MConfigMode::Matrix : MConfigMode::Euclidean;
    LowerBoundInstance inst = build_lower_bound_instance(args.m, args.b, mode, args.p, seed);

    fs::path dir(args.out);
    fs::create_directories(dir);
    save_lower_bound_bundle(inst, dir);

    std::cout << "m: " << args.m << " b: " << args.b << " mode: " << args.mode << "\n";
    std::cout << "seed: " << seed << "\n";
    std::cout << "min cross distance: " << format_double(inst.min_cross_distance) << "\n";
    std::cout << "unique nice 3-clustering: certified for both sequences\n";
    std::cout << "wrote bundle under: " << dir.string() << "\n";
    return 0;
}

struct BadcaseArgs {
    std::optional<std::uint64_t> seed;
    int budget = 10000;
    std::string out = ".";
};

int cmd_adversary_badcase(const BadcaseArgs& args) {
    std::uint64_t seed = resolve_seed(args.seed);
    std::optional<KMeansBadcase> bad = find_kmeans_badcase(seed, args.budget);
    if (!bad) {
        std::cout << "no witness within budget " << args.budget << "\n";
        return kExitInfeasible;
    }

    fs::path dir(args.out);
    fs::create_directories(dir);
    fs::path points_path = dir / "points.txt";
    save_space(DistanceSpace(PointSet(bad->points)), points_path);
    fs::path planted_path = dir / "planted.txt";
    save_clustering(bad->perfect, planted_path);

    int failed = 0;
    ordered_json orderings = ordered_json::array();
    for (const OrderingTrace& trace : bad->traces) {
        orderings.push_back({{"order", trace.order}, {"recovered", trace.recovered}});
        if (!trace.recovered) ++failed;
    }
    ordered_json doc;
    doc["seed"] = seed;
    doc["attempts"] = bad->attempts;
    doc["perfect_mask"] = bad->perfect_mask;
    doc["bipartition_costs"] = bad->bipartition_costs;
    doc["orderings"] = orderings;
    fs::path witness_path = dir / "witness.json";
    write_file_atomic(witness_path, doc.dump(2) + "\n");

    std::cout << "witness after " << bad->attempts << " attempts\n";
    std::cout << "orderings failed: " << failed << "/" << bad->traces.size() << "\n";
    std::cout << "wrote: " << points_path.string() << " " << planted_path.string() << " "
              << witness_path.string() << "\n";
    return failed == static_cast<int>(bad->traces.size()) ? 0 : kExitFalse;
}

struct LineOrderingArgs {
    int clusters = 3;
    std::size_t size = 5;
    std::size_t ell = 5;
    double gap = 10.0;
    std::optional<std::uint64_t> seed;
    int budget = 2000;
    std::string out = ".";
};

int cmd_adversary_line_ordering(const LineOrderingArgs& args) {
    std::uint64_t seed = resolve_seed(args.seed);
    std::vector<std::vector<double>> coords;
    std::vector<int> labels;
    for (int c = 0; c < args.clusters; ++c) {
        for (std::size_t j = 0; j < args.size; ++j) {
            coords.push_back({args.gap * c + static_cast<double>(j)});
            labels.push_back(c);
        }
    }
    PointSet points(coords);
    Clustering planted = Clustering::from_labels(labels, args.clusters);

    std::optional<LineOrderingCertificate> cert =
        adversarial_line_ordering(points, planted, args.ell, seed, args.budget);
    if (!cert) {
        std::cout << "no ordering within budget " << args.budget << "\n";
        return kExitInfeasible;
    }

    fs::path dir(args.out);
    fs::create_directories(dir);
    fs::path points_path = dir / "points.txt";
    save_space(DistanceSpace(PointSet(points)), points_path);
    fs::path planted_path = dir / "planted.txt";
    save_clustering(planted, planted_path);
    fs::path order_path = dir / "ordering.txt";
    cert->ordering.save(order_path);

    ordered_json doc;
    doc["seed"] = seed;
    doc["attempts"] = cert->attempts;
    doc["ell"] = args.ell;
    doc["witness"] = {cert->witness_a, cert->witness_b};
    doc["induced"] = {{"k", cert->induced.k}, {"labels", cert->induced.labels}};
    fs::path cert_path = dir / "certificate.json";
    write_file_atomic(cert_path, doc.dump(2) + "\n");

    std::cout << "non-refining ordering after " << cert->attempts << " attempts\n";
    std::cout << "witness items: " << cert->witness_a << " " << cert->witness_b << "\n";
    std::cout << "wrote: " << points_path.string() << " " << planted_path.string() << " "
              << order_path.string() << " " << cert_path.string() << "\n";
    return 0;
}

// ---- experiment ----

struct ExperimentArgs {
    std::string alg;
    std::string cls;
    int k = 3;
    std::size_t n = 0;
    std::size_t dim = 2;
    double margin = 0.1;
    double beta = 0.0;
    std::size_t ell = 0;
    int trials = 2000;
    std::string order = "random";
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string out;
};

int cmd_experiment(const ExperimentArgs& args) {
    ExperimentSpec spec;
    if (args.alg == "subsample") {
        spec.algorithm = ExperimentAlgorithm::Subsample;
    } else if (args.alg == "seq-l-means") {
        spec.algorithm = ExperimentAlgorithm::SeqLMeans;
    } else {
        throw std::invalid_argument("unknown experiment algorithm: " + args.alg);
    }

    spec.instance.cls = args.cls.empty()
                            ? (spec.algorithm == ExperimentAlgorithm::Subsample
                                   ? InstanceClass::Core
                                   : InstanceClass::ConvexNice)
                            : instance_class_from_string(args.cls);
    spec.instance.k = args.k;
    spec.instance.n = args.n ? args.n
                             : static_cast<std::size_t>(args.k) *
                                   (spec.algorithm == ExperimentAlgorithm::Subsample ? 40 : 30);
    spec.instance.dim = args.dim;
    spec.instance.margin = args.margin;
    spec.instance.beta = args.beta;

    std::uint64_t seed = resolve_seed(args.seed);
    spec.instance.seed = Rng(seed).fork("instance").seed();
    spec.seed = Rng(seed).fork("trials").seed();

    if (args.ell == 0) throw std::invalid_argument("--l is required");
    spec.ell = args.ell;
    spec.trials = args.trials;

    if (args.order == "random") {
        spec.ordering = OrderingMode::Random;
    } else if (args.order == "cluster-sorted" || args.order == "adversarial") {
        spec.ordering = OrderingMode::ClusterSorted;
    } else if (args.order.rfind("file:", 0) == 0) {
        spec.ordering = OrderingMode::File;
        spec.ordering_file = args.order.substr(5);
    } else {
        throw std::invalid_argument("unknown ordering mode: " + args.order);
    }

    ExperimentReport report = run_probability_experiment(spec);

    std::string body = args.format == "csv"
                           ? ExperimentReport::csv_header() + "\n" + report.csv_row() + "\n"
                           : report.to_json() + "\n";
    if (!args.out.empty()) {
        write_file_atomic(args.out, body);
        std::cout << "wrote: " << args.out << "\n";
    }

    std::cout << "algorithm: " << to_string(spec.algorithm) << "\n";
    std::cout << "instance: " << to_string(spec.instance.cls) << " k=" << spec.instance.k
              << " n=" << spec.instance.n << "\n";
    std::cout << "seed: " << seed << "\n";
    std::cout << "measured beta: " << format_double(report.measured_beta) << "\n";
    std::cout << "rate: " << format_double(report.rate) << " (" << report.successes << "/"
              << report.trials << ")\n";
    std::cout << "bound: " << format_double(report.bound) << " sigma: "
              << format_double(report.sigma) << "\n";
    if (report.ell_below_k) std::cout << "note: l < k, bound is vacuous\n";
    std::cout << "pass: " << (report.pass ? "true" : "false") << "\n";
    return report.pass ? 0 : kExitFalse;
}

// ---- verify-all ----

int cmd_verify_all(std::uint64_t seed) {
    std::vector<CriterionResult> results = run_acceptance_suite(seed);
    std::cout << format_acceptance_summary(results);
    return all_passed(results) ? 0 : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming clustering toolkit"};
    app.require_subcommand(1);

    std::function<int()> action;

    // generate
    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "generate a planted instance");
    generate->add_option("--class", gen.cls, "perfect|nice|convex-nice|core")->required();
    generate->add_option("--k", gen.k, "number of planted clusters")->required();
    generate->add_option("--n", gen.n, "number of items")->required();
    generate->add_option("--dim", gen.dim, "dimension");
    generate->add_option("--margin", gen.margin, "separation slack");
    generate->add_option("--beta", gen.beta, "core/balance target");
    generate->add_option("--seed", gen.seed, "seed (auto-chosen and printed if omitted)");
    generate->add_flag("--certify-unique", gen.certify_unique,
                       "require enumeration-certified uniqueness (nice class, n <= 14)");
    generate->add_option("--out", gen.out, "output directory");
    generate->callback([&] { action = [&] { return cmd_generate(gen); }; });

    // run
    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand("run", "stream one algorithm over an instance");
    run_cmd->add_option("--alg", run.alg,
                        "seq-k-means|seq-nn|agglom-nn|agglom-centroid|extra-centers|subsample")
        ->required();
    run_cmd->add_option("--k", run.k, "cluster parameter");
    run_cmd->add_option("--l", run.ell, "reservoir capacity (subsample)");
    run_cmd->add_option("--space", run.space, "space file")->required();
    run_cmd->add_option("--space-format", run.space_format, "auto|coords|matrix");
    run_cmd->add_option("--order", run.order, "random|identity|file:PATH");
    run_cmd->add_option("--seed", run.seed, "seed");
    run_cmd->add_option("--snapshots", run.snapshots, "snapshot every N steps (0 = off)");
    run_cmd->add_option("--planted", run.planted, "planted clustering to compare against");
    run_cmd->add_option("--out", run.out, "run record path");
    run_cmd->callback([&] { action = [&] { return cmd_run(run); }; });

    // check
    CheckArgs check;
    CLI::App* check_cmd = app.add_subcommand("check", "verify a structural property");
    check_cmd->add_option("what", check.what, "nice|perfect|core|refinement|convex-nice|space")
        ->required();
    check_cmd->add_option("files", check.files, "input files")->expected(-1);
    check_cmd->add_option("--space-format", check.space_format, "auto|coords|matrix");
    check_cmd->add_flag("--metric", check.metric, "assert the triangle inequality too");
    check_cmd->add_option("--beta", check.beta, "minimum core fraction for `check core`");
    check_cmd->callback([&] { action = [&] { return cmd_check(check); }; });

    // adversary
    CLI::App* adversary = app.add_subcommand("adversary", "construct hard instances");
    adversary->require_subcommand(1);

    MconfigArgs mc;
    CLI::App* mconfig = adversary->add_subcommand("mconfig", "hub/spoke/antipode configuration");
    mconfig->add_option("--m", mc.m, "number of spokes")->required();
    mconfig->add_option("--mode", mc.mode, "matrix|euclidean");
    mconfig->add_option("--p", mc.p, "dimension (euclidean mode)");
    mconfig->add_option("--seed", mc.seed, "seed");
    mconfig->add_option("--max-attempts", mc.max_attempts, "rejection budget (euclidean mode)");
    mconfig->add_option("--out", mc.out, "output directory");
    mconfig->callback([&] { action = [&] { return cmd_adversary_mconfig(mc); }; });

    LowerBoundArgs lb;
    CLI::App* lower = adversary->add_subcommand("lower-bound", "two-configuration rigged feeds");
    lower->add_option("--m", lb.m, "spokes per configuration")->required();
    lower->add_option("--b", lb.b, "batch size")->required();
    lower->add_option("--mode", lb.mode, "matrix|euclidean");
    lower->add_option("--p", lb.p, "dimension (euclidean mode)");
    lower->add_option("--seed", lb.seed, "seed");
    lower->add_option("--out", lb.out, "output directory");
    lower->callback([&] { action = [&] { return cmd_adversary_lower_bound(lb); }; });

    BadcaseArgs bc;
    CLI::App* badcase = adversary->add_subcommand(
        "kmeans-badcase", "4-point witness that online 2-means misses under every ordering");
    badcase->add_option("--seed", bc.seed, "seed");
    badcase->add_option("--budget", bc.budget, "search budget");
    badcase->add_option("--out", bc.out, "output directory");
    badcase->callback([&] { action = [&] { return cmd_adversary_badcase(bc); }; });

    LineOrderingArgs lo;
    CLI::App* line = adversary->add_subcommand("line-ordering",
                                               "ordering that defeats sequential l-means in 1-D");
    line->add_option("--clusters", lo.clusters, "number of equal clusters");
    line->add_option("--size", lo.size, "points per cluster");
    line->add_option("--l", lo.ell, "centers kept by the algorithm");
    line->add_option("--gap", lo.gap, "spacing between cluster starts");
    line->add_option("--seed", lo.seed, "seed");
    line->add_option("--budget", lo.budget, "search budget");
    line->add_option("--out", lo.out, "output directory");
    line->callback([&] { action = [&] { return cmd_adversary_line_ordering(lo); }; });

    // experiment
    ExperimentArgs exp;
    CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo probability experiment");
    experiment->add_option("--alg", exp.alg, "subsample|seq-l-means")->required();
    experiment->add_option("--class", exp.cls, "instance class (defaults per algorithm)");
    experiment->add_option("--k", exp.k, "planted clusters");
    experiment->add_option("--n", exp.n, "items (defaults per algorithm)");
    experiment->add_option("--dim", exp.dim, "dimension");
    experiment->add_option("--margin", exp.margin, "separation slack");
    experiment->add_option("--beta", exp.beta, "core/balance target");
    experiment->add_option("--l", exp.ell, "centers / reservoir capacity")->required();
    experiment->add_option("--trials", exp.trials, "number of trials");
    experiment->add_option("--order", exp.order, "random|cluster-sorted|adversarial|file:PATH");
    experiment->add_option("--seed", exp.seed, "seed");
    experiment->add_option("--format", exp.format, "json|csv");
    experiment->add_option("--out", exp.out, "report path");
    experiment->callback([&] { action = [&] { return cmd_experiment(exp); }; });

    // verify-all
    std::uint64_t verify_seed = 42;
    CLI::App* verify = app.add_subcommand("verify-all", "run the acceptance suite");
    verify->add_option("--seed", verify_seed, "suite seed");
    verify->callback([&] { action = [&] { return cmd_verify_all(verify_seed); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        return action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
}
