#include "streamclust/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "streamclust/adversary.hpp"
#include "streamclust/clustering.hpp"
#include "streamclust/experiments.hpp"
#include "streamclust/generators.hpp"
#include "streamclust/linkage.hpp"
#include "streamclust/metric_space.hpp"
#include "streamclust/rng.hpp"
#include "streamclust/stream.hpp"

namespace streamclust {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Exact rational arithmetic for the reservoir branch enumeration.  Numbers
// stay tiny (denominators divide t!), so int64 never overflows here.
struct Frac {
    long long num = 0;
    long long den = 1;

    Frac() = default;
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    Frac operator*(const Frac& o) const { return Frac(num * o.num, den * o.den); }
    Frac operator+(const Frac& o) const { return Frac(num * o.den + o.num * den, den * o.den); }
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

long long binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    long long out = 1;
    for (int i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
    return out;
}

// ---- criterion 1: perfect detection by sequential nearest neighbour ----

CriterionResult criterion_perfect_detection(std::uint64_t seed) {
    auto start = Clock::now();
    Rng rng = Rng(seed).fork("c1");

    int ok_runs = 0;
    constexpr int kInstances = 200;
    constexpr int kOrderings = 50;
    for (int i = 0; i < kInstances; ++i) {
        GeneratorSpec gs;
        gs.cls = InstanceClass::Perfect;
        gs.k = 2 + i % 4;
        gs.n = std::max<std::size_t>(static_cast<std::size_t>(gs.k),
                                     20 + static_cast<std::size_t>((i * 7) % 181));
        gs.dim = 1 + static_cast<std::size_t>(i % 10);
        gs.seed = rng.fork("inst").fork(static_cast<std::uint64_t>(i)).seed();
        GeneratedInstance inst = gen_perfect(gs);
        for (int t = 0; t < kOrderings; ++t) {
            Ordering order = Ordering::random(
                gs.n, Rng(gs.seed).fork("order").fork(static_cast<std::uint64_t>(t)).seed());
            SequentialNearestNeighbour alg(inst.space, gs.k);
            run_stream(alg, order);
            InducedClustering induced = induce_clustering(inst.space, alg.centers());
            if (equivalent(induced.clustering, inst.planted)) ++ok_runs;
        }
    }

    int ok_exhaustive = 0;
    constexpr int kExhaustive = 20;
    for (int i = 0; i < kExhaustive; ++i) {
        GeneratorSpec gs;
        gs.cls = InstanceClass::Perfect;
        gs.k = 2 + i % 3;
        gs.n = std::min<std::size_t>(7, static_cast<std::size_t>(gs.k) + 2 +
                                            static_cast<std::size_t>(i % 3));
        gs.dim = 1 + static_cast<std::size_t>(i % 3);
        gs.seed = rng.fork("exh").fork(static_cast<std::uint64_t>(i)).seed();
        GeneratedInstance inst = gen_perfect(gs);
        auto factory = [&](const DistanceSpace& space) -> std::unique_ptr<StreamAlgorithm> {
            return std::make_unique<SequentialNearestNeighbour>(space, gs.k);
        };
        OrderingCheckResult check =
            exhaustive_ordering_check(factory, inst.space, inst.planted, recovers_planted());
        if (check.total > 0 && check.all_pass()) ++ok_exhaustive;
    }

    double elapsed = seconds_since(start);
    std::fprintf(stderr, "[acceptance] criterion 1 took %.1fs (budget 120s)\n", elapsed);

    CriterionResult r;
    r.id = 1;
    r.title = "perfect detection (sequential nearest neighbour)";
    r.pass = ok_runs == kInstances * kOrderings && ok_exhaustive == kExhaustive;
    std::ostringstream d;
    d << ok_runs << "/" << kInstances * kOrderings << " random-ordering runs recovered, "
      << ok_exhaustive << "/" << kExhaustive << " small instances exhaustive over all orderings";
    if (elapsed >= 120.0) {
        r.pass = false;
        d << "; time budget exceeded";
    }
    r.detail = d.str();
    return r;
}

// ---- criterion 2: extra-centers state bound and prefix coverage ----

CriterionResult criterion_extra_centers(std::uint64_t seed) {
    auto start = Clock::now();
    Rng rng = Rng(seed).fork("c2");

    int ok = 0;
    constexpr int kInstances = 100;
    for (int i = 0; i < kInstances; ++i) {
        GeneratorSpec gs;
        gs.cls = InstanceClass::Nice;
        gs.k = 2 + i % 4;
        gs.n = 3 * static_cast<std::size_t>(gs.k) + static_cast<std::size_t>((i * 5) % 30);
        gs.dim = 1;
        gs.seed = rng.fork("inst").fork(static_cast<std::uint64_t>(i)).seed();
        GeneratedInstance inst = gen_nice(gs);

        Ordering order = Ordering::random(gs.n, Rng(gs.seed).fork("order").seed());
        ExtraCentersAlgorithm alg(inst.space, gs.k);
        RunRecord record = run_stream(alg, order, 1);

        std::size_t bound = std::size_t{1} << (gs.k - 1);
        bool good = true;
        for (std::size_t s = 0; s < record.snapshots.size(); ++s) {
            const CenterSet& centers = record.snapshots[s];
            std::size_t t = record.snapshot_steps[s];
            if (centers.items.size() > bound) {
                good = false;
                break;
            }
            std::set<int> touched;
            for (std::size_t j = 0; j < t; ++j) touched.insert(inst.planted.labels[order.order[j]]);
            std::set<int> covered;
            for (std::size_t item : centers.items) covered.insert(inst.planted.labels[item]);
            if (covered != touched) {
                good = false;
                break;
            }
        }
        if (good) ++ok;
    }

    double elapsed = seconds_since(start);
    std::fprintf(stderr, "[acceptance] criterion 2 took %.1fs (budget 60s)\n", elapsed);

    CriterionResult r;
    r.id = 2;
    r.title = "extra centers keep <= 2^(k-1) items and cover every touched cluster";
    r.pass = ok == kInstances;
    std::ostringstream d;
    d << ok << "/" << kInstances << " streamed instances hold the bound and coverage at every step";
    if (elapsed >= 60.0) {
        r.pass = false;
        d << "; time budget exceeded";
    }
    r.detail = d.str();
    return r;
}

// ---- criterion 3: candidate set hits every cluster of a nice clustering ----

CriterionResult criterion_candidates(std::uint64_t seed) {
    Rng rng = Rng(seed).fork("c3");

    int ok = 0;
    int enumerated_checked = 0;
    constexpr int kSets = 200;
    for (int i = 0; i < kSets; ++i) {
        int ell = 2 + i % 4;
        int k = std::min(5, ell + i % 2);
        GeneratorSpec gs;
        gs.cls = InstanceClass::Nice;
        gs.k = ell;
        gs.n = std::max<std::size_t>(2 * static_cast<std::size_t>(ell),
                                     8 + static_cast<std::size_t>((i * 5) % 57));
        gs.dim = 1;
        gs.seed = rng.fork("inst").fork(static_cast<std::uint64_t>(i)).seed();
        GeneratedInstance inst = gen_nice(gs);

        std::vector<std::size_t> items(gs.n);
        std::iota(items.begin(), items.end(), std::size_t{0});
        std::vector<std::size_t> cand = candidates(inst.space, items, k);

        bool good = cand.size() <= (std::size_t{1} << (k - 1));
        std::vector<bool> hit(static_cast<std::size_t>(ell), false);
        for (std::size_t item : cand) hit[static_cast<std::size_t>(inst.planted.labels[item])] = true;
        for (bool h : hit) good = good && h;

        if (gs.n <= kEnumerationLimit) {
            auto all_nice = enumerate_nice_clusterings(inst.space, ell);
            bool planted_found = false;
            for (const Clustering& c : all_nice)
                if (equivalent(c, inst.planted)) planted_found = true;
            good = good && planted_found;
            ++enumerated_checked;
        }
        if (good) ++ok;
    }

    CriterionResult r;
    r.id = 3;
    r.title = "candidates intersect every cluster of the planted nice clustering";
    r.pass = ok == kSets;
    std::ostringstream d;
    d << ok << "/" << kSets << " candidate sets cover all clusters within the 2^(k-1) bound ("
      << enumerated_checked << " cross-checked by enumeration)";
    r.detail = d.str();
    return r;
}

// ---- criterion 4: configuration lemma as an iff, all (j, S) cases ----

CriterionResult criterion_configuration_lemma(std::uint64_t) {
    MConfigurationInstance inst = build_matrix_m_configuration(5);
    MVerification ver = verify_m_configuration(inst.space, inst.config);

    int cases = 0;
    int agree = 0;
    for (int j = 1; j <= 5; ++j) {
        for (unsigned mask = 0; mask < (1u << 5); ++mask) {
            std::vector<int> subset;
            for (int v = 1; v <= 5; ++v)
                if (mask & (1u << (v - 1))) subset.push_back(v);
            if (subset.size() < 2 || subset.size() > 4) continue;
            ++cases;
            bool has_nice2 = configuration_subset_nice2(inst.space, inst.config, j, subset);
            bool j_outside = std::find(subset.begin(), subset.end(), j) == subset.end();
            if (has_nice2 == j_outside) ++agree;
        }
    }

    CriterionResult r;
    r.id = 4;
    r.title = "configuration subsets split nicely iff the fixed index is excluded";
    r.pass = ver.ok() && agree == cases;
    std::ostringstream d;
    d << agree << "/" << cases << " (index, subset) cases match the iff"
      << (ver.ok() ? ", clauses verified" : ", clause check FAILED");
    r.detail = d.str();
    return r;
}

// ---- criterion 5: lower bound instance and the online 3-means demo ----

CriterionResult criterion_lower_bound(std::uint64_t seed) {
    Rng rng = Rng(seed).fork("c5");

    bool unique_ok = false;
    bool polarity_ok = false;
    try {
        LowerBoundInstance mat = build_lower_bound_instance(5, 3, MConfigMode::Matrix);
        auto nice_a = enumerate_nice_clusterings(mat.sequence_a.space, 3);
        auto nice_b = enumerate_nice_clusterings(mat.sequence_b.space, 3);
        unique_ok = nice_a.size() == 1 && nice_b.size() == 1 &&
                    equivalent(nice_a[0], mat.sequence_a.planted) &&
                    equivalent(nice_b[0], mat.sequence_b.planted);
        polarity_ok = mat.sequence_a.spokes_together && !mat.sequence_b.spokes_together;
    } catch (const std::exception&) {
        unique_ok = false;
    }

    bool demo_ok = false;
    bool solved_a = true;
    bool solved_b = true;
    try {
        LowerBoundInstance euc = build_lower_bound_instance(5, 3, MConfigMode::Euclidean, 32,
                                                            rng.fork("euclid").seed());
        auto factory = [](const DistanceSpace& space) -> std::unique_ptr<StreamAlgorithm> {
            return std::make_unique<SequentialKMeans>(space, 3);
        };
        GameRecord game = run_lower_bound_game(factory, euc);
        solved_a = game.solved_a;
        solved_b = game.solved_b;
        demo_ok = !game.solved_both();
    } catch (const std::exception&) {
        demo_ok = false;
    }

    CriterionResult r;
    r.id = 5;
    r.title = "rigged pair has unique planted 3-clusterings and defeats online 3-means";
    r.pass = unique_ok && polarity_ok && demo_ok;
    std::ostringstream d;
    d << "uniqueness " << (unique_ok ? "certified" : "FAILED") << " for both sequences, "
      << "3-means recovered first=" << (solved_a ? "yes" : "no")
      << " second=" << (solved_b ? "yes" : "no");
    r.detail = d.str();
    return r;
}

// ---- criterion 6: reservoir subsample beats its probability bound ----

CriterionResult criterion_subsample_bound(std::uint64_t seed) {
    auto start = Clock::now();

    ExperimentSpec spec;
    spec.algorithm = ExperimentAlgorithm::Subsample;
    spec.instance.cls = InstanceClass::Core;
    spec.instance.k = 3;
    spec.instance.n = 120;
    spec.instance.dim = 2;
    spec.instance.beta = 0.2;
    spec.instance.seed = Rng(seed).fork("c6").fork("inst").seed();
    spec.ell = 30;
    spec.trials = 2000;
    spec.ordering = OrderingMode::ClusterSorted;
    spec.seed = Rng(seed).fork("c6").fork("trials").seed();

    ExperimentReport report = run_probability_experiment(spec);

    double elapsed = seconds_since(start);
    std::fprintf(stderr, "[acceptance] criterion 6 took %.1fs (budget 120s)\n", elapsed);

    CriterionResult r;
    r.id = 6;
    r.title = "subsample success rate meets the core coverage bound";
    r.pass = report.pass && report.measured_beta >= 0.2;
    std::ostringstream d;
    d << "rate " << format_double(report.rate) << " vs bound " << format_double(report.bound)
      << " - 3*" << format_double(report.sigma) << ", measured beta "
      << format_double(report.measured_beta) << " on cluster-sorted orderings";
    if (elapsed >= 120.0) {
        r.pass = false;
        d << "; time budget exceeded";
    }
    r.detail = d.str();
    return r;
}

// ---- criterion 7: sequential l-means bound on convex nice input ----

CriterionResult criterion_seq_lmeans_bound(std::uint64_t seed) {
    bool pass = true;
    std::ostringstream d;
    bool first = true;
    for (std::size_t ell : {std::size_t{10}, std::size_t{20}}) {
        ExperimentSpec spec;
        spec.algorithm = ExperimentAlgorithm::SeqLMeans;
        spec.instance.cls = InstanceClass::ConvexNice;
        spec.instance.k = 3;
        spec.instance.n = 90;
        spec.instance.dim = 2;
        spec.instance.seed = Rng(seed).fork("c7").fork("inst").fork(ell).seed();
        spec.ell = ell;
        spec.trials = 2000;
        spec.ordering = OrderingMode::Random;
        spec.seed = Rng(seed).fork("c7").fork("trials").fork(ell).seed();

        ExperimentReport report = run_probability_experiment(spec);
        pass = pass && report.pass;
        if (!first) d << "; ";
        first = false;
        d << "l=" << ell << " rate " << format_double(report.rate) << " vs bound "
          << format_double(report.bound) << " - 3*" << format_double(report.sigma);
    }

    CriterionResult r;
    r.id = 7;
    r.title = "sequential l-means refinement rate meets the balance bound";
    r.pass = pass;
    r.detail = d.str();
    return r;
}

// ---- criterion 8: order-oblivious failure witness for 2-means ----

CriterionResult criterion_kmeans_badcase(std::uint64_t seed) {
    CriterionResult r;
    r.id = 8;
    r.title = "2-means witness fails every ordering of a uniquely perfect instance";
    std::optional<KMeansBadcase> bad = find_kmeans_badcase(Rng(seed).fork("c8").seed());
    if (!bad) {
        r.pass = false;
        r.detail = "search budget exhausted without a witness";
        return r;
    }
    DistanceSpace space{PointSet(bad->points)};

    bool perfect_ok = is_perfect(space, bad->perfect);
    auto all_perfect = enumerate_perfect_clusterings(space, 2);
    bool unique_ok = all_perfect.size() == 1 && equivalent(all_perfect[0], bad->perfect);

    bool strict_opt = true;
    for (std::size_t mask = 0; mask < bad->bipartition_costs.size(); ++mask) {
        if (mask == bad->perfect_mask) continue;
        if (!(bad->bipartition_costs[bad->perfect_mask] < bad->bipartition_costs[mask]))
            strict_opt = false;
    }

    bool all_fail = bad->traces.size() == 24;
    for (const OrderingTrace& trace : bad->traces) all_fail = all_fail && !trace.recovered;

    r.pass = perfect_ok && unique_ok && strict_opt && all_fail;
    std::ostringstream d;
    d << "witness after " << bad->attempts << " attempts: unique perfect 2-clustering "
      << (unique_ok ? "certified" : "FAILED") << ", strict cost optimum "
      << (strict_opt ? "holds" : "FAILED") << ", " << (all_fail ? "24/24" : "some")
      << " orderings miss it";
    r.detail = d.str();
    return r;
}

// ---- criterion 9: adversarial ordering on the three-blocks line ----

CriterionResult criterion_line_ordering(std::uint64_t seed) {
    std::vector<std::vector<double>> coords;
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < 5; ++j) {
            coords.push_back({static_cast<double>(10 * c + j)});
            labels.push_back(c);
        }
    }
    PointSet points(coords);
    Clustering planted = Clustering::from_labels(labels, 3);

    CriterionResult r;
    r.id = 9;
    r.title = "found ordering makes sequential 5-means miss every refinement";
    std::optional<LineOrderingCertificate> cert =
        adversarial_line_ordering(points, planted, 5, Rng(seed).fork("c9").seed());
    if (!cert) {
        r.pass = false;
        r.detail = "search budget exhausted without a certificate";
        return r;
    }

    DistanceSpace space{PointSet(points)};
    SequentialKMeans alg(space, 5);
    run_stream(alg, cert->ordering);
    InducedClustering replay = induce_clustering(space, alg.centers());

    bool replay_ok = replay.clustering.labels == cert->induced.labels;
    bool not_refining = !is_refinement(replay.clustering, planted);
    r.pass = replay_ok && not_refining;
    std::ostringstream d;
    d << "certificate after " << cert->attempts << " candidate orderings, replay "
      << (replay_ok ? "matches" : "DIVERGED") << ", induced clustering "
      << (not_refining ? "is not a refinement" : "unexpectedly refines");
    r.detail = d.str();
    return r;
}

// ---- criterion 10: reservoir uniformity by exact branch enumeration ----

void reservoir_branches(const SubsampleAlgorithm& alg, std::size_t next, std::size_t t_total,
                        std::size_t ell, Frac prob,
                        std::map<std::vector<std::size_t>, Frac>& out) {
    if (next == t_total) {
        std::vector<std::size_t> key = alg.centers().items;
        std::sort(key.begin(), key.end());
        auto it = out.find(key);
        if (it == out.end())
            out.emplace(std::move(key), prob);
        else
            it->second = it->second + prob;
        return;
    }
    std::size_t s = next + 1;  // stream position of this arrival, 1-based
    if (s <= ell) {
        SubsampleAlgorithm copy = alg;
        copy.observe_forced(next, false, 0);
        reservoir_branches(copy, next + 1, t_total, ell, prob, out);
        return;
    }
    {
        SubsampleAlgorithm copy = alg;
        copy.observe_forced(next, false, 0);
        Frac keep(static_cast<long long>(s - ell), static_cast<long long>(s));
        reservoir_branches(copy, next + 1, t_total, ell, prob * keep, out);
    }
    for (std::size_t v = 0; v < ell; ++v) {
        SubsampleAlgorithm copy = alg;
        copy.observe_forced(next, true, v);
        Frac swap(1, static_cast<long long>(s));
        reservoir_branches(copy, next + 1, t_total, ell, prob * swap, out);
    }
}

CriterionResult criterion_reservoir_exact(std::uint64_t) {
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 6; ++i) coords.push_back({static_cast<double>(i)});
    DistanceSpace space{PointSet(coords)};

    int cases = 0;
    int exact = 0;
    for (std::size_t ell = 1; ell <= 3; ++ell) {
        for (std::size_t t = ell; t <= 6; ++t) {
            ++cases;
            SubsampleAlgorithm alg(space, ell, 0);
            std::map<std::vector<std::size_t>, Frac> dist;
            reservoir_branches(alg, 0, t, ell, Frac(1, 1), dist);

            long long subsets = binomial(static_cast<int>(t), static_cast<int>(ell));
            bool good = dist.size() == static_cast<std::size_t>(subsets);
            Frac want(1, subsets);
            Frac total(0, 1);
            for (const auto& [key, p] : dist) {
                good = good && p == want;
                total = total + p;
            }
            good = good && total == Frac(1, 1);
            if (good) ++exact;
        }
    }

    CriterionResult r;
    r.id = 10;
    r.title = "reservoir gives every subset probability exactly 1/C(t,l)";
    r.pass = exact == cases;
    std::ostringstream d;
    d << exact << "/" << cases << " (t, l) pairs uniform under exact rational enumeration";
    r.detail = d.str();
    return r;
}

// ---- criterion 11: structural oracles (uniqueness, representatives) ----

CriterionResult criterion_structural_oracles(std::uint64_t seed) {
    Rng rng = Rng(seed).fork("c11");

    int unique_violations = 0;
    constexpr int kSpaces = 500;
    for (int i = 0; i < kSpaces; ++i) {
        std::size_t n = 2 + static_cast<std::size_t>(i % 9);
        Rng local = rng.fork("space").fork(static_cast<std::uint64_t>(i));
        DistanceSpace space = [&] {
            if (i % 2 == 0) {
                std::vector<std::vector<double>> coords(n);
                std::size_t dim = 1 + static_cast<std::size_t>(i % 3);
                for (auto& c : coords) {
                    c.resize(dim);
                    for (double& x : c) x = local.uniform();
                }
                return DistanceSpace{PointSet(coords)};
            }
            DistanceMatrix m(n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) m.set(a, b, local.uniform(1.0, 2.0));
            return DistanceSpace{std::move(m), false};
        }();
        for (int k = 1; k <= static_cast<int>(n); ++k) {
            auto found = enumerate_perfect_clusterings(space, k);
            if (found.size() > 1) ++unique_violations;
        }
    }

    int rep_ok = 0;
    constexpr int kNice = 100;
    constexpr int kDraws = 10;
    for (int i = 0; i < kNice; ++i) {
        GeneratorSpec gs;
        gs.cls = InstanceClass::Nice;
        gs.k = 2 + i % 4;
        gs.n = std::max<std::size_t>(2 * static_cast<std::size_t>(gs.k),
                                     8 + static_cast<std::size_t>((i * 3) % 33));
        gs.dim = 1;
        gs.seed = rng.fork("nice").fork(static_cast<std::uint64_t>(i)).seed();
        GeneratedInstance inst = gen_nice(gs);

        std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(gs.k));
        for (std::size_t item = 0; item < gs.n; ++item)
            members[static_cast<std::size_t>(inst.planted.labels[item])].push_back(item);

        Rng draw = rng.fork("draw").fork(static_cast<std::uint64_t>(i));
        bool good = true;
        for (int t = 0; t < kDraws; ++t) {
            std::vector<std::size_t> reps;
            for (const auto& cluster : members) reps.push_back(cluster[draw.index(cluster.size())]);
            InducedClustering induced = induce_clustering(inst.space, CenterSet::of_items(reps));
            good = good && equivalent(induced.clustering, inst.planted);
        }
        if (good) ++rep_ok;
    }

    CriterionResult r;
    r.id = 11;
    r.title = "perfect clusterings unique per k; any representative set re-induces nice";
    r.pass = unique_violations == 0 && rep_ok == kNice;
    std::ostringstream d;
    d << unique_violations << " uniqueness violations over " << kSpaces << " spaces, " << rep_ok
      << "/" << kNice << " nice instances recovered from random representatives";
    r.detail = d.str();
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(criterion_perfect_detection(seed));
    out.push_back(criterion_extra_centers(seed));
    out.push_back(criterion_candidates(seed));
    out.push_back(criterion_configuration_lemma(seed));
    out.push_back(criterion_lower_bound(seed));
    out.push_back(criterion_subsample_bound(seed));
    out.push_back(criterion_seq_lmeans_bound(seed));
    out.push_back(criterion_kmeans_badcase(seed));
    out.push_back(criterion_line_ordering(seed));
    out.push_back(criterion_reservoir_exact(seed));
    out.push_back(criterion_structural_oracles(seed));
    return out;
}

std::string format_acceptance_summary(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    int passed = 0;
    for (const CriterionResult& r : results) {
        out << "criterion " << (r.id < 10 ? "0" : "") << r.id << " "
            << (r.pass ? "PASS" : "FAIL") << " " << r.title << ": " << r.detail << "\n";
        if (r.pass) ++passed;
    }
    out << "acceptance: " << passed << "/" << results.size() << " criteria passed\n";
    return out.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace streamclust
