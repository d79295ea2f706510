#pragma once

// Named, reproducible experiments. Each one builds the relevant pair or
// density data at desk scale and turns the asymptotic statement it probes into
// a list of criteria with explicit observed values and thresholds, so that a
// serialized report carries everything needed to recompute its verdict.

#include "mobius/arithfn.hpp"
#include "mobius/construct.hpp"
#include "mobius/density.hpp"
#include "mobius/sieve.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobius {

enum class Status { pass, fail, inconclusive };
enum class Relation { lt, le, gt, ge, eq };

std::string_view to_string(Status s);
std::string_view to_string(Relation r);
Status status_from_string(std::string_view s);
Relation relation_from_string(std::string_view s);

bool holds(double observed, Relation relation, double threshold);

struct Criterion {
    std::string id;
    Status status = Status::inconclusive;
    double observed = 0.0;
    Relation relation = Relation::le;
    double threshold = 0.0;
    std::string note;

    // Evaluates `observed relation threshold`.
    static Criterion check(std::string id, double observed, Relation relation, double threshold,
                           std::string note = {});
    static Criterion inconclusive(std::string id, double observed, Relation relation, double threshold,
                                  std::string note);
};

struct SeriesPoint {
    double x = 0.0;
    double value = 0.0;
    std::optional<std::int64_t> count;
};

struct Series {
    std::string label;
    std::vector<SeriesPoint> points;

    static Series from_density(std::string label, const DensityEstimate& est);
};

struct ExperimentReport {
    std::string name;
    std::map<std::string, std::string> params;
    std::vector<Series> series;
    std::vector<Criterion> criteria;
    std::vector<std::string> warnings;
    std::int64_t runtime_ms = 0;

    // No criterion failed (inconclusive criteria do not fail a report).
    bool passed() const;
    const Criterion& criterion(std::string_view id) const;
    const Series& series_named(std::string_view label) const;
};

// Named functions g usable as experiment inputs:
//   unit            indicator of {1}
//   squares         indicator of the perfect squares
//   unit-minus-two  g(1) = 1, g(2) = -1
//   one-minus-four  g(1) = 1, g(4) = -1
//   primes          indicator of the primes
//   mu              the Moebius function
ArithFunction g_preset(std::string_view name, const SieveTables& tables, std::uint64_t limit);
std::vector<std::string> g_preset_names();

struct Theorem1Options {
    // Allowed tail oscillation of the supp(f) density estimate.
    double tolerance = 1e-2;
    // Growth of the reciprocal sum of supp(g) over the tail of the plan that
    // still counts as "bounded" for the thinness precondition.
    double thinness_slack = 0.1;
};

ExperimentReport run_theorem1(const ArithFunction& g, const SieveTables& tables, const CheckpointPlan& plan,
                              const Theorem1Options& options = {});

struct Theorem2Options {
    // Truncation levels y for lambda_y; empty selects 1, 10, ..., limit.
    std::vector<std::uint64_t> y_list;
    double mean_tolerance = 1e-2;
    double wintner_tolerance = 1e-2;
    double absolute_sum_slack = 0.1;
    // When set, mean |f| at the final checkpoint is compared to this value.
    std::optional<double> reference_abs_mean;
};

ExperimentReport run_theorem2(const ArithFunction& g, const SieveTables& tables, const CheckpointPlan& plan,
                              const Theorem2Options& options = {});

struct PropBestOptions {
    // Reciprocal-sum bound is required at every evaluated x >= x0.
    std::uint64_t x0 = 100;
};

ExperimentReport run_prop_best(const ZFunction& z, const SieveTables& tables, const CheckpointPlan& plan,
                               const PropBestOptions& options = {});

struct Theorem3Options {
    double tolerance = kDefaultGreedyTolerance;
    // Allowed gap between empirical support densities and the truncated products.
    double density_tolerance = 2e-2;
};

ExperimentReport run_theorem3(double alpha, double beta, const SieveTables& tables, const CheckpointPlan& plan,
                              const Theorem3Options& options = {});

struct PrimesDemoOptions {
    double min_ratio = 0.99;
};

ExperimentReport run_primes_demo(std::uint64_t y, const SieveTables& tables, const CheckpointPlan& plan,
                                 const PrimesDemoOptions& options = {});

struct LemmaChecksOptions {
    std::uint64_t seed = 20240101;
    std::size_t random_sets = 50;
    std::size_t max_set_size = 8;
    std::uint64_t max_element = 100;
    double landau_tolerance = 5e-3;
    double kronecker_tolerance = 1e-2;
};

ExperimentReport run_lemma_checks(const SieveTables& tables, const CheckpointPlan& plan,
                                  const LemmaChecksOptions& options = {});

inline constexpr std::string_view kExperimentNames[] = {"theorem1",    "theorem2",   "prop-best",
                                                        "theorem3",    "primes-demo", "lemma-checks"};

// Every experiment with its default parameters on [1, limit].
std::vector<ExperimentReport> run_all(const SieveTables& tables, const CheckpointPlan& plan, std::uint64_t seed);

// 3 / sqrt(N): finite-size slack added to asymptotic inequalities.
double statistical_slack(std::uint64_t limit);

} // namespace mobius
