#pragma once

// Finite-range stand-ins for asymptotic densities and mean values, the
// set-of-multiples machinery, and executable forms of the lemmas on
// prescribed-divisor classes, Kronecker averages and squarefree densities.
//
// Limits are approximated at a list of checkpoints. Upper and lower density
// are only available as the max / min ratio over the last half of the
// checkpoints; those proxies are estimates, never limits.

#include "mobius/arithfn.hpp"
#include "mobius/sieve.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mobius {

// Strictly increasing evaluation bounds x_1 < ... < x_k, all >= 1.
class CheckpointPlan {
public:
    explicit CheckpointPlan(std::vector<std::uint64_t> points);

    // limit, limit/ratio, limit/ratio^2, ... down to min_x (ascending order).
    // A limit below min_x yields the single point {limit}.
    static CheckpointPlan geometric(std::uint64_t limit, double ratio = 2.0, std::uint64_t min_x = 1000);
    // Powers of ten from `from` up to limit, plus limit itself.
    static CheckpointPlan decades(std::uint64_t limit, std::uint64_t from = 10);

    CheckpointPlan merged_with(const CheckpointPlan& other) const;

    std::span<const std::uint64_t> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::uint64_t back() const noexcept { return points_.back(); }
    bool contains(std::uint64_t x) const;

private:
    std::vector<std::uint64_t> points_;
};

struct Checkpoint {
    std::uint64_t x = 0;
    // Set size for densities; exact partial sum for mean values.
    std::int64_t count = 0;
    double ratio = 0.0;
};

struct DensityEstimate {
    std::vector<Checkpoint> checkpoints;
    double final_ratio = 0.0;
    // max |ratio_i - final_ratio| over the last half of the checkpoints.
    double tail_oscillation = 0.0;

    static DensityEstimate from_counts(std::span<const std::uint64_t> points, std::span<const std::int64_t> counts);

    // Upper / lower density proxies: max / min ratio over the tail half.
    double upper_proxy() const;
    double lower_proxy() const;
    // Ratio at an exact checkpoint; RangeError if x is not one.
    double ratio_at(std::uint64_t x) const;
    std::int64_t count_at(std::uint64_t x) const;
};

// Counts of {n <= x : f[n] != 0}.
DensityEstimate support_density(const ArithFunction& f, const CheckpointPlan& plan);

struct PartialSum {
    std::uint64_t x = 0;
    double sum = 0.0;
};

// sum_{a in A, a <= x} 1/a for ascending A, summed in ascending order.
std::vector<PartialSum> reciprocal_sum_partial(std::span<const std::uint64_t> set, const CheckpointPlan& plan);
std::vector<PartialSum> reciprocal_sum_partial(const ArithFunction& f, const CheckpointPlan& plan);

// M(A) intersected with [1, limit].
struct MultiplesBitmap {
    std::uint64_t limit = 0;
    std::vector<std::uint8_t> membership; // indexed by n
    std::vector<std::uint64_t> generating_set;

    bool contains(std::uint64_t n) const { return membership[n] != 0; }
};

struct MultiplesResult {
    MultiplesBitmap bitmap;
    DensityEstimate density;
};

// Throws ArgumentError for an empty set or a zero element, RangeError for an
// element above limit.
MultiplesResult set_of_multiples(std::span<const std::uint64_t> set, std::uint64_t limit);
MultiplesResult set_of_multiples(std::span<const std::uint64_t> set, const CheckpointPlan& plan);

// 1 - prod_{a in A} (1 - 1/a), 1 when 1 is in A, 0 for the empty set.
double heilbronn_rohrbach_bound(std::span<const std::uint64_t> set);

// Class of n whose divisors from A are exactly S, and whose quotients n/d
// (d in S) are squarefree exactly for d in T. Sets are normalized to sorted
// unique lists; T subset S subset A is enforced.
struct Lemma3Query {
    Lemma3Query(std::vector<std::uint64_t> a, std::vector<std::uint64_t> s, std::vector<std::uint64_t> t);

    std::vector<std::uint64_t> A, S, T;
};

// Route 1: test every n directly against both conditions.
DensityEstimate lemma3_density_empirical(const Lemma3Query& q, const SieveTables& tables, const CheckpointPlan& plan);

struct Lemma3Term {
    std::vector<std::uint64_t> U;
    int sign = 1;
    std::uint64_t lcm = 1;
    // Size of the truncated excluded set K whose multiples are removed.
    std::size_t excluded_size = 0;
    // #{n <= x : n in V_U} = floor(x/L) - |M(K) cap [1, floor(x/L)]|.
    std::vector<std::int64_t> counts;
};

struct Lemma3Formula {
    DensityEstimate combined;
    std::vector<Lemma3Term> terms;
};

// Route 2: n = L q with q outside the set of multiples of
// K = {a/gcd(a, L) : a in A\S} cup {h^2/gcd(h^2, L/e) : h >= 2, e in U},
// summed over T subset U subset S with sign (-1)^{|U|-|T|}. Uses no Moebius
// table. Elements of K above limit/L are dropped since they mark nothing.
Lemma3Formula lemma3_density_formula(const Lemma3Query& q, const CheckpointPlan& plan);

// Route 3: signed sum over T subset U subset S of #{n <= x : condition (i),
// n/e squarefree for all e in U}. |S \ T| <= kChiExpansionLimit.
inline constexpr std::size_t kChiExpansionLimit = 20;
DensityEstimate chi_expansion_count(const Lemma3Query& q, const SieveTables& tables, const CheckpointPlan& plan);

// (1/x) sum_{n <= x} f[n] (or |f[n]|), exact integer partial sums.
DensityEstimate mean_value(const ArithFunction& f, const CheckpointPlan& plan, bool absolute);

struct WintnerSums {
    double signed_sum = 0.0;   // sum_{n <= y} g[n]/n
    double absolute_sum = 0.0; // sum_{n <= y} |g[n]|/n
};

WintnerSums wintner_prediction(const ArithFunction& g, std::uint64_t y);

struct KroneckerPoint {
    std::uint64_t x = 0;
    double g_sum = 0.0;    // G(x) = sum_{n <= x} h(n)/n
    std::int64_t h_sum = 0; // H(x) = sum_{n <= x} h(n)
    double h_ratio = 0.0;  // H(x)/x
};

struct KroneckerReport {
    std::vector<KroneckerPoint> points;
    double g_tail_oscillation = 0.0;
    double final_h_ratio = 0.0;
    bool verdict = false;
};

// verdict: G settles (tail oscillation < g_tolerance) and |H(x)/x| at the last
// checkpoint is < h_tolerance.
KroneckerReport kronecker_check(const ArithFunction& h, const CheckpointPlan& plan, double g_tolerance,
                                double h_tolerance);

// (6/pi^2) prod_{p in P} (1 + 1/p)^{-1}. ArgumentError on non-primes or repeats.
double landau_density(std::span<const std::uint64_t> primes);

// Counts of squarefree n <= x coprime to every p in P.
DensityEstimate squarefree_coprime_density(std::span<const std::uint64_t> primes, const CheckpointPlan& plan,
                                           const SieveTables& tables);

struct EvaporatingLevel {
    std::uint64_t threshold = 0;
    DensityEstimate density;
};

// For each threshold t: density of n <= limit with a divisor a in A, a >= t.
EvaporatingLevel evaporating_level(std::span<const std::uint64_t> set, std::uint64_t threshold,
                                   const CheckpointPlan& plan);
std::vector<EvaporatingLevel> evaporating_profile(std::span<const std::uint64_t> set,
                                                  std::span<const std::uint64_t> thresholds,
                                                  const CheckpointPlan& plan);

struct GrowthPoint {
    std::uint64_t x = 0;
    std::int64_t count = 0;
    double value = 0.0; // count(x) (log x)^delta / x
};

// Diagnostic for the classes #A(x) <= C x / (log x)^delta. A ascending.
std::vector<GrowthPoint> log_power_growth(std::span<const std::uint64_t> set, double delta, const CheckpointPlan& plan);

// Sorted, deduplicated copy.
std::vector<std::uint64_t> normalized_set(std::span<const std::uint64_t> set);

} // namespace mobius
