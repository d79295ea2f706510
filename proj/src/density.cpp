#include "mobius/density.hpp"

#include "mobius/errors.hpp"
#include "mobius/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mobius {

namespace {

void require_within(const CheckpointPlan& plan, std::uint64_t limit, const char* what)
{
    if (plan.back() > limit)
        throw RangeError(std::string(what) + ": checkpoint " + std::to_string(plan.back()) +
                         " exceeds range " + std::to_string(limit));
}

bool is_subset(std::span<const std::uint64_t> small, std::span<const std::uint64_t> big)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<std::uint64_t> set_difference(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b)
{
    std::vector<std::uint64_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::uint64_t checked_lcm(std::span<const std::uint64_t> set)
{
    std::uint64_t l = 1;
    for (std::uint64_t a : set) {
        const std::uint64_t step = a / std::gcd(l, a);
        if (__builtin_mul_overflow(l, step, &l))
            throw OverflowError("lcm of the prescribed divisor set overflows", a);
    }
    return l;
}

// Condition (i): the divisors of n from A are exactly S.
bool divisors_from_set_are(std::uint64_t n, std::span<const std::uint64_t> s, std::span<const std::uint64_t> rest)
{
    for (std::uint64_t d : s)
        if (n % d != 0)
            return false;
    for (std::uint64_t a : rest)
        if (n % a == 0)
            return false;
    return true;
}

} // namespace

std::vector<std::uint64_t> normalized_set(std::span<const std::uint64_t> set)
{
    std::vector<std::uint64_t> v(set.begin(), set.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// ---------------------------------------------------------------------------
// CheckpointPlan / DensityEstimate

CheckpointPlan::CheckpointPlan(std::vector<std::uint64_t> points) : points_(std::move(points))
{
    if (points_.empty())
        throw ArgumentError("checkpoint plan must not be empty");
    if (points_.front() < 1)
        throw ArgumentError("checkpoints must be >= 1");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i] <= points_[i - 1])
            throw ArgumentError("checkpoints must be strictly increasing");
}

CheckpointPlan CheckpointPlan::geometric(std::uint64_t limit, double ratio, std::uint64_t min_x)
{
    if (limit < 1)
        throw ArgumentError("checkpoint limit must be >= 1");
    if (!(ratio > 1.0))
        throw ArgumentError("geometric checkpoint ratio must exceed 1");
    std::vector<std::uint64_t> pts;
    double x = static_cast<double>(limit);
    pts.push_back(limit);
    for (;;) {
        x /= ratio;
        const auto xi = static_cast<std::uint64_t>(x);
        if (xi < min_x || xi < 1)
            break;
        if (xi < pts.back())
            pts.push_back(xi);
    }
    std::reverse(pts.begin(), pts.end());
    return CheckpointPlan(std::move(pts));
}

CheckpointPlan CheckpointPlan::decades(std::uint64_t limit, std::uint64_t from)
{
    if (from < 1)
        throw ArgumentError("decade plan must start at >= 1");
    std::vector<std::uint64_t> pts;
    for (std::uint64_t x = from; x <= limit; x *= 10) {
        pts.push_back(x);
        if (x > limit / 10)
            break;
    }
    if (pts.empty() || pts.back() != limit)
        pts.push_back(limit);
    return CheckpointPlan(std::move(pts));
}

CheckpointPlan CheckpointPlan::merged_with(const CheckpointPlan& other) const
{
    std::vector<std::uint64_t> pts(points_);
    pts.insert(pts.end(), other.points_.begin(), other.points_.end());
    return CheckpointPlan(normalized_set(pts));
}

bool CheckpointPlan::contains(std::uint64_t x) const
{
    return std::binary_search(points_.begin(), points_.end(), x);
}

DensityEstimate DensityEstimate::from_counts(std::span<const std::uint64_t> points, std::span<const std::int64_t> counts)
{
    DensityEstimate est;
    for (std::size_t i = 0; i < points.size(); ++i)
        est.checkpoints.push_back(
            {points[i], counts[i], static_cast<double>(counts[i]) / static_cast<double>(points[i])});
    if (est.checkpoints.empty())
        return est;
    est.final_ratio = est.checkpoints.back().ratio;
    const std::size_t k = est.checkpoints.size();
    for (std::size_t i = k / 2; i < k; ++i)
        est.tail_oscillation = std::max(est.tail_oscillation, std::abs(est.checkpoints[i].ratio - est.final_ratio));
    return est;
}

double DensityEstimate::upper_proxy() const
{
    double m = -INFINITY;
    for (std::size_t i = checkpoints.size() / 2; i < checkpoints.size(); ++i)
        m = std::max(m, checkpoints[i].ratio);
    return m;
}

double DensityEstimate::lower_proxy() const
{
    double m = INFINITY;
    for (std::size_t i = checkpoints.size() / 2; i < checkpoints.size(); ++i)
        m = std::min(m, checkpoints[i].ratio);
    return m;
}

double DensityEstimate::ratio_at(std::uint64_t x) const
{
    for (const auto& c : checkpoints)
        if (c.x == x)
            return c.ratio;
    throw RangeError("no checkpoint at x = " + std::to_string(x));
}

std::int64_t DensityEstimate::count_at(std::uint64_t x) const
{
    for (const auto& c : checkpoints)
        if (c.x == x)
            return c.count;
    throw RangeError("no checkpoint at x = " + std::to_string(x));
}

// ---------------------------------------------------------------------------
// Supports, reciprocal sums, sets of multiples

DensityEstimate support_density(const ArithFunction& f, const CheckpointPlan& plan)
{
    require_within(plan, f.limit(), "support_density");
    return DensityEstimate::from_counts(plan.points(), kernels::omp::count_nonzero(f.table(), plan.points()));
}

std::vector<PartialSum> reciprocal_sum_partial(std::span<const std::uint64_t> set, const CheckpointPlan& plan)
{
    const auto a = normalized_set(set);
    std::vector<PartialSum> out;
    double s = 0.0;
    std::size_t i = 0;
    for (std::uint64_t x : plan.points()) {
        for (; i < a.size() && a[i] <= x; ++i)
            if (a[i] != 0)
                s += 1.0 / static_cast<double>(a[i]);
        out.push_back({x, s});
    }
    return out;
}

std::vector<PartialSum> reciprocal_sum_partial(const ArithFunction& f, const CheckpointPlan& plan)
{
    require_within(plan, f.limit(), "reciprocal_sum_partial");
    return reciprocal_sum_partial(f.support(), plan);
}

MultiplesResult set_of_multiples(std::span<const std::uint64_t> set, const CheckpointPlan& plan)
{
    const std::uint64_t limit = plan.back();
    auto a = normalized_set(set);
    if (a.empty())
        throw ArgumentError("set of multiples needs a nonempty generating set");
    if (a.front() == 0)
        throw ArgumentError("generating set must contain positive integers");
    if (a.back() > limit)
        throw RangeError("generating element " + std::to_string(a.back()) + " exceeds limit " + std::to_string(limit));
    MultiplesResult r;
    r.bitmap.limit = limit;
    r.bitmap.membership = kernels::omp::mark_multiples(a, limit);
    r.bitmap.generating_set = std::move(a);
    r.density = DensityEstimate::from_counts(plan.points(),
                                             kernels::omp::count_flags(r.bitmap.membership, plan.points()));
    return r;
}

MultiplesResult set_of_multiples(std::span<const std::uint64_t> set, std::uint64_t limit)
{
    return set_of_multiples(set, CheckpointPlan::geometric(limit));
}

double heilbronn_rohrbach_bound(std::span<const std::uint64_t> set)
{
    const auto a = normalized_set(set);
    double prod = 1.0;
    for (std::uint64_t x : a) {
        if (x == 0)
            throw ArgumentError("elements must be >= 1");
        if (x == 1)
            return 1.0;
        prod *= 1.0 - 1.0 / static_cast<double>(x);
    }
    return 1.0 - prod;
}

// ---------------------------------------------------------------------------
// Prescribed-divisor classes, three routes

Lemma3Query::Lemma3Query(std::vector<std::uint64_t> a, std::vector<std::uint64_t> s, std::vector<std::uint64_t> t)
    : A(normalized_set(a)), S(normalized_set(s)), T(normalized_set(t))
{
    if (!A.empty() && A.front() == 0)
        throw ArgumentError("A must contain positive integers");
    if (!is_subset(S, A))
        throw ArgumentError("S must be a subset of A");
    if (!is_subset(T, S))
        throw ArgumentError("T must be a subset of S");
}

DensityEstimate lemma3_density_empirical(const Lemma3Query& q, const SieveTables& tables, const CheckpointPlan& plan)
{
    require_within(plan, tables.limit(), "lemma3_density_empirical");
    const auto rest = set_difference(q.A, q.S);
    const auto mu = tables.mu_table();
    const auto counts = kernels::omp::count_where(plan.points(), [&](std::uint64_t n) {
        if (!divisors_from_set_are(n, q.S, rest))
            return false;
        for (std::uint64_t d : q.S) {
            const bool sf = mu[n / d] != 0;
            const bool in_t = std::binary_search(q.T.begin(), q.T.end(), d);
            if (sf != in_t)
                return false;
        }
        return true;
    });
    return DensityEstimate::from_counts(plan.points(), counts);
}

Lemma3Formula lemma3_density_formula(const Lemma3Query& q, const CheckpointPlan& plan)
{
    const std::uint64_t limit = plan.back();
    const std::uint64_t lcm = checked_lcm(q.S);
    const auto rest = set_difference(q.A, q.S);
    const auto free_part = set_difference(q.S, q.T);
    const std::size_t k = free_part.size();
    if (k > 62)
        throw CapacityError("too many free elements in S \\ T");

    std::vector<std::uint64_t> q_points;
    for (std::uint64_t x : plan.points())
        q_points.push_back(x / lcm);
    const std::uint64_t q_max = limit / lcm;

    Lemma3Formula out;
    std::vector<std::int64_t> combined(plan.size(), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Lemma3Term term;
        term.U = q.T;
        for (std::size_t b = 0; b < k; ++b)
            if (mask >> b & 1)
                term.U.push_back(free_part[b]);
        std::sort(term.U.begin(), term.U.end());
        term.sign = (std::popcount(mask) % 2 == 0) ? 1 : -1;
        term.lcm = lcm;

        std::vector<std::uint64_t> excluded;
        for (std::uint64_t a : rest) {
            const std::uint64_t r = a / std::gcd(a, lcm);
            if (r <= q_max)
                excluded.push_back(r);
        }
        for (std::uint64_t e : term.U) {
            const std::uint64_t cof = lcm / e;
            // h^2 / gcd(h^2, L/e) >= h^2 / (L/e), so h^2 <= limit / e suffices.
            for (std::uint64_t h = 2; h * h <= limit / e; ++h) {
                const std::uint64_t h2 = h * h;
                const std::uint64_t r = h2 / std::gcd(h2, cof);
                if (r <= q_max)
                    excluded.push_back(r);
            }
        }
        excluded = normalized_set(excluded);
        term.excluded_size = excluded.size();

        term.counts.assign(plan.size(), 0);
        if (q_max >= 1) {
            std::vector<std::int64_t> marked(plan.size(), 0);
            if (!excluded.empty()) {
                const auto flags = kernels::omp::mark_multiples(excluded, q_max);
                marked = kernels::omp::count_flags(flags, q_points);
            }
            for (std::size_t i = 0; i < plan.size(); ++i)
                term.counts[i] = static_cast<std::int64_t>(q_points[i]) - marked[i];
        }
        for (std::size_t i = 0; i < plan.size(); ++i)
            combined[i] += term.sign * term.counts[i];
        out.terms.push_back(std::move(term));
    }
    out.combined = DensityEstimate::from_counts(plan.points(), combined);
    return out;
}

DensityEstimate chi_expansion_count(const Lemma3Query& q, const SieveTables& tables, const CheckpointPlan& plan)
{
    require_within(plan, tables.limit(), "chi_expansion_count");
    const auto rest = set_difference(q.A, q.S);
    const auto free_part = set_difference(q.S, q.T);
    const std::size_t k = free_part.size();
    if (k > kChiExpansionLimit)
        throw CapacityError("chi expansion over 2^" + std::to_string(k) + " terms exceeds the guard 2^" +
                            std::to_string(kChiExpansionLimit));
    const auto mu = tables.mu_table();
    const std::size_t masks = std::size_t{1} << k;

    // hist[mask] counts n satisfying (i) with every n/e (e in T) squarefree
    // and exactly the free elements in `mask` giving squarefree quotients.
    std::vector<std::int64_t> hist(masks, 0);
    std::vector<std::int64_t> counts;
    std::uint64_t n = 1;
    for (std::uint64_t x : plan.points()) {
        for (; n <= x; ++n) {
            if (!divisors_from_set_are(n, q.S, rest))
                continue;
            bool all_t = true;
            for (std::uint64_t e : q.T)
                all_t = all_t && mu[n / e] != 0;
            if (!all_t)
                continue;
            std::size_t mask = 0;
            for (std::size_t b = 0; b < k; ++b)
                if (mu[n / free_part[b]] != 0)
                    mask |= std::size_t{1} << b;
            ++hist[mask];
        }
        // Superset sums: term[W] = #{n : (i), n/e squarefree for e in T cup W}.
        std::vector<std::int64_t> term(hist);
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t m = 0; m < masks; ++m)
                if (!(m >> b & 1))
                    term[m] += term[m | (std::size_t{1} << b)];
        std::int64_t total = 0;
        for (std::size_t w = 0; w < masks; ++w)
            total += (std::popcount(w) % 2 == 0 ? 1 : -1) * term[w];
        counts.push_back(total);
    }
    return DensityEstimate::from_counts(plan.points(), counts);
}

// ---------------------------------------------------------------------------
// Mean values, Wintner, Kronecker

DensityEstimate mean_value(const ArithFunction& f, const CheckpointPlan& plan, bool absolute)
{
    require_within(plan, f.limit(), "mean_value");
    std::vector<std::int64_t> sums;
    std::int64_t s = 0;
    std::uint64_t n = 1;
    for (std::uint64_t x : plan.points()) {
        for (; n <= x; ++n) {
            std::int64_t v = f[n];
            if (absolute) {
                if (v == INT64_MIN)
                    throw OverflowError("absolute value overflows", n);
                v = v < 0 ? -v : v;
            }
            if (__builtin_add_overflow(s, v, &s))
                throw OverflowError("partial sum overflows", n);
        }
        sums.push_back(s);
    }
    return DensityEstimate::from_counts(plan.points(), sums);
}

WintnerSums wintner_prediction(const ArithFunction& g, std::uint64_t y)
{
    if (y > g.limit())
        throw RangeError("wintner bound y exceeds the function range");
    WintnerSums w;
    for (std::uint64_t n = 1; n <= y; ++n) {
        const double v = static_cast<double>(g[n]) / static_cast<double>(n);
        w.signed_sum += v;
        w.absolute_sum += std::abs(v);
    }
    return w;
}

KroneckerReport kronecker_check(const ArithFunction& h, const CheckpointPlan& plan, double g_tolerance,
                                double h_tolerance)
{
    require_within(plan, h.limit(), "kronecker_check");
    KroneckerReport r;
    double g = 0.0;
    std::int64_t hs = 0;
    std::uint64_t n = 1;
    for (std::uint64_t x : plan.points()) {
        for (; n <= x; ++n) {
            g += static_cast<double>(h[n]) / static_cast<double>(n);
            if (__builtin_add_overflow(hs, h[n], &hs))
                throw OverflowError("Kronecker partial sum overflows", n);
        }
        r.points.push_back({x, g, hs, static_cast<double>(hs) / static_cast<double>(x)});
    }
    const std::size_t k = r.points.size();
    const double g_final = r.points.back().g_sum;
    for (std::size_t i = k / 2; i < k; ++i)
        r.g_tail_oscillation = std::max(r.g_tail_oscillation, std::abs(r.points[i].g_sum - g_final));
    r.final_h_ratio = r.points.back().h_ratio;
    r.verdict = r.g_tail_oscillation < g_tolerance && std::abs(r.final_h_ratio) < h_tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Squarefree densities

double landau_density(std::span<const std::uint64_t> primes)
{
    const auto p = normalized_set(primes);
    if (p.size() != primes.size())
        throw ArgumentError("prime set contains repeats");
    double d = 6.0 / (std::numbers::pi * std::numbers::pi);
    for (std::uint64_t x : p) {
        if (!is_prime_trial(x))
            throw ArgumentError(std::to_string(x) + " is not prime");
        d /= 1.0 + 1.0 / static_cast<double>(x);
    }
    return d;
}

DensityEstimate squarefree_coprime_density(std::span<const std::uint64_t> primes, const CheckpointPlan& plan,
                                           const SieveTables& tables)
{
    require_within(plan, tables.limit(), "squarefree_coprime_density");
    const auto p = normalized_set(primes);
    const auto mu = tables.mu_table();
    const auto counts = kernels::omp::count_where(plan.points(), [&](std::uint64_t n) {
        if (mu[n] == 0)
            return false;
        for (std::uint64_t x : p)
            if (n % x == 0)
                return false;
        return true;
    });
    return DensityEstimate::from_counts(plan.points(), counts);
}

// ---------------------------------------------------------------------------
// Evaporating sets, growth classes

EvaporatingLevel evaporating_level(std::span<const std::uint64_t> set, std::uint64_t threshold,
                                   const CheckpointPlan& plan)
{
    std::vector<std::uint64_t> tail;
    for (std::uint64_t a : normalized_set(set))
        if (a >= threshold && a >= 1 && a <= plan.back())
            tail.push_back(a);
    if (tail.empty()) {
        const std::vector<std::int64_t> zeros(plan.size(), 0);
        return {threshold, DensityEstimate::from_counts(plan.points(), zeros)};
    }
    return {threshold, set_of_multiples(tail, plan).density};
}

std::vector<EvaporatingLevel> evaporating_profile(std::span<const std::uint64_t> set,
                                                  std::span<const std::uint64_t> thresholds,
                                                  const CheckpointPlan& plan)
{
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] < thresholds[i - 1])
            throw ArgumentError("thresholds must be ascending");
    std::vector<EvaporatingLevel> out;
    for (std::uint64_t t : thresholds) {
        if (t > plan.back())
            throw RangeError("threshold " + std::to_string(t) + " exceeds limit");
        out.push_back(evaporating_level(set, t, plan));
    }
    return out;
}

std::vector<GrowthPoint> log_power_growth(std::span<const std::uint64_t> set, double delta, const CheckpointPlan& plan)
{
    if (plan.points().front() < 2)
        throw ArgumentError("growth checkpoints must be >= 2");
    if (!(delta > 0.0))
        throw ArgumentError("delta must be positive");
    const auto a = normalized_set(set);
    std::vector<GrowthPoint> out;
    for (std::uint64_t x : plan.points()) {
        const auto c = static_cast<std::int64_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin());
        const double xd = static_cast<double>(x);
        out.push_back({x, c, static_cast<double>(c) * std::pow(std::log(xd), delta) / xd});
    }
    return out;
}

} // namespace mobius
