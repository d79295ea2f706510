#include "mobius/arithfn.hpp"

#include "mobius/errors.hpp"
#include "mobius/kernels.hpp"

#include <algorithm>
#include <random>

namespace mobius {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::uint64_t n, const char* what)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError(what, n);
    return r;
}

void require_tables(const SieveTables& tables, std::uint64_t limit)
{
    if (limit > tables.limit())
        throw RangeError("function limit " + std::to_string(limit) + " exceeds sieve limit " +
                         std::to_string(tables.limit()));
}

// Exact divisor sums by trial division up to sqrt(n).
template <typename Weight>
__int128 divisor_sum_at(std::uint64_t n, std::span<const std::int64_t> values, Weight weight)
{
    __int128 s = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        const std::uint64_t e = n / d;
        s += static_cast<__int128>(weight(e)) * values[d];
        if (e != d)
            s += static_cast<__int128>(weight(d)) * values[e];
    }
    return s;
}

} // namespace

ArithFunction::ArithFunction(std::vector<std::int64_t> values, std::string label)
    : values_(std::move(values)), label_(std::move(label))
{
    if (values_.size() < 2)
        throw ArgumentError("an arithmetic function needs at least the value at n = 1");
    values_[0] = 0;
}

ArithFunction ArithFunction::generate(std::uint64_t limit, std::string label,
                                      const std::function<std::int64_t(std::uint64_t)>& fn)
{
    std::vector<std::int64_t> v(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n)
        v[n] = fn(n);
    return ArithFunction(std::move(v), std::move(label));
}

std::int64_t ArithFunction::at(std::uint64_t n) const
{
    if (n == 0 || n > limit())
        throw RangeError("index " + std::to_string(n) + " outside [1, " + std::to_string(limit()) + "]");
    return values_[n];
}

std::vector<std::uint64_t> ArithFunction::support() const
{
    std::vector<std::uint64_t> s;
    for (std::uint64_t n = 1; n < values_.size(); ++n)
        if (values_[n] != 0)
            s.push_back(n);
    return s;
}

ArithFunction ArithFunction::truncated(std::uint64_t new_limit) const
{
    if (new_limit == 0 || new_limit > limit())
        throw RangeError("cannot truncate to " + std::to_string(new_limit));
    return ArithFunction({values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(new_limit + 1)},
                         label_);
}

ArithFunction ArithFunction::relabeled(std::string label) const
{
    ArithFunction copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

MoebiusPair::MoebiusPair(ArithFunction f, ArithFunction g) : f_(std::move(f)), g_(std::move(g))
{
    if (f_.limit() != g_.limit())
        throw ArgumentError("pair members must share one range");
}

std::size_t MoebiusPair::count_invariant_violations(const SieveTables& tables, std::size_t samples,
                                                    std::uint64_t seed) const
{
    require_tables(tables, limit());
    const std::uint64_t n_max = limit();
    std::vector<std::uint64_t> indices;
    if (n_max <= samples) {
        for (std::uint64_t n = 1; n <= n_max; ++n)
            indices.push_back(n);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(1, n_max);
        for (std::size_t i = 0; i < samples; ++i)
            indices.push_back(pick(rng));
    }
    const auto mu = tables.mu_table();
    std::size_t bad = 0;
    for (std::uint64_t n : indices) {
        const __int128 fs = divisor_sum_at(n, g_.table(), [](std::uint64_t) { return 1; });
        const __int128 gs = divisor_sum_at(n, f_.table(), [&](std::uint64_t k) { return mu[k]; });
        if (fs != f_[n] || gs != g_[n])
            ++bad;
    }
    return bad;
}

ArithFunction constant_function(std::uint64_t limit, std::int64_t value)
{
    return ArithFunction(std::vector<std::int64_t>(limit + 1, value), "const(" + std::to_string(value) + ")");
}

ArithFunction indicator(std::uint64_t limit, std::span<const std::uint64_t> members, std::string label)
{
    std::vector<std::int64_t> v(limit + 1, 0);
    for (std::uint64_t m : members)
        if (m >= 1 && m <= limit)
            v[m] = 1;
    return ArithFunction(std::move(v), std::move(label));
}

ArithFunction indicator_of_squares(std::uint64_t limit)
{
    std::vector<std::int64_t> v(limit + 1, 0);
    for (std::uint64_t k = 1; k * k <= limit; ++k)
        v[k * k] = 1;
    return ArithFunction(std::move(v), "squares");
}

ArithFunction moebius_function(const SieveTables& tables, std::uint64_t limit)
{
    require_tables(tables, limit);
    std::vector<std::int64_t> v(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n)
        v[n] = tables.mu(n);
    return ArithFunction(std::move(v), "mu");
}

ArithFunction from_sparse(std::uint64_t limit, std::span<const std::pair<std::uint64_t, std::int64_t>> entries,
                          std::string label)
{
    std::vector<std::int64_t> v(limit + 1, 0);
    for (const auto& [n, value] : entries) {
        if (n == 0)
            throw ArgumentError("arithmetic functions start at n = 1");
        if (n <= limit)
            v[n] = value;
    }
    return ArithFunction(std::move(v), std::move(label));
}

ArithFunction tabulate_multiplicative(const MultiplicativeSpec& spec, const SieveTables& tables,
                                      std::uint64_t limit)
{
    if (!spec.prime_power_rule)
        throw ArgumentError("multiplicative spec has no prime-power rule");
    require_tables(tables, limit);
    std::vector<std::int64_t> v(limit + 1, 0);
    if (limit >= 1)
        v[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint64_t p = tables.spf(n);
        std::uint64_t pe = p;
        unsigned e = 1;
        while ((n / pe) % p == 0) {
            pe *= p;
            ++e;
        }
        const std::uint64_t rest = n / pe;
        if (rest != 1) {
            // Both factors are smaller than n and already tabulated.
            v[n] = checked_mul(v[rest], v[pe], n, "multiplicative tabulation overflows");
            continue;
        }
        if (spec.completely_multiplicative && e > 1)
            v[n] = checked_mul(v[n / p], v[p], n, "multiplicative tabulation overflows");
        else
            v[n] = spec.prime_power_rule(p, e);
    }
    return ArithFunction(std::move(v), spec.label);
}

ArithFunction dirichlet_transform(const ArithFunction& g)
{
    return ArithFunction(kernels::omp::divisor_sum(g.table(), {}, g.limit()), "dirichlet(" + g.label() + ")");
}

ArithFunction moebius_transform(const ArithFunction& f, const SieveTables& tables)
{
    require_tables(tables, f.limit());
    return ArithFunction(kernels::omp::divisor_sum(f.table(), tables.mu_table(), f.limit()),
                         "moebius(" + f.label() + ")");
}

ArithFunction naive_transform_oracle(const ArithFunction& g)
{
    if (g.limit() > kOracleLimit)
        throw CapacityError("naive oracle is limited to N <= " + std::to_string(kOracleLimit));
    std::vector<std::int64_t> v(g.limit() + 1, 0);
    for (std::uint64_t n = 1; n <= g.limit(); ++n) {
        const __int128 s = divisor_sum_at(n, g.table(), [](std::uint64_t) { return 1; });
        if (s > INT64_MAX || s < INT64_MIN)
            throw OverflowError("oracle divisor sum leaves the 64-bit range", n);
        v[n] = static_cast<std::int64_t>(s);
    }
    return ArithFunction(std::move(v), "oracle(" + g.label() + ")");
}

ArithFunction truncated_dirichlet(const ArithFunction& g, std::uint64_t y)
{
    if (y == 0)
        throw ArgumentError("truncation bound y must be positive");
    return ArithFunction(kernels::omp::divisor_sum(g.table(), {}, y),
                         "dirichlet_y" + std::to_string(y) + "(" + g.label() + ")");
}

ArithFunction truncated_moebius(const ArithFunction& f, std::uint64_t y, const SieveTables& tables)
{
    if (y == 0)
        throw ArgumentError("truncation bound y must be positive");
    require_tables(tables, f.limit());
    return ArithFunction(kernels::omp::divisor_sum(f.table(), tables.mu_table(), y),
                         "moebius_y" + std::to_string(y) + "(" + f.label() + ")");
}

MoebiusPair make_pair(const ArithFunction& g, const SieveTables& tables)
{
    require_tables(tables, g.limit());
    MoebiusPair pair(dirichlet_transform(g).relabeled("f"), g);
    if (const auto bad = pair.count_invariant_violations(tables); bad != 0)
        throw std::logic_error("Moebius pair invariant failed at " + std::to_string(bad) + " sampled indices");
    return pair;
}

ArithFunction linear_combination(std::int64_t a, const ArithFunction& x, std::int64_t b, const ArithFunction& y)
{
    if (x.limit() != y.limit())
        throw ArgumentError("linear combination needs functions on the same range");
    std::vector<std::int64_t> v(x.limit() + 1, 0);
    for (std::uint64_t n = 1; n <= x.limit(); ++n) {
        std::int64_t ax = 0, by = 0, s = 0;
        if (__builtin_mul_overflow(a, x[n], &ax) || __builtin_mul_overflow(b, y[n], &by) ||
            __builtin_add_overflow(ax, by, &s))
            throw OverflowError("linear combination overflows", n);
        v[n] = s;
    }
    return ArithFunction(std::move(v), "lincomb");
}

} // namespace mobius
