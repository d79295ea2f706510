#pragma once

#include "mobius/sieve.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mobius {

// Dense exact tabulation of an arithmetic function on [1, limit].
// Immutable once constructed.
class ArithFunction {
public:
    ArithFunction() = default;

    // `values` is indexed by n and must hold limit + 1 entries; entry 0 is
    // ignored and stored as zero.
    ArithFunction(std::vector<std::int64_t> values, std::string label);

    // Builds values[n] = fn(n) for n in [1, limit].
    static ArithFunction generate(std::uint64_t limit, std::string label,
                                  const std::function<std::int64_t(std::uint64_t)>& fn);

    std::uint64_t limit() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
    const std::string& label() const noexcept { return label_; }

    std::int64_t operator[](std::uint64_t n) const { return values_[n]; }
    std::int64_t at(std::uint64_t n) const;

    // Index-by-n view including the unused entry 0.
    std::span<const std::int64_t> table() const noexcept { return values_; }

    // Ascending list of n with value != 0.
    std::vector<std::uint64_t> support() const;

    // Same function on the shorter range [1, new_limit].
    ArithFunction truncated(std::uint64_t new_limit) const;

    ArithFunction relabeled(std::string label) const;

    friend bool operator==(const ArithFunction& a, const ArithFunction& b)
    {
        return a.values_ == b.values_;
    }

private:
    std::vector<std::int64_t> values_;
    std::string label_;
};

// A multiplicative function described by its values at prime powers.
struct MultiplicativeSpec {
    // Value at p^e for e >= 1. When completely_multiplicative is set only
    // e == 1 is ever queried and p^e takes the e-th power of it.
    std::function<std::int64_t(std::uint64_t p, unsigned e)> prime_power_rule;
    bool completely_multiplicative = false;
    // Named prime sets the rule consults; kept for reporting.
    std::map<std::string, std::vector<std::uint64_t>> special_prime_sets;
    std::string label = "multiplicative";
};

// (f, g) with f the Dirichlet transform of g, on a shared range.
class MoebiusPair {
public:
    MoebiusPair(ArithFunction f, ArithFunction g);

    const ArithFunction& f() const noexcept { return f_; }
    const ArithFunction& g() const noexcept { return g_; }
    std::uint64_t limit() const noexcept { return f_.limit(); }

    // Re-checks f(n) = sum_{d|n} g(d) and g(n) = sum_{d|n} mu(n/d) f(d) by
    // trial-division divisor enumeration at `samples` seeded random indices
    // (all indices when the range is smaller). Returns the number of
    // mismatching indices.
    std::size_t count_invariant_violations(const SieveTables& tables, std::size_t samples = 1000,
                                           std::uint64_t seed = 0x5eed) const;

private:
    ArithFunction f_;
    ArithFunction g_;
};

// Common functions on [1, limit].
ArithFunction constant_function(std::uint64_t limit, std::int64_t value);
ArithFunction indicator(std::uint64_t limit, std::span<const std::uint64_t> members,
                        std::string label = "indicator");
ArithFunction indicator_of_squares(std::uint64_t limit);
ArithFunction moebius_function(const SieveTables& tables, std::uint64_t limit);
// Explicit sparse values; entries beyond limit are dropped.
ArithFunction from_sparse(std::uint64_t limit, std::span<const std::pair<std::uint64_t, std::int64_t>> entries,
                          std::string label = "sparse");

// value[n] = product over p^e || n of rule(p, e); value[1] = 1.
ArithFunction tabulate_multiplicative(const MultiplicativeSpec& spec, const SieveTables& tables,
                                      std::uint64_t limit);

// out[n] = sum_{d | n} g[d].
ArithFunction dirichlet_transform(const ArithFunction& g);

// out[n] = sum_{d | n} mu(n/d) f[d].
ArithFunction moebius_transform(const ArithFunction& f, const SieveTables& tables);

// Divisor enumeration by trial division; independent of the sieve-style
// kernels. Guarded to limit <= kOracleLimit.
inline constexpr std::uint64_t kOracleLimit = 100'000;
ArithFunction naive_transform_oracle(const ArithFunction& g);

// out[n] = sum_{d | n, d <= y} g[d]. y above the range behaves as y = limit.
ArithFunction truncated_dirichlet(const ArithFunction& g, std::uint64_t y);

// out[n] = sum_{d | n, d <= y} mu(n/d) f[d].
ArithFunction truncated_moebius(const ArithFunction& f, std::uint64_t y, const SieveTables& tables);

// Pair with f = dirichlet_transform(g), sample-validated on construction.
MoebiusPair make_pair(const ArithFunction& g, const SieveTables& tables);

// Linear combination a*x + b*y with overflow checking (used by tests and the
// CLI alike).
ArithFunction linear_combination(std::int64_t a, const ArithFunction& x, std::int64_t b,
                                 const ArithFunction& y);

} // namespace mobius
