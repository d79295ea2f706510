#pragma once

// Hot loops behind the transforms and the density counters. Every kernel has
// a serial reference implementation and an OpenMP implementation with the same
// contract; the OpenMP versions are what the library calls, the serial ones
// are kept for the equivalence tests and the benchmark.
//
// Arrays are indexed by n, so a table on [1, N] has N + 1 entries and entry 0
// is ignored.

#include <cstdint>
#include <span>
#include <vector>

namespace mobius::kernels {

// out[n] = sum over d | n, d <= max_divisor of w(n / d) * values[d], where
// w(k) = cofactor_weight[k] or w = 1 when cofactor_weight is empty.
// Sums are formed exactly; a result outside int64 raises OverflowError naming
// the smallest such n.
namespace serial {
std::vector<std::int64_t> divisor_sum(std::span<const std::int64_t> values,
                                      std::span<const std::int8_t> cofactor_weight,
                                      std::uint64_t max_divisor);

// flags[n] = 1 iff some element of `set` divides n, for n in [1, limit].
std::vector<std::uint8_t> mark_multiples(std::span<const std::uint64_t> set, std::uint64_t limit);

// counts[i] = #{1 <= n <= points[i] : flags[n] != 0}; points ascending.
std::vector<std::int64_t> count_flags(std::span<const std::uint8_t> flags,
                                      std::span<const std::uint64_t> points);

// Same as count_flags for values[n] != 0.
std::vector<std::int64_t> count_nonzero(std::span<const std::int64_t> values,
                                        std::span<const std::uint64_t> points);
} // namespace serial

namespace omp {
std::vector<std::int64_t> divisor_sum(std::span<const std::int64_t> values,
                                      std::span<const std::int8_t> cofactor_weight,
                                      std::uint64_t max_divisor);
std::vector<std::uint8_t> mark_multiples(std::span<const std::uint64_t> set, std::uint64_t limit);
std::vector<std::int64_t> count_flags(std::span<const std::uint8_t> flags,
                                      std::span<const std::uint64_t> points);
std::vector<std::int64_t> count_nonzero(std::span<const std::int64_t> values,
                                        std::span<const std::uint64_t> points);
} // namespace omp

// Number of worker threads the OpenMP kernels will use (1 without OpenMP).
int max_threads();

// counts[i] = #{1 <= n <= points[i] : pred(n)}; points nondecreasing.
namespace serial {
template <typename Pred>
std::vector<std::int64_t> count_where(std::span<const std::uint64_t> points, Pred&& pred)
{
    std::vector<std::int64_t> counts;
    counts.reserve(points.size());
    std::int64_t running = 0;
    std::uint64_t n = 1;
    for (std::uint64_t x : points) {
        for (; n <= x; ++n)
            running += pred(n) ? 1 : 0;
        counts.push_back(running);
    }
    return counts;
}
} // namespace serial

namespace omp {
// Each segment between consecutive checkpoints is reduced in parallel; the
// integer reduction makes the result schedule-independent.
template <typename Pred>
std::vector<std::int64_t> count_where(std::span<const std::uint64_t> points, Pred&& pred)
{
    const auto segments = static_cast<std::int64_t>(points.size());
    std::vector<std::int64_t> counts(points.size(), 0);
    for (std::int64_t s = 0; s < segments; ++s) {
        const std::uint64_t lo = s == 0 ? 1 : points[s - 1] + 1;
        const auto hi = static_cast<std::int64_t>(points[s]);
        std::int64_t c = 0;
#pragma omp parallel for reduction(+ : c) schedule(static)
        for (auto n = static_cast<std::int64_t>(lo); n <= hi; ++n)
            c += pred(static_cast<std::uint64_t>(n)) ? 1 : 0;
        counts[s] = c + (s == 0 ? 0 : counts[s - 1]);
    }
    return counts;
}
} // namespace omp

} // namespace mobius::kernels
