#include "mobius/errors.hpp"
#include "mobius/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mobius::kernels {

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace omp {

namespace {

using wide = __int128;

constexpr wide kMin = std::numeric_limits<std::int64_t>::min();
constexpr wide kMax = std::numeric_limits<std::int64_t>::max();

// Output blocks are independent, so every n is written by exactly one thread
// and the result does not depend on the schedule.
constexpr std::uint64_t kBlock = 1 << 15;

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

} // namespace

std::vector<std::int64_t> divisor_sum(std::span<const std::int64_t> values,
                                      std::span<const std::int8_t> cofactor_weight,
                                      std::uint64_t max_divisor)
{
    const std::uint64_t limit = values.empty() ? 0 : values.size() - 1;
    const std::uint64_t dmax = std::min(max_divisor, limit);
    const bool weighted = !cofactor_weight.empty();
    const std::uint64_t split = isqrt(limit);

    std::vector<std::int64_t> out(limit + 1, 0);
    if (limit == 0)
        return out;

    const auto blocks = static_cast<std::int64_t>((limit + kBlock) / kBlock);
    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();

#pragma omp parallel
    {
        std::vector<wide> acc(kBlock);
        std::uint64_t local_bad = std::numeric_limits<std::uint64_t>::max();

#pragma omp for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < blocks; ++b) {
            const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(b) * kBlock);
            const std::uint64_t hi = std::min(limit + 1, static_cast<std::uint64_t>(b + 1) * kBlock);
            std::fill(acc.begin(), acc.end(), 0);
            auto add = [&](std::uint64_t n, std::uint64_t d, std::uint64_t k) {
                const std::int64_t v = values[d];
                if (weighted) {
                    const int w = cofactor_weight[k];
                    if (w != 0)
                        acc[n - lo] += static_cast<wide>(w) * v;
                } else {
                    acc[n - lo] += v;
                }
            };

            // Small divisors: walk their multiples inside the block.
            const std::uint64_t small_end = std::min(split, dmax);
            for (std::uint64_t d = 1; d <= small_end; ++d) {
                if (values[d] == 0)
                    continue;
                std::uint64_t k = (lo + d - 1) / d;
                for (std::uint64_t n = k * d; n < hi; n += d, ++k)
                    add(n, d, k);
            }
            // Large divisors d > split: the cofactor k = n / d is below
            // hi / split, and for fixed k the admissible d form an interval.
            if (dmax > split) {
                const std::uint64_t kmax = (hi - 1) / (split + 1);
                for (std::uint64_t k = 1; k <= kmax; ++k) {
                    if (weighted && cofactor_weight[k] == 0)
                        continue;
                    const std::uint64_t d_lo = std::max(split + 1, (lo + k - 1) / k);
                    const std::uint64_t d_hi = std::min(dmax, (hi - 1) / k);
                    for (std::uint64_t d = d_lo; d <= d_hi; ++d)
                        if (values[d] != 0)
                            add(d * k, d, k);
                }
            }

            for (std::uint64_t n = lo; n < hi; ++n) {
                const wide s = acc[n - lo];
                if (s < kMin || s > kMax) {
                    local_bad = std::min(local_bad, n);
                    break;
                }
                out[n] = static_cast<std::int64_t>(s);
            }
        }

#pragma omp critical
        first_bad = std::min(first_bad, local_bad);
    }

    if (first_bad != std::numeric_limits<std::uint64_t>::max())
        throw OverflowError("divisor sum leaves the 64-bit range", first_bad);
    return out;
}

std::vector<std::uint8_t> mark_multiples(std::span<const std::uint64_t> set, std::uint64_t limit)
{
    std::vector<std::uint8_t> flags(limit + 1, 0);
    if (limit == 0)
        return flags;
    const auto blocks = static_cast<std::int64_t>((limit + kBlock) / kBlock);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(b) * kBlock);
        const std::uint64_t hi = std::min(limit + 1, static_cast<std::uint64_t>(b + 1) * kBlock);
        for (std::uint64_t a : set) {
            if (a == 0 || a >= hi)
                continue;
            for (std::uint64_t n = (lo + a - 1) / a * a; n < hi; n += a)
                flags[n] = 1;
        }
    }
    return flags;
}

std::vector<std::int64_t> count_flags(std::span<const std::uint8_t> flags,
                                      std::span<const std::uint64_t> points)
{
    return count_where(points, [&](std::uint64_t n) { return flags[n] != 0; });
}

std::vector<std::int64_t> count_nonzero(std::span<const std::int64_t> values,
                                        std::span<const std::uint64_t> points)
{
    return count_where(points, [&](std::uint64_t n) { return values[n] != 0; });
}

} // namespace omp
} // namespace mobius::kernels
