#include "mobius/errors.hpp"
#include "mobius/kernels.hpp"

#include <algorithm>
#include <limits>

namespace mobius::kernels::serial {

namespace {

using wide = __int128;

constexpr wide kMin = std::numeric_limits<std::int64_t>::min();
constexpr wide kMax = std::numeric_limits<std::int64_t>::max();

} // namespace

std::vector<std::int64_t> divisor_sum(std::span<const std::int64_t> values,
                                      std::span<const std::int8_t> cofactor_weight,
                                      std::uint64_t max_divisor)
{
    const std::uint64_t limit = values.empty() ? 0 : values.size() - 1;
    const std::uint64_t dmax = std::min(max_divisor, limit);
    const bool weighted = !cofactor_weight.empty();

    std::vector<wide> acc(limit + 1, 0);
    for (std::uint64_t d = 1; d <= dmax; ++d) {
        const std::int64_t v = values[d];
        if (v == 0)
            continue;
        for (std::uint64_t k = 1, n = d; n <= limit; ++k, n += d) {
            if (weighted) {
                const int w = cofactor_weight[k];
                if (w != 0)
                    acc[n] += static_cast<wide>(w) * v;
            } else {
                acc[n] += v;
            }
        }
    }

    std::vector<std::int64_t> out(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (acc[n] < kMin || acc[n] > kMax)
            throw OverflowError("divisor sum leaves the 64-bit range", n);
        out[n] = static_cast<std::int64_t>(acc[n]);
    }
    return out;
}

std::vector<std::uint8_t> mark_multiples(std::span<const std::uint64_t> set, std::uint64_t limit)
{
    std::vector<std::uint8_t> flags(limit + 1, 0);
    for (std::uint64_t a : set) {
        if (a == 0)
            continue;
        for (std::uint64_t n = a; n <= limit; n += a)
            flags[n] = 1;
    }
    return flags;
}

std::vector<std::int64_t> count_flags(std::span<const std::uint8_t> flags,
                                      std::span<const std::uint64_t> points)
{
    std::vector<std::int64_t> counts;
    counts.reserve(points.size());
    std::int64_t running = 0;
    std::uint64_t n = 1;
    for (std::uint64_t x : points) {
        for (; n <= x; ++n)
            running += flags[n] != 0;
        counts.push_back(running);
    }
    return counts;
}

std::vector<std::int64_t> count_nonzero(std::span<const std::int64_t> values,
                                        std::span<const std::uint64_t> points)
{
    std::vector<std::int64_t> counts;
    counts.reserve(points.size());
    std::int64_t running = 0;
    std::uint64_t n = 1;
    for (std::uint64_t x : points) {
        for (; n <= x; ++n)
            running += values[n] != 0;
        counts.push_back(running);
    }
    return counts;
}

} // namespace mobius::kernels::serial
