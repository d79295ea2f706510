#include "mobius/sieve.hpp"

#include "mobius/errors.hpp"

#include <string>

namespace mobius {

SieveTables build_sieve(std::uint64_t limit, std::uint64_t ceiling)
{
    if (limit < 2)
        throw CapacityError("sieve limit must be at least 2, got " + std::to_string(limit));
    if (limit > ceiling)
        throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds the memory ceiling " +
                            std::to_string(ceiling));
    if (limit >= UINT32_MAX)
        throw CapacityError("sieve limit must fit in 32 bits");

    SieveTables t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);
    t.mu_.assign(limit + 1, 0);
    t.spf_[1] = 1;
    t.mu_[1] = 1;
    // A composite n = p * m is visited exactly once, from m with p <= spf(m).
    for (std::uint64_t m = 2; m <= limit; ++m) {
        if (t.spf_[m] == 0) {
            t.spf_[m] = static_cast<std::uint32_t>(m);
            t.mu_[m] = -1;
            t.primes_.push_back(static_cast<std::uint32_t>(m));
        }
        const std::uint32_t sm = t.spf_[m];
        for (std::uint32_t p : t.primes_) {
            if (p > sm || static_cast<std::uint64_t>(p) * m > limit)
                break;
            const std::uint64_t n = p * m;
            t.spf_[n] = p;
            t.mu_[n] = (p == sm) ? 0 : static_cast<std::int8_t>(-t.mu_[m]);
        }
    }
    return t;
}

std::vector<std::uint64_t> primes_in_progression(const SieveTables& tables, std::uint64_t modulus,
                                                 std::uint64_t residue, std::uint64_t bound)
{
    if (modulus == 0)
        throw ArgumentError("modulus must be positive");
    if (residue >= modulus)
        throw ArgumentError("residue must lie in [0, modulus)");
    if (bound > tables.limit())
        throw RangeError("bound " + std::to_string(bound) + " exceeds sieve limit " +
                         std::to_string(tables.limit()));
    std::vector<std::uint64_t> out;
    for (std::uint32_t p : tables.primes()) {
        if (p > bound)
            break;
        if (p % modulus == residue)
            out.push_back(p);
    }
    return out;
}

bool is_prime_trial(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

} // namespace mobius
