#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mobius {

// Default upper bound on the number of table entries a run may allocate.
inline constexpr std::uint64_t kDefaultSieveCeiling = 100'000'000;

// Smallest-prime-factor, Moebius, squarefree and prime tables on [1, limit].
// Built once by build_sieve() and immutable afterwards, so a single instance
// can be shared by any number of readers.
class SieveTables {
public:
    std::uint64_t limit() const noexcept { return limit_; }

    // spf(1) is reported as 1.
    std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }
    int mu(std::uint64_t n) const { return mu_[n]; }
    bool squarefree(std::uint64_t n) const { return mu_[n] != 0; }
    bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == n; }

    // Indexed by n; entry 0 is unused and zero.
    std::span<const std::int8_t> mu_table() const noexcept { return mu_; }
    std::span<const std::uint32_t> spf_table() const noexcept { return spf_; }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }

private:
    friend SieveTables build_sieve(std::uint64_t limit, std::uint64_t ceiling);

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> primes_;
};

// Linear sieve. Throws CapacityError when limit < 2 or limit > ceiling.
SieveTables build_sieve(std::uint64_t limit, std::uint64_t ceiling = kDefaultSieveCeiling);

// Primes p <= bound with p = residue (mod modulus), ascending.
// Throws RangeError if bound exceeds tables.limit(), ArgumentError for a
// residue outside [0, modulus).
std::vector<std::uint64_t> primes_in_progression(const SieveTables& tables, std::uint64_t modulus,
                                                 std::uint64_t residue, std::uint64_t bound);

// Trial-division primality, for validating small user-supplied prime sets
// without tables.
bool is_prime_trial(std::uint64_t n);

} // namespace mobius
