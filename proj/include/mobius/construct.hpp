#pragma once

// Explicit Moebius-pair constructions: pairs with prescribed support
// densities built from multiplicative g, and the greedy pair whose g-support
// has reciprocal sums below a given slowly growing Z(x) while supp(f) thins
// out to density zero.

#include "mobius/arithfn.hpp"
#include "mobius/errors.hpp"
#include "mobius/sieve.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mobius {

enum class FactorKind {
    one_minus_inv_p,             // 1 - 1/p
    one_minus_inv_p2,            // 1 - 1/p^2
    one_plus_inv_p_minus_1,      // 1 + 1/(p-1)
    one_minus_inv_p_plus_inv_p2, // 1 - 1/p + 1/p^2
};

double factor_value(FactorKind kind, std::uint64_t p);
std::string_view to_string(FactorKind kind);
FactorKind factor_kind_from_string(std::string_view name);

// Product of the factors over `primes`, multiplied in the given order.
double product_of_factors(FactorKind kind, std::span<const std::uint64_t> primes);

struct PrimeSelection {
    std::vector<std::uint64_t> primes;
    double target = 0.0;
    double achieved = 1.0;
    FactorKind factor_kind = FactorKind::one_minus_inv_p;
    std::uint64_t pool_bound = 0;
};

// The pool ran out before the running product came within tolerance of the
// target. Carries the selection reached so far.
class InsufficientPoolError : public Error {
public:
    InsufficientPoolError(const std::string& what, PrimeSelection partial)
        : Error(what), partial_(std::move(partial)) {}

    const PrimeSelection& partial() const noexcept { return partial_; }
    double achieved() const noexcept { return partial_.achieved; }

private:
    PrimeSelection partial_;
};

// Downward greedy over the ascending pool: take p whenever the product stays
// >= target, stop once product - target <= tolerance. Target 0 takes the
// whole pool and returns without error.
PrimeSelection select_primes_by_product(std::span<const std::uint64_t> pool, FactorKind kind, double target,
                                        double tolerance);

// Nondecreasing Z on [2, inf): a builtin shape or a step function given by
// breakpoints (x_i, z_i); below the first breakpoint the first value applies.
class ZFunction {
public:
    static ZFunction log();
    static ZFunction loglog();
    static ZFunction log_power(double exponent);
    static ZFunction table(std::vector<std::pair<double, double>> breakpoints);

    double operator()(double x) const;
    std::string describe() const;

private:
    enum class Kind { log, loglog, log_power, table };

    Kind kind_ = Kind::log;
    double exponent_ = 1.0;
    std::vector<std::pair<double, double>> breakpoints_;
};

struct ConstructionReport {
    ConstructionReport(std::string name, MoebiusPair built) : construction(std::move(name)), pair(std::move(built)) {}

    std::string construction;
    MoebiusPair pair;
    std::vector<std::pair<std::string, PrimeSelection>> selections;
    double predicted_f_density = 0.0;
    std::optional<double> predicted_g_density;
    // (alpha', beta') actually reached by the truncated selections.
    std::optional<double> alpha_achieved;
    std::optional<double> beta_achieved;
    // Prescribed pair with beta < 1: smallest prime admitted into P.
    std::uint64_t start_bound = 2;
    // Greedy thin pair: (q, product after admitting q) for every admitted q.
    std::vector<std::pair<std::uint64_t, double>> product_trace;

    const PrimeSelection& selection(std::string_view name) const;
};

inline constexpr double kDefaultGreedyTolerance = 1e-2;

// g at prime powers: -1 at p in P with e = 1, 0 at p in P with e > 1,
// 0 at p in Q, +1 elsewhere.
MultiplicativeSpec coprime_support_spec(std::vector<std::uint64_t> p_set, std::vector<std::uint64_t> q_set);
// g at prime powers: -1 at p in P with e = 1, +1 at p in P with e > 1, +1 elsewhere.
MultiplicativeSpec nonvanishing_spec(std::vector<std::uint64_t> p_set);
// Completely multiplicative, g(p) = -1 on P and 0 off P.
MultiplicativeSpec signed_prime_set_spec(std::vector<std::uint64_t> p_set);

// Pair with supp(f), supp(g) of densities close to (alpha, beta), using the
// pools p = 1 (mod 3) and p = 2 (mod 3) truncated at `limit`.
ConstructionReport construct_prescribed_pair(double alpha, double beta, double tolerance, std::uint64_t limit,
                                             const SieveTables& tables);

ConstructionReport greedy_thin_support_pair(const ZFunction& z, std::uint64_t limit, const SieveTables& tables);

} // namespace mobius
