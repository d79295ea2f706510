#include "mobius/construct.hpp"
#include "mobius/density.hpp"
#include "mobius/errors.hpp"
#include "mobius/sieve.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace mobius;

namespace {

const SieveTables& tables()
{
    static const auto t = build_sieve(1'000'000);
    return t;
}

using Primes = std::vector<std::uint64_t>;

// Exponent of p in n.
unsigned valuation(std::uint64_t n, std::uint64_t p)
{
    unsigned e = 0;
    for (; n % p == 0; n /= p)
        ++e;
    return e;
}

} // namespace

TEST_CASE("factors and products")
{
    CHECK(factor_value(FactorKind::one_minus_inv_p, 2) == 0.5);
    CHECK(factor_value(FactorKind::one_minus_inv_p2, 2) == 0.75);
    CHECK(factor_value(FactorKind::one_plus_inv_p_minus_1, 3) == 1.5);
    CHECK(factor_value(FactorKind::one_minus_inv_p_plus_inv_p2, 2) == 0.75);
    for (auto k : {FactorKind::one_minus_inv_p, FactorKind::one_minus_inv_p2, FactorKind::one_plus_inv_p_minus_1,
                   FactorKind::one_minus_inv_p_plus_inv_p2})
        CHECK(factor_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(factor_kind_from_string("nope"), ArgumentError);
    const Primes p = {2, 3};
    CHECK(product_of_factors(FactorKind::one_minus_inv_p, p) == doctest::Approx(1.0 / 3));
}

TEST_CASE("greedy selection")
{
    const auto pool = primes_in_progression(tables(), 3, 1, 1'000'000);
    const auto one = select_primes_by_product(pool, FactorKind::one_minus_inv_p, 1.0, 0.01);
    CHECK(one.primes.empty());
    CHECK(one.achieved == 1.0);

    const auto zero = select_primes_by_product(pool, FactorKind::one_minus_inv_p, 0.0, 0.01);
    CHECK(zero.primes.size() == pool.size());
    CHECK(zero.achieved > 0.0);

    const auto half = select_primes_by_product(pool, FactorKind::one_minus_inv_p, 0.5, 0.01);
    // Independent greedy run over the same pool.
    CHECK(half.primes.size() == 140);
    CHECK(Primes(half.primes.begin(), half.primes.begin() + 8) == Primes{7, 13, 19, 31, 37, 43, 61, 67});
    CHECK(half.achieved == doctest::Approx(0.5097284197645561).epsilon(1e-12));
    CHECK(half.achieved >= 0.5);
    CHECK(half.achieved <= 0.51);
    CHECK(std::abs(half.achieved - product_of_factors(FactorKind::one_minus_inv_p, half.primes)) <= 1e-12);
    CHECK(half.pool_bound == pool.back());

    const Primes small = {7, 13};
    try {
        select_primes_by_product(small, FactorKind::one_minus_inv_p, 0.5, 0.01);
        FAIL("expected an insufficient pool");
    } catch (const InsufficientPoolError& e) {
        CHECK(e.partial().primes == small);
        CHECK(e.achieved() == doctest::Approx(6.0 / 7 * 12.0 / 13));
    }
    CHECK_THROWS_AS(select_primes_by_product(pool, FactorKind::one_plus_inv_p_minus_1, 0.5, 0.01), ArgumentError);
    CHECK_THROWS_AS(select_primes_by_product(pool, FactorKind::one_minus_inv_p, 1.5, 0.01), ArgumentError);
    CHECK_THROWS_AS(select_primes_by_product(Primes{}, FactorKind::one_minus_inv_p, 0.5, 0.01), ArgumentError);
    CHECK_THROWS_AS(select_primes_by_product(pool, FactorKind::one_minus_inv_p, 0.5, 0.0), ArgumentError);
}

TEST_CASE("Z functions")
{
    CHECK(ZFunction::log()(std::exp(2.0)) == doctest::Approx(2.0));
    CHECK(ZFunction::loglog()(std::exp(std::exp(1.0))) == doctest::Approx(1.0));
    CHECK(ZFunction::log_power(0.5)(std::exp(4.0)) == doctest::Approx(2.0));
    const auto t = ZFunction::table({{2, 0.5}, {10, 1.5}, {100, 3}});
    CHECK(t(2) == 0.5);
    CHECK(t(9.9) == 0.5);
    CHECK(t(10) == 1.5);
    CHECK(t(1e9) == 3);
    CHECK_THROWS_AS(ZFunction::table({{2, 2}, {10, 1}}), ArgumentError);
    CHECK_THROWS_AS(ZFunction::table({}), ArgumentError);
    CHECK(ZFunction::log().describe() == "log");
}

TEST_CASE("prescribed pair, beta < 1")
{
    const std::uint64_t n = 1'000'000;
    const auto r = construct_prescribed_pair(0.6, 0.7, 0.01, n, tables());
    const auto& p = r.selection("P");
    const auto& q = r.selection("Q");
    // Independent reconstruction of both greedy passes.
    CHECK(p.primes == Primes{7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103, 109, 127, 139, 151, 157, 163, 181});
    CHECK(q.primes == Primes{5, 11});
    CHECK(r.start_bound == 2);
    CHECK(r.predicted_f_density == doctest::Approx(0.6069742796306654).epsilon(1e-12));
    CHECK(*r.predicted_g_density == doctest::Approx(0.7036423531225859).epsilon(1e-12));
    CHECK(std::abs(r.predicted_f_density - 0.6) <= 0.01);
    CHECK(std::abs(*r.predicted_g_density - 0.7) <= 0.01);

    const CheckpointPlan last({n});
    // Support counts from a direct marking of P and Q multiples.
    CHECK(support_density(r.pair.f(), last).checkpoints[0].count == 606906);
    CHECK(support_density(r.pair.g(), last).checkpoints[0].count == 703637);

    // Structure of the supports, exhaustively to 10^5.
    for (std::uint64_t m = 1; m <= 100000; ++m) {
        bool p_factor = false, p_square = false, q_factor = false;
        for (auto x : p.primes) {
            p_factor = p_factor || m % x == 0;
            p_square = p_square || m % (x * x) == 0;
        }
        for (auto x : q.primes)
            q_factor = q_factor || m % x == 0;
        REQUIRE((r.pair.f()[m] == 0) == p_factor);
        REQUIRE((r.pair.g()[m] != 0) == (!q_factor && !p_square));
    }
}

TEST_CASE("prescribed pair, beta = 1")
{
    const std::uint64_t n = 1'000'000;
    const auto r = construct_prescribed_pair(0.5, 1.0, 0.01, n, tables());
    CHECK(r.selection("P").primes.size() == 234);
    CHECK(r.predicted_f_density == doctest::Approx(0.5098846592072149).epsilon(1e-12));
    CHECK(*r.predicted_g_density == 1.0);
    CHECK(support_density(r.pair.g(), CheckpointPlan({n})).final_ratio == 1.0);
    // n with no P prime to the first power, counted independently.
    CHECK(support_density(r.pair.f(), CheckpointPlan({n})).checkpoints[0].count == 513093);
    const auto& p = r.selection("P").primes;
    for (std::uint64_t m = 1; m <= 100000; ++m) {
        bool exact = false;
        for (auto x : p)
            exact = exact || valuation(m, x) == 1;
        REQUIRE((r.pair.f()[m] == 0) == exact);
    }

    const auto trivial = construct_prescribed_pair(1.0, 1.0, 0.01, 100000, tables());
    CHECK(trivial.selection("P").primes.empty());
    CHECK(trivial.pair.g().support().size() == 100000);
    CHECK(trivial.pair.f()[12] == 6);

    const auto q_only = construct_prescribed_pair(1.0, 0.7, 0.01, n, tables());
    CHECK(q_only.selection("P").primes.empty());
    CHECK(q_only.selection("Q").primes == Primes{5, 11, 29});
    CHECK(*q_only.predicted_g_density >= 0.7);
    CHECK(*q_only.predicted_g_density <= 0.71);
}

TEST_CASE("prescribed pair errors")
{
    CHECK_THROWS_AS(construct_prescribed_pair(1.2, 0.5, 0.01, 1000, tables()), ArgumentError);
    CHECK_THROWS_AS(construct_prescribed_pair(0.5, -0.1, 0.01, 1000, tables()), ArgumentError);
    CHECK_THROWS_AS(construct_prescribed_pair(0.5, 0.5, 0.01, 2'000'000, tables()), RangeError);
    // The 1 - 1/p + 1/p^2 product over p = 1 mod 3 below 10^6 stops near 0.39.
    CHECK_THROWS_AS(construct_prescribed_pair(0.3, 1.0, 0.01, 1'000'000, tables()), InsufficientPoolError);
    const auto zero = construct_prescribed_pair(0.0, 0.5, 0.01, 100000, tables());
    CHECK(zero.predicted_f_density > 0.0);
    CHECK(zero.selection("P").primes.size() == primes_in_progression(tables(), 3, 1, 100000).size());
}

TEST_CASE("greedy thin support pair")
{
    const auto r = greedy_thin_support_pair(ZFunction::log(), 1'000'000, tables());
    const auto& p = r.selection("P").primes;
    // Hand run: 2 is skipped since 1 >= log 2.
    CHECK(Primes(p.begin(), p.begin() + 6) == Primes{3, 5, 7, 11, 13, 17});
    CHECK(p.size() == 78497);
    CHECK_FALSE(r.predicted_g_density.has_value());
    CHECK(r.product_trace.size() == p.size());
    CHECK(r.pair.g()[1] == 1);
    CHECK(r.pair.g()[3] == -1);
    CHECK(r.pair.g()[9] == 1);
    CHECK(r.pair.g()[2] == 0);
    // f vanishes when some P prime exactly divides n.
    const std::set<std::uint64_t> in_p(p.begin(), p.end());
    for (std::uint64_t m = 2; m <= 100000; ++m) {
        bool exact = false;
        for (std::uint64_t k = m; k > 1;) {
            const std::uint64_t q = tables().spf(k);
            const unsigned e = valuation(k, q);
            exact = exact || (e == 1 && in_p.count(q));
            while (k % q == 0)
                k /= q;
        }
        if (exact)
            REQUIRE(r.pair.f()[m] == 0);
    }
    // Support counts by factoring every n (odd exponent of a P prime kills f).
    const auto d = support_density(r.pair.f(), CheckpointPlan({10000, 1'000'000}));
    CHECK(d.checkpoints[0].count == 170);
    CHECK(d.checkpoints[1].count == 1707);
    CHECK(d.checkpoints[1].ratio < support_density(r.pair.f(), CheckpointPlan({10000})).final_ratio);

    const auto flat = greedy_thin_support_pair(ZFunction::table({{2, 0.5}}), 10000, tables());
    CHECK(flat.selection("P").primes.empty());
    CHECK(flat.pair.f() == constant_function(10000, 1));
    CHECK_THROWS_AS(greedy_thin_support_pair(ZFunction::log(), 2'000'000, tables()), RangeError);
}
