#include "mobius/arithfn.hpp"
#include "mobius/construct.hpp"
#include "mobius/errors.hpp"
#include "mobius/sieve.hpp"

#include <doctest.h>

#include <limits>
#include <numeric>

using namespace mobius;

namespace {

const SieveTables& tables()
{
    static const auto t = build_sieve(100000);
    return t;
}

ArithFunction identity(std::uint64_t n)
{
    return ArithFunction::generate(n, "id", [](std::uint64_t k) { return static_cast<std::int64_t>(k); });
}

} // namespace

TEST_CASE("construction and access")
{
    const ArithFunction f({7, 1, 0, -3}, "f");
    CHECK(f.limit() == 3);
    CHECK(f[0] == 0);
    CHECK(f.label() == "f");
    CHECK(f.support() == std::vector<std::uint64_t>{1, 3});
    CHECK(f.at(3) == -3);
    CHECK_THROWS_AS(f.at(0), RangeError);
    CHECK_THROWS_AS(f.at(4), RangeError);
    CHECK(f.truncated(2).limit() == 2);
    CHECK(f.truncated(2)[1] == 1);
    CHECK(f.relabeled("h").label() == "h");
    CHECK(f == f.relabeled("other"));
}

TEST_CASE("helpers")
{
    CHECK(constant_function(5, 2).support().size() == 5);
    const auto sq = indicator_of_squares(50);
    CHECK(sq.support() == std::vector<std::uint64_t>{1, 4, 9, 16, 25, 36, 49});
    const std::vector<std::uint64_t> members = {2, 3};
    CHECK(indicator(6, members, "i").support() == members);
    const auto mu = moebius_function(tables(), 10);
    CHECK(mu[6] == 1);
    CHECK(mu[4] == 0);
    const std::pair<std::uint64_t, std::int64_t> entries[] = {{1, 1}, {4, -1}};
    const auto s = from_sparse(10, entries, "s");
    CHECK(s[4] == -1);
    CHECK(s.support().size() == 2);
    const auto c = linear_combination(2, constant_function(4, 1), -1, indicator(4, members, "i"));
    CHECK(c.table()[1] == 2);
    CHECK(c[2] == 1);
}

TEST_CASE("tabulate_multiplicative")
{
    MultiplicativeSpec one;
    one.prime_power_rule = [](std::uint64_t, unsigned) { return std::int64_t{1}; };
    CHECK(tabulate_multiplicative(one, tables(), 100) == constant_function(100, 1));

    // -1 on exactly-dividing P primes, 0 on higher powers, +1 off P.
    const auto g = tabulate_multiplicative(nonvanishing_spec({2, 7}), tables(), 100);
    CHECK(g[2] == -1);
    CHECK(g[4] == 1);
    const auto p = tabulate_multiplicative(coprime_support_spec({2}, {5}), tables(), 100);
    CHECK(p[1] == 1);
    CHECK(p[2] == -1);
    CHECK(p[4] == 0);
    CHECK(p[8] == 0);
    CHECK(p[5] == 0);
    CHECK(p[3] == 1);
    CHECK(p[6] == -1);

    const auto cm = tabulate_multiplicative(signed_prime_set_spec({2}), tables(), 100);
    CHECK(cm[8] == -1);
    CHECK(cm[4] == 1);
    CHECK(cm[3] == 0);

    MultiplicativeSpec huge;
    huge.prime_power_rule = [](std::uint64_t, unsigned) { return std::int64_t{1} << 40; };
    try {
        tabulate_multiplicative(huge, tables(), 100);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        CHECK(e.n() == 6);
    }
}

TEST_CASE("transform examples")
{
    const auto n = 100;
    const std::pair<std::uint64_t, std::int64_t> unit[] = {{1, 1}};
    const std::pair<std::uint64_t, std::int64_t> two[] = {{2, 1}};
    CHECK(dirichlet_transform(from_sparse(n, unit, "e")) == constant_function(n, 1));
    CHECK(dirichlet_transform(constant_function(n, 1))[6] == 4);
    CHECK(dirichlet_transform(moebius_function(tables(), n)) == from_sparse(n, unit, "e"));
    CHECK(moebius_transform(constant_function(n, 1), tables()) == from_sparse(n, unit, "e"));
    CHECK(moebius_transform(identity(n), tables())[6] == 2);
    CHECK(naive_transform_oracle(constant_function(n, 1))[12] == 6);
    CHECK(naive_transform_oracle(from_sparse(n, two, "t"))[10] == 1);

    CHECK(truncated_dirichlet(constant_function(n, 1), 2)[6] == 2);
    CHECK(truncated_dirichlet(indicator_of_squares(n), 4)[36] == 2);
    CHECK(truncated_moebius(constant_function(n, 1), 1, tables()) == moebius_function(tables(), n));
    CHECK(truncated_moebius(constant_function(n, 1), 2, tables())[4] == -1);
    const auto g = identity(n);
    CHECK(truncated_dirichlet(g, n) == dirichlet_transform(g));
    CHECK(truncated_dirichlet(g, 10 * n) == dirichlet_transform(g));
    CHECK(truncated_moebius(g, n, tables()) == moebius_transform(g, tables()));
}

TEST_CASE("transform errors")
{
    CHECK_THROWS_AS(naive_transform_oracle(constant_function(kOracleLimit + 1, 1)), CapacityError);
    CHECK_THROWS_AS(truncated_dirichlet(constant_function(10, 1), 0), ArgumentError);
    CHECK_THROWS_AS(moebius_transform(constant_function(200000, 1), tables()), RangeError);
    std::vector<std::int64_t> v(4, std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(dirichlet_transform(ArithFunction(v, "big")), OverflowError);
}

TEST_CASE("pairs")
{
    const std::pair<std::uint64_t, std::int64_t> unit[] = {{1, 1}};
    const auto e = make_pair(from_sparse(1000, unit, "e"), tables());
    CHECK(e.f() == constant_function(1000, 1));
    CHECK(e.f().label() == "f");
    CHECK(e.count_invariant_violations(tables()) == 0);

    const auto m = make_pair(moebius_function(tables(), 1000), tables());
    CHECK(m.f() == from_sparse(1000, unit, "e"));

    const auto d = make_pair(constant_function(1000, 1), tables());
    CHECK(d.f()[720] == 30);

    // A deliberately broken pair is caught by the sampler.
    const MoebiusPair bad(constant_function(1000, 1), constant_function(1000, 1));
    CHECK(bad.count_invariant_violations(tables(), 1000) > 0);
    CHECK(bad.count_invariant_violations(tables(), 50, 1) == bad.count_invariant_violations(tables(), 50, 1));
}
