#include "mobius/errors.hpp"
#include "mobius/experiment.hpp"
#include "mobius/io.hpp"
#include "mobius/sieve.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace mobius;

namespace {

const SieveTables& tables()
{
    static const auto t = build_sieve(1'000'000);
    return t;
}

CheckpointPlan plan(std::uint64_t n)
{
    return CheckpointPlan::geometric(n);
}

bool has(const ExperimentReport& r, std::string_view id)
{
    return std::any_of(r.criteria.begin(), r.criteria.end(), [&](const Criterion& c) { return c.id == id; });
}

} // namespace

TEST_CASE("criteria")
{
    CHECK(holds(1, Relation::lt, 2));
    CHECK_FALSE(holds(2, Relation::lt, 2));
    CHECK(holds(2, Relation::le, 2));
    CHECK(holds(3, Relation::gt, 2));
    CHECK(holds(2, Relation::ge, 2));
    CHECK(holds(0, Relation::eq, 0));
    CHECK_FALSE(holds(std::nan(""), Relation::le, 1));
    CHECK(Criterion::check("a", 1, Relation::lt, 2).status == Status::pass);
    CHECK(Criterion::check("a", 3, Relation::lt, 2).status == Status::fail);
    CHECK(Criterion::inconclusive("a", 3, Relation::lt, 2, "n").status == Status::inconclusive);
    for (auto s : {Status::pass, Status::fail, Status::inconclusive})
        CHECK(status_from_string(to_string(s)) == s);
    for (auto r : {Relation::lt, Relation::le, Relation::gt, Relation::ge, Relation::eq})
        CHECK(relation_from_string(to_string(r)) == r);
    CHECK_THROWS_AS(status_from_string("maybe"), FormatError);

    ExperimentReport r;
    r.name = "x";
    r.criteria = {Criterion::check("ok", 0, Relation::eq, 0), Criterion::inconclusive("open", 1, Relation::lt, 0, "")};
    CHECK(r.passed());
    CHECK(r.criterion("open").status == Status::inconclusive);
    CHECK_THROWS_AS(r.criterion("missing"), ArgumentError);
    r.criteria.push_back(Criterion::check("bad", 1, Relation::eq, 0));
    CHECK_FALSE(r.passed());
    CHECK(statistical_slack(10000) == doctest::Approx(0.03));
}

TEST_CASE("presets")
{
    for (const auto& n : g_preset_names())
        CHECK(g_preset(n, tables(), 1000).limit() == 1000);
    CHECK(g_preset("unit-minus-two", tables(), 10)[2] == -1);
    CHECK(g_preset("one-minus-four", tables(), 10)[4] == -1);
    CHECK(g_preset("primes", tables(), 10).support() == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK_THROWS_AS(g_preset("cubes", tables(), 10), ArgumentError);
}

TEST_CASE("positive support density from a thin supp(g)")
{
    const auto unit = run_theorem1(g_preset("unit", tables(), 100000), tables(), plan(100000));
    CHECK(unit.passed());
    CHECK(unit.series_named("supp_f_density").points.back().value == 1.0);
    CHECK(unit.series_named("unique_min_divisor_density").points.back().value == 1.0);

    const auto sq = run_theorem1(g_preset("squares", tables(), 1'000'000), tables(), plan(1'000'000));
    CHECK(sq.passed());
    CHECK(sq.warnings.empty());
    // n whose only square divisor is 1 are the squarefree n.
    CHECK(*sq.series_named("unique_min_divisor_density").points.back().count == 607926);
    CHECK(sq.criterion("tail_profile_nonincreasing").status == Status::pass);
    CHECK(sq.criterion("tail_union_bound").status == Status::pass);
    CHECK(sq.criterion("pair_invariant").status == Status::pass);

    const auto odd = run_theorem1(g_preset("unit-minus-two", tables(), 100000), tables(), plan(100000));
    CHECK(odd.passed());
    CHECK(odd.series_named("supp_f_density").points.back().value == 0.5);

    // Not thin: the run still completes and records the precondition warning.
    const auto mu = run_theorem1(g_preset("mu", tables(), 100000), tables(), plan(100000));
    CHECK_FALSE(mu.warnings.empty());

    CHECK_THROWS_AS(run_theorem1(g_preset("unit", tables(), 1000), tables(), plan(100000)), RangeError);
}

TEST_CASE("mean value of |f|")
{
    const auto unit = run_theorem2(g_preset("unit", tables(), 100000), tables(), plan(100000));
    CHECK(unit.passed());
    for (const auto& p : unit.series_named("lambda_y").points)
        CHECK(p.value == 1.0);
    CHECK(unit.series_named("mean_abs_f").points.back().value == 1.0);

    Theorem2Options o;
    o.reference_abs_mean = 1.6449;
    const auto sq = run_theorem2(g_preset("squares", tables(), 1'000'000), tables(), plan(1'000'000), o);
    CHECK(sq.passed());
    CHECK(sq.criterion("mean_abs_f_matches_reference").status == Status::pass);
    CHECK(sq.criterion("lambda_monotone").status == Status::pass);
    CHECK(sq.criterion("lambda_cauchy_gaps").status == Status::pass);
    CHECK(sq.criterion("wintner_mean").status == Status::pass);
    CHECK(sq.criterion("restricted_mean_lower_bound").status == Status::pass);
    const auto& lambda = sq.series_named("lambda_y").points;
    for (std::size_t i = 1; i < lambda.size(); ++i)
        CHECK(lambda[i].value >= lambda[i - 1].value);
    CHECK(std::abs(lambda.back().value - std::numbers::pi * std::numbers::pi / 6) < 0.01);

    const auto four = run_theorem2(g_preset("one-minus-four", tables(), 100000), tables(), plan(100000));
    CHECK(four.passed());
    CHECK(four.series_named("mean_abs_f").points.back().value == 0.75);
    CHECK(four.criterion("lambda_monotone").status == Status::inconclusive);

    const auto mu = run_theorem2(g_preset("mu", tables(), 100000), tables(), plan(100000));
    CHECK(mu.criterion("restricted_mean_lower_bound").status == Status::inconclusive);
    CHECK_FALSE(mu.warnings.empty());
}

TEST_CASE("greedy thin pair experiment")
{
    const auto r = run_prop_best(ZFunction::log(), tables(), plan(1'000'000));
    CHECK(r.passed());
    CHECK(r.criterion("reciprocal_sum_below_z").status == Status::pass);
    CHECK(r.criterion("supp_f_density_decreasing").status == Status::pass);
    CHECK(r.criterion("supp_f_density_drop_two_decades").status == Status::pass);
    CHECK(r.params.at("x0_observed") == "100");
    CHECK(r.params.at("P_prefix").rfind("3,5,7,11,13,17,", 0) == 0);

    const auto flat = run_prop_best(ZFunction::table({{2, 0.5}}), tables(), plan(100000));
    CHECK(flat.passed());
    CHECK(flat.params.at("P_size") == "0");
    CHECK(flat.criterion("supp_f_density_decreasing").status == Status::inconclusive);
    CHECK(flat.criterion("reciprocal_sum_below_z").status == Status::inconclusive);
    CHECK_FALSE(flat.warnings.empty());
    CHECK(flat.series_named("supp_f_density_decades").points.back().value == 1.0);
}

TEST_CASE("prescribed densities experiment")
{
    for (auto [a, b] : {std::pair{0.6, 0.7}, std::pair{1.0, 1.0}, std::pair{0.5, 1.0}}) {
        const auto r = run_theorem3(a, b, tables(), plan(1'000'000));
        CAPTURE(a);
        CAPTURE(b);
        CHECK(r.passed());
        for (const auto& c : r.criteria)
            CHECK(c.status == Status::pass);
    }
    const auto one = run_theorem3(1.0, 1.0, tables(), plan(1'000'000));
    CHECK(one.series_named("supp_f_density").points.back().value == 1.0);
    CHECK(one.series_named("supp_g_density").points.back().value == 1.0);
    const auto half = run_theorem3(0.5, 1.0, tables(), plan(1'000'000));
    CHECK(half.series_named("supp_g_density").points.back().value == 1.0);
    const auto zero = run_theorem3(0.0, 0.5, tables(), plan(100000));
    CHECK(zero.criterion("supp_f_predicted_vs_target").status == Status::inconclusive);
    CHECK_THROWS_AS(run_theorem3(0.3, 1.0, tables(), plan(1'000'000)), InsufficientPoolError);
}

TEST_CASE("primes demo")
{
    const auto small = run_primes_demo(10, tables(), plan(10000));
    CHECK(small.passed());
    // First prime where sum_{10 < p <= x} 1/p passes 1, from a direct prime walk.
    CHECK(small.params.at("tail_crossing_prime") == "857");
    CHECK(small.criterion("tail_prime_sum_exceeds_one").status == Status::pass);
    CHECK(small.criterion("restricted_ratio_lower_bound").status == Status::pass);
    const auto big = run_primes_demo(10, tables(), plan(1'000'000));
    for (const auto& p : big.series_named("restricted_ratio").points)
        CHECK(p.value > 0.999);
    const auto no_cross = run_primes_demo(1000, tables(), plan(2000));
    CHECK(no_cross.criterion("tail_prime_sum_exceeds_one").status == Status::inconclusive);
    CHECK_THROWS_AS(run_primes_demo(1, tables(), plan(10000)), ArgumentError);
}

TEST_CASE("lemma checks")
{
    const auto r = run_lemma_checks(tables(), plan(100000));
    CHECK(r.passed());
    CHECK(r.params.at("lemma3_pairs") == "27");
    CHECK(has(r, "landau{2,3,5,7}"));
    CHECK(has(r, "landau{}"));
    CHECK(r.criterion("lemma3_three_route_agreement").status == Status::pass);
    CHECK(r.criterion("lemma3_classes_partition").status == Status::pass);
}

TEST_CASE("reports are reproducible and self-verifying")
{
    const auto p = plan(100000);
    auto a = run_all(tables(), p, 99);
    auto b = run_all(tables(), p, 99);
    REQUIRE(a.size() == std::size(kExperimentNames));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == kExperimentNames[i]);
        CHECK(io::comparable(a[i]) == io::comparable(b[i]));
        const auto back = io::report_from_json(io::to_json(a[i]));
        const auto again = io::recompute_verdict(back);
        REQUIRE(again.size() == a[i].criteria.size());
        for (std::size_t k = 0; k < again.size(); ++k)
            CHECK(again[k].status == a[i].criteria[k].status);
    }
    CHECK(a.back().params.at("seed") == "99");
    const auto c = run_all(tables(), p, 100);
    CHECK(io::comparable(c.back()) != io::comparable(a.back()));
}
