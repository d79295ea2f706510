#include "mobius/construct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mobius {

namespace {

bool contains(const std::vector<std::uint64_t>& sorted, std::uint64_t p)
{
    return std::binary_search(sorted.begin(), sorted.end(), p);
}

void require_unit_interval(double v, const char* name)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw ArgumentError(std::string(name) + " must lie in [0, 1]");
}

} // namespace

double factor_value(FactorKind kind, std::uint64_t p)
{
    const double x = static_cast<double>(p);
    switch (kind) {
    case FactorKind::one_minus_inv_p:
        return 1.0 - 1.0 / x;
    case FactorKind::one_minus_inv_p2:
        return 1.0 - 1.0 / (x * x);
    case FactorKind::one_plus_inv_p_minus_1:
        return 1.0 + 1.0 / (x - 1.0);
    case FactorKind::one_minus_inv_p_plus_inv_p2:
        return 1.0 - 1.0 / x + 1.0 / (x * x);
    }
    return 1.0;
}

std::string_view to_string(FactorKind kind)
{
    switch (kind) {
    case FactorKind::one_minus_inv_p:
        return "1-1/p";
    case FactorKind::one_minus_inv_p2:
        return "1-1/p^2";
    case FactorKind::one_plus_inv_p_minus_1:
        return "1+1/(p-1)";
    case FactorKind::one_minus_inv_p_plus_inv_p2:
        return "1-1/p+1/p^2";
    }
    return "?";
}

FactorKind factor_kind_from_string(std::string_view name)
{
    for (auto k : {FactorKind::one_minus_inv_p, FactorKind::one_minus_inv_p2, FactorKind::one_plus_inv_p_minus_1,
                   FactorKind::one_minus_inv_p_plus_inv_p2})
        if (to_string(k) == name)
            return k;
    throw ArgumentError("unknown factor kind '" + std::string(name) + "'");
}

double product_of_factors(FactorKind kind, std::span<const std::uint64_t> primes)
{
    double prod = 1.0;
    for (std::uint64_t p : primes)
        prod *= factor_value(kind, p);
    return prod;
}

PrimeSelection select_primes_by_product(std::span<const std::uint64_t> pool, FactorKind kind, double target,
                                        double tolerance)
{
    require_unit_interval(target, "target");
    if (pool.empty())
        throw ArgumentError("prime pool is empty");
    if (!(tolerance > 0.0))
        throw ArgumentError("tolerance must be positive");
    if (kind == FactorKind::one_plus_inv_p_minus_1)
        throw ArgumentError("select_primes_by_product needs factors below 1");

    PrimeSelection sel;
    sel.target = target;
    sel.factor_kind = kind;
    sel.pool_bound = pool.back();
    const bool whole_pool = target == 0.0;

    double achieved = 1.0;
    bool done = !whole_pool && achieved - target <= tolerance;
    for (std::size_t i = 0; i < pool.size() && !done; ++i) {
        const double next = achieved * factor_value(kind, pool[i]);
        if (next < target)
            continue;
        sel.primes.push_back(pool[i]);
        achieved = next;
        done = !whole_pool && achieved - target <= tolerance;
    }
    sel.achieved = product_of_factors(kind, sel.primes);
    if (!done && !whole_pool) {
        std::ostringstream msg;
        msg << "prime pool up to " << sel.pool_bound << " exhausted at product " << sel.achieved << ", target "
            << target << " +/- " << tolerance;
        throw InsufficientPoolError(msg.str(), std::move(sel));
    }
    return sel;
}

// ---------------------------------------------------------------------------

ZFunction ZFunction::log()
{
    return ZFunction{};
}

ZFunction ZFunction::loglog()
{
    ZFunction z;
    z.kind_ = Kind::loglog;
    return z;
}

ZFunction ZFunction::log_power(double exponent)
{
    if (!(exponent > 0.0))
        throw ArgumentError("log-power exponent must be positive");
    ZFunction z;
    z.kind_ = Kind::log_power;
    z.exponent_ = exponent;
    return z;
}

ZFunction ZFunction::table(std::vector<std::pair<double, double>> breakpoints)
{
    if (breakpoints.empty())
        throw ArgumentError("Z table needs at least one breakpoint");
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (breakpoints[i].first <= breakpoints[i - 1].first)
            throw ArgumentError("Z table breakpoints must have increasing x");
        if (breakpoints[i].second < breakpoints[i - 1].second)
            throw ArgumentError("Z table must be nondecreasing");
    }
    ZFunction z;
    z.kind_ = Kind::table;
    z.breakpoints_ = std::move(breakpoints);
    return z;
}

double ZFunction::operator()(double x) const
{
    switch (kind_) {
    case Kind::log:
        return std::log(x);
    case Kind::loglog:
        return std::log(std::log(x));
    case Kind::log_power:
        return std::pow(std::log(x), exponent_);
    case Kind::table: {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x,
                                   [](double v, const auto& bp) { return v < bp.first; });
        if (it == breakpoints_.begin())
            return breakpoints_.front().second;
        return std::prev(it)->second;
    }
    }
    return 0.0;
}

std::string ZFunction::describe() const
{
    switch (kind_) {
    case Kind::log:
        return "log";
    case Kind::loglog:
        return "loglog";
    case Kind::log_power: {
        std::ostringstream s;
        s << "logpow:" << exponent_;
        return s.str();
    }
    case Kind::table:
        return "table(" + std::to_string(breakpoints_.size()) + " breakpoints)";
    }
    return "?";
}

// ---------------------------------------------------------------------------

const PrimeSelection& ConstructionReport::selection(std::string_view name) const
{
    for (const auto& [n, sel] : selections)
        if (n == name)
            return sel;
    throw ArgumentError("no selection named '" + std::string(name) + "'");
}

MultiplicativeSpec coprime_support_spec(std::vector<std::uint64_t> p_set, std::vector<std::uint64_t> q_set)
{
    std::sort(p_set.begin(), p_set.end());
    std::sort(q_set.begin(), q_set.end());
    MultiplicativeSpec spec;
    spec.label = "g_coprime_support";
    spec.prime_power_rule = [p_set, q_set](std::uint64_t p, unsigned e) -> std::int64_t {
        if (contains(p_set, p))
            return e == 1 ? -1 : 0;
        if (contains(q_set, p))
            return 0;
        return 1;
    };
    spec.special_prime_sets = {{"P", p_set}, {"Q", q_set}};
    return spec;
}

MultiplicativeSpec nonvanishing_spec(std::vector<std::uint64_t> p_set)
{
    std::sort(p_set.begin(), p_set.end());
    MultiplicativeSpec spec;
    spec.label = "g_nonvanishing";
    spec.prime_power_rule = [p_set](std::uint64_t p, unsigned e) -> std::int64_t {
        if (contains(p_set, p))
            return e == 1 ? -1 : 1;
        return 1;
    };
    spec.special_prime_sets = {{"P", p_set}};
    return spec;
}

MultiplicativeSpec signed_prime_set_spec(std::vector<std::uint64_t> p_set)
{
    std::sort(p_set.begin(), p_set.end());
    MultiplicativeSpec spec;
    spec.label = "g_signed_prime_set";
    spec.completely_multiplicative = true;
    spec.prime_power_rule = [p_set](std::uint64_t p, unsigned) -> std::int64_t { return contains(p_set, p) ? -1 : 0; };
    spec.special_prime_sets = {{"P", p_set}};
    return spec;
}

ConstructionReport construct_prescribed_pair(double alpha, double beta, double tolerance, std::uint64_t limit,
                                             const SieveTables& tables)
{
    require_unit_interval(alpha, "alpha");
    require_unit_interval(beta, "beta");
    if (limit > tables.limit())
        throw RangeError("construction limit exceeds sieve limit");
    const auto p_pool = primes_in_progression(tables, 3, 1, limit);
    const auto q_pool = primes_in_progression(tables, 3, 2, limit);
    if (p_pool.empty() || q_pool.empty())
        throw InsufficientPoolError("limit too small for the residue-class pools", PrimeSelection{});

    auto select = [&](const char* name, std::span<const std::uint64_t> pool, FactorKind kind, double target) {
        try {
            return select_primes_by_product(pool, kind, target, tolerance);
        } catch (const InsufficientPoolError& e) {
            throw InsufficientPoolError(std::string("selecting ") + name + ": " + e.what(), e.partial());
        }
    };

    if (beta < 1.0) {
        // Doubling search for s with prod_{p in pool, p >= s} (1 - 1/p^2) >= beta.
        std::uint64_t s = 2;
        auto tail_from = [&](std::uint64_t bound) {
            return std::span<const std::uint64_t>(
                std::lower_bound(p_pool.begin(), p_pool.end(), bound), p_pool.end());
        };
        while (product_of_factors(FactorKind::one_minus_inv_p2, tail_from(s)) < beta)
            s *= 2;
        const auto p_candidates = tail_from(s);
        if (p_candidates.empty())
            throw InsufficientPoolError("no pool primes above the start bound", PrimeSelection{});

        PrimeSelection p_sel = select("P", p_candidates, FactorKind::one_minus_inv_p, alpha);
        const double p_square_product = product_of_factors(FactorKind::one_minus_inv_p2, p_sel.primes);
        const double q_target = std::min(1.0, beta / p_square_product);
        PrimeSelection q_sel = select("Q", q_pool, FactorKind::one_minus_inv_p, q_target);

        const auto g = tabulate_multiplicative(coprime_support_spec(p_sel.primes, q_sel.primes), tables, limit)
                           .relabeled("g");
        ConstructionReport r("prescribed (beta < 1)", make_pair(g, tables));
        r.start_bound = s;
        r.predicted_f_density = p_sel.achieved;
        r.predicted_g_density = q_sel.achieved * p_square_product;
        r.alpha_achieved = r.predicted_f_density;
        r.beta_achieved = r.predicted_g_density;
        r.selections = {{"P", std::move(p_sel)}, {"Q", std::move(q_sel)}};
        return r;
    }

    PrimeSelection p_sel = select("P", p_pool, FactorKind::one_minus_inv_p_plus_inv_p2, alpha);
    const auto g = tabulate_multiplicative(nonvanishing_spec(p_sel.primes), tables, limit).relabeled("g");
    ConstructionReport r("prescribed (beta = 1)", make_pair(g, tables));
    r.predicted_f_density = p_sel.achieved;
    r.predicted_g_density = 1.0;
    r.alpha_achieved = r.predicted_f_density;
    r.beta_achieved = 1.0;
    r.selections = {{"P", std::move(p_sel)}};
    return r;
}

ConstructionReport greedy_thin_support_pair(const ZFunction& z, std::uint64_t limit, const SieveTables& tables)
{
    if (limit > tables.limit())
        throw RangeError("construction limit exceeds sieve limit");
    PrimeSelection sel;
    sel.factor_kind = FactorKind::one_plus_inv_p_minus_1;
    sel.pool_bound = limit;
    sel.target = z(static_cast<double>(limit));

    std::vector<std::pair<std::uint64_t, double>> trace;
    double product = 1.0;
    for (std::uint32_t q : tables.primes()) {
        if (q > limit)
            break;
        if (product < z(static_cast<double>(q))) {
            sel.primes.push_back(q);
            product *= factor_value(FactorKind::one_plus_inv_p_minus_1, q);
            trace.emplace_back(q, product);
        }
    }
    sel.achieved = product_of_factors(FactorKind::one_plus_inv_p_minus_1, sel.primes);

    const auto g = tabulate_multiplicative(signed_prime_set_spec(sel.primes), tables, limit).relabeled("g");
    ConstructionReport r("greedy thin support (Z = " + z.describe() + ")", make_pair(g, tables));
    r.predicted_f_density = product_of_factors(FactorKind::one_minus_inv_p_plus_inv_p2, sel.primes);
    r.product_trace = std::move(trace);
    r.selections = {{"P", std::move(sel)}};
    return r;
}

} // namespace mobius
