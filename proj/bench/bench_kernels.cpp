// Serial reference kernels against the OpenMP kernels.
// usage: mobius_bench [N] [repeats]

#include "mobius/kernels.hpp"
#include "mobius/sieve.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace {

double best_ms(int repeats, const std::function<void()>& fn)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double omp_ms, bool same)
{
    std::printf("%-26s %10.2f %10.2f %8.2fx  %s\n", name, serial_ms, omp_ms, serial_ms / omp_ms,
                same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv)
{
    using namespace mobius;
    const std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    const auto tables = build_sieve(n);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-5, 5);
    std::vector<std::int64_t> values(n + 1, 0);
    for (std::uint64_t i = 1; i <= n; ++i)
        values[i] = dist(rng);
    const auto mu = tables.mu_table().subspan(0, n + 1);

    std::vector<std::uint64_t> points;
    for (std::uint64_t x = n; x >= 1000; x /= 2)
        points.push_back(x);
    std::reverse(points.begin(), points.end());
    const std::vector<std::uint64_t> set = {6, 10, 15, 49, 77, 91, 121, 143};

    std::printf("N = %llu, threads = %d, best of %d\n", static_cast<unsigned long long>(n), kernels::max_threads(),
                repeats);
    std::printf("%-26s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    std::vector<std::int64_t> a, b;
    auto ts = best_ms(repeats, [&] { a = kernels::serial::divisor_sum(values, {}, n); });
    auto to = best_ms(repeats, [&] { b = kernels::omp::divisor_sum(values, {}, n); });
    row("dirichlet", ts, to, a == b);

    ts = best_ms(repeats, [&] { a = kernels::serial::divisor_sum(values, mu, n); });
    to = best_ms(repeats, [&] { b = kernels::omp::divisor_sum(values, mu, n); });
    row("moebius", ts, to, a == b);

    ts = best_ms(repeats, [&] { a = kernels::serial::divisor_sum(values, {}, 1000); });
    to = best_ms(repeats, [&] { b = kernels::omp::divisor_sum(values, {}, 1000); });
    row("truncated dirichlet y=1000", ts, to, a == b);

    std::vector<std::uint8_t> fa, fb;
    ts = best_ms(repeats, [&] { fa = kernels::serial::mark_multiples(set, n); });
    to = best_ms(repeats, [&] { fb = kernels::omp::mark_multiples(set, n); });
    row("mark_multiples", ts, to, fa == fb);

    ts = best_ms(repeats, [&] { a = kernels::serial::count_flags(fa, points); });
    to = best_ms(repeats, [&] { b = kernels::omp::count_flags(fa, points); });
    row("count_flags", ts, to, a == b);

    ts = best_ms(repeats, [&] { a = kernels::serial::count_nonzero(values, points); });
    to = best_ms(repeats, [&] { b = kernels::omp::count_nonzero(values, points); });
    row("count_nonzero", ts, to, a == b);
    return 0;
}
