#include "l2inv/approx.hpp"
#include "l2inv/counterexample.hpp"
#include "l2inv/harness.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace l2inv;

namespace {

GroupRingMatrix lehmer_poly() {
    const Group z = Group::free_abelian(1);
    const Rat coeffs[11] = {1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1};
    GroupRingMatrix m(z, 1, 1);
    GroupRingElement::Terms terms;
    for (long long i = 0; i <= 10; ++i)
        if (coeffs[i] != 0) terms.emplace(GroupElem{i}, coeffs[i]);
    m.at(0, 0) = GroupRingElement(terms);
    return m;
}

void bench_quotient_density(benchmark::State& state) {
    const GroupRingMatrix a = lehmer_poly();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(quotient_density(a, n).log_det());
}
BENCHMARK(bench_quotient_density)->Arg(256)->Arg(1024)->Arg(4096);

void bench_regular_rep_density(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const Group g = Group::symmetric(4);
    const GroupRingMatrix a =
        random_group_ring_matrix(rng, g, static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(spectral_density(regular_rep(a)).log_det());
}
BENCHMARK(bench_regular_rep_density)->Arg(1)->Arg(2)->Arg(4);

void bench_exact_quotient_moment(benchmark::State& state) {
    const GroupRingMatrix delta = lehmer_poly().delta();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_quotient_moment(delta, n, 4));
}
BENCHMARK(bench_exact_quotient_moment)->Arg(64)->Arg(256);

void bench_det_collapse(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(det_pr2_pk(k, collapse_eps2(k)).value_exact);
}
BENCHMARK(bench_det_collapse)->Arg(4)->Arg(8)->Arg(12);

void bench_detconj_fuzz(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(detconj_fuzz(1, static_cast<int>(state.range(0)), 0));
}
BENCHMARK(bench_detconj_fuzz)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
