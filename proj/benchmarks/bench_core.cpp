// Microbenchmarks for the enumeration and symbolic hot paths. Sizes are the
// ones the verification suite actually hits.

#include <benchmark/benchmark.h>

#include "tamedeg/beta.hpp"
#include "tamedeg/clifford.hpp"
#include "tamedeg/factors.hpp"
#include "tamedeg/matgroup.hpp"
#include "tamedeg/residue.hpp"
#include "tamedeg/weil.hpp"

namespace {

using namespace tamedeg;

TameParams make_params(long p, long n, long e, long f, long r, long w = 1) {
    TameParams t;
    t.p = p;
    t.n = n;
    t.e = e;
    t.f = f;
    t.r = r;
    t.w = w;
    if (p != 0 && e > 1) t.m = p % e;
    return t;
}

void BM_sl_enumerate(benchmark::State& state) {
    const long r = state.range(0);
    for (auto _ : state) {
        FiniteMatrixGroup g = sl_enumerate(2, 3, r, 1000000);
        benchmark::DoNotOptimize(g.elements.size());
    }
}
BENCHMARK(BM_sl_enumerate)->Arg(2)->Arg(3);

void BM_unit_group(benchmark::State& state) {
    const TameRing ring(BaseRing(3, state.range(0)), 2, 1, 1, 0);
    for (auto _ : state) {
        UnitGroupData u = unit_group_data(ring);
        benchmark::DoNotOptimize(u.units.size());
    }
}
BENCHMARK(BM_unit_group)->Arg(2)->Arg(3);

void BM_norm_index(benchmark::State& state) {
    const TameRing ring(BaseRing(3, 4), 1, 2, -1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(norm_index(ring));
}
BENCHMARK(BM_norm_index);

void BM_induced_dimension(benchmark::State& state) {
    const TameParams t = make_params(3, 2, 1, 2, 2);
    for (auto _ : state) {
        const BetaData bd = build_beta(t);
        IsotropyData iso = isotropy_group(bd, t.r, 1000000);
        const SigmaRep sigma = sigma_even(iso, theta_extensions(iso).front());
        const DeltaData delta = induce_delta(iso, sigma);
        benchmark::DoNotOptimize(delta.dim);
    }
}
BENCHMARK(BM_induced_dimension)->Unit(benchmark::kMillisecond);

void BM_identity_cell(benchmark::State& state) {
    const TameParams t = make_params(0, state.range(0), 1, state.range(0), 2);
    for (auto _ : state) {
        const HiiVerdict v = verify_hii(t, 1);
        benchmark::DoNotOptimize(v.holds);
    }
}
BENCHMARK(BM_identity_cell)->Arg(2)->Arg(6);

void BM_conductor_bands(benchmark::State& state) {
    const TameParams t = make_params(0, 8, 2, 4, 12);
    for (auto _ : state) {
        const ConductorBreakdown b = artin_conductor(t);
        benchmark::DoNotOptimize(b.total);
    }
}
BENCHMARK(BM_conductor_bands);

void BM_cyclotomic_product(benchmark::State& state) {
    const Cyclotomic a = Cyclotomic::zeta(27, 5) + Cyclotomic::zeta(27, 11);
    const Cyclotomic b = Cyclotomic::zeta(27, 7) - Cyclotomic::zeta(27, 2);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_cyclotomic_product);

}  // namespace

BENCHMARK_MAIN();
