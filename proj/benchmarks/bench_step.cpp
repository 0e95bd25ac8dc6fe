#include <benchmark/benchmark.h>

#include "eifg/integrator.hpp"
#include "eifg/phi.hpp"
#include "eifg/spectral.hpp"

namespace {

void BM_Forward(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const auto g = eifg::build_grid(eifg::DomainSpec::cube(3, 0, 1), {n, n, n});
    eifg::Transformer tr(g);
    const auto u = eifg::seeded_uniform(g.total(), -1, 1, 1);
    eifg::ComplexBuffer out;
    for (auto _ : s) {
        tr.forward(u, out);
        benchmark::DoNotOptimize(out.data());
    }
    s.counters["nodes"] = static_cast<double>(g.total());
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& s, eifg::Scheme scheme) {
    const auto n = static_cast<std::size_t>(s.range(0));
    const auto p = eifg::example1();
    const auto g = eifg::build_grid(p.domain, {n, n, n});
    eifg::Integrator integ(g, p, eifg::tableau(scheme));
    eifg::State st{0.0, eifg::forward(p.initial_field(g)), 0};
    integ.plan(1e-3);
    for (auto _ : s) integ.step(st, 1e-3);
    s.counters["nodes"] = static_cast<double>(g.total());
}
BENCHMARK_CAPTURE(BM_Step, eifg2, eifg::Scheme::eifg2)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Step, eifg3, eifg::Scheme::eifg3)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Phi(benchmark::State& s) {
    double z = -0.3, acc = 0;
    for (auto _ : s) {
        acc += eifg::phi(3, z);
        z = z < -100 ? -0.3 : z * 1.1;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Phi);

}  // namespace

BENCHMARK_MAIN();
