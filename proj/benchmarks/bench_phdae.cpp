#include <benchmark/benchmark.h>

#include "phdae/diagnostics.hpp"
#include "phdae/gauss.hpp"
#include "phdae/initial_state.hpp"
#include "phdae/pc.hpp"

namespace {

using namespace phdae;

constexpr double kStep = 1e-4;

void BM_PC1Step(benchmark::State& state) {
    const PhysicalParams params = fbm_ssr_params();
    FullModel model(params);
    PCWorkspace ws(model, kStep);
    const FullState x0 = benchmark_initial_full();
    for (auto _ : state) benchmark::DoNotOptimize(ws.pc1_step(x0));
}
BENCHMARK(BM_PC1Step);

void BM_PC2Step(benchmark::State& state) {
    const PhysicalParams params = fbm_ssr_params();
    FullModel model(params);
    PCWorkspace ws(model, kStep);
    const FullState x0 = benchmark_initial_full();
    for (auto _ : state) benchmark::DoNotOptimize(ws.pc2_step(x0));
}
BENCHMARK(BM_PC2Step);

void BM_GaussStep(benchmark::State& state) {
    const PhysicalParams params = fbm_ssr_params();
    ReducedModel model(params);
    GaussDaeStepper stepper(model, gauss_tableau(int(state.range(0))));
    const ReducedState x0 = benchmark_initial_reduced();
    for (auto _ : state) benchmark::DoNotOptimize(stepper.step(x0, kStep));
}
BENCHMARK(BM_GaussStep)->Arg(1)->Arg(2)->Arg(3);

void BM_GaussTableau(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(gauss_tableau(int(state.range(0))));
}
BENCHMARK(BM_GaussTableau)->Arg(3)->Arg(6);

void BM_Hamiltonian(benchmark::State& state) {
    const PhysicalParams params = fbm_ssr_params();
    ReducedModel model(params);
    const ReducedState x0 = benchmark_initial_reduced();
    for (auto _ : state) benchmark::DoNotOptimize(model.hamiltonian(x0));
}
BENCHMARK(BM_Hamiltonian);

void BM_DiracResidual(benchmark::State& state) {
    const PhysicalParams params = fbm_ssr_params();
    ReducedModel model(params);
    GaussDaeStepper stepper(model, gauss_tableau(2));
    const ReducedState x0 = benchmark_initial_reduced();
    StageRecord rec;
    stepper.step(x0, kStep, nullptr, &rec);
    for (auto _ : state) benchmark::DoNotOptimize(dirac_membership_residual(rec, model));
}
BENCHMARK(BM_DiracResidual);

} // namespace

BENCHMARK_MAIN();
