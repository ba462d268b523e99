// Serial reference vs OpenMP kernels. Thread count comes from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "kcp/brute_force.hpp"
#include "kcp/checker.hpp"
#include "kcp/refuters.hpp"
#include "kcp/zoo.hpp"

namespace {

kcp::CnfFormula count_input(std::size_t n) {
  return kcp::random_kl_cnf(n, 2 * n, 3, 6, 7);
}

void BM_CountSerial(benchmark::State& st) {
  auto phi = count_input(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kcp::serial::count_models(phi));
}

void BM_CountParallel(benchmark::State& st) {
  auto phi = count_input(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kcp::parallel::count_models(phi));
}

void BM_ExpansionSerial(benchmark::State& st) {
  auto g = kcp::random_regular(static_cast<std::size_t>(st.range(0)), 3, 11);
  for (auto _ : st) benchmark::DoNotOptimize(kcp::serial::expansion_check(g, 0.1));
}

void BM_ExpansionParallel(benchmark::State& st) {
  auto g = kcp::random_regular(static_cast<std::size_t>(st.range(0)), 3, 11);
  for (auto _ : st) benchmark::DoNotOptimize(kcp::parallel::expansion_check(g, 0.1));
}

// EQ refutations are long and cheap per line, a fair checker workload.
struct CheckInput {
  kcp::CnfFormula phi;
  kcp::Proof proof;
};

CheckInput check_input(std::size_t n) {
  auto eq = kcp::obdd_refute_eq(n, 1);
  return {kcp::lift_Z(kcp::eq_formula(n, 1)).result, eq.refutation.proof};
}

void BM_CheckSerial(benchmark::State& st) {
  auto in = check_input(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kcp::serial::check_proof(in.phi, in.proof));
}

void BM_CheckParallel(benchmark::State& st) {
  auto in = check_input(static_cast<std::size_t>(st.range(0)));
  kcp::CheckOptions opts;
  opts.jobs = static_cast<std::size_t>(omp_get_max_threads());
  for (auto _ : st) benchmark::DoNotOptimize(kcp::parallel::check_proof(in.phi, in.proof, opts));
}

}  // namespace

BENCHMARK(BM_CountSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpansionSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpansionParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
