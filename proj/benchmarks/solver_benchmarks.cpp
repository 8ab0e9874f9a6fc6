#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include <nmls/bench.hpp>
#include <nmls/engine.hpp>
#include <nmls/theory.hpp>

namespace {

const char* const kRules[] = {"m1", "nm1", "nm2", "nm3", "nm4", "nm5(eps,2)"};

void BM_SolveRosenbrock(benchmark::State& state) {
  const auto p = nmls::problem_by_id("rosenbrock");
  const std::string rule_id = kRules[state.range(0)];
  for (auto _ : state) {
    auto rule = nmls::make_rule(rule_id);
    auto dir = nmls::make_direction("bfgs");
    benchmark::DoNotOptimize(nmls::solve(p, p.x0, *rule, *dir));
  }
  state.SetLabel(rule_id);
}
BENCHMARK(BM_SolveRosenbrock)->DenseRange(0, 5);

void BM_SolveGriewankSd(benchmark::State& state) {
  const auto p = nmls::griewank_problem();
  const auto starts = nmls::griewank_grid();
  std::size_t j = 0;
  for (auto _ : state) {
    auto rule = nmls::make_rule("nm5(abs_f0,0.25)");
    auto dir = nmls::make_direction("sd");
    benchmark::DoNotOptimize(nmls::solve(p, starts[j++ % starts.size()], *rule, *dir));
  }
}
BENCHMARK(BM_SolveGriewankSd);

void BM_AuditQuadratic(benchmark::State& state) {
  const auto p = nmls::quadratic({0.1, 1.0, 10.0});
  auto rule = nmls::make_rule("nm2");
  auto dir = nmls::make_direction("sd");
  const auto t = nmls::solve(p, p.x0, *rule, *dir);
  const auto c = nmls::Constants::from_trace(t, p.lipschitz_known, 1.0, 1.0, p.f_low_known);
  for (auto _ : state) benchmark::DoNotOptimize(nmls::audit(t, c));
  state.counters["iterations"] = static_cast<double>(t.iterations());
}
BENCHMARK(BM_AuditQuadratic);

void BM_MghSuite(benchmark::State& state) {
  const auto problems = nmls::mgh_subset();
  const auto solvers = nmls::default_suite_solvers();
  nmls::RunOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nmls::run_suite(problems, solvers, {}, opts));
}
BENCHMARK(BM_MghSuite)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Percentile(benchmark::State& state) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = u(gen);
  for (auto _ : state) benchmark::DoNotOptimize(nmls::summarize(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Percentile)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity();

}  // namespace

BENCHMARK_MAIN();
