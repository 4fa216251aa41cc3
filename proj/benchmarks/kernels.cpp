#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cqed/beam.hpp"
#include "cqed/model.hpp"
#include "cqed/propagator.hpp"
#include "cqed/state.hpp"

namespace {

using namespace cqed;

struct Fixture {
  TruncatedState state;
  std::vector<double> g;
  GeneratorRates rates;

  Fixture(Truncation t, std::size_t atoms) : state(t) {
    Rng rng(7);
    std::normal_distribution<double> normal;
    for (std::size_t j = 0; j < atoms; ++j) {
      state.add_atom(j);
      g.push_back(0.5 * normal(rng));
    }
    for (auto sector : state.amplitudes().sectors())
      for (Complex& c : sector) c = {normal(rng), normal(rng)};
    for (int n = state.level() + 1; n < 4; ++n) state.amplitudes().photon[static_cast<std::size_t>(n)] = 0.0;
    state.renormalize();
    rates.gamma = 2.0;
    rates.drive = 1e-3;
  }
};

void BM_Derivative(benchmark::State& bs) {
  Fixture f(Truncation::three_quanta, static_cast<std::size_t>(bs.range(0)));
  Amplitudes out;
  for (auto _ : bs) {
    derivative<double>(f.state.amplitudes(), f.g, f.rates, f.state.level(), out);
    benchmark::DoNotOptimize(out);
  }
  bs.SetItemsProcessed(bs.iterations());
}
BENCHMARK(BM_Derivative)->Arg(10)->Arg(40)->Arg(80);

void BM_Rk4Step(benchmark::State& bs) {
  Fixture f(static_cast<Truncation>(bs.range(1)), static_cast<std::size_t>(bs.range(0)));
  Rk4 rk4;
  for (auto _ : bs) {
    rk4.step<double>(f.state, f.g, f.rates, 1e-3);
    benchmark::DoNotOptimize(f.state.amplitudes());
  }
}
BENCHMARK(BM_Rk4Step)->Args({40, 2})->Args({40, 3})->Args({80, 3});

void BM_BeamStep(benchmark::State& bs) {
  PhysicalParameters p = *preset("set1");
  p.tilt = 0.0096;
  BeamState beam(beam_settings(p));
  Rng rng(3);
  beam.prefill(rng);
  const double dt = 0.02 / p.kappa;
  for (auto _ : bs) {
    auto exits = beam.step(dt, rng);
    benchmark::DoNotOptimize(exits);
  }
  bs.counters["atoms"] = static_cast<double>(beam.atoms().size());
}
BENCHMARK(BM_BeamStep);

}  // namespace

BENCHMARK_MAIN();
