#include <benchmark/benchmark.h>

#include "tlopt/evo.hpp"
#include "tlopt/lights.hpp"
#include "tlopt/network_xml.hpp"
#include "tlopt/samples.hpp"
#include "tlopt/sim.hpp"

using namespace tlopt;

namespace {

const net::RoadNetwork& grid() {
  static const net::RoadNetwork net = samples::grid_2x2();
  return net;
}

void BM_Decode(benchmark::State& state) {
  const lights::EncodingParams p;
  const auto t_max = lights::track_t_max(p, grid());
  Rng rng(1);
  const auto c = lights::random_chromosome(grid().track_count(), p.field_bits(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(lights::decode(c, p, t_max));
}
BENCHMARK(BM_Decode);

void BM_Repair(benchmark::State& state) {
  const lights::EncodingParams p;
  Rng rng(2);
  std::vector<lights::LightsProgramme> progs;
  for (int i = 0; i < 256; ++i) {
    progs.push_back(lights::decode(lights::random_chromosome(grid().track_count(), p.field_bits(), rng), p, grid()));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lights::repair_conflicts(progs[i++ % progs.size()], grid()));
}
BENCHMARK(BM_Repair);

void BM_ParseNetwork(benchmark::State& state) {
  const std::string xml = net::serialize_network(grid());
  for (auto _ : state) benchmark::DoNotOptimize(net::parse_network(xml));
}
BENCHMARK(BM_ParseNetwork);

void BM_SimulateGrid(benchmark::State& state) {
  const net::RoadNetwork net = samples::grid_2x2(static_cast<double>(state.range(0)));
  const auto prog = lights::even_split_programme(net, {});
  sim::SimConfig c;
  for (auto _ : state) {
    sim::World w(net, prog, c);
    benchmark::DoNotOptimize(w.run(c.total_ticks));
  }
  state.SetItemsProcessed(state.iterations() * c.total_ticks);
}
BENCHMARK(BM_SimulateGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PbilGeneration(benchmark::State& state) {
  sim::SimConfig c;
  const evo::Evaluator ev(grid(), {}, c);
  evo::PbilParams p;
  p.pop_size = 20;
  p.max_generations = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evo::pbil_run(ev, p));
}
BENCHMARK(BM_PbilGeneration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
