#include <gtest/gtest.h>

#include "support.hpp"
#include "tlopt/evo.hpp"
#include "tlopt/samples.hpp"

using namespace tlopt;
using namespace tlopt::evo;

namespace {

/// Scripted uniform draws and fair bits for mutate_vector.
struct ScriptedSource {
  std::vector<double> uniforms;
  std::vector<int> bits;
  std::size_t u = 0, b = 0;
  double uniform01() { return uniforms.at(u++); }
  int fair_bit() { return bits.at(b++); }
};

lights::EncodingParams small_params() {
  lights::EncodingParams p;
  p.cycle_ticks = 16;
  p.t_min = 2;
  p.yellow_ticks = 1;
  p.red_yellow_ticks = 1;
  p.repair_gap = 0;
  return p;
}

sim::SimConfig short_sim() {
  sim::SimConfig c;
  c.tick_ms = 1000;
  c.total_ticks = 200;
  return c;
}

}  // namespace

TEST(PbilParams, DefaultsAndProblems) {
  PbilParams p;
  EXPECT_EQ(p.theta1, 0.1);
  EXPECT_EQ(p.theta2, 0.02);
  EXPECT_EQ(p.theta3, 0.05);
  EXPECT_EQ(p.pop_size, 50);
  EXPECT_EQ(p.patience, 20);
  EXPECT_EQ(p.retry_limit, 100);
  EXPECT_TRUE(p.problems().empty());
  for (double bad : {0.0, 1.0, -0.1, 1.5}) {
    PbilParams q;
    q.theta1 = bad;
    EXPECT_FALSE(q.problems().empty());
    q = PbilParams{};
    q.theta2 = bad;
    EXPECT_FALSE(q.problems().empty());
    q = PbilParams{};
    q.theta3 = bad;
    EXPECT_FALSE(q.problems().empty());
  }
  p.pop_size = 1;
  EXPECT_FALSE(p.problems().empty());
}

TEST(ProbabilityVector, InitialisedToHalf) {
  EXPECT_EQ(init_probability_vector(8).p, std::vector<double>(8, 0.5));
  EXPECT_EQ(init_probability_vector(1).p, std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(mean_entropy(init_probability_vector(8)), 1.0);
  EXPECT_DOUBLE_EQ(mean_entropy(ProbabilityVector{{0.0, 1.0}}), 0.0);
}

TEST(SamplePopulation, DegenerateAndBalanced) {
  Rng rng(1);
  for (const auto& c : sample_population(ProbabilityVector{std::vector<double>(12, 1.0)}, 5, rng)) {
    EXPECT_EQ(c.bits, std::vector<std::uint8_t>(12, 1));
  }
  for (const auto& c : sample_population(ProbabilityVector{std::vector<double>(12, 0.0)}, 5, rng)) {
    EXPECT_EQ(c.bits, std::vector<std::uint8_t>(12, 0));
  }
  const auto pop = sample_population(init_probability_vector(16), 10000, rng);
  ASSERT_EQ(pop.size(), 10000u);
  for (std::size_t k = 0; k < 16; ++k) {
    int ones = 0;
    for (const auto& c : pop) ones += c.bits[k];
    EXPECT_GE(ones, 4500);
    EXPECT_LE(ones, 5500);
  }
  Rng a(3), b(3);
  EXPECT_EQ(sample_population(init_probability_vector(9), 4, a), sample_population(init_probability_vector(9), 4, b));
}

TEST(UpdateTowardsBest, Arithmetic) {
  EXPECT_EQ(update_towards_best(ProbabilityVector{{0.5}}, lights::Chromosome{{1}}, 0.1).p[0], 0.55);
  EXPECT_EQ(update_towards_best(ProbabilityVector{{1.0}}, lights::Chromosome{{1}}, 0.1).p[0], 1.0);
  EXPECT_EQ(update_towards_best(ProbabilityVector{{0.0}}, lights::Chromosome{{0}}, 0.1).p[0], 0.0);
  EXPECT_THROW(update_towards_best(ProbabilityVector{{0.5, 0.5}}, lights::Chromosome{{1}}, 0.1),
               lights::LengthMismatch);
}

TEST(UpdateTowardsBest, ExtremesAreFixedPoints) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto c = lights::random_chromosome(3, 4, rng);
    ProbabilityVector p;
    for (auto b : c.bits) p.p.push_back(b);
    EXPECT_EQ(update_towards_best(p, c, 0.37), p);
  }
}

TEST(MutateVector, ShiftTowardScriptedBit) {
  ScriptedSource src{{0.01, 0.5}, {0}};
  const auto out = mutate_vector(ProbabilityVector{{0.5, 0.5}}, 0.02, 0.05, src);
  EXPECT_EQ(out.p[0], 0.475);
  EXPECT_EQ(out.p[1], 0.5);
  EXPECT_EQ(src.b, 1u);  // fair bit drawn only for the mutated component
}

TEST(MutateVector, UnchangedWhenDrawsAboveThreshold) {
  ScriptedSource src{std::vector<double>(5, 0.9), {}};
  const ProbabilityVector p{{0.1, 0.2, 0.3, 0.4, 0.5}};
  EXPECT_EQ(mutate_vector(p, 0.02, 0.05, src), p);
}

TEST(ProbabilityVector, ClosureUnderInterleavedSteps) {
  Rng rng(77);
  ProbabilityVector p = init_probability_vector(24);
  for (int i = 0; i < 20000; ++i) {
    if (rng.fair_bit()) {
      p = update_towards_best(p, lights::random_chromosome(3, 4, rng), 0.1 + 0.8 * rng.uniform01());
    } else {
      p = mutate_vector(p, 0.5, 0.05 + 0.9 * rng.uniform01(), rng);
    }
    for (double x : p.p) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
  }
}

TEST(Evaluator, FeasibleChromosomeNotReplaced) {
  auto net = samples::crossing_junction(0.25, 0.12);
  Evaluator ev(net, small_params(), short_sim());
  EXPECT_EQ(ev.chromosome_length(), 16u);
  Rng rng(1);
  // start 0/green 2 and start 8/green 2 are disjoint.
  lights::Chromosome c = lights::encode({small_params(), {{1, 0, 2}, {2, 8, 2}}});
  const auto e = ev.evaluate(c, rng);
  EXPECT_FALSE(e.was_replaced);
  EXPECT_EQ(e.chromosome, c);
  EXPECT_TRUE(lights::validate_programme(e.programme, net).empty());
  EXPECT_GT(e.fitness, 0.0);
  Rng rng2(99);
  EXPECT_EQ(ev.evaluate(c, rng2).fitness, e.fitness);
}

TEST(Evaluator, IrreparableChromosomeIsReplaced) {
  auto net = samples::three_way_conflict();
  lights::EncodingParams p;
  p.cycle_ticks = 20;
  p.t_min = 4;
  p.yellow_ticks = 1;
  p.red_yellow_ticks = 1;
  p.repair_gap = 0;
  Evaluator ev(net, p, short_sim());
  const lights::Chromosome bad = lights::encode({p, {{1, 0, 10}, {2, 0, 10}, {3, 0, 10}}});
  ASSERT_FALSE(ev.feasible_programme(bad).has_value());
  Rng rng(5);
  const auto e = ev.evaluate(bad, rng);
  EXPECT_TRUE(e.was_replaced);
  EXPECT_NE(e.chromosome, bad);
  EXPECT_TRUE(lights::validate_programme(e.programme, net).empty());
}

TEST(Evaluator, OverConstrainedNetworkThrows) {
  auto net = samples::three_way_conflict();
  lights::EncodingParams p;
  p.cycle_ticks = 16;
  p.t_min = 4;
  p.yellow_ticks = 1;
  p.red_yellow_ticks = 1;
  p.repair_gap = 1;
  Evaluator ev(net, p, short_sim(), {}, 10);
  Rng rng(5);
  const lights::Chromosome zeros{std::vector<std::uint8_t>(ev.chromosome_length(), 0)};
  EXPECT_THROW(ev.evaluate(zeros, rng), NoFeasibleIndividual);
  p.t_min = 7;
  EXPECT_THROW(Evaluator(net, p, short_sim()), lights::InfeasibleTrack);
}

TEST(EvaluatePopulation, IndependentOfJobCount) {
  auto net = samples::grid_2x2();
  sim::SimConfig c;
  c.total_ticks = 300;
  Evaluator ev(net, {}, c);
  Rng rng(4);
  const auto pop = sample_population(init_probability_vector(ev.chromosome_length()), 12, rng);
  const auto one = evaluate_population(ev, pop, 9, 3, 1);
  const auto four = evaluate_population(ev, pop, 9, 3, 4);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].chromosome, four[i].chromosome);
    EXPECT_EQ(one[i].programme, four[i].programme);
    EXPECT_EQ(one[i].fitness, four[i].fitness);
    EXPECT_EQ(one[i].was_replaced, four[i].was_replaced);
  }
}

TEST(PbilRun, ZeroGenerationsReturnsInitialBest) {
  auto net = samples::crossing_junction(0.25, 0.12);
  Evaluator ev(net, small_params(), short_sim());
  PbilParams p;
  p.pop_size = 10;
  p.max_generations = 0;
  p.seed = 3;
  const auto r = pbil_run(ev, p);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].best, r.best.fitness);
  EXPECT_EQ(r.final_vector, init_probability_vector(16));
  // The best is the best of the initial population.
  Rng rng(p.seed);
  const auto pop = sample_population(init_probability_vector(16), p.pop_size, rng);
  const auto evaluated = evaluate_population(ev, pop, p.seed, 0, 1);
  for (const auto& e : evaluated) EXPECT_LE(e.fitness, r.best.fitness);
}

TEST(PbilRun, ReportsAreMonotoneAndReproducible) {
  auto net = samples::grid_2x2();
  sim::SimConfig c;
  c.total_ticks = 400;
  Evaluator ev(net, {}, c);
  PbilParams p;
  p.pop_size = 8;
  p.max_generations = 6;
  p.seed = 12;
  const auto a = pbil_run(ev, p, 1);
  const auto b = pbil_run(ev, p, 3);
  ASSERT_EQ(a.reports.size(), 7u);
  for (std::size_t g = 0; g < a.reports.size(); ++g) {
    const auto& r = a.reports[g];
    EXPECT_EQ(r.generation, static_cast<int>(g));
    EXPECT_GE(r.best, r.mean);
    EXPECT_GE(r.best, r.generation_best);
    if (g > 0) {
      EXPECT_GE(r.best, a.reports[g - 1].best);
    }
    EXPECT_LE(r.entropy, 1.0);
    EXPECT_EQ(r.best, b.reports[g].best);
    EXPECT_EQ(r.mean, b.reports[g].mean);
    EXPECT_EQ(r.replacements, b.reports[g].replacements);
  }
  EXPECT_EQ(a.best.chromosome, b.best.chromosome);
  EXPECT_EQ(a.final_vector, b.final_vector);
  EXPECT_TRUE(lights::validate_programme(a.best.programme, net).empty());
  EXPECT_EQ(generations_csv(a.reports), generations_csv(b.reports));
}

TEST(PbilRun, PatienceStopsEarly) {
  auto net = samples::crossing_junction(0.0, 0.0);  // every programme scores 0
  Evaluator ev(net, small_params(), short_sim());
  PbilParams p;
  p.pop_size = 4;
  p.max_generations = 100;
  p.patience = 3;
  const auto r = pbil_run(ev, p);
  EXPECT_EQ(r.reports.size(), 4u);
  // Ties resolve to the lexicographically smallest chromosome.
  EXPECT_EQ(r.best.fitness, 0.0);
}

TEST(PbilRun, RejectsInvalidParams) {
  auto net = samples::crossing_junction();
  Evaluator ev(net, small_params(), short_sim());
  PbilParams p;
  p.theta1 = 1.0;
  EXPECT_THROW(pbil_run(ev, p), std::invalid_argument);
}

TEST(GenerationsCsv, Layout) {
  std::vector<GenerationReport> reports{{0, 0.5, 0.5, 0.25, 3, 1.0}};
  EXPECT_EQ(generations_csv(reports), "generation,best,mean,replacements,entropy\n0,0.5,0.25,3,1\n");
}
