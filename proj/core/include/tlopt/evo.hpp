#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlopt/lights.hpp"
#include "tlopt/netmodel.hpp"
#include "tlopt/rng.hpp"
#include "tlopt/sim.hpp"

namespace tlopt::evo {

using lights::Chromosome;

struct PbilParams {
  double theta1 = 0.1;   // learning rate
  double theta2 = 0.02;  // mutation probability
  double theta3 = 0.05;  // mutation shift
  int pop_size = 50;
  int max_generations = 100;
  /// Stop after this many generations without an all-time-best improvement
  /// larger than 1e-9; 0 disables the early stop.
  int patience = 20;
  /// Random redraws allowed for an individual whose repair fails.
  int retry_limit = 100;
  std::uint64_t seed = 0;

  std::vector<std::string> problems() const;
};

struct ProbabilityVector {
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;
};

/// Every component 0.5.
ProbabilityVector init_probability_vector(std::size_t d);

/// Mean binary entropy of the components, in bits (1 for the initial vector).
double mean_entropy(const ProbabilityVector& p);

/// pop_size chromosomes; bit k is set with probability p_k.
std::vector<Chromosome> sample_population(const ProbabilityVector& p, int pop_size, Rng& rng);

/// p_k <- p_k * (1 - theta1) + best_k * theta1.
ProbabilityVector update_towards_best(const ProbabilityVector& p, const Chromosome& best, double theta1);

/// For each k, when a uniform draw is below theta2:
/// p_k <- p_k * (1 - theta3) + fair_bit * theta3.
/// The fair bit is drawn only for components that mutate.
template <class Source>
ProbabilityVector mutate_vector(const ProbabilityVector& p, double theta2, double theta3, Source& rng) {
  ProbabilityVector out = p;
  for (double& pk : out.p) {
    if (rng.uniform01() < theta2) pk = pk * (1.0 - theta3) + static_cast<double>(rng.fair_bit()) * theta3;
  }
  return out;
}

class NoFeasibleIndividual : public std::runtime_error {
 public:
  explicit NoFeasibleIndividual(int attempts);
};

struct EvaluatedIndividual {
  /// The chromosome actually evaluated: the sampled one, or its random
  /// replacement when repair failed.
  Chromosome chromosome;
  lights::LightsProgramme programme;
  double fitness = 0.0;
  bool was_replaced = false;
};

/// Fitness function: decode, repair (or replace), simulate, aggregate.
/// Every evaluation uses the same simulation seed, so fitness depends on the
/// programme alone. Thread-safe; shares the network read-only.
class Evaluator {
 public:
  /// Throws lights::InfeasibleTrack if some track cannot get t_min.
  Evaluator(const net::RoadNetwork& net, lights::EncodingParams params, sim::SimConfig sim,
            sim::FitnessWeights weights = {}, int retry_limit = 100);

  /// `rng` drives replacement draws only. Throws NoFeasibleIndividual when
  /// retry_limit replacements all fail to repair.
  EvaluatedIndividual evaluate(const Chromosome& chromosome, Rng& rng) const;

  /// Repaired programme or nullopt; no replacement.
  std::optional<lights::LightsProgramme> feasible_programme(const Chromosome& chromosome) const;

  /// Simulates a feasible programme for sim.total_ticks ticks.
  double programme_fitness(const lights::LightsProgramme& programme) const;

  std::size_t chromosome_length() const;
  const net::RoadNetwork& network() const { return net_; }
  const lights::EncodingParams& params() const { return params_; }
  const sim::SimConfig& sim_config() const { return sim_; }
  const sim::FitnessWeights& weights() const { return weights_; }
  const std::vector<int>& t_max() const { return t_max_; }
  int retry_limit() const { return retry_limit_; }

 private:
  const net::RoadNetwork& net_;
  lights::EncodingParams params_;
  sim::SimConfig sim_;
  sim::FitnessWeights weights_;
  int retry_limit_;
  std::vector<int> t_max_;
};

/// Evaluates a population on up to `jobs` threads. Individual i uses an rng
/// seeded from (seed, generation, i); results are in population order and
/// independent of `jobs`.
std::vector<EvaluatedIndividual> evaluate_population(const Evaluator& evaluator,
                                                     const std::vector<Chromosome>& population,
                                                     std::uint64_t seed, int generation, int jobs);

struct GenerationReport {
  int generation = 0;
  /// All-time best fitness after this generation.
  double best = 0.0;
  double generation_best = 0.0;
  double mean = 0.0;
  int replacements = 0;
  /// mean_entropy of the vector the generation was sampled from.
  double entropy = 0.0;
};

struct PbilResult {
  EvaluatedIndividual best;
  std::vector<GenerationReport> reports;
  ProbabilityVector final_vector;
};

/// Population-based incremental learning. Generation 0 is sampled from the
/// initial vector; each following generation updates the vector toward the
/// previous generation's best, mutates it, and resamples the whole
/// population. The all-time best is tracked for the result only.
PbilResult pbil_run(const Evaluator& evaluator, const PbilParams& params, int jobs = 1);

/// `generation,best,mean,replacements,entropy` rows.
std::string generations_csv(const std::vector<GenerationReport>& reports);

}  // namespace tlopt::evo
