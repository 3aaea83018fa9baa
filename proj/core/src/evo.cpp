#include "tlopt/evo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "tlopt/format.hpp"

namespace tlopt::evo {

std::vector<std::string> PbilParams::problems() const {
  std::vector<std::string> out;
  auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!open_unit(theta1)) out.push_back("theta1 must lie in (0, 1)");
  if (!open_unit(theta2)) out.push_back("theta2 must lie in (0, 1)");
  if (!open_unit(theta3)) out.push_back("theta3 must lie in (0, 1)");
  if (pop_size < 2) out.push_back("pop_size must be >= 2");
  if (max_generations < 0) out.push_back("max_generations must be >= 0");
  if (patience < 0) out.push_back("patience must be >= 0");
  if (retry_limit < 0) out.push_back("retry_limit must be >= 0");
  return out;
}

ProbabilityVector init_probability_vector(std::size_t d) { return {std::vector<double>(d, 0.5)}; }

double mean_entropy(const ProbabilityVector& p) {
  if (p.p.empty()) return 0.0;
  double total = 0.0;
  for (double x : p.p) {
    if (x > 0.0 && x < 1.0) total -= x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x);
  }
  return total / static_cast<double>(p.p.size());
}

std::vector<Chromosome> sample_population(const ProbabilityVector& p, int pop_size, Rng& rng) {
  std::vector<Chromosome> population(static_cast<std::size_t>(std::max(pop_size, 0)));
  for (auto& c : population) {
    c.bits.reserve(p.size());
    for (double pk : p.p) c.bits.push_back(rng.bernoulli(pk) ? 1 : 0);
  }
  return population;
}

ProbabilityVector update_towards_best(const ProbabilityVector& p, const Chromosome& best, double theta1) {
  if (best.size() != p.size()) throw lights::LengthMismatch(p.size(), best.size());
  ProbabilityVector out = p;
  for (std::size_t k = 0; k < out.p.size(); ++k) {
    out.p[k] = out.p[k] * (1.0 - theta1) + static_cast<double>(best.bits[k]) * theta1;
  }
  return out;
}

NoFeasibleIndividual::NoFeasibleIndividual(int attempts)
    : std::runtime_error("no feasible programme after " + std::to_string(attempts) +
                         " random replacements; the network is likely over-constrained") {}

Evaluator::Evaluator(const net::RoadNetwork& net, lights::EncodingParams params, sim::SimConfig sim,
                     sim::FitnessWeights weights, int retry_limit)
    : net_(net),
      params_(params),
      sim_(sim),
      weights_(weights),
      retry_limit_(retry_limit),
      t_max_(lights::track_t_max(params, net)) {}

std::size_t Evaluator::chromosome_length() const { return lights::chromosome_length(net_.track_count(), params_); }

std::optional<lights::LightsProgramme> Evaluator::feasible_programme(const Chromosome& chromosome) const {
  return lights::repair_conflicts(lights::decode(chromosome, params_, t_max_), net_);
}

double Evaluator::programme_fitness(const lights::LightsProgramme& programme) const {
  sim::World world(net_, programme, sim_);
  return sim::aggregate_fitness(world.run(sim_.total_ticks), sim_.v_max, weights_);
}

EvaluatedIndividual Evaluator::evaluate(const Chromosome& chromosome, Rng& rng) const {
  EvaluatedIndividual out;
  out.chromosome = chromosome;
  auto programme = feasible_programme(chromosome);
  for (int attempt = 0; !programme; ++attempt) {
    if (attempt >= retry_limit_) throw NoFeasibleIndividual(retry_limit_);
    out.chromosome = lights::random_chromosome(net_.track_count(), params_.field_bits(), rng);
    out.was_replaced = true;
    programme = feasible_programme(out.chromosome);
  }
  out.programme = std::move(*programme);
  out.fitness = programme_fitness(out.programme);
  return out;
}

std::vector<EvaluatedIndividual> evaluate_population(const Evaluator& evaluator,
                                                     const std::vector<Chromosome>& population,
                                                     std::uint64_t seed, int generation, int jobs) {
  const std::size_t n = population.size();
  std::vector<EvaluatedIndividual> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(generation), i));
        results[i] = evaluator.evaluate(population[i], rng);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Lowest index wins so the reported failure does not depend on scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

namespace {

bool better(const EvaluatedIndividual& a, const EvaluatedIndividual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.chromosome < b.chromosome;
}

const EvaluatedIndividual& best_of(const std::vector<EvaluatedIndividual>& population) {
  return *std::min_element(population.begin(), population.end(),
                           [](const auto& a, const auto& b) { return better(a, b); });
}

}  // namespace

PbilResult pbil_run(const Evaluator& evaluator, const PbilParams& params, int jobs) {
  if (auto problems = params.problems(); !problems.empty()) throw std::invalid_argument(problems.front());
  Rng rng(params.seed);
  PbilResult result;
  ProbabilityVector p = init_probability_vector(evaluator.chromosome_length());

  int stale = 0;
  for (int generation = 0;; ++generation) {
    const double entropy = mean_entropy(p);
    const auto population = sample_population(p, params.pop_size, rng);
    const auto evaluated = evaluate_population(evaluator, population, params.seed, generation, jobs);
    const EvaluatedIndividual& generation_best = best_of(evaluated);

    const double previous = generation == 0 ? -std::numeric_limits<double>::infinity() : result.best.fitness;
    if (generation == 0 || better(generation_best, result.best)) result.best = generation_best;
    stale = result.best.fitness > previous + 1e-9 ? 0 : stale + 1;

    GenerationReport report;
    report.generation = generation;
    report.best = result.best.fitness;
    report.generation_best = generation_best.fitness;
    double sum = 0.0;
    for (const auto& e : evaluated) {
      sum += e.fitness;
      report.replacements += e.was_replaced ? 1 : 0;
    }
    report.mean = sum / static_cast<double>(evaluated.size());
    report.entropy = entropy;
    result.reports.push_back(report);

    if (generation >= params.max_generations) break;
    if (params.patience > 0 && stale >= params.patience) break;

    p = update_towards_best(p, generation_best.chromosome, params.theta1);
    p = mutate_vector(p, params.theta2, params.theta3, rng);
  }
  result.final_vector = std::move(p);
  return result;
}

std::string generations_csv(const std::vector<GenerationReport>& reports) {
  std::string out = "generation,best,mean,replacements,entropy\n";
  for (const auto& r : reports) {
    out += std::to_string(r.generation) + ',' + detail::format_double(r.best) + ',' + detail::format_double(r.mean) +
           ',' + std::to_string(r.replacements) + ',' + detail::format_double(r.entropy) + '\n';
  }
  return out;
}

}  // namespace tlopt::evo
