#include "tlopt_cli/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tlopt/evo.hpp"
#include "tlopt/format.hpp"
#include "tlopt/lights.hpp"
#include "tlopt/network_xml.hpp"
#include "tlopt/programme_json.hpp"
#include "tlopt/samples.hpp"
#include "tlopt/sim.hpp"
#include "tlopt/stats_io.hpp"

#ifndef TLOPT_VERSION
#define TLOPT_VERSION "0.0.0"
#endif

namespace tlopt::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

namespace {

/// Unreadable input, unwritable output or a bad flag value; exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : path_(path) {
    std::error_code ec;
    fs::create_directories(path_, ec);
    if (ec) throw UsageError("cannot create " + path + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(path_ / name, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw UsageError("cannot write " + (path_ / name).string());
    files_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
  }

  /// Writes manifest.json listing every file written so far.
  void write_manifest(Json manifest) {
    manifest["outputs"] = files_;
    std::ofstream out(path_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw UsageError("cannot write manifest.json");
  }

 private:
  fs::path path_;
  Json files_ = Json::array();
};

Json manifest_header(const std::string& subcommand) {
  Json m;
  m["tool"] = "tlopt";
  m["version"] = TLOPT_VERSION;
  m["subcommand"] = subcommand;
  return m;
}

Json input_entry(const std::string& role, const std::string& path, const std::string& content) {
  return {{"role", role}, {"path", path}, {"sha256", sha256_hex(content)}};
}

Json encoding_json(const lights::EncodingParams& p) {
  return {{"cycle_ticks", p.cycle_ticks},
          {"t_min", p.t_min},
          {"yellow_ticks", p.yellow_ticks},
          {"red_yellow_ticks", p.red_yellow_ticks},
          {"repair_gap", p.repair_gap}};
}

Json sim_json(const sim::SimConfig& c) {
  return {{"tick_ms", c.tick_ms},         {"total_ticks", c.total_ticks}, {"v_max", c.v_max},
          {"a_max", c.a_max},             {"b_max", c.b_max},             {"s_min", c.s_min},
          {"stop_speed_eps", c.stop_speed_eps}, {"record_traces", c.record_traces}};
}

void require_no_problems(const std::vector<std::string>& problems) {
  if (!problems.empty()) throw UsageError(problems.front());
}

sim::FitnessWeights parse_weights(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--weights expects two values W_COMPLETED,W_SPEED");
  auto a = detail::parse_double(std::string_view(text).substr(0, comma));
  auto b = detail::parse_double(std::string_view(text).substr(comma + 1));
  if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b) || *a < 0 || *b < 0 || std::abs(*a + *b - 1.0) > 1e-9) {
    throw UsageError("--weights must be two non-negative numbers summing to 1, got '" + text + "'");
  }
  return {*a, *b};
}

// ---- validate ----

struct ValidateArgs {
  std::string network;
  std::string programme;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const net::RoadNetwork net = net::parse_network_unchecked(read_file(a.network));
  int count = 0;
  for (const auto& v : net::validate_network(net)) {
    out << "network " << net::to_string(v.rule) << ": " << v.message << '\n';
    ++count;
  }
  if (!a.programme.empty()) {
    const auto programme = lights::programme_from_json(read_file(a.programme));
    if (count == 0) {
      for (const auto& v : lights::validate_programme(programme, net)) {
        out << "programme " << lights::to_string(v.rule) << ": " << v.message << '\n';
        ++count;
      }
    }
  }
  if (count > 0) return kViolations;
  out << "ok\n";
  return kOk;
}

// ---- simulate ----

struct SimulateArgs {
  std::string network;
  std::string programme;
  std::int64_t ticks = 1000;
  int tau = 200;
  std::uint64_t seed = 0;
  std::string out;
  bool traces = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::string net_text = read_file(a.network);
  const std::string prog_text = read_file(a.programme);
  const net::RoadNetwork net = net::parse_network(net_text);
  const lights::LightsProgramme programme = lights::programme_from_json(prog_text);

  if (auto violations = lights::validate_programme(programme, net); !violations.empty()) {
    for (const auto& v : violations) out << "programme " << lights::to_string(v.rule) << ": " << v.message << '\n';
    return kViolations;
  }

  sim::SimConfig config;
  config.tick_ms = a.tau;
  config.total_ticks = a.ticks;
  config.seed = a.seed;
  config.record_traces = a.traces;
  require_no_problems(config.problems());

  sim::World world(net, programme, config);
  const sim::SimulationStats stats = world.run(config.total_ticks);
  const double fitness = sim::aggregate_fitness(stats, config.v_max, {});

  OutputDir dir(a.out);
  const std::string stats_text = sim::stats_csv(stats);
  dir.write("stats.csv", stats_text);
  dir.write("vehicles.csv", sim::vehicles_csv(stats));
  if (a.traces) dir.write("trace.jsonl", sim::traces_jsonl(stats));

  Json m = manifest_header("simulate");
  m["parameters"] = {{"ticks", a.ticks}, {"tau", a.tau}, {"traces", a.traces}, {"simulation", sim_json(config)}};
  m["seeds"] = {{"simulation", a.seed}};
  m["inputs"] = Json::array({input_entry("network", a.network, net_text), input_entry("programme", a.programme, prog_text)});
  m["results"] = {{"fitness", fitness}};
  dir.write_manifest(std::move(m));

  out << stats_text << "fitness," << detail::format_double(fitness) << '\n';
  return kOk;
}

// ---- optimize ----

struct OptimizeArgs {
  std::string network;
  evo::PbilParams pbil;
  std::string weights = "0.5,0.5";
  std::string out_dir;
  int jobs = 1;
  std::int64_t ticks = 1000;
  int tau = 200;
  lights::EncodingParams encoding;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  const std::string net_text = read_file(a.network);
  const net::RoadNetwork net = net::parse_network(net_text);

  const sim::FitnessWeights weights = parse_weights(a.weights);
  require_no_problems(a.encoding.problems());
  require_no_problems(a.pbil.problems());
  if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
  sim::SimConfig config;
  config.tick_ms = a.tau;
  config.total_ticks = a.ticks;
  config.seed = a.pbil.seed;
  require_no_problems(config.problems());

  const evo::Evaluator evaluator(net, a.encoding, config, weights, a.pbil.retry_limit);
  const evo::PbilResult result = evo::pbil_run(evaluator, a.pbil, a.jobs);

  std::string baseline;
  try {
    baseline = detail::format_double(evaluator.programme_fitness(lights::even_split_programme(net, a.encoding)));
  } catch (const lights::InfeasibleTrack&) {
    // The even split cannot give every track t_min; leave the cell empty.
  }

  OutputDir dir(a.out_dir);
  dir.write("best_programme.json", lights::programme_to_json(result.best.programme));
  dir.write("best_chromosome.txt", result.best.chromosome.to_string() + '\n');
  dir.write("generations.csv", evo::generations_csv(result.reports));
  const std::string summary = "metric,value\nbest_fitness," + detail::format_double(result.best.fitness) +
                              "\nbaseline_fitness," + baseline + "\ngenerations," +
                              std::to_string(result.reports.size()) + '\n';
  dir.write("summary.csv", summary);

  Json m = manifest_header("optimize");
  m["parameters"] = {{"generations", a.pbil.max_generations},
                     {"pop_size", a.pbil.pop_size},
                     {"theta1", a.pbil.theta1},
                     {"theta2", a.pbil.theta2},
                     {"theta3", a.pbil.theta3},
                     {"patience", a.pbil.patience},
                     {"retry_limit", a.pbil.retry_limit},
                     {"weights", {weights.completed, weights.speed}},
                     {"encoding", encoding_json(a.encoding)},
                     {"simulation", sim_json(config)}};
  m["seeds"] = {{"pbil", a.pbil.seed}, {"simulation", config.seed}};
  m["inputs"] = Json::array({input_entry("network", a.network, net_text)});
  dir.write_manifest(std::move(m));

  out << summary;
  return kOk;
}

// ---- sample ----

struct SampleArgs {
  std::string name;
  bool programme = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  net::RoadNetwork net;
  if (a.name == "crossing") {
    net = samples::crossing_junction();
  } else if (a.name == "grid") {
    net = samples::grid_2x2();
  } else if (a.name == "three-way") {
    net = samples::three_way_conflict();
  } else {
    throw UsageError("unknown sample '" + a.name + "' (expected crossing, grid or three-way)");
  }
  if (a.programme) {
    out << lights::programme_to_json(lights::even_split_programme(net, {}));
  } else {
    out << net::serialize_network(net);
  }
  return kOk;
}

void add_encoding_options(CLI::App& app, lights::EncodingParams& p) {
  app.add_option("--cycle", p.cycle_ticks, "Cycle length in ticks")->capture_default_str();
  app.add_option("--t-min", p.t_min, "Minimum green in ticks")->capture_default_str();
  app.add_option("--yellow", p.yellow_ticks, "Yellow duration in ticks")->capture_default_str();
  app.add_option("--red-yellow", p.red_yellow_ticks, "Red+yellow duration in ticks")->capture_default_str();
  app.add_option("--repair-gap", p.repair_gap, "Extra clearance inserted by repair, in ticks")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Traffic light programme simulation and optimization", "tlopt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TLOPT_VERSION);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a network and optionally a programme");
  validate->add_option("network", va.network, "Network XML")->required();
  validate->add_option("programme", va.programme, "Programme JSON");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write statistics");
  simulate->add_option("network", sa.network, "Network XML")->required();
  simulate->add_option("programme", sa.programme, "Programme JSON")->required();
  simulate->add_option("--ticks", sa.ticks, "Ticks to simulate")->capture_default_str();
  simulate->add_option("--tau", sa.tau, "Tick length in milliseconds")->capture_default_str();
  simulate->add_option("--seed", sa.seed, "Simulation seed")->capture_default_str();
  simulate->add_option("--out", sa.out, "Output directory")->required();
  simulate->add_flag("--traces", sa.traces, "Also write per-tick vehicle traces");

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "Evolve a programme with PBIL");
  optimize->add_option("network", oa.network, "Network XML")->required();
  optimize->add_option("--generations", oa.pbil.max_generations, "Maximum generations")->capture_default_str();
  optimize->add_option("--pop-size", oa.pbil.pop_size, "Population size")->capture_default_str();
  optimize->add_option("--theta1", oa.pbil.theta1, "Learning rate")->capture_default_str();
  optimize->add_option("--theta2", oa.pbil.theta2, "Mutation probability")->capture_default_str();
  optimize->add_option("--theta3", oa.pbil.theta3, "Mutation shift")->capture_default_str();
  optimize->add_option("--seed", oa.pbil.seed, "Seed for sampling and simulation")->capture_default_str();
  optimize->add_option("--weights", oa.weights, "Fitness weights W_COMPLETED,W_SPEED")->capture_default_str();
  optimize->add_option("--out-dir", oa.out_dir, "Output directory")->required();
  optimize->add_option("--jobs", oa.jobs, "Concurrent evaluations")->capture_default_str();
  optimize->add_option("--patience", oa.pbil.patience, "Stop after this many stale generations; 0 disables")
      ->capture_default_str();
  optimize->add_option("--retry-limit", oa.pbil.retry_limit, "Replacement draws per infeasible individual")
      ->capture_default_str();
  optimize->add_option("--ticks", oa.ticks, "Ticks per fitness simulation")->capture_default_str();
  optimize->add_option("--tau", oa.tau, "Tick length in milliseconds")->capture_default_str();
  add_encoding_options(*optimize, oa.encoding);

  SampleArgs xa;
  auto* sample = app.add_subcommand("sample", "Print a bundled network (or its even-split programme)");
  sample->add_option("name", xa.name, "crossing, grid or three-way")->required();
  sample->add_flag("--programme", xa.programme, "Print the even-split programme instead");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*validate) return cmd_validate(va, out);
    if (*simulate) return cmd_simulate(sa, out);
    if (*optimize) return cmd_optimize(oa, out);
    return cmd_sample(xa, out);
  } catch (const net::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const lights::ProgrammeFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const lights::InfeasibleTrack& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const evo::NoFeasibleIndividual& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  }
}

}  // namespace tlopt::cli
