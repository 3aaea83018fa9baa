#include "tlopt/stats_io.hpp"

#include <nlohmann/json.hpp>

#include "tlopt/format.hpp"

namespace tlopt::sim {

using detail::format_double;

std::string stats_csv(const SimulationStats& s) {
  std::string out = "metric,value\n";
  auto row = [&out](const char* key, const std::string& value) { out.append(key).append(",").append(value) += '\n'; };
  row("ticks", std::to_string(s.ticks));
  row("spawned", std::to_string(s.spawned));
  row("completed", std::to_string(s.completed));
  row("live", std::to_string(s.live));
  row("mean_travel_ticks", format_double(s.mean_travel_ticks));
  row("mean_speed", format_double(s.mean_speed));
  row("total_stops", std::to_string(s.total_stops));
  return out;
}

std::string vehicles_csv(const SimulationStats& s) {
  std::string out = "vehicle,spawn_tick,travel_ticks,stops,mean_speed\n";
  for (const auto& v : s.vehicles) {
    out += std::to_string(v.id) + ',' + std::to_string(v.spawn_tick) + ',';
    if (v.travel_ticks) out += std::to_string(*v.travel_ticks);
    out += ',' + std::to_string(v.stops.size()) + ',' + format_double(v.mean_speed) + '\n';
  }
  return out;
}

std::string traces_jsonl(const SimulationStats& s) {
  std::string out;
  for (const auto& v : s.vehicles) {
    nlohmann::ordered_json line;
    line["vehicle"] = v.id;
    auto& trace = line["trace"] = nlohmann::ordered_json::array();
    for (const auto& t : v.trace) trace.push_back({t.tick, t.lane, t.position, t.speed});
    out += line.dump() + '\n';
  }
  return out;
}

}  // namespace tlopt::sim
