#include "tlopt/programme_json.hpp"

#include <limits>
#include <nlohmann/json.hpp>
#include <set>

namespace tlopt::lights {

namespace {

using nlohmann::json;

int integer_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ProgrammeFormatError(std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) throw ProgrammeFormatError(std::string("field '") + key + "' must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ProgrammeFormatError(std::string("field '") + key + "' out of range");
  }
  return static_cast<int>(v);
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ProgrammeFormatError(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

}  // namespace

std::string programme_to_json(const LightsProgramme& programme) {
  const EncodingParams& p = programme.params;
  std::string out = "{\n";
  out += "  \"cycle_ticks\": " + std::to_string(p.cycle_ticks) + ",\n";
  out += "  \"t_min\": " + std::to_string(p.t_min) + ",\n";
  out += "  \"yellow_ticks\": " + std::to_string(p.yellow_ticks) + ",\n";
  out += "  \"red_yellow_ticks\": " + std::to_string(p.red_yellow_ticks) + ",\n";
  out += "  \"repair_gap\": " + std::to_string(p.repair_gap) + ",\n";
  out += "  \"windows\": [";
  for (std::size_t i = 0; i < programme.windows.size(); ++i) {
    const PhaseWindow& w = programme.windows[i];
    out += i ? ",\n" : "\n";
    out += "    {\"track\": " + std::to_string(w.track) + ", \"start\": " + std::to_string(w.start) +
           ", \"green\": " + std::to_string(w.green) + "}";
  }
  out += programme.windows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

LightsProgramme programme_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProgrammeFormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProgrammeFormatError("programme must be a JSON object");
  only_keys(doc, {"cycle_ticks", "t_min", "yellow_ticks", "red_yellow_ticks", "repair_gap", "windows"}, "programme");

  LightsProgramme prog;
  prog.params.cycle_ticks = integer_field(doc, "cycle_ticks");
  prog.params.t_min = integer_field(doc, "t_min");
  prog.params.yellow_ticks = integer_field(doc, "yellow_ticks");
  prog.params.red_yellow_ticks = integer_field(doc, "red_yellow_ticks");
  prog.params.repair_gap = integer_field(doc, "repair_gap");

  auto windows = doc.find("windows");
  if (windows == doc.end() || !windows->is_array()) throw ProgrammeFormatError("'windows' must be an array");
  for (const auto& w : *windows) {
    if (!w.is_object()) throw ProgrammeFormatError("each window must be an object");
    only_keys(w, {"track", "start", "green"}, "window");
    prog.windows.push_back({integer_field(w, "track"), integer_field(w, "start"), integer_field(w, "green")});
  }
  return prog;
}

}  // namespace tlopt::lights
