#include "tlopt/lights.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tlopt::lights {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::uint64_t read_field(const Chromosome& c, std::size_t offset, int bits) {
  std::uint64_t value = 0;
  for (int i = 0; i < bits; ++i) value = (value << 1) | (c.bits[offset + i] & 1u);
  return value;
}

void write_field(Chromosome& c, std::uint64_t value, int bits) {
  for (int i = bits - 1; i >= 0; --i) c.bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

}  // namespace

int bits_per_field(std::int64_t cycle_ticks) {
  int n = 0;
  while ((std::int64_t{1} << n) < cycle_ticks) ++n;
  return n;
}

std::vector<std::string> EncodingParams::problems() const {
  std::vector<std::string> out;
  if (cycle_ticks < 1) out.push_back("cycle_ticks must be >= 1");
  if (t_min < 1) out.push_back("t_min must be >= 1");
  if (t_min > cycle_ticks) out.push_back("t_min must not exceed cycle_ticks");
  if (yellow_ticks < 1) out.push_back("yellow_ticks must be >= 1");
  if (red_yellow_ticks < 1) out.push_back("red_yellow_ticks must be >= 1");
  if (repair_gap < 0) out.push_back("repair_gap must be >= 0");
  return out;
}

InfeasibleTrack::InfeasibleTrack(TrackId track, int t_max, int t_min)
    : std::runtime_error((track > 0 ? "track " + std::to_string(track) + ": " : std::string()) + "t_max " +
                         std::to_string(t_max) + " is below t_min " + std::to_string(t_min)),
      track_(track),
      t_max_(t_max) {}

int compute_t_max(const EncodingParams& params, int colliders) {
  const int t_max = params.cycle_ticks - colliders * params.t_min - params.transient_reserve();
  if (t_max < params.t_min) throw InfeasibleTrack(0, t_max, params.t_min);
  return t_max;
}

std::vector<int> track_t_max(const EncodingParams& params, const net::RoadNetwork& net) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(net.track_count()));
  for (TrackId id = 1; id <= net.track_count(); ++id) {
    const int k = static_cast<int>(net::conflicting_tracks(net, id).size());
    try {
      out.push_back(compute_t_max(params, k));
    } catch (const InfeasibleTrack& e) {
      throw InfeasibleTrack(id, e.t_max(), params.t_min);
    }
  }
  return out;
}

std::vector<std::pair<TrackId, TrackId>> conflicting_track_pairs(const net::RoadNetwork& net) {
  std::set<std::pair<TrackId, TrackId>> pairs;
  for (const auto& c : net.conflicts()) {
    auto a = net.track_of_trajectory(c.a);
    auto b = net.track_of_trajectory(c.b);
    if (!a || !b || *a == *b) continue;
    pairs.insert(std::minmax(*a, *b));
  }
  return {pairs.begin(), pairs.end()};
}

const PhaseWindow& LightsProgramme::window(TrackId track) const {
  if (track < 1 || static_cast<std::size_t>(track) > windows.size()) throw net::UnknownTrack(track);
  return windows[static_cast<std::size_t>(track - 1)];
}

std::string Chromosome::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

Chromosome Chromosome::from_string(std::string_view text) {
  Chromosome c;
  c.bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("chromosome strings contain only '0' and '1'");
    c.bits.push_back(ch == '1');
  }
  return c;
}

LengthMismatch::LengthMismatch(std::size_t expected, std::size_t actual)
    : std::invalid_argument("chromosome has " + std::to_string(actual) + " bits, expected " +
                            std::to_string(expected)) {}

LightsProgramme decode(const Chromosome& chromosome, const EncodingParams& params, std::span<const int> t_max) {
  const int n = params.field_bits();
  const std::size_t expected = 2u * t_max.size() * static_cast<std::size_t>(n);
  if (chromosome.size() != expected) throw LengthMismatch(expected, chromosome.size());

  LightsProgramme prog{params, {}};
  prog.windows.reserve(t_max.size());
  for (std::size_t i = 0; i < t_max.size(); ++i) {
    const auto id = static_cast<TrackId>(i + 1);
    if (t_max[i] < params.t_min) throw InfeasibleTrack(id, t_max[i], params.t_min);
    const std::uint64_t left = read_field(chromosome, 2 * i * n, n);
    const std::uint64_t right = read_field(chromosome, (2 * i + 1) * n, n);
    const auto span = static_cast<std::uint64_t>(t_max[i] - params.t_min + 1);
    prog.windows.push_back({id, static_cast<int>(left % static_cast<std::uint64_t>(params.cycle_ticks)),
                            params.t_min + static_cast<int>(right % span)});
  }
  return prog;
}

LightsProgramme decode(const Chromosome& chromosome, const EncodingParams& params, const net::RoadNetwork& net) {
  const auto t_max = track_t_max(params, net);
  return decode(chromosome, params, t_max);
}

Chromosome encode(const LightsProgramme& programme) {
  const int n = programme.params.field_bits();
  Chromosome c;
  c.bits.reserve(2 * programme.windows.size() * static_cast<std::size_t>(n));
  for (const auto& w : programme.windows) {
    write_field(c, static_cast<std::uint64_t>(w.start), n);
    write_field(c, static_cast<std::uint64_t>(w.green - programme.params.t_min), n);
  }
  return c;
}

std::string_view to_string(LightColor color) {
  switch (color) {
    case LightColor::Green: return "Green";
    case LightColor::Yellow: return "Yellow";
    case LightColor::Red: return "Red";
    case LightColor::RedYellow: return "RedYellow";
  }
  return "?";
}

LightColor color_at(const PhaseWindow& window, const EncodingParams& params, std::int64_t tick) {
  const std::int64_t cycle = params.cycle_ticks;
  const std::int64_t offset = floor_mod(floor_mod(tick, cycle) - window.start, cycle);
  if (offset < window.green) return LightColor::Green;
  if (offset < window.green + params.yellow_ticks) return LightColor::Yellow;
  if (offset >= cycle - params.red_yellow_ticks) return LightColor::RedYellow;
  return LightColor::Red;
}

LightColor light_state_at(const LightsProgramme& programme, TrackId track, std::int64_t tick) {
  return color_at(programme.window(track), programme.params, tick);
}

std::string_view to_string(ProgrammeRule rule) {
  switch (rule) {
    case ProgrammeRule::WindowCount: return "WindowCount";
    case ProgrammeRule::WindowOrder: return "WindowOrder";
    case ProgrammeRule::StartOutOfRange: return "StartOutOfRange";
    case ProgrammeRule::GreenTooShort: return "GreenTooShort";
    case ProgrammeRule::GreenTooLong: return "GreenTooLong";
    case ProgrammeRule::InfeasibleTrack: return "InfeasibleTrack";
    case ProgrammeRule::InvalidParams: return "InvalidParams";
    case ProgrammeRule::CollisionOverlap: return "CollisionOverlap";
  }
  return "?";
}

ExtendedWindow extended_window(const PhaseWindow& window, const EncodingParams& params) {
  return {static_cast<int>(floor_mod(window.start - params.red_yellow_ticks, params.cycle_ticks)),
          window.green + params.transient_reserve()};
}

bool extended_windows_overlap(const PhaseWindow& a, const PhaseWindow& b, const EncodingParams& params) {
  const ExtendedWindow x = extended_window(a, params);
  const ExtendedWindow y = extended_window(b, params);
  const std::int64_t a_to_b = floor_mod(y.begin - x.begin, params.cycle_ticks);
  const std::int64_t b_to_a = floor_mod(x.begin - y.begin, params.cycle_ticks);
  return !(a_to_b >= x.length && b_to_a >= y.length);
}

std::vector<ProgrammeViolation> validate_programme(const LightsProgramme& programme, const net::RoadNetwork& net) {
  std::vector<ProgrammeViolation> out;
  const EncodingParams& p = programme.params;
  if (auto problems = p.problems(); !problems.empty()) {
    for (auto& msg : problems) out.push_back({ProgrammeRule::InvalidParams, 0, 0, std::move(msg)});
    return out;
  }
  const int m = net.track_count();
  if (programme.windows.size() != static_cast<std::size_t>(m)) {
    out.push_back({ProgrammeRule::WindowCount, 0, 0,
                   "programme has " + std::to_string(programme.windows.size()) + " windows for " +
                       std::to_string(m) + " tracks"});
    return out;
  }
  for (TrackId id = 1; id <= m; ++id) {
    const PhaseWindow& w = programme.windows[static_cast<std::size_t>(id - 1)];
    if (w.track != id) {
      out.push_back({ProgrammeRule::WindowOrder, id, 0, "window " + std::to_string(id) + " names track " +
                                                            std::to_string(w.track)});
    }
    if (w.start < 0 || w.start >= p.cycle_ticks) {
      out.push_back({ProgrammeRule::StartOutOfRange, id, 0, "start " + std::to_string(w.start) + " outside cycle"});
    }
    if (w.green < p.t_min) {
      out.push_back({ProgrammeRule::GreenTooShort, id, 0,
                     "green " + std::to_string(w.green) + " below t_min " + std::to_string(p.t_min)});
    }
    const int k = static_cast<int>(net::conflicting_tracks(net, id).size());
    const int t_max = p.cycle_ticks - k * p.t_min - p.transient_reserve();
    if (t_max < p.t_min) {
      out.push_back({ProgrammeRule::InfeasibleTrack, id, 0,
                     "t_max " + std::to_string(t_max) + " below t_min " + std::to_string(p.t_min)});
    } else if (w.green > t_max) {
      out.push_back({ProgrammeRule::GreenTooLong, id, 0,
                     "green " + std::to_string(w.green) + " above t_max " + std::to_string(t_max)});
    }
  }
  for (auto [a, b] : conflicting_track_pairs(net)) {
    if (extended_windows_overlap(programme.window(a), programme.window(b), p)) {
      out.push_back({ProgrammeRule::CollisionOverlap, a, b,
                     "tracks " + std::to_string(a) + " and " + std::to_string(b) + " may be open together"});
    }
  }
  return out;
}

std::optional<LightsProgramme> repair_conflicts(const LightsProgramme& programme, const net::RoadNetwork& net) {
  if (programme.windows.size() != static_cast<std::size_t>(net.track_count())) {
    throw std::invalid_argument("programme and network disagree on the number of tracks");
  }
  LightsProgramme out = programme;
  const EncodingParams& p = out.params;
  for (auto [a, b] : conflicting_track_pairs(net)) {
    PhaseWindow& wa = out.windows[static_cast<std::size_t>(a - 1)];
    PhaseWindow& wb = out.windows[static_cast<std::size_t>(b - 1)];
    if (!extended_windows_overlap(wa, wb, p)) continue;
    // a < b, so on equal starts b moves.
    const bool b_moves = wb.start >= wa.start;
    const PhaseWindow& fixed = b_moves ? wa : wb;
    PhaseWindow& mover = b_moves ? wb : wa;

    const std::int64_t target = fixed.start + fixed.green + p.yellow_ticks + p.repair_gap + p.red_yellow_ticks;
    // First tick at or after mover.start congruent to target.
    const std::int64_t new_start = mover.start + floor_mod(target - mover.start, p.cycle_ticks);
    const std::int64_t old_end = static_cast<std::int64_t>(mover.start) + mover.green;
    const std::int64_t remaining = old_end - new_start;
    mover.green = remaining < p.t_min ? p.t_min : static_cast<int>(remaining);
    mover.start = static_cast<int>(floor_mod(new_start, p.cycle_ticks));
  }
  if (!validate_programme(out, net).empty()) return std::nullopt;
  return out;
}

Chromosome random_chromosome(int tracks, int bits_per_field, Rng& rng) {
  Chromosome c;
  const std::size_t length = 2u * static_cast<std::size_t>(tracks) * static_cast<std::size_t>(bits_per_field);
  c.bits.reserve(length);
  for (std::size_t i = 0; i < length; ++i) c.bits.push_back(static_cast<std::uint8_t>(rng.fair_bit()));
  return c;
}

LightsProgramme even_split_programme(const net::RoadNetwork& net, const EncodingParams& params) {
  const auto t_max = track_t_max(params, net);
  const auto pairs = conflicting_track_pairs(net);
  std::set<std::pair<TrackId, TrackId>> conflict(pairs.begin(), pairs.end());
  auto conflicts = [&](TrackId x, TrackId y) { return conflict.count(std::minmax(x, y)) > 0; };

  std::map<std::string, std::vector<TrackId>> by_junction;
  for (TrackId id = 1; id <= net.track_count(); ++id) {
    const net::Trajectory* tr = net.find_trajectory(net.track(id).trajectory);
    by_junction[tr ? tr->junction : std::string()].push_back(id);
  }

  LightsProgramme prog{params, std::vector<PhaseWindow>(static_cast<std::size_t>(net.track_count()))};
  for (const auto& [junction, tracks] : by_junction) {
    std::vector<std::vector<TrackId>> phases;
    for (TrackId id : tracks) {
      auto fits = [&](const std::vector<TrackId>& phase) {
        return std::none_of(phase.begin(), phase.end(), [&](TrackId o) { return conflicts(id, o); });
      };
      auto it = std::find_if(phases.begin(), phases.end(), fits);
      if (it == phases.end()) phases.push_back({id});
      else it->push_back(id);
    }
    const int slot = params.cycle_ticks / static_cast<int>(phases.size());
    const int green = slot - params.transient_reserve();
    for (std::size_t ph = 0; ph < phases.size(); ++ph) {
      for (TrackId id : phases[ph]) {
        const int g = std::min(green, t_max[static_cast<std::size_t>(id - 1)]);
        if (g < params.t_min) throw InfeasibleTrack(id, g, params.t_min);
        prog.windows[static_cast<std::size_t>(id - 1)] = {
            id, static_cast<int>(ph) * slot + params.red_yellow_ticks, g};
      }
    }
  }
  return prog;
}

}  // namespace tlopt::lights
