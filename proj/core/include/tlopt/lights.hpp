#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tlopt/netmodel.hpp"
#include "tlopt/rng.hpp"

namespace tlopt::lights {

using net::TrackId;

/// Smallest n with cycle_ticks <= 2^n.
int bits_per_field(std::int64_t cycle_ticks);

/// Timing constants shared by every light in a programme. All durations are
/// in ticks (multiples of the simulation step).
struct EncodingParams {
  int cycle_ticks = 300;
  int t_min = 25;
  int yellow_ticks = 15;
  int red_yellow_ticks = 10;
  /// Extra separation inserted between conflicting windows by repair.
  int repair_gap = 5;

  /// Ticks reserved per cycle for the transient Yellow and RedYellow lights.
  int transient_reserve() const { return yellow_ticks + red_yellow_ticks; }
  int field_bits() const { return bits_per_field(cycle_ticks); }

  /// Human-readable reasons the parameters are unusable; empty if valid.
  std::vector<std::string> problems() const;

  friend bool operator==(const EncodingParams&, const EncodingParams&) = default;
};

class InfeasibleTrack : public std::runtime_error {
 public:
  InfeasibleTrack(TrackId track, int t_max, int t_min);
  /// 0 when raised for a bare collider count rather than a network track.
  TrackId track() const { return track_; }
  int t_max() const { return t_max_; }

 private:
  TrackId track_;
  int t_max_;
};

/// Longest green a track may hold when `colliders` conflicting tracks each
/// need at least t_min: cycle_ticks - colliders * t_min - C.
/// Throws InfeasibleTrack when that is below t_min.
int compute_t_max(const EncodingParams& params, int colliders);

/// t_max of every track of `net`, indexed by track id - 1.
/// Throws InfeasibleTrack naming the first infeasible track.
std::vector<int> track_t_max(const EncodingParams& params, const net::RoadNetwork& net);

/// Track pairs (a < b) whose trajectories conflict, ascending.
std::vector<std::pair<TrackId, TrackId>> conflicting_track_pairs(const net::RoadNetwork& net);

struct PhaseWindow {
  TrackId track = 0;
  /// Tick within the cycle at which the light turns green.
  int start = 0;
  int green = 0;

  friend bool operator==(const PhaseWindow&, const PhaseWindow&) = default;
};

struct LightsProgramme {
  EncodingParams params;
  /// One window per track, ordered by track id 1..M.
  std::vector<PhaseWindow> windows;

  /// Throws net::UnknownTrack.
  const PhaseWindow& window(TrackId track) const;

  friend bool operator==(const LightsProgramme&, const LightsProgramme&) = default;
};

/// M consecutive (L, R) pairs of n-bit fields, most significant bit first.
struct Chromosome {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  std::string to_string() const;
  /// Accepts a string of '0'/'1'; throws std::invalid_argument otherwise.
  static Chromosome from_string(std::string_view text);

  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;
};

inline std::size_t chromosome_length(int tracks, const EncodingParams& params) {
  return 2u * static_cast<std::size_t>(tracks) * static_cast<std::size_t>(params.field_bits());
}

class LengthMismatch : public std::invalid_argument {
 public:
  LengthMismatch(std::size_t expected, std::size_t actual);
};

/// Decodes with per-track t_max given explicitly (indexed by track id - 1).
/// start = L mod cycle_ticks, green = t_min + R mod (t_max - t_min + 1).
/// Total: every bit pattern of the right length yields in-range windows.
LightsProgramme decode(const Chromosome& chromosome, const EncodingParams& params, std::span<const int> t_max);

/// Decodes with t_max derived from each track's conflict count in `net`.
LightsProgramme decode(const Chromosome& chromosome, const EncodingParams& params, const net::RoadNetwork& net);

/// Inverse of decode for in-range windows (L = start, R = green - t_min).
Chromosome encode(const LightsProgramme& programme);

enum class LightColor { Green, Yellow, Red, RedYellow };

std::string_view to_string(LightColor color);

/// Color of a single window at an absolute tick; the schedule repeats every
/// cycle: RedYellow, Green, Yellow, then Red until the next RedYellow.
LightColor color_at(const PhaseWindow& window, const EncodingParams& params, std::int64_t tick);

/// Throws net::UnknownTrack.
LightColor light_state_at(const LightsProgramme& programme, TrackId track, std::int64_t tick);

enum class ProgrammeRule {
  WindowCount,
  WindowOrder,
  StartOutOfRange,
  GreenTooShort,
  GreenTooLong,
  InfeasibleTrack,
  InvalidParams,
  CollisionOverlap,
};

std::string_view to_string(ProgrammeRule rule);

struct ProgrammeViolation {
  ProgrammeRule rule;
  TrackId a = 0;
  TrackId b = 0;
  std::string message;

  friend bool operator==(const ProgrammeViolation&, const ProgrammeViolation&) = default;
};

/// Half-open cyclic interval [start - d_ry, start + green + d_y) that must not
/// intersect the extended window of any conflicting track.
struct ExtendedWindow {
  int begin = 0;  // in [0, cycle_ticks)
  int length = 0;
};

ExtendedWindow extended_window(const PhaseWindow& window, const EncodingParams& params);

bool extended_windows_overlap(const PhaseWindow& a, const PhaseWindow& b, const EncodingParams& params);

/// Empty iff every green lies within [t_min, t_max] and no two conflicting
/// tracks have overlapping extended windows.
std::vector<ProgrammeViolation> validate_programme(const LightsProgramme& programme, const net::RoadNetwork& net);

/// One deterministic pass over conflicting pairs in ascending order. For each
/// overlapping pair the later-starting window (the higher track on ties) is
/// pushed forward to begin repair_gap ticks after the other's extended window
/// ends, keeping its green end tick where possible and never going below
/// t_min. Returns nullopt (irreparable) if the result still violates
/// validate_programme.
std::optional<LightsProgramme> repair_conflicts(const LightsProgramme& programme, const net::RoadNetwork& net);

/// 2*M*n independent fair bits.
Chromosome random_chromosome(int tracks, int bits_per_field, Rng& rng);

/// Designer's baseline: at each junction, tracks are greedily grouped into
/// mutually compatible phases and the cycle is split evenly between phases.
/// Throws InfeasibleTrack if a phase cannot get t_min.
LightsProgramme even_split_programme(const net::RoadNetwork& net, const EncodingParams& params);

}  // namespace tlopt::lights
