#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tlopt::net {

/// Reserved junction id marking the open end of a frontier road.
inline constexpr std::string_view kExternal = "EXTERNAL";

/// 1-based dense index of a track; also its position in a chromosome.
using TrackId = int;

struct Junction {
  std::string id;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Junction&, const Junction&) = default;
};

/// One-way road between two junctions. Either endpoint may be kExternal.
struct Road {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;
  /// Spawn probability per tick; only meaningful for entry roads.
  double spawn_rate = 0.0;

  bool is_entry() const { return from == kExternal; }
  bool is_exit() const { return to == kExternal; }

  friend bool operator==(const Road&, const Road&) = default;
};

struct Lane {
  std::string id;
  std::string road;

  friend bool operator==(const Lane&, const Lane&) = default;
};

struct Trajectory {
  std::string id;
  std::string junction;
  std::string in_lane;
  std::string out_lane;
  double crossing_length = 0.0;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Unordered pair of trajectories that may collide; stored once.
struct ConflictPair {
  std::string a;
  std::string b;

  friend bool operator==(const ConflictPair&, const ConflictPair&) = default;
};

struct Track {
  TrackId id = 0;
  std::string in_lane;
  std::string trajectory;
  std::string out_lane;

  friend bool operator==(const Track&, const Track&) = default;
};

/// Raw entity lists in document order. May be structurally invalid.
struct NetworkData {
  std::vector<Junction> junctions;
  std::vector<Road> roads;
  std::vector<Lane> lanes;
  std::vector<Trajectory> trajectories;
  std::vector<ConflictPair> conflicts;
  std::vector<Track> tracks;

  friend bool operator==(const NetworkData&, const NetworkData&) = default;
};

class UnknownTrack : public std::out_of_range {
 public:
  explicit UnknownTrack(TrackId id)
      : std::out_of_range("unknown track " + std::to_string(id)), id_(id) {}
  TrackId id() const { return id_; }

 private:
  TrackId id_;
};

/// Immutable road network with id lookup tables.
///
/// Construction never fails: lookups tolerate duplicate or dangling ids (the
/// first occurrence wins) so that validate_network can report on broken
/// models. Networks returned by parse_network are always valid.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  explicit RoadNetwork(NetworkData data);

  const NetworkData& data() const { return data_; }
  const std::vector<Junction>& junctions() const { return data_.junctions; }
  const std::vector<Road>& roads() const { return data_.roads; }
  const std::vector<Lane>& lanes() const { return data_.lanes; }
  const std::vector<Trajectory>& trajectories() const { return data_.trajectories; }
  const std::vector<ConflictPair>& conflicts() const { return data_.conflicts; }
  const std::vector<Track>& tracks() const { return data_.tracks; }

  /// M, the number of signalised tracks.
  int track_count() const { return static_cast<int>(data_.tracks.size()); }

  std::optional<std::size_t> junction_index(std::string_view id) const;
  std::optional<std::size_t> road_index(std::string_view id) const;
  std::optional<std::size_t> lane_index(std::string_view id) const;
  std::optional<std::size_t> trajectory_index(std::string_view id) const;
  std::optional<std::size_t> track_index(TrackId id) const;

  const Road* find_road(std::string_view id) const;
  const Lane* find_lane(std::string_view id) const;
  const Trajectory* find_trajectory(std::string_view id) const;

  /// Throws UnknownTrack.
  const Track& track(TrackId id) const;

  /// Road that carries `lane_id`, or nullptr if either is unknown.
  const Road* road_of_lane(std::string_view lane_id) const;

  /// Lane indices of a road in document order.
  const std::vector<std::size_t>& lanes_of_road(std::size_t road) const {
    return lanes_by_road_[road];
  }

  /// Track that owns a trajectory, if any.
  std::optional<TrackId> track_of_trajectory(std::string_view trajectory_id) const;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) { return a.data_ == b.data_; }

 private:
  NetworkData data_;
  std::unordered_map<std::string, std::size_t> junction_idx_;
  std::unordered_map<std::string, std::size_t> road_idx_;
  std::unordered_map<std::string, std::size_t> lane_idx_;
  std::unordered_map<std::string, std::size_t> trajectory_idx_;
  std::unordered_map<TrackId, std::size_t> track_idx_;
  std::unordered_map<std::string, TrackId> track_by_trajectory_;
  std::vector<std::vector<std::size_t>> lanes_by_road_;
};

enum class Rule {
  DuplicateId,
  ReservedId,
  UnknownReference,
  InvalidAttribute,
  MissingLane,
  EndpointMismatch,
  SelfConflict,
  DuplicateConflict,
  CrossJunctionConflict,
  TrackMismatch,
  TrackIndexGap,
  UntrackedTrajectory,
  SharedTrajectory,
};

std::string_view to_string(Rule rule);

struct Violation {
  Rule rule;
  std::vector<std::string> ids;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every structural rule the model must obey. Empty iff the network is valid.
std::vector<Violation> validate_network(const RoadNetwork& net);

/// Tracks whose trajectory shares a conflict pair with `track`'s trajectory,
/// ascending. Throws UnknownTrack.
std::vector<TrackId> conflicting_tracks(const RoadNetwork& net, TrackId track);

}  // namespace tlopt::net
