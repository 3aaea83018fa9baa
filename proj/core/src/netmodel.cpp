#include "tlopt/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace tlopt::net {

namespace {

template <class Map, class Key>
std::optional<std::size_t> lookup(const Map& map, const Key& key) {
  if (auto it = map.find(key); it != map.end()) return it->second;
  return std::nullopt;
}

}  // namespace

RoadNetwork::RoadNetwork(NetworkData data) : data_(std::move(data)) {
  for (std::size_t i = 0; i < data_.junctions.size(); ++i) junction_idx_.try_emplace(data_.junctions[i].id, i);
  for (std::size_t i = 0; i < data_.roads.size(); ++i) road_idx_.try_emplace(data_.roads[i].id, i);
  for (std::size_t i = 0; i < data_.lanes.size(); ++i) lane_idx_.try_emplace(data_.lanes[i].id, i);
  for (std::size_t i = 0; i < data_.trajectories.size(); ++i) {
    trajectory_idx_.try_emplace(data_.trajectories[i].id, i);
  }
  for (std::size_t i = 0; i < data_.tracks.size(); ++i) {
    track_idx_.try_emplace(data_.tracks[i].id, i);
    track_by_trajectory_.try_emplace(data_.tracks[i].trajectory, data_.tracks[i].id);
  }
  lanes_by_road_.resize(data_.roads.size());
  for (std::size_t i = 0; i < data_.lanes.size(); ++i) {
    if (auto r = road_index(data_.lanes[i].road)) lanes_by_road_[*r].push_back(i);
  }
}

std::optional<std::size_t> RoadNetwork::junction_index(std::string_view id) const {
  return lookup(junction_idx_, std::string(id));
}
std::optional<std::size_t> RoadNetwork::road_index(std::string_view id) const {
  return lookup(road_idx_, std::string(id));
}
std::optional<std::size_t> RoadNetwork::lane_index(std::string_view id) const {
  return lookup(lane_idx_, std::string(id));
}
std::optional<std::size_t> RoadNetwork::trajectory_index(std::string_view id) const {
  return lookup(trajectory_idx_, std::string(id));
}
std::optional<std::size_t> RoadNetwork::track_index(TrackId id) const { return lookup(track_idx_, id); }

const Road* RoadNetwork::find_road(std::string_view id) const {
  auto i = road_index(id);
  return i ? &data_.roads[*i] : nullptr;
}

const Lane* RoadNetwork::find_lane(std::string_view id) const {
  auto i = lane_index(id);
  return i ? &data_.lanes[*i] : nullptr;
}

const Trajectory* RoadNetwork::find_trajectory(std::string_view id) const {
  auto i = trajectory_index(id);
  return i ? &data_.trajectories[*i] : nullptr;
}

const Track& RoadNetwork::track(TrackId id) const {
  auto i = track_index(id);
  if (!i) throw UnknownTrack(id);
  return data_.tracks[*i];
}

const Road* RoadNetwork::road_of_lane(std::string_view lane_id) const {
  const Lane* lane = find_lane(lane_id);
  return lane ? find_road(lane->road) : nullptr;
}

std::optional<TrackId> RoadNetwork::track_of_trajectory(std::string_view trajectory_id) const {
  if (auto it = track_by_trajectory_.find(std::string(trajectory_id)); it != track_by_trajectory_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::DuplicateId: return "DuplicateId";
    case Rule::ReservedId: return "ReservedId";
    case Rule::UnknownReference: return "UnknownReference";
    case Rule::InvalidAttribute: return "InvalidAttribute";
    case Rule::MissingLane: return "MissingLane";
    case Rule::EndpointMismatch: return "EndpointMismatch";
    case Rule::SelfConflict: return "SelfConflict";
    case Rule::DuplicateConflict: return "DuplicateConflict";
    case Rule::CrossJunctionConflict: return "CrossJunctionConflict";
    case Rule::TrackMismatch: return "TrackMismatch";
    case Rule::TrackIndexGap: return "TrackIndexGap";
    case Rule::UntrackedTrajectory: return "UntrackedTrajectory";
    case Rule::SharedTrajectory: return "SharedTrajectory";
  }
  return "?";
}

namespace {

class Checker {
 public:
  explicit Checker(const RoadNetwork& net) : net_(net) {}

  std::vector<Violation> run() {
    check_junctions();
    check_roads();
    check_lanes();
    check_trajectories();
    check_conflicts();
    check_tracks();
    return std::move(out_);
  }

 private:
  void add(Rule rule, std::vector<std::string> ids, std::string message) {
    out_.push_back({rule, std::move(ids), std::move(message)});
  }

  template <class Entities>
  void check_unique(const Entities& items, const char* kind) {
    std::set<std::string> seen;
    for (const auto& item : items) {
      if (item.id.empty()) add(Rule::InvalidAttribute, {item.id}, std::string(kind) + " with empty id");
      if (!seen.insert(item.id).second) add(Rule::DuplicateId, {item.id}, std::string("duplicate ") + kind + " id");
    }
  }

  bool junction_ref_ok(const std::string& id) const {
    return id == kExternal || net_.junction_index(id).has_value();
  }

  void check_junctions() {
    check_unique(net_.junctions(), "junction");
    for (const auto& j : net_.junctions()) {
      if (j.id == kExternal) add(Rule::ReservedId, {j.id}, "EXTERNAL is reserved for frontier roads");
      if (!std::isfinite(j.x) || !std::isfinite(j.y)) add(Rule::InvalidAttribute, {j.id}, "non-finite position");
    }
  }

  void check_roads() {
    check_unique(net_.roads(), "road");
    for (std::size_t i = 0; i < net_.roads().size(); ++i) {
      const Road& r = net_.roads()[i];
      if (!junction_ref_ok(r.from)) add(Rule::UnknownReference, {r.id, r.from}, "road.from names no junction");
      if (!junction_ref_ok(r.to)) add(Rule::UnknownReference, {r.id, r.to}, "road.to names no junction");
      if (r.is_entry() && r.is_exit()) add(Rule::InvalidAttribute, {r.id}, "both road endpoints are EXTERNAL");
      if (!(std::isfinite(r.length) && r.length > 0.0)) add(Rule::InvalidAttribute, {r.id}, "length must be > 0");
      if (!(r.spawn_rate >= 0.0 && r.spawn_rate <= 1.0)) {
        add(Rule::InvalidAttribute, {r.id}, "spawn_rate must lie in [0, 1]");
      } else if (r.spawn_rate > 0.0 && !r.is_entry()) {
        add(Rule::InvalidAttribute, {r.id}, "spawn_rate on a road not starting at EXTERNAL");
      }
      if (net_.road_index(r.id) == i && net_.lanes_of_road(i).empty()) {
        add(Rule::MissingLane, {r.id}, "road has no lane");
      }
    }
  }

  void check_lanes() {
    check_unique(net_.lanes(), "lane");
    for (const auto& l : net_.lanes()) {
      if (!net_.find_road(l.road)) add(Rule::UnknownReference, {l.id, l.road}, "lane.road names no road");
    }
  }

  void check_trajectories() {
    check_unique(net_.trajectories(), "trajectory");
    for (const auto& t : net_.trajectories()) {
      if (!net_.junction_index(t.junction)) {
        add(Rule::UnknownReference, {t.id, t.junction}, "trajectory.junction names no junction");
      }
      if (!(std::isfinite(t.crossing_length) && t.crossing_length > 0.0)) {
        add(Rule::InvalidAttribute, {t.id}, "crossing length must be > 0");
      }
      if (const Road* in = net_.road_of_lane(t.in_lane)) {
        if (in->to != t.junction) add(Rule::EndpointMismatch, {t.id, t.in_lane}, "in lane does not end at junction");
      } else {
        add(Rule::UnknownReference, {t.id, t.in_lane}, "trajectory.in names no lane");
      }
      if (const Road* out = net_.road_of_lane(t.out_lane)) {
        if (out->from != t.junction) {
          add(Rule::EndpointMismatch, {t.id, t.out_lane}, "out lane does not start at junction");
        }
      } else {
        add(Rule::UnknownReference, {t.id, t.out_lane}, "trajectory.out names no lane");
      }
    }
  }

  void check_conflicts() {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : net_.conflicts()) {
      if (c.a == c.b) {
        add(Rule::SelfConflict, {c.a}, "trajectory conflicts with itself");
        continue;
      }
      const Trajectory* a = net_.find_trajectory(c.a);
      const Trajectory* b = net_.find_trajectory(c.b);
      if (!a) add(Rule::UnknownReference, {c.a}, "conflict names no trajectory");
      if (!b) add(Rule::UnknownReference, {c.b}, "conflict names no trajectory");
      if (a && b && a->junction != b->junction) {
        add(Rule::CrossJunctionConflict, {c.a, c.b}, "conflicting trajectories at different junctions");
      }
      auto key = std::minmax(c.a, c.b);
      if (!seen.emplace(key.first, key.second).second) {
        add(Rule::DuplicateConflict, {c.a, c.b}, "conflict pair stored more than once");
      }
    }
  }

  void check_tracks() {
    std::set<TrackId> ids;
    std::set<std::string> used;
    for (const auto& t : net_.tracks()) {
      if (!ids.insert(t.id).second) add(Rule::DuplicateId, {std::to_string(t.id)}, "duplicate track id");
      if (!net_.find_lane(t.in_lane)) add(Rule::UnknownReference, {std::to_string(t.id), t.in_lane}, "track.in names no lane");
      if (!net_.find_lane(t.out_lane)) {
        add(Rule::UnknownReference, {std::to_string(t.id), t.out_lane}, "track.out names no lane");
      }
      if (const Trajectory* tr = net_.find_trajectory(t.trajectory)) {
        if (tr->in_lane != t.in_lane || tr->out_lane != t.out_lane) {
          add(Rule::TrackMismatch, {std::to_string(t.id), t.trajectory}, "track lanes differ from its trajectory");
        }
      } else {
        add(Rule::UnknownReference, {std::to_string(t.id), t.trajectory}, "track.trajectory names no trajectory");
      }
      if (!used.insert(t.trajectory).second) {
        add(Rule::SharedTrajectory, {std::to_string(t.id), t.trajectory}, "trajectory belongs to several tracks");
      }
    }
    const auto m = static_cast<TrackId>(net_.tracks().size());
    for (TrackId id : ids) {
      if (id < 1 || id > m) {
        add(Rule::TrackIndexGap, {std::to_string(id)}, "track ids must be exactly 1..M");
        break;
      }
    }
    for (const auto& tr : net_.trajectories()) {
      if (!used.count(tr.id)) add(Rule::UntrackedTrajectory, {tr.id}, "trajectory has no track (junction unsignalised)");
    }
  }

  const RoadNetwork& net_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate_network(const RoadNetwork& net) { return Checker(net).run(); }

std::vector<TrackId> conflicting_tracks(const RoadNetwork& net, TrackId track) {
  const std::string& own = net.track(track).trajectory;
  std::set<TrackId> result;
  for (const auto& c : net.conflicts()) {
    const std::string* other = nullptr;
    if (c.a == own) other = &c.b;
    else if (c.b == own) other = &c.a;
    if (!other || *other == own) continue;
    if (auto t = net.track_of_trajectory(*other)) result.insert(*t);
  }
  result.erase(track);
  return {result.begin(), result.end()};
}

}  // namespace tlopt::net
