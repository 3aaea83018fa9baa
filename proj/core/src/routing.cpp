#include "tlopt/routing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tlopt::net {

namespace {

double road_length_of_lane(const RoadNetwork& net, const std::string& lane) {
  const Road* r = net.road_of_lane(lane);
  return r ? r->length : 0.0;
}

// Cost charged for traversing a track: its in road plus the junction crossing.
double track_cost(const RoadNetwork& net, const Track& t) {
  const Trajectory* tr = net.find_trajectory(t.trajectory);
  return road_length_of_lane(net, t.in_lane) + (tr ? tr->crossing_length : 0.0);
}

struct Label {
  double length = std::numeric_limits<double>::infinity();
  std::vector<TrackId> path;
  bool settled = false;

  bool reached() const { return !path.empty(); }
};

bool better(const Label& a, const Label& b) {
  if (!b.reached()) return a.reached();
  if (!a.reached()) return false;
  if (a.length != b.length) return a.length < b.length;
  return a.path < b.path;
}

}  // namespace

double route_length(const RoadNetwork& net, const Route& route) {
  double total = 0.0;
  for (TrackId id : route.tracks) total += track_cost(net, net.track(id));
  if (!route.tracks.empty()) total += road_length_of_lane(net, net.track(route.tracks.back()).out_lane);
  return total;
}

std::optional<Route> shortest_route(const RoadNetwork& net, std::string_view entry, std::string_view exit) {
  const Road* from = net.find_road(entry);
  const Road* to = net.find_road(exit);
  if (!from || !to) throw std::invalid_argument("unknown road in route request");
  if (!from->is_entry()) throw std::invalid_argument("route must start on a road from EXTERNAL: " + from->id);
  if (!to->is_exit()) throw std::invalid_argument("route must end on a road to EXTERNAL: " + to->id);

  const auto& tracks = net.tracks();
  const std::size_t n = tracks.size();
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Road* r = net.road_of_lane(tracks[i].in_lane);
    if (r && r->id == from->id) {
      Label start{track_cost(net, tracks[i]), {tracks[i].id}, false};
      if (better(start, labels[i])) labels[i] = std::move(start);
    }
  }

  // Dijkstra over tracks with (length, path) labels; path order is a strict
  // refinement because every road has positive length.
  for (;;) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!labels[i].settled && labels[i].reached() && (best == n || better(labels[i], labels[best]))) best = i;
    }
    if (best == n) break;
    labels[best].settled = true;
    const Track& t = tracks[best];
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j].settled || tracks[j].in_lane != t.out_lane) continue;
      Label next{labels[best].length + track_cost(net, tracks[j]), labels[best].path, false};
      next.path.push_back(tracks[j].id);
      if (better(next, labels[j])) labels[j] = std::move(next);
    }
  }

  const Label* answer = nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    const Road* out = net.road_of_lane(tracks[i].out_lane);
    if (out && out->id == to->id && labels[i].reached() && (!answer || better(labels[i], *answer))) {
      answer = &labels[i];
    }
  }
  if (!answer) return std::nullopt;
  return Route{answer->path};
}

RouteTable::RouteTable(const RoadNetwork& net) {
  std::vector<const Road*> entries;
  std::vector<const Road*> exits;
  for (const auto& r : net.roads()) {
    if (r.is_entry()) entries.push_back(&r);
    if (r.is_exit()) exits.push_back(&r);
  }
  auto by_id = [](const Road* a, const Road* b) { return a->id < b->id; };
  std::sort(entries.begin(), entries.end(), by_id);
  std::sort(exits.begin(), exits.end(), by_id);
  for (const Road* e : entries) {
    Origin origin{e->id, {}};
    for (const Road* x : exits) {
      if (auto route = shortest_route(net, e->id, x->id)) origin.destinations.push_back({x->id, std::move(*route)});
    }
    origins_.push_back(std::move(origin));
  }
}

const RouteTable::Origin* RouteTable::find(std::string_view entry) const {
  for (const auto& o : origins_) {
    if (o.entry == entry) return &o;
  }
  return nullptr;
}

}  // namespace tlopt::net
