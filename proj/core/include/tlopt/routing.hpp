#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlopt/netmodel.hpp"

namespace tlopt::net {

/// Ordered tracks from an entry road to an exit road. Consecutive tracks are
/// chained lane to lane: the out lane of one is the in lane of the next.
struct Route {
  std::vector<TrackId> tracks;

  friend bool operator==(const Route&, const Route&) = default;
};

/// Sum of road lengths and crossing lengths along the route, including the
/// entry and exit roads.
double route_length(const RoadNetwork& net, const Route& route);

/// Minimum-length route from `entry` (a road starting at EXTERNAL) to `exit`
/// (a road ending at EXTERNAL). Equal lengths are resolved by the
/// lexicographically smallest track-id sequence. Returns nullopt when the
/// exit is unreachable. Throws std::invalid_argument when either road is
/// unknown or not a frontier road of the required kind.
std::optional<Route> shortest_route(const RoadNetwork& net, std::string_view entry, std::string_view exit);

/// Precomputed routes from every entry road to each reachable exit road,
/// both sorted by road id.
class RouteTable {
 public:
  struct Destination {
    std::string exit;
    Route route;
  };
  struct Origin {
    std::string entry;
    std::vector<Destination> destinations;
  };

  RouteTable() = default;
  explicit RouteTable(const RoadNetwork& net);

  const std::vector<Origin>& origins() const { return origins_; }
  const Origin* find(std::string_view entry) const;

 private:
  std::vector<Origin> origins_;
};

}  // namespace tlopt::net
