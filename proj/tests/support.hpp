#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tlopt/lights.hpp"
#include "tlopt/netmodel.hpp"
#include "tlopt/rng.hpp"

namespace tlopt::test {

/// J1 with one entry road, one exit road, one lane each and one track.
inline net::NetworkData minimal_data(double in_length = 100.0, double out_length = 100.0, double rate = 0.0) {
  net::NetworkData d;
  d.junctions = {{"J1", 0.0, 0.0}};
  d.roads = {{"r_in", "EXTERNAL", "J1", in_length, rate}, {"r_out", "J1", "EXTERNAL", out_length, 0.0}};
  d.lanes = {{"r_in_0", "r_in"}, {"r_out_0", "r_out"}};
  d.trajectories = {{"t1", "J1", "r_in_0", "r_out_0", 10.0}};
  d.tracks = {{1, "r_in_0", "t1", "r_out_0"}};
  return d;
}

inline net::RoadNetwork minimal_network() { return net::RoadNetwork(minimal_data()); }

inline const char* kMinimalXml = R"(<?xml version="1.0" encoding="UTF-8"?>
<network>
  <junction id="J1" x="0" y="0"/>
  <road id="r_in" from="EXTERNAL" to="J1" length="100"/>
  <road id="r_out" from="J1" to="EXTERNAL" length="100"/>
  <lane id="r_in_0" road="r_in"/>
  <lane id="r_out_0" road="r_out"/>
  <trajectory id="t1" junction="J1" in="r_in_0" out="r_out_0" length="10"/>
  <track id="1" in="r_in_0" trajectory="t1" out="r_out_0"/>
</network>
)";

/// Random valid network: 1-4 junctions, internal and frontier roads with 1-2
/// lanes, random trajectories and same-junction conflicts. Ids include XML
/// metacharacters and lengths are arbitrary doubles.
inline net::NetworkData random_network_data(Rng& rng) {
  net::NetworkData d;
  const int junctions = 1 + static_cast<int>(rng.below(4));
  auto jname = [](int j) { return "J" + std::to_string(j) + (j % 2 ? "&<" : "\"'"); };
  for (int j = 0; j < junctions; ++j) d.junctions.push_back({jname(j), rng.uniform01() * 1e3 - 500, rng.uniform01() * 7});

  int road_no = 0;
  auto add_road = [&](const std::string& from, const std::string& to) {
    const std::string id = "road " + std::to_string(road_no++);
    const double rate = from == "EXTERNAL" ? rng.uniform01() * (rng.fair_bit() ? 1.0 : 0.0) : 0.0;
    d.roads.push_back({id, from, to, 1e-3 + rng.uniform01() * 500.0, rate});
    const int lanes = 1 + static_cast<int>(rng.below(2));
    for (int l = 0; l < lanes; ++l) d.lanes.push_back({id + "/" + std::to_string(l), id});
  };
  for (int j = 0; j < junctions; ++j) {
    add_road("EXTERNAL", jname(j));
    add_road(jname(j), "EXTERNAL");
    for (int k = 0; k < junctions; ++k) {
      if (k != j && rng.bernoulli(0.4)) add_road(jname(j), jname(k));
    }
  }

  auto lanes_of = [&](const std::string& road) {
    std::vector<std::string> out;
    for (const auto& l : d.lanes) {
      if (l.road == road) out.push_back(l.id);
    }
    return out;
  };
  for (int j = 0; j < junctions; ++j) {
    std::vector<std::string> in_lanes, out_lanes;
    for (const auto& r : d.roads) {
      for (const auto& l : lanes_of(r.id)) {
        if (r.to == jname(j)) in_lanes.push_back(l);
        if (r.from == jname(j)) out_lanes.push_back(l);
      }
    }
    std::vector<std::string> here;
    for (const auto& in : in_lanes) {
      for (const auto& out : out_lanes) {
        if (!rng.bernoulli(0.5)) continue;
        const std::string id = "tr" + std::to_string(d.trajectories.size());
        d.trajectories.push_back({id, jname(j), in, out, 0.5 + rng.uniform01() * 30.0});
        here.push_back(id);
      }
    }
    for (std::size_t a = 0; a < here.size(); ++a) {
      for (std::size_t b = a + 1; b < here.size(); ++b) {
        if (rng.bernoulli(0.3)) d.conflicts.push_back({here[a], here[b]});
      }
    }
  }
  for (const auto& t : d.trajectories) {
    d.tracks.push_back({static_cast<net::TrackId>(d.tracks.size() + 1), t.in_lane, t.id, t.out_lane});
  }
  return d;
}

/// Uniform random programme over legal windows (may violate collisions).
inline lights::LightsProgramme random_programme(const net::RoadNetwork& net, const lights::EncodingParams& p,
                                                Rng& rng) {
  const auto t_max = lights::track_t_max(p, net);
  return lights::decode(lights::random_chromosome(net.track_count(), p.field_bits(), rng), p, t_max);
}

/// Random programme that passes repair; gives up after many attempts.
inline lights::LightsProgramme random_feasible_programme(const net::RoadNetwork& net,
                                                         const lights::EncodingParams& p, Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    if (auto repaired = lights::repair_conflicts(random_programme(net, p, rng), net)) return *repaired;
  }
  throw std::runtime_error("no feasible programme found");
}

}  // namespace tlopt::test
