#include "tlopt/samples.hpp"

#include <array>
#include <map>
#include <string>

namespace tlopt::samples {

using namespace tlopt::net;

namespace {

struct Builder {
  NetworkData data;

  void junction(const std::string& id, double x, double y) { data.junctions.push_back({id, x, y}); }

  void road(const std::string& id, const std::string& from, const std::string& to, double length, double rate = 0.0) {
    data.roads.push_back({id, from, to, length, rate});
    data.lanes.push_back({id + "_0", id});
  }

  void trajectory(const std::string& id, const std::string& junction, const std::string& in_road,
                  const std::string& out_road, double length) {
    data.trajectories.push_back({id, junction, in_road + "_0", out_road + "_0", length});
    data.tracks.push_back({static_cast<TrackId>(data.tracks.size() + 1), in_road + "_0", id, out_road + "_0"});
  }

  void conflict(const std::string& a, const std::string& b) { data.conflicts.push_back({a, b}); }
};

}  // namespace

RoadNetwork crossing_junction(double north_rate, double west_rate) {
  Builder b;
  b.junction("J", 0.0, 0.0);
  b.road("n_in", std::string(kExternal), "J", 200.0, north_rate);
  b.road("s_out", "J", std::string(kExternal), 200.0);
  b.road("w_in", std::string(kExternal), "J", 200.0, west_rate);
  b.road("e_out", "J", std::string(kExternal), 200.0);
  b.trajectory("J_ns", "J", "n_in", "s_out", 15.0);
  b.trajectory("J_we", "J", "w_in", "e_out", 15.0);
  b.conflict("J_ns", "J_we");
  return RoadNetwork(std::move(b.data));
}

RoadNetwork grid_2x2(double scale) {
  Builder b;
  constexpr double kSpacing = 300.0;
  constexpr double kInner = 250.0;
  constexpr double kOuter = 200.0;
  auto jid = [](int r, int c) { return "J" + std::to_string(r) + std::to_string(c); };
  for (int r = 1; r <= 2; ++r) {
    for (int c = 1; c <= 2; ++c) b.junction(jid(r, c), c * kSpacing, r * kSpacing);
  }

  // Sides in N, E, S, W order with their row/column offsets.
  const std::array<char, 4> sides{'N', 'E', 'S', 'W'};
  const std::array<int, 4> dr{-1, 0, 1, 0};
  const std::array<int, 4> dc{0, 1, 0, -1};
  auto inside = [](int r, int c) { return r >= 1 && r <= 2 && c >= 1 && c <= 2; };

  // Demand per entry side; westbound and eastbound row 1 is the arterial.
  auto entry_rate = [&](int r, char side) {
    if (side == 'E' || side == 'W') return (r == 1 ? 0.04 : 0.02) * scale;
    return 0.015 * scale;
  };

  // in_road[J][side]: road arriving at J from that side; out_road likewise.
  std::map<std::string, std::map<char, std::string>> in_road, out_road;
  for (int r = 1; r <= 2; ++r) {
    for (int c = 1; c <= 2; ++c) {
      const std::string j = jid(r, c);
      for (int s = 0; s < 4; ++s) {
        const int nr = r + dr[s];
        const int nc = c + dc[s];
        if (inside(nr, nc)) {
          const std::string other = jid(nr, nc);
          out_road[j][sides[s]] = j + "_" + other;
          in_road[j][sides[s]] = other + "_" + j;
          b.road(j + "_" + other, j, other, kInner);
        } else {
          const std::string in = "in_" + j + "_" + sides[s];
          const std::string out = "out_" + j + "_" + sides[s];
          in_road[j][sides[s]] = in;
          out_road[j][sides[s]] = out;
          b.road(in, std::string(kExternal), j, kOuter, entry_rate(r, sides[s]));
          b.road(out, j, std::string(kExternal), kOuter);
        }
      }
    }
  }

  // from-side, to-side: straights then right turns (right-hand traffic).
  const std::array<std::pair<char, char>, 8> moves{{{'N', 'S'}, {'S', 'N'}, {'E', 'W'}, {'W', 'E'},
                                                    {'N', 'W'}, {'S', 'E'}, {'E', 'N'}, {'W', 'S'}}};
  for (int r = 1; r <= 2; ++r) {
    for (int c = 1; c <= 2; ++c) {
      const std::string j = jid(r, c);
      auto tid = [&](std::pair<char, char> m) { return j + "_" + m.first + m.second; };
      for (auto m : moves) {
        const bool straight = (m.first == 'N' && m.second == 'S') || (m.first == 'S' && m.second == 'N') ||
                              (m.first == 'E' && m.second == 'W') || (m.first == 'W' && m.second == 'E');
        b.trajectory(tid(m), j, in_road[j][m.first], out_road[j][m.second], straight ? 20.0 : 10.0);
      }
      for (auto ns : {std::pair{'N', 'S'}, std::pair{'S', 'N'}}) {
        for (auto ew : {std::pair{'E', 'W'}, std::pair{'W', 'E'}}) b.conflict(tid(ns), tid(ew));
      }
    }
  }
  return RoadNetwork(std::move(b.data));
}

RoadNetwork three_way_conflict(double rate) {
  Builder b;
  b.junction("J", 0.0, 0.0);
  for (const char* street : {"a", "b", "c"}) {
    const std::string s(street);
    b.road(s + "_in", std::string(kExternal), "J", 150.0, rate);
    b.road(s + "_out", "J", std::string(kExternal), 150.0);
  }
  b.trajectory("J_a", "J", "a_in", "a_out", 15.0);
  b.trajectory("J_b", "J", "b_in", "b_out", 15.0);
  b.trajectory("J_c", "J", "c_in", "c_out", 15.0);
  b.conflict("J_a", "J_b");
  b.conflict("J_a", "J_c");
  b.conflict("J_b", "J_c");
  return RoadNetwork(std::move(b.data));
}

}  // namespace tlopt::samples
