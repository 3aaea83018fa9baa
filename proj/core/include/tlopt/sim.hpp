#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlopt/lights.hpp"
#include "tlopt/netmodel.hpp"
#include "tlopt/rng.hpp"
#include "tlopt/routing.hpp"

namespace tlopt::sim {

using lights::LightColor;
using net::TrackId;

struct SimConfig {
  /// Tick length in milliseconds.
  int tick_ms = 200;
  std::int64_t total_ticks = 1000;
  double v_max = 13.9;
  double a_max = 2.0;
  double b_max = 4.5;
  /// Standstill gap between consecutive vehicles, vehicle length included.
  double s_min = 7.5;
  double stop_speed_eps = 0.1;
  std::uint64_t seed = 0;
  bool record_traces = false;

  double dt() const { return tick_ms / 1000.0; }
  std::vector<std::string> problems() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// What a driver knows at the start of a tick.
struct Perception {
  /// Distance to the rear of the vehicle ahead (possibly across the next
  /// junction), or kUnbounded.
  double gap_ahead = kUnbounded;
  std::optional<double> predecessor_speed;
  /// Distance to the end of the current road; kUnbounded on exit roads.
  double distance_to_junction = kUnbounded;
  /// Light of the track the vehicle takes next; none on exit roads.
  std::optional<LightColor> light;
};

/// Distance covered while braking at b_max from speed v, stepping the same
/// way the simulation does (speed first, then position).
double braking_distance(double v, const SimConfig& cfg);

/// Largest speed u for the coming tick such that u*dt + braking_distance(u)
/// fits in `room`: the vehicle can still come to rest within `room`.
/// Capped at v_max.
double safe_speed(double room, const SimConfig& cfg);

/// Speed for the coming tick: the tightest of v_max, the safe speed for
/// gap_ahead - s_min, and (on Red, RedYellow, or a Yellow the vehicle can
/// still stop for) the safe speed for the distance to the stop line, clamped
/// to what acceleration and braking bounds allow from v.
double drive_decision(const Perception& perception, double v, const SimConfig& cfg);

struct StopEvent {
  std::string lane;
  double position = 0.0;
  std::int64_t start_tick = 0;
  std::int64_t duration = 0;

  friend bool operator==(const StopEvent&, const StopEvent&) = default;
};

struct TraceSample {
  std::int64_t tick = 0;
  std::string lane;
  double position = 0.0;
  double speed = 0.0;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

using VehicleId = std::uint64_t;

struct Vehicle {
  VehicleId id = 0;
  std::size_t lane = 0;
  double position = 0.0;
  double speed = 0.0;
  net::Route route;
  /// Index into route.tracks of the next junction to cross.
  std::size_t route_index = 0;
  std::int64_t spawn_tick = 0;
  std::optional<std::int64_t> finish_tick;
  std::vector<StopEvent> stops;
  std::vector<TraceSample> trace;
  double speed_sum = 0.0;
  std::int64_t speed_samples = 0;
  bool live = true;

  bool on_exit_road() const { return route_index >= route.tracks.size(); }
};

struct VehicleRecord {
  VehicleId id = 0;
  std::int64_t spawn_tick = 0;
  std::optional<std::int64_t> travel_ticks;
  std::vector<StopEvent> stops;
  double mean_speed = 0.0;
  std::vector<TraceSample> trace;

  friend bool operator==(const VehicleRecord&, const VehicleRecord&) = default;
};

struct SimulationStats {
  std::int64_t ticks = 0;
  std::int64_t spawned = 0;
  std::int64_t completed = 0;
  std::int64_t live = 0;
  double mean_travel_ticks = 0.0;
  /// Average over vehicle-ticks of live vehicles; 0 when nothing moved.
  double mean_speed = 0.0;
  std::int64_t total_stops = 0;
  std::vector<VehicleRecord> vehicles;

  friend bool operator==(const SimulationStats&, const SimulationStats&) = default;
};

struct Crossing {
  VehicleId vehicle = 0;
  TrackId track = 0;
  std::size_t from_lane = 0;
  std::size_t to_lane = 0;
};

/// What happened during the most recent step.
struct StepEvents {
  std::int64_t tick = 0;
  std::vector<Crossing> crossings;
  std::vector<VehicleId> completed;
  std::vector<VehicleId> spawned;
};

class InfeasibleProgramme : public std::runtime_error {
 public:
  explicit InfeasibleProgramme(std::vector<lights::ProgrammeViolation> violations);
  const std::vector<lights::ProgrammeViolation>& violations() const { return violations_; }

 private:
  std::vector<lights::ProgrammeViolation> violations_;
};

/// Complete simulation state. Holds a reference to the network, which must
/// outlive the world. Single-threaded; independent worlds may run in
/// parallel over the same network.
class World {
 public:
  /// Throws InfeasibleProgramme if the programme fails validate_programme and
  /// std::invalid_argument if the config is invalid.
  World(const net::RoadNetwork& net, lights::LightsProgramme programme, SimConfig config);

  /// One iteration: (1) lights for the current tick, (2) perceptions,
  /// (3) movement and junction crossings, (4) removal of finished vehicles
  /// and spawning. Then the tick advances. Requires tick() < total_ticks.
  void step();

  /// Steps until tick() == until_tick (<= total_ticks) and returns stats.
  SimulationStats run(std::int64_t until_tick);

  SimulationStats stats() const;

  /// Forces a spawn on `entry` heading to `exit` in the next step's spawn
  /// phase, in addition to the random arrivals. Stays pending while the entry
  /// lane has no room. Throws std::invalid_argument if no route exists.
  void schedule_spawn(const std::string& entry, const std::string& exit);

  std::int64_t tick() const { return tick_; }
  const net::RoadNetwork& network() const { return net_; }
  const lights::LightsProgramme& programme() const { return programme_; }
  const SimConfig& config() const { return config_; }
  const Rng& rng() const { return rng_; }

  std::int64_t spawned() const { return spawned_; }
  std::int64_t completed() const { return completed_; }
  std::int64_t live() const { return spawned_ - completed_; }

  /// Vehicle ids on a lane (by lane index), front of the road first.
  const std::deque<VehicleId>& lane_queue(std::size_t lane) const { return queues_[lane]; }
  std::size_t lane_count() const { return queues_.size(); }
  /// Every vehicle ever spawned, indexed by id.
  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const Vehicle& vehicle(VehicleId id) const { return vehicles_.at(id); }

  /// Light of a track as set by the latest step.
  LightColor light(TrackId track) const { return lights_.at(static_cast<std::size_t>(track - 1)); }
  const StepEvents& last_events() const { return events_; }

 private:
  struct TrackInfo {
    std::size_t in_lane;
    std::size_t out_lane;
  };
  struct Entry {
    std::size_t origin;  // index into routes_.origins()
    double spawn_rate;
  };
  struct PendingSpawn {
    std::string entry;
    net::Route route;
  };

  double lane_length(std::size_t lane) const { return lane_lengths_[lane]; }
  Perception perceive(const Vehicle& v, std::size_t index_in_lane) const;
  void move_vehicle(Vehicle& v, const Perception& p);
  void record_sample(Vehicle& v);
  void close_stop(Vehicle& v);
  bool try_spawn(const net::Route& route);

  const net::RoadNetwork& net_;
  lights::LightsProgramme programme_;
  SimConfig config_;
  Rng rng_;
  net::RouteTable routes_;

  std::vector<double> lane_lengths_;
  std::vector<std::size_t> lane_order_;  // lane indices sorted by lane id
  std::vector<std::size_t> exit_lanes_;  // lanes on exit roads, by lane id
  std::vector<TrackInfo> tracks_;
  std::vector<Entry> entries_;

  std::int64_t tick_ = 0;
  std::vector<LightColor> lights_;
  std::vector<std::deque<VehicleId>> queues_;
  std::vector<Vehicle> vehicles_;
  std::vector<Perception> perceptions_;  // by vehicle id, rebuilt each step
  std::vector<std::int64_t> open_stop_;  // by vehicle id, index into stops or -1
  std::vector<PendingSpawn> pending_;
  std::int64_t spawned_ = 0;
  std::int64_t completed_ = 0;
  double speed_sum_ = 0.0;
  std::int64_t vehicle_ticks_ = 0;
  StepEvents events_;
};

struct FitnessWeights {
  double completed = 0.5;
  double speed = 0.5;

  friend bool operator==(const FitnessWeights&, const FitnessWeights&) = default;
};

/// w_c * completed / max(spawned, 1) + w_s * mean_speed / v_max.
/// Throws std::invalid_argument unless both weights are >= 0 and sum to 1.
double aggregate_fitness(const SimulationStats& stats, double v_max, const FitnessWeights& weights);

}  // namespace tlopt::sim
