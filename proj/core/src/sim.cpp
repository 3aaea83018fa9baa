#include "tlopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tlopt::sim {

std::vector<std::string> SimConfig::problems() const {
  std::vector<std::string> out;
  if (tick_ms <= 0) out.push_back("tick_ms must be > 0");
  if (total_ticks < 0) out.push_back("total_ticks must be >= 0");
  if (!(v_max > 0)) out.push_back("v_max must be > 0");
  if (!(a_max > 0)) out.push_back("a_max must be > 0");
  if (!(b_max > 0)) out.push_back("b_max must be > 0");
  if (!(s_min > 0)) out.push_back("s_min must be > 0");
  if (!(stop_speed_eps > 0)) out.push_back("stop_speed_eps must be > 0");
  if (!(stop_speed_eps < v_max)) out.push_back("stop_speed_eps must be below v_max");
  return out;
}

double braking_distance(double v, const SimConfig& cfg) {
  if (v <= 0.0) return 0.0;
  const double dt = cfg.dt();
  const double step = cfg.b_max * dt;
  // Number of braking ticks that still move: v - k*step > 0 for k = 1..m.
  const double m = std::ceil(v / step) - 1.0;
  return dt * (m * v - step * m * (m + 1.0) / 2.0);
}

double safe_speed(double room, const SimConfig& cfg) {
  if (!(room > 0.0)) return 0.0;
  if (std::isinf(room)) return kUnbounded;
  const double dt = cfg.dt();
  if (room >= cfg.v_max * dt + braking_distance(cfg.v_max, cfg)) return cfg.v_max;
  const double step = cfg.b_max * dt;
  // u*dt + braking_distance(u) is piecewise linear in u with breakpoints at
  // multiples of `step`; on (m*step, (m+1)*step] it equals
  // dt * ((m+1)*u - step*m*(m+1)/2).
  for (double m = 0.0;; m += 1.0) {
    const double u = (room / dt + step * m * (m + 1.0) / 2.0) / (m + 1.0);
    if (u <= (m + 1.0) * step) return u;
  }
}

double drive_decision(const Perception& p, double v, const SimConfig& cfg) {
  const double dt = cfg.dt();
  const double lo = std::max(0.0, v - cfg.b_max * dt);
  const double hi = std::min(cfg.v_max, v + cfg.a_max * dt);

  double target = cfg.v_max;
  if (std::isfinite(p.gap_ahead)) target = std::min(target, safe_speed(p.gap_ahead - cfg.s_min, cfg));
  if (p.light && *p.light != LightColor::Green && std::isfinite(p.distance_to_junction)) {
    const bool committed = *p.light == LightColor::Yellow && braking_distance(v, cfg) > p.distance_to_junction;
    if (!committed) target = std::min(target, safe_speed(p.distance_to_junction, cfg));
  }
  return std::clamp(target, lo, hi);
}

InfeasibleProgramme::InfeasibleProgramme(std::vector<lights::ProgrammeViolation> violations)
    : std::runtime_error(violations.empty() ? std::string("infeasible programme")
                                            : "infeasible programme: " + violations.front().message),
      violations_(std::move(violations)) {}

World::World(const net::RoadNetwork& net, lights::LightsProgramme programme, SimConfig config)
    : net_(net), programme_(std::move(programme)), config_(config), rng_(config.seed), routes_(net) {
  if (auto problems = config_.problems(); !problems.empty()) throw std::invalid_argument(problems.front());
  if (auto violations = lights::validate_programme(programme_, net_); !violations.empty()) {
    throw InfeasibleProgramme(std::move(violations));
  }

  const auto& lanes = net_.lanes();
  lane_lengths_.resize(lanes.size());
  for (std::size_t i = 0; i < lanes.size(); ++i) lane_lengths_[i] = net_.road_of_lane(lanes[i].id)->length;
  lane_order_.resize(lanes.size());
  std::iota(lane_order_.begin(), lane_order_.end(), std::size_t{0});
  std::sort(lane_order_.begin(), lane_order_.end(),
            [&](std::size_t a, std::size_t b) { return lanes[a].id < lanes[b].id; });
  for (std::size_t lane : lane_order_) {
    if (net_.road_of_lane(lanes[lane].id)->is_exit()) exit_lanes_.push_back(lane);
  }

  for (TrackId id = 1; id <= net_.track_count(); ++id) {
    const net::Track& t = net_.track(id);
    tracks_.push_back({*net_.lane_index(t.in_lane), *net_.lane_index(t.out_lane)});
  }
  for (std::size_t i = 0; i < routes_.origins().size(); ++i) {
    entries_.push_back({i, net_.find_road(routes_.origins()[i].entry)->spawn_rate});
  }

  lights_.assign(tracks_.size(), LightColor::Red);
  queues_.resize(lanes.size());
}

Perception World::perceive(const Vehicle& v, std::size_t index_in_lane) const {
  Perception p;
  const auto& queue = queues_[v.lane];
  const double to_end = lane_length(v.lane) - v.position;
  if (index_in_lane > 0) {
    const Vehicle& ahead = vehicles_[queue[index_in_lane - 1]];
    p.gap_ahead = ahead.position - v.position;
    p.predecessor_speed = ahead.speed;
  }
  if (!v.on_exit_road()) {
    const TrackId next = v.route.tracks[v.route_index];
    p.distance_to_junction = to_end;
    p.light = lights_[static_cast<std::size_t>(next - 1)];
    if (index_in_lane == 0) {
      const auto& beyond = queues_[tracks_[static_cast<std::size_t>(next - 1)].out_lane];
      if (!beyond.empty()) {
        const Vehicle& ahead = vehicles_[beyond.back()];
        p.gap_ahead = to_end + ahead.position;
        p.predecessor_speed = ahead.speed;
      }
    }
  }
  return p;
}

void World::move_vehicle(Vehicle& v, const Perception& p) {
  const double speed = drive_decision(p, v.speed, config_);
  v.speed = speed;
  const double length = lane_length(v.lane);
  const double reached = v.position + speed * config_.dt();
  if (reached < length) {
    v.position = reached;
    return;
  }
  if (v.on_exit_road()) {
    v.position = length;
    return;
  }
  const TrackId next = v.route.tracks[v.route_index];
  const TrackInfo& track = tracks_[static_cast<std::size_t>(next - 1)];
  const LightColor light = lights_[static_cast<std::size_t>(next - 1)];
  auto& out = queues_[track.out_lane];
  const double overshoot = std::min(reached - length, lane_length(track.out_lane));
  const bool open = light == LightColor::Green || light == LightColor::Yellow;
  const bool room = out.empty() || vehicles_[out.back()].position - overshoot - config_.s_min >=
                                       braking_distance(speed, config_);
  if (!open || !room) {
    // Held at the stop line.
    v.position = length;
    return;
  }
  auto& in = queues_[v.lane];
  in.pop_front();
  events_.crossings.push_back({v.id, next, v.lane, track.out_lane});
  v.lane = track.out_lane;
  v.position = overshoot;
  ++v.route_index;
  out.push_back(v.id);
}

void World::record_sample(Vehicle& v) {
  speed_sum_ += v.speed;
  ++vehicle_ticks_;
  v.speed_sum += v.speed;
  ++v.speed_samples;
  auto& open = open_stop_[v.id];
  if (v.speed < config_.stop_speed_eps) {
    if (open < 0) {
      open = static_cast<std::int64_t>(v.stops.size());
      v.stops.push_back({net_.lanes()[v.lane].id, v.position, tick_, 0});
    }
    ++v.stops[static_cast<std::size_t>(open)].duration;
  } else {
    open = -1;
  }
  if (config_.record_traces) v.trace.push_back({tick_, net_.lanes()[v.lane].id, v.position, v.speed});
}

void World::close_stop(Vehicle& v) { open_stop_[v.id] = -1; }

bool World::try_spawn(const net::Route& route) {
  const std::size_t lane = tracks_[static_cast<std::size_t>(route.tracks.front() - 1)].in_lane;
  auto& queue = queues_[lane];
  if (!queue.empty() && vehicles_[queue.back()].position < config_.s_min) return false;
  Vehicle v;
  v.id = vehicles_.size();
  v.lane = lane;
  v.route = route;
  v.spawn_tick = tick_;
  queue.push_back(v.id);
  events_.spawned.push_back(v.id);
  vehicles_.push_back(std::move(v));
  perceptions_.emplace_back();
  open_stop_.push_back(-1);
  ++spawned_;
  return true;
}

void World::schedule_spawn(const std::string& entry, const std::string& exit) {
  const auto* origin = routes_.find(entry);
  if (origin) {
    for (const auto& d : origin->destinations) {
      if (d.exit == exit) {
        pending_.push_back({entry, d.route});
        return;
      }
    }
  }
  throw std::invalid_argument("no route from " + entry + " to " + exit);
}

void World::step() {
  if (tick_ >= config_.total_ticks) throw std::logic_error("simulation already reached total_ticks");
  events_ = StepEvents{tick_, {}, {}, {}};

  // (1) Environment: light states for this tick.
  for (std::size_t i = 0; i < lights_.size(); ++i) {
    lights_[i] = lights::color_at(programme_.windows[i], programme_.params, tick_);
  }

  // (2) Perception.
  for (const auto& queue : queues_) {
    for (std::size_t i = 0; i < queue.size(); ++i) perceptions_[queue[i]] = perceive(vehicles_[queue[i]], i);
  }

  // (3) Movement, lanes by id, vehicles front to back. A vehicle that crosses
  // into a lane processed later this tick must not move twice.
  std::vector<VehicleId> batch;
  std::vector<std::uint8_t> moved(vehicles_.size(), 0);
  for (std::size_t lane : lane_order_) {
    batch.assign(queues_[lane].begin(), queues_[lane].end());
    for (VehicleId id : batch) {
      if (moved[id]) continue;
      moved[id] = 1;
      Vehicle& v = vehicles_[id];
      move_vehicle(v, perceptions_[id]);
      record_sample(v);
    }
  }

  // (4) Remove arrivals, then spawn.
  for (std::size_t lane : exit_lanes_) {
    auto& queue = queues_[lane];
    while (!queue.empty() && vehicles_[queue.front()].position >= lane_length(lane)) {
      Vehicle& v = vehicles_[queue.front()];
      queue.pop_front();
      v.live = false;
      v.finish_tick = tick_;
      close_stop(v);
      ++completed_;
      events_.completed.push_back(v.id);
    }
  }
  std::vector<PendingSpawn> still_pending;
  for (auto& p : pending_) {
    if (!try_spawn(p.route)) still_pending.push_back(std::move(p));
  }
  pending_ = std::move(still_pending);
  for (const Entry& e : entries_) {
    if (e.spawn_rate <= 0.0 || !rng_.bernoulli(e.spawn_rate)) continue;
    const auto& dests = routes_.origins()[e.origin].destinations;
    if (dests.empty()) continue;
    const auto pick = rng_.below(dests.size());
    try_spawn(dests[pick].route);
  }

  ++tick_;
}

SimulationStats World::run(std::int64_t until_tick) {
  if (until_tick > config_.total_ticks) throw std::invalid_argument("until_tick exceeds total_ticks");
  while (tick_ < until_tick) step();
  return stats();
}

SimulationStats World::stats() const {
  SimulationStats s;
  s.ticks = tick_;
  s.spawned = spawned_;
  s.completed = completed_;
  s.live = live();
  s.mean_speed = vehicle_ticks_ > 0 ? speed_sum_ / static_cast<double>(vehicle_ticks_) : 0.0;
  double travel = 0.0;
  for (const Vehicle& v : vehicles_) {
    VehicleRecord r;
    r.id = v.id;
    r.spawn_tick = v.spawn_tick;
    if (v.finish_tick) {
      r.travel_ticks = *v.finish_tick - v.spawn_tick;
      travel += static_cast<double>(*r.travel_ticks);
    }
    r.stops = v.stops;
    r.mean_speed = v.speed_samples > 0 ? v.speed_sum / static_cast<double>(v.speed_samples) : 0.0;
    r.trace = v.trace;
    s.total_stops += static_cast<std::int64_t>(v.stops.size());
    s.vehicles.push_back(std::move(r));
  }
  s.mean_travel_ticks = completed_ > 0 ? travel / static_cast<double>(completed_) : 0.0;
  return s;
}

double aggregate_fitness(const SimulationStats& stats, double v_max, const FitnessWeights& w) {
  if (!(w.completed >= 0.0 && w.speed >= 0.0) || std::abs(w.completed + w.speed - 1.0) > 1e-9) {
    throw std::invalid_argument("fitness weights must be non-negative and sum to 1");
  }
  const double completion =
      static_cast<double>(stats.completed) / static_cast<double>(std::max<std::int64_t>(stats.spawned, 1));
  return w.completed * completion + w.speed * (stats.mean_speed / v_max);
}

}  // namespace tlopt::sim
