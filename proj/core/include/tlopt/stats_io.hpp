#pragma once

#include <string>

#include "tlopt/sim.hpp"

namespace tlopt::sim {

/// `metric,value` rows for the scalar statistics, '\n' line endings.
std::string stats_csv(const SimulationStats& stats);

/// `vehicle,spawn_tick,travel_ticks,stops,mean_speed`; travel_ticks is empty
/// for vehicles still on the network.
std::string vehicles_csv(const SimulationStats& stats);

/// One JSON object per vehicle and line:
/// {"vehicle":id,"trace":[[tick,"lane",position,speed],...]}.
std::string traces_jsonl(const SimulationStats& stats);

}  // namespace tlopt::sim
