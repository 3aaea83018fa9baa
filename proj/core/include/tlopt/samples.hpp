#pragma once

#include "tlopt/netmodel.hpp"

namespace tlopt::samples {

/// Two one-way streets crossing at junction "J": track 1 runs north to
/// south, track 2 west to east, and the two conflict. Spawn rates are per
/// tick.
net::RoadNetwork crossing_junction(double north_rate = 0.05, double west_rate = 0.025);

/// 2x2 grid of two-way streets, junctions J11 J12 J21 J22, one lane per road.
/// Each junction has four straight and four right-turn trajectories (32
/// tracks in total). Each north-south straight conflicts with each east-west
/// straight; right turns conflict with nothing and merge behind traffic on
/// the exit lane. Row 1 carries the heaviest demand.
net::RoadNetwork grid_2x2(double scale = 1.0);

/// Three one-way streets through one junction, all mutually conflicting.
net::RoadNetwork three_way_conflict(double rate = 0.02);

}  // namespace tlopt::samples
