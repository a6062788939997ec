#pragma once

#include <string>

#include "twoscale/sde_sim.hpp"

namespace twoscale {

/// Simulation coordinates stored alongside a trajectory on disk.
struct TrajectoryMeta {
    double epsilon;
    double sigma;
};

struct TrajectoryFile {
    Trajectory trajectory;
    TrajectoryMeta meta;
};

/*!
 * Write a trajectory; paths ending in ".bin" get the binary layout, anything
 * else CSV.
 *
 * CSV: two '#' header lines (format tag, then key=value pairs for model,
 * epsilon, sigma, dt, seed, t0, dimension), a column header x1[,x2...], and
 * one row per state printed with 17 significant digits.
 *
 * Binary (little-endian): magic "TSTRAJ01", u32 tag length, tag bytes,
 * f64 epsilon, sigma, dt, t0, u64 seed, dimension, state count, then the
 * states as row-major f64.
 */
void write_trajectory(const std::string& path, const Trajectory& traj, const TrajectoryMeta& meta);

TrajectoryFile read_trajectory(const std::string& path);

}  // namespace twoscale
