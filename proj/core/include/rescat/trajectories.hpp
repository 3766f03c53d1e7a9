#pragma once

#include <functional>
#include <vector>

#include "rescat/pole_finder.hpp"
#include "rescat/truncated_potential.hpp"

namespace rescat {

struct TrajectoryPoint {
  double r_cut;
  PoleEstimate pole;
};

/// One pole family continued across the cutoff sweep.
struct TrajectoryFamily {
  std::vector<TrajectoryPoint> points;
  PoleClass classification = PoleClass::unclassified;
  bool link_break = false;  // family ended before the sweep did
};

struct TrajectorySet {
  std::vector<double> r_cuts;
  std::vector<std::vector<PoleEstimate>> snapshots;  // poles per r_cut
  std::vector<TrajectoryFamily> families;
  PoleMethod method = PoleMethod::determinant;
};

struct SweepOptions {
  double lattice_a = 0.01;
  // Deep enough that the cutoff chain (Im E ~ -3..-7 for these radii) stays
  // inside the window across the whole sweep.
  Rectangle region{0.05, 13.0, -9.0, -1e-4};
  GridSize grid{160, 90};
  DetSearchOptions det{};
  FixedPointOptions fixed_point{};
  /// Linking: threshold = max(link_factor * previous displacement, floor);
  /// the first link uses a velocity estimate ~ 2|E|/R per unit R.
  double link_factor = 3.0;
  double link_floor = 1e-3;
  /// Fixed-point sweeps rescan for newly entering families every this many
  /// steps (continuation seeds cover the rest).
  int rescan_stride = 10;
};

/// Sweeps the cutoff radius and links the per-radius pole sets into families
/// by nearest-neighbor continuation in the energy plane.
TrajectorySet trace_trajectories(
    const std::function<TruncatedPotential(double)>& potential_builder, double r_min,
    double r_max, double step, PoleMethod method, const SweepOptions& opt = {});

/// Labels each family: physical when its path length across the stability
/// window stays below theta_phys and below ratio * (median spanning-family
/// path length); cutoff otherwise; unclassified when it does not span the
/// window.  Throws WindowUncovered when the sweep misses the window.
TrajectorySet classify_poles(TrajectorySet set, double window_lo = 5.0,
                             double window_hi = 7.0, double theta_phys = 0.05,
                             double ratio = 0.1);

/// Path length of the family's energy trace restricted to the window.
double family_displacement(const TrajectoryFamily& family, double window_lo,
                           double window_hi);

/// True when the family has points at both ends of the window.
bool family_spans(const TrajectoryFamily& family, double window_lo, double window_hi);

}  // namespace rescat
