#include "rescat/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "rescat/errors.hpp"
#include "rescat/parallel.hpp"

namespace rescat {
namespace {

std::vector<PoleEstimate> fixed_point_snapshot(const LatticeModel& model,
                                               const Rectangle& region,
                                               const std::vector<Complex>& seeds,
                                               const FixedPointOptions& fp_opt,
                                               double dedup_tol) {
  std::vector<std::optional<PoleEstimate>> hits(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    try {
      const double seed_e =
          std::clamp(seeds[s].real(), 1e-6, model.band_top() * (1.0 - 1e-12));
      hits[s] = fixed_point_solve_from(model, seed_e, seeds[s], fp_opt);
    } catch (const Error&) {
      hits[s] = std::nullopt;  // NoConvergence / BranchLoss: seed dropped
    }
  });
  std::vector<PoleEstimate> poles;
  for (const auto& h : hits) {
    if (!h || !region.contains(h->energy)) continue;
    bool dup = false;
    for (const auto& p : poles)
      if (std::abs(p.energy - h->energy) < dedup_tol * std::max(1.0, std::abs(h->energy)))
        dup = true;
    if (!dup) poles.push_back(*h);
  }
  std::sort(poles.begin(), poles.end(), [](const PoleEstimate& a, const PoleEstimate& b) {
    return a.energy.real() < b.energy.real();
  });
  return poles;
}

// Seeds for a fresh fixed-point scan: eigenvalues of H_eff at a few real
// energies across the window (each is the nearest candidate branch there).
std::vector<Complex> rescan_seeds(const LatticeModel& model, const Rectangle& region) {
  std::vector<Complex> seeds;
  const int n_scan = 24;
  const double lo = std::max(region.re_min, 1e-4);
  const double hi = std::min(region.re_max, model.band_top() * (1.0 - 1e-9));
  for (int i = 0; i < n_scan; ++i) {
    const double e = lo + (hi - lo) * (i + 0.5) / n_scan;
    const TrackedEigenpair pair = nearest_eigenpair(model, e, Complex(e, 0.0), nullptr);
    if (region.contains(pair.eigenvalue, 0.5)) seeds.push_back(pair.eigenvalue);
  }
  return seeds;
}

struct ActiveFamily {
  int family_index;
  Complex last_energy;
  double last_step = -1.0;  // displacement of the previous link, <0 if none
};

}  // namespace

TrajectorySet trace_trajectories(
    const std::function<TruncatedPotential(double)>& potential_builder, double r_min,
    double r_max, double step, PoleMethod method, const SweepOptions& opt) {
  if (!(step > 0.0) || !(r_max >= r_min)) throw Error("bad sweep range");
  if (method == PoleMethod::transcendental)
    throw Error("trajectory sweeps support the determinant and fixed_point methods");

  TrajectorySet set;
  set.method = method;
  const int n_steps = static_cast<int>(std::round((r_max - r_min) / step)) + 1;
  set.r_cuts.resize(n_steps);
  for (int m = 0; m < n_steps; ++m) set.r_cuts[m] = r_min + m * step;
  set.snapshots.resize(n_steps);

  if (method == PoleMethod::determinant) {
    // Independent searches per cutoff radius; linking happens afterwards.
    parallel_for(static_cast<std::size_t>(n_steps), [&](std::size_t m) {
      const TruncatedPotential tp = potential_builder(set.r_cuts[m]);
      const LatticeModel model = discretize(tp, opt.lattice_a, set.r_cuts[m]);
      set.snapshots[m] = det_poles(model, opt.region, opt.grid, opt.det).poles;
    });
  } else {
    // Fixed-point families are continued from the previous radius; periodic
    // rescans pick up families entering the window.
    std::vector<Complex> carried;
    for (int m = 0; m < n_steps; ++m) {
      const TruncatedPotential tp = potential_builder(set.r_cuts[m]);
      const LatticeModel model = discretize(tp, opt.lattice_a, set.r_cuts[m]);
      std::vector<Complex> seeds = carried;
      if (m % std::max(1, opt.rescan_stride) == 0) {
        const auto fresh = rescan_seeds(model, opt.region);
        seeds.insert(seeds.end(), fresh.begin(), fresh.end());
      }
      set.snapshots[m] =
          fixed_point_snapshot(model, opt.region, seeds, opt.fixed_point, opt.det.dedup_tol);
      carried.clear();
      for (const auto& p : set.snapshots[m]) carried.push_back(p.energy);
    }
  }

  // Nearest-neighbor linking with an adaptive threshold: 3x the family's
  // previous displacement, floored; the first link falls back to a velocity
  // estimate (cutoff poles drift like ~2|E|/R per unit of R).
  std::vector<ActiveFamily> active;
  for (int m = 0; m < n_steps; ++m) {
    const auto& poles = set.snapshots[m];
    std::vector<bool> pole_taken(poles.size(), false);
    std::vector<bool> family_extended(active.size(), false);

    struct Candidate {
      double dist;
      std::size_t fam, pol;
    };
    std::vector<Candidate> candidates;
    for (std::size_t f = 0; f < active.size(); ++f)
      for (std::size_t p = 0; p < poles.size(); ++p)
        candidates.push_back(
            {std::abs(active[f].last_energy - poles[p].energy), f, p});
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });

    for (const auto& c : candidates) {
      if (pole_taken[c.pol] || family_extended[c.fam]) continue;
      ActiveFamily& fam = active[c.fam];
      double threshold;
      if (fam.last_step >= 0.0) {
        threshold = std::max(opt.link_factor * fam.last_step, opt.link_floor);
      } else {
        const double velocity =
            2.0 * (std::abs(fam.last_energy) + 1.0) / std::max(set.r_cuts[m], 0.5);
        threshold = std::max(opt.link_factor * velocity * step, opt.link_floor);
      }
      if (c.dist > threshold) continue;
      set.families[fam.family_index].points.push_back({set.r_cuts[m], poles[c.pol]});
      fam.last_step = c.dist;
      fam.last_energy = poles[c.pol].energy;
      pole_taken[c.pol] = true;
      family_extended[c.fam] = true;
    }

    // Families that found no continuation are closed (recorded, truncated).
    std::vector<ActiveFamily> still_active;
    for (std::size_t f = 0; f < active.size(); ++f) {
      if (family_extended[f]) {
        still_active.push_back(active[f]);
      } else if (m < n_steps) {
        set.families[active[f].family_index].link_break = true;
      }
    }
    active = std::move(still_active);

    for (std::size_t p = 0; p < poles.size(); ++p) {
      if (pole_taken[p]) continue;
      TrajectoryFamily fam;
      fam.points.push_back({set.r_cuts[m], poles[p]});
      set.families.push_back(std::move(fam));
      active.push_back({static_cast<int>(set.families.size() - 1), poles[p].energy, -1.0});
    }
  }
  for (const auto& fam : active)
    set.families[fam.family_index].link_break = false;  // survived to the end
  return set;
}

bool family_spans(const TrajectoryFamily& family, double window_lo, double window_hi) {
  if (family.points.empty()) return false;
  const double first = family.points.front().r_cut;
  const double last = family.points.back().r_cut;
  return first <= window_lo + 1e-9 && last >= window_hi - 1e-9;
}

double family_displacement(const TrajectoryFamily& family, double window_lo,
                           double window_hi) {
  double length = 0.0;
  for (std::size_t i = 1; i < family.points.size(); ++i) {
    const auto& a = family.points[i - 1];
    const auto& b = family.points[i];
    if (a.r_cut >= window_lo - 1e-9 && b.r_cut <= window_hi + 1e-9)
      length += std::abs(b.pole.energy - a.pole.energy);
  }
  return length;
}

TrajectorySet classify_poles(TrajectorySet set, double window_lo, double window_hi,
                             double theta_phys, double ratio) {
  if (set.r_cuts.empty() || set.r_cuts.front() > window_lo + 1e-9 ||
      set.r_cuts.back() < window_hi - 1e-9)
    throw WindowUncovered("sweep does not cover the stability window");

  std::vector<double> displacements;
  for (const auto& fam : set.families)
    if (family_spans(fam, window_lo, window_hi))
      displacements.push_back(family_displacement(fam, window_lo, window_hi));
  if (displacements.empty()) {
    for (auto& fam : set.families) fam.classification = PoleClass::unclassified;
    return set;
  }
  std::vector<double> sorted = displacements;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  for (auto& fam : set.families) {
    if (!family_spans(fam, window_lo, window_hi)) {
      fam.classification = PoleClass::unclassified;
    } else {
      const double d = family_displacement(fam, window_lo, window_hi);
      fam.classification = (d < theta_phys && d < ratio * median)
                               ? PoleClass::physical
                               : PoleClass::cutoff;
    }
    for (auto& pt : fam.points) pt.pole.classification = fam.classification;
  }

  // Mirror the family labels back into the per-radius snapshots.
  for (auto& fam : set.families)
    for (auto& pt : fam.points) {
      const auto it = std::lower_bound(set.r_cuts.begin(), set.r_cuts.end(),
                                       pt.r_cut - 1e-12);
      const std::size_t m = static_cast<std::size_t>(it - set.r_cuts.begin());
      if (m >= set.snapshots.size()) continue;
      for (auto& pole : set.snapshots[m])
        if (std::abs(pole.energy - pt.pole.energy) < 1e-12)
          pole.classification = fam.classification;
    }
  return set;
}

}  // namespace rescat
