#include "rescat/pole_finder.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "rescat/errors.hpp"
#include "rescat/numeric_util.hpp"
#include "rescat/parallel.hpp"

namespace rescat {
namespace {

struct GridPoint {
  Complex e;
  LogDet det;
};

Complex grid_energy(const Rectangle& rg, const GridSize& gs, double i, double j) {
  return {rg.re_min + (rg.re_max - rg.re_min) * i / (gs.n_re - 1),
          rg.im_min + (rg.im_max - rg.im_min) * j / (gs.n_im - 1)};
}

// d(log Det)/dE by central differences; the phase difference is wrapped to
// the principal branch, valid while the step stays below the zero spacing.
Complex log_det_derivative(const LatticeModel& model, Complex e, double h) {
  const LogDet p = log_determinant(model, e + h);
  const LogDet m = log_determinant(model, e - h);
  const double d_re = p.log_abs - m.log_abs;
  const double d_im = wrap_to_period(p.arg - m.arg, 2.0 * kPi);
  return Complex(d_re, d_im) / (2.0 * h);
}

// Newton on Det via the logarithmic derivative: dE = -1/(log Det)'.  Exact
// for simple zeros regardless of the determinant's scale.
std::optional<Complex> refine_det_zero(const LatticeModel& model, Complex e,
                                       double ref_log, const Rectangle& region,
                                       double cell, const DetSearchOptions& opt) {
  double h = 1e-3 * cell;
  double best = std::exp(log_determinant(model, e).log_abs - ref_log);
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const Complex dlog = log_det_derivative(model, e, h);
    if (!(std::abs(dlog) > 0.0)) return std::nullopt;
    Complex step = -1.0 / dlog;

    Complex e_next = e + step;
    double v_next = std::exp(log_determinant(model, e_next).log_abs - ref_log);
    int halvings = 0;
    while (v_next > best && halvings < 10) {
      step *= 0.5;
      e_next = e + step;
      v_next = std::exp(log_determinant(model, e_next).log_abs - ref_log);
      ++halvings;
    }
    e = e_next;
    best = v_next;
    h = std::min(h, std::max(0.1 * std::abs(step), 1e-9 * std::max(1.0, std::abs(e))));

    if (best < opt.residual_tol) return e;
    if (!region.contains(e, 4.0 * cell)) return std::nullopt;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(e))) break;
  }
  return best < 1e-6 ? std::optional<Complex>(e) : std::nullopt;
}

struct EdgeCrossing {
  double x, y;  // cell coordinates in [0,1]^2
};

// Zero crossings of a scalar corner field along the four cell edges
// (c00 c10 c01 c11 at (0,0),(1,0),(0,1),(1,1)), linear interpolation.
void edge_crossings(double c00, double c10, double c01, double c11,
                    std::vector<EdgeCrossing>& out) {
  out.clear();
  auto cross = [](double a, double b) { return (a <= 0 && b > 0) || (a > 0 && b <= 0); };
  auto frac = [](double a, double b) { return a / (a - b); };
  if (cross(c00, c10)) out.push_back({frac(c00, c10), 0.0});
  if (cross(c01, c11)) out.push_back({frac(c01, c11), 1.0});
  if (cross(c00, c01)) out.push_back({0.0, frac(c00, c01)});
  if (cross(c10, c11)) out.push_back({1.0, frac(c10, c11)});
}

// Intersection of the Re = 0 and Im = 0 segments inside one cell, if any.
std::optional<EdgeCrossing> segment_intersection(const std::vector<EdgeCrossing>& re,
                                                 const std::vector<EdgeCrossing>& im) {
  if (re.size() < 2 || im.size() < 2) return std::nullopt;
  const double rx = re[1].x - re[0].x, ry = re[1].y - re[0].y;
  const double ix = im[1].x - im[0].x, iy = im[1].y - im[0].y;
  const double det = rx * iy - ry * ix;
  if (std::abs(det) < 1e-12) return std::nullopt;  // parallel level curves
  const double dx = im[0].x - re[0].x, dy = im[0].y - re[0].y;
  const double s = (dx * iy - dy * ix) / det;
  const double u = (dx * ry - dy * rx) / det;
  if (s < -0.25 || s > 1.25 || u < -0.25 || u > 1.25) return std::nullopt;
  return EdgeCrossing{re[0].x + s * rx, re[0].y + s * ry};
}

DetSearchResult det_poles_once(const LatticeModel& model, const Rectangle& region,
                               const GridSize& grid, const DetSearchOptions& opt) {
  const int nr = grid.n_re, ni = grid.n_im;
  std::vector<GridPoint> field(static_cast<std::size_t>(nr) * ni);
  parallel_for(field.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) % nr;
    const int j = static_cast<int>(idx) / nr;
    const Complex e = grid_energy(region, grid, i, j);
    field[idx] = {e, log_determinant(model, e)};
  });

  const double cell = std::max((region.re_max - region.re_min) / (nr - 1),
                               (region.im_max - region.im_min) / (ni - 1));

  // Marching squares on the per-cell rescaled determinant: level sets of
  // Re and Im are unchanged by the positive rescale, but the interpolation
  // becomes well conditioned.
  struct Seed {
    Complex e;
    double ref_log;
  };
  std::vector<Seed> seeds;
  std::vector<EdgeCrossing> re_cross, im_cross;
  for (int j = 0; j + 1 < ni; ++j)
    for (int i = 0; i + 1 < nr; ++i) {
      const GridPoint* c[4] = {&field[j * nr + i], &field[j * nr + i + 1],
                               &field[(j + 1) * nr + i], &field[(j + 1) * nr + i + 1]};
      double ref = c[0]->det.log_abs;
      for (int q = 1; q < 4; ++q) ref = std::max(ref, c[q]->det.log_abs);
      double re[4], im[4];
      for (int q = 0; q < 4; ++q) {
        const double mag = std::exp(c[q]->det.log_abs - ref);
        re[q] = mag * std::cos(c[q]->det.arg);
        im[q] = mag * std::sin(c[q]->det.arg);
      }
      edge_crossings(re[0], re[1], re[2], re[3], re_cross);
      edge_crossings(im[0], im[1], im[2], im[3], im_cross);
      const auto hit = segment_intersection(re_cross, im_cross);
      if (!hit) continue;
      const Complex e = grid_energy(region, grid, i + hit->x, j + hit->y);
      seeds.push_back({e, ref});
    }

  DetSearchResult result;
  result.seeds_tried = static_cast<int>(seeds.size());
  std::vector<std::optional<Complex>> refined(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    refined[s] = refine_det_zero(model, seeds[s].e, seeds[s].ref_log, region, cell, opt);
  });

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (!refined[s]) {
      ++result.seeds_failed;
      continue;
    }
    const Complex e = *refined[s];
    if (!region.contains(e, 0.0)) continue;
    bool dup = false;
    for (const auto& p : result.poles)
      if (std::abs(p.energy - e) < opt.dedup_tol * std::max(1.0, std::abs(e))) dup = true;
    if (dup) continue;
    const double residual = std::exp(log_determinant(model, e).log_abs - seeds[s].ref_log);
    result.poles.push_back({e, dispersion_k(e, model), PoleMethod::determinant, residual,
                            PoleClass::unclassified});
  }
  std::sort(result.poles.begin(), result.poles.end(),
            [](const PoleEstimate& a, const PoleEstimate& b) {
              return a.energy.real() < b.energy.real();
            });
  return result;
}

}  // namespace

DetSearchResult det_poles(const LatticeModel& model, const Rectangle& region,
                          const GridSize& grid, const DetSearchOptions& opt) {
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max))
    throw EmptyRegion("degenerate search rectangle");
  if (region.im_max > 1e-12)
    throw EmptyRegion("pole search expects the lower half energy plane");
  if (grid.n_re < 2 || grid.n_im < 2) throw EmptyRegion("grid must be at least 2x2");

  DetSearchResult result = det_poles_once(model, region, grid, opt);
  if (opt.verify_grid_refinement) {
    const GridSize doubled{2 * grid.n_re - 1, 2 * grid.n_im - 1};
    const DetSearchResult fine = det_poles_once(model, region, doubled, opt);
    auto matches = [&](const std::vector<PoleEstimate>& a,
                       const std::vector<PoleEstimate>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i].energy - b[i].energy) >
            opt.dedup_tol * std::max(1.0, std::abs(a[i].energy)))
          return false;
      return true;
    };
    if (!matches(result.poles, fine.poles))
      throw GridTooCoarse("pole set changed under grid doubling");
  }
  return result;
}

DetSearchResult det_poles(const std::function<LatticeModel(double)>& model_builder,
                          double r_cut, const Rectangle& region, const GridSize& grid,
                          const DetSearchOptions& opt) {
  return det_poles(model_builder(r_cut), region, grid, opt);
}

DetField determinant_field(const LatticeModel& model, const Rectangle& region,
                           const GridSize& grid) {
  DetField field{region, grid, {}};
  field.values.resize(static_cast<std::size_t>(grid.n_re) * grid.n_im);
  parallel_for(field.values.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) % grid.n_re;
    const int j = static_cast<int>(idx) / grid.n_re;
    field.values[idx] = log_determinant(model, grid_energy(region, grid, i, j));
  });
  return field;
}

PoleEstimate fixed_point_solve_from(const LatticeModel& model, double seed_energy,
                                    Complex shift, const FixedPointOptions& opt) {
  const double band_top = model.band_top();
  if (!(seed_energy > 0.0 && seed_energy < band_top))
    throw NoConvergence("fixed-point seed outside the band");

  double energy = seed_energy;
  TrackedEigenpair pair = nearest_eigenpair(model, energy, shift, nullptr);

  for (int it = 0; it < opt.max_iterations; ++it) {
    const double target = pair.eigenvalue.real();
    const double e_next = energy + opt.relaxation * (target - energy);
    if (!(e_next > 0.0 && e_next < band_top))
      throw NoConvergence("fixed-point iteration left the band");

    TrackedEigenpair next =
        nearest_eigenpair(model, e_next, pair.eigenvalue, &pair.vector);
    if (!pair.self_orthogonal && !next.self_orthogonal) {
      const Complex overlap = (pair.vector.transpose() * next.vector)(0, 0);
      if (std::abs(overlap) < opt.overlap_threshold)
        throw BranchLoss("eigenvector overlap lost while tracking the branch");
    }

    const double step = std::abs(e_next - energy);
    energy = e_next;
    pair = next;
    if (step < opt.tol) {
      PoleEstimate est;
      est.energy = Complex(energy, pair.eigenvalue.imag());
      est.momentum = dispersion_k(est.energy, model);
      est.method = PoleMethod::fixed_point;
      est.residual = std::abs(pair.eigenvalue.real() - energy);
      return est;
    }
  }
  throw NoConvergence("fixed-point iteration did not settle");
}

PoleEstimate fixed_point_solve(const LatticeModel& model, double seed_energy,
                               const FixedPointOptions& opt) {
  return fixed_point_solve_from(model, seed_energy, Complex(seed_energy, 0.0), opt);
}

}  // namespace rescat
