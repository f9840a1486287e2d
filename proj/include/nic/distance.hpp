#pragma once

// Closeness of a unitary to the identity: eigenphase extremes, the shortest
// enclosing arc, the phase range alpha = min(pi, arc), the distance nu from the
// origin to the numerical range, the diamond distance to the identity channel,
// and the min-phase spectral distance min_phi ||U - e^{i phi} I||.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "nic/linalg.hpp"

namespace nic {

struct PhaseExtremes {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
};

struct DistanceReport {
  double alpha_max = 0.0;
  double alpha_min = 0.0;
  double arc = 0.0;    // shortest enclosing arc (before capping)
  double alpha = 0.0;  // min(pi, arc)
  double nu = 1.0;
  double diamond = 0.0;
  double min_phase_dist = 0.0;
  double argmin_phi = 0.0;
};

struct MinPhaseDistance {
  double value = 0.0;
  double argmin_phi = 0.0;
};

inline PhaseExtremes alpha_extremes(const PhaseSpectrum& p) {
  if (p.phases.empty()) throw InputError("alpha_extremes: empty spectrum");
  const auto [lo, hi] = std::minmax_element(p.phases.begin(), p.phases.end());
  return {*lo, *hi};
}

namespace detail {

// Distinct sorted phases; neighbours closer than `tol` are merged.
inline std::vector<double> distinct_phases(const PhaseSpectrum& p, double tol) {
  std::vector<double> out;
  for (double x : p.phases) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

struct ArcGeometry {
  double arc = 0.0;    // 2 pi minus the largest circular gap
  double start = 0.0;  // phase where the minimal arc begins (counter-clockwise)
};

inline ArcGeometry arc_geometry(const PhaseSpectrum& p, double dedup_tol) {
  const std::vector<double> d = distinct_phases(p, dedup_tol);
  if (d.size() <= 1) return {0.0, d.empty() ? 0.0 : d.front()};
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // The wrap-around gap runs from the last phase up through the seam to the first.
  double best_gap = two_pi - (d.back() - d.front());
  double start = d.front();
  for (std::size_t k = 1; k < d.size(); ++k) {
    const double gap = d[k] - d[k - 1];
    if (gap > best_gap) {
      best_gap = gap;
      start = d[k];
    }
  }
  return {std::max(0.0, two_pi - best_gap), start};
}

// f(phi) = max_j |e^{i theta_j} - e^{i phi}|.
inline double max_chord(const std::vector<double>& phases, double phi) {
  double m = 0.0;
  for (double th : phases) m = std::max(m, std::abs(std::sin(0.5 * (th - phi))));
  return 2.0 * m;
}

inline MinPhaseDistance minimize_max_chord(const std::vector<double>& phases) {
  constexpr int kGrid = 4096;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double step = two_pi / kGrid;
  std::vector<double> f(kGrid);
  for (int k = 0; k < kGrid; ++k) f[k] = max_chord(phases, -std::numbers::pi + (k + 1) * step);

  // Refine around every grid-local minimum among the few best ones.
  std::vector<int> candidates;
  for (int k = 0; k < kGrid; ++k) {
    const double prev = f[(k + kGrid - 1) % kGrid];
    const double next = f[(k + 1) % kGrid];
    if (f[k] <= prev && f[k] <= next) candidates.push_back(k);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int x, int y) { return f[x] < f[y]; });
  if (candidates.size() > 8) candidates.resize(8);

  constexpr double inv_phi = 0.6180339887498949;  // (sqrt 5 - 1)/2
  MinPhaseDistance best{std::numeric_limits<double>::infinity(), 0.0};
  for (int k : candidates) {
    const double centre = -std::numbers::pi + (k + 1) * step;
    double lo = centre - step;
    double hi = centre + step;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = max_chord(phases, x1);
    double f2 = max_chord(phases, x2);
    while (hi - lo > 1e-10) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = max_chord(phases, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = max_chord(phases, x2);
      }
    }
    for (double x : {lo, 0.5 * (lo + hi), hi, centre}) {
      const double v = max_chord(phases, x);
      if (v < best.value) best = {v, wrap_phase(x)};
    }
  }
  return best;
}

}  // namespace detail

/// Length of the shortest arc holding every eigenphase, in [0, 2 pi).
inline double shortest_arc(const PhaseSpectrum& p, const Tolerances& tol = kDefaultTolerances) {
  return detail::arc_geometry(p, tol.phase_dedup).arc;
}

/// alpha(U) = min(pi, shortest arc).
inline double phase_range(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  return std::min(std::numbers::pi, shortest_arc(eigphases(u, tol), tol));
}

/// alpha(U, V) = alpha(U^dag V).
inline double phase_range_pair(const ComplexMatrix& u, const ComplexMatrix& v,
                               const Tolerances& tol = kDefaultTolerances) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw InputError("phase_range_pair: shape mismatch");
  return phase_range(u.adjoint() * v, tol);
}

// nu from the arc: the nearest hull point is the chord midpoint between the
// extreme eigenvalues, or the origin itself once the arc reaches pi.
inline double nu_from_arc(double arc) { return arc < std::numbers::pi ? std::cos(0.5 * arc) : 0.0; }

/// Distance from 0 to the numerical range (convex hull of eigenvalues) of a unitary.
inline double nu(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  return nu_from_arc(shortest_arc(eigphases(u, tol), tol));
}

// 2 sqrt(1 - nu^2) = 2 sqrt((1 - nu)(1 + nu)). With nu = cos(arc/2), the factor
// 1 - nu is taken as 2 sin^2(arc/4) so near-identity unitaries keep their distance.
inline double diamond_from_arc(double arc) {
  const double nu_val = nu_from_arc(arc);
  if (nu_val == 0.0) return 2.0;
  const double s = std::sin(0.25 * arc);
  return 2.0 * std::sqrt(2.0 * s * s * (1.0 + nu_val));
}

/// ||U - I||_diamond for the channel rho -> U rho U^dag.
inline double diamond_to_identity(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  return diamond_from_arc(shortest_arc(eigphases(u, tol), tol));
}

/// min over phi of ||U - e^{i phi} I|| and a minimizing phi, from the eigenphases.
inline MinPhaseDistance min_phase_dist(const PhaseSpectrum& p, const Tolerances& tol = kDefaultTolerances) {
  const auto geo = detail::arc_geometry(p, tol.phase_dedup);
  const MinPhaseDistance closed{2.0 * std::sin(0.25 * geo.arc), wrap_phase(geo.start + 0.5 * geo.arc)};
  if (geo.arc < std::numbers::pi - tol.near_pi) return closed;
  const std::vector<double> d = detail::distinct_phases(p, tol.phase_dedup);
  MinPhaseDistance numeric = detail::minimize_max_chord(d);
  if (geo.arc < std::numbers::pi + tol.near_pi) {
    // Boundary: the closed form is still a feasible value there, take the smaller.
    const double closed_actual = detail::max_chord(d, closed.argmin_phi);
    if (closed_actual < numeric.value) numeric = {closed_actual, closed.argmin_phi};
  }
  return numeric;
}

inline MinPhaseDistance min_phase_dist(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  return min_phase_dist(eigphases(u, tol), tol);
}

/// lambda_max(H) - lambda_min(H).
inline double eig_range(const HermitianMatrix& h) {
  const RealVector v = herm_eigvals(h);
  return std::max(0.0, v.maxCoeff() - v.minCoeff());
}

inline DistanceReport report(const PhaseSpectrum& p, const Tolerances& tol = kDefaultTolerances) {
  DistanceReport r;
  const auto ext = alpha_extremes(p);
  r.alpha_min = ext.alpha_min;
  r.alpha_max = ext.alpha_max;
  r.arc = shortest_arc(p, tol);
  r.alpha = std::min(std::numbers::pi, r.arc);
  r.nu = nu_from_arc(r.arc);
  r.diamond = diamond_from_arc(r.arc);
  const auto m = min_phase_dist(p, tol);
  r.min_phase_dist = m.value;
  r.argmin_phi = m.argmin_phi;
  return r;
}

/// Every closeness-to-identity quantity of a unitary in one pass.
inline DistanceReport report(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  return report(eigphases(u, tol), tol);
}

}  // namespace nic
