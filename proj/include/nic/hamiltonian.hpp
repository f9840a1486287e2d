#pragma once

// Nearest-neighbour chain Hamiltonians and the preprocessing that turns a
// local Hamiltonian instance into an eigenvalue-range question: per-term
// shift-and-scale to PSD terms of norm <= 1, padding every site with an extra
// level |d>, odd/even splitting and normalization by pi/(2r).
//
// Sites are 0-based; the term at site i acts on sites i and i+1.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nic/distance.hpp"
#include "nic/linalg.hpp"

namespace nic {

struct LocalTerm {
  std::size_t site = 0;
  HermitianMatrix matrix = HermitianMatrix::zero(1);
};

class ChainHamiltonian {
 public:
  ChainHamiltonian(std::size_t n, std::size_t d, std::vector<LocalTerm> terms) : n_(n), d_(d), terms_(std::move(terms)) {
    if (n_ < 2) throw InputError("ChainHamiltonian: n must be >= 2");
    if (d_ < 1) throw InputError("ChainHamiltonian: d must be >= 1");
    std::set<std::size_t> seen;
    for (const auto& t : terms_) {
      if (t.site + 2 > n_) throw InputError("ChainHamiltonian: term site " + std::to_string(t.site) + " out of range");
      if (static_cast<std::size_t>(t.matrix.dim()) != d_ * d_) {
        throw InputError("ChainHamiltonian: term dimension must be d^2");
      }
      if (!seen.insert(t.site).second) {
        throw InputError("ChainHamiltonian: duplicate term at site " + std::to_string(t.site));
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t r() const noexcept { return terms_.size(); }
  const std::vector<LocalTerm>& terms() const noexcept { return terms_; }
  std::vector<std::size_t> dims() const { return std::vector<std::size_t>(n_, d_); }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<LocalTerm> terms_;
};

struct HamiltonianInstance {
  ChainHamiltonian hamiltonian;
  double a = 0.0;
  double b = 0.0;
  nlohmann::json metadata = nlohmann::json::object();

  HamiltonianInstance(ChainHamiltonian h, double a_thr, double b_thr, nlohmann::json meta = nlohmann::json::object())
      : hamiltonian(std::move(h)), a(a_thr), b(b_thr), metadata(std::move(meta)) {
    if (!(b - a > 0.0)) throw InputError("HamiltonianInstance: require b > a");
  }
};

/// Affine map applied by rescale_psd: H_i' = (H_i - shift_i I)/scale.
struct RescaleInfo {
  double scale = 1.0;
  double total_shift = 0.0;
};

/// Shifts each term by its own lambda_min and divides all by the largest term
/// range M, so terms are PSD with norm <= 1. Thresholds follow the same affine
/// map, which keeps the ground-energy decision exact.
inline std::pair<HamiltonianInstance, RescaleInfo> rescale_psd_with_info(const HamiltonianInstance& inst) {
  const auto& h = inst.hamiltonian;
  std::vector<double> mins;
  double max_range = 0.0;
  double total_shift = 0.0;
  for (const auto& t : h.terms()) {
    const RealVector ev = herm_eigvals(t.matrix);
    mins.push_back(ev.minCoeff());
    total_shift += ev.minCoeff();
    max_range = std::max(max_range, ev.maxCoeff() - ev.minCoeff());
  }
  // All terms scalar: nothing to scale.
  const double scale = max_range > 1e-14 ? max_range : 1.0;

  std::vector<LocalTerm> out;
  out.reserve(h.r());
  for (std::size_t k = 0; k < h.r(); ++k) {
    const auto& t = h.terms()[k];
    out.push_back({t.site, t.matrix.shifted(-mins[k]).scaled(1.0 / scale)});
  }
  nlohmann::json meta = inst.metadata;
  meta["rescale"] = {{"scale", scale}, {"total_shift", total_shift}};
  HamiltonianInstance res(ChainHamiltonian(h.n(), h.d(), std::move(out)), (inst.a - total_shift) / scale,
                          (inst.b - total_shift) / scale, std::move(meta));
  return {std::move(res), {scale, total_shift}};
}

inline HamiltonianInstance rescale_psd(const HamiltonianInstance& inst) { return rescale_psd_with_info(inst).first; }

/// Adds level |d> to every site. Each padded term is H_i on the original
/// levels, the identity whenever exactly one of its sites sits in |d>, and 1 on
/// |d>|d>. With 0 <= H_i <= 1 every sector touching |d> costs at least as much
/// as dropping those terms, so lambda_min is kept and |d>^n has the top value r.
inline ChainHamiltonian pad(const ChainHamiltonian& h, double tol = 1e-9) {
  const std::size_t d = h.d();
  const std::size_t dp = d + 1;
  std::vector<LocalTerm> out;
  out.reserve(h.r());
  for (const auto& t : h.terms()) {
    const RealVector ev = herm_eigvals(t.matrix);
    if (ev.minCoeff() < -tol || ev.maxCoeff() > 1.0 + tol) {
      throw InputError("pad: term at site " + std::to_string(t.site) + " is not PSD with norm <= 1");
    }
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dp * dp), static_cast<Eigen::Index>(dp * dp));
    const ComplexMatrix& src = t.matrix.matrix();
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y)
        for (std::size_t xp = 0; xp < d; ++xp)
          for (std::size_t yp = 0; yp < d; ++yp) {
            m(static_cast<Eigen::Index>(x * dp + y), static_cast<Eigen::Index>(xp * dp + yp)) =
                src(static_cast<Eigen::Index>(x * d + y), static_cast<Eigen::Index>(xp * d + yp));
          }
    for (std::size_t x = 0; x < dp; ++x)
      for (std::size_t y = 0; y < dp; ++y)
        if (x == d || y == d) m(static_cast<Eigen::Index>(x * dp + y), static_cast<Eigen::Index>(x * dp + y)) = 1.0;
    out.push_back({t.site, HermitianMatrix(m)});
  }
  return ChainHamiltonian(h.n(), dp, std::move(out));
}

/// Dense sum of embedded terms. Throws ResourceLimit beyond d^n = kMaxDim.
inline HermitianMatrix assemble(const ChainHamiltonian& h) {
  const std::vector<std::size_t> dims = h.dims();
  const auto total = static_cast<Eigen::Index>(hilbert_dim(dims));
  ComplexMatrix sum = ComplexMatrix::Zero(total, total);
  for (const auto& t : h.terms()) sum += embed_span(t.matrix.matrix(), t.site, 2, dims);
  return HermitianMatrix(sum);
}

struct OddEvenSplit {
  ChainHamiltonian odd;   // terms at even 0-based sites: pairs (0,1), (2,3), ...
  ChainHamiltonian even;  // terms at odd 0-based sites: pairs (1,2), (3,4), ...
};

inline OddEvenSplit split_odd_even(const ChainHamiltonian& h) {
  std::vector<LocalTerm> odd;
  std::vector<LocalTerm> even;
  for (const auto& t : h.terms()) (t.site % 2 == 0 ? odd : even).push_back(t);
  return {ChainHamiltonian(h.n(), h.d(), std::move(odd)), ChainHamiltonian(h.n(), h.d(), std::move(even))};
}

struct NormalizedChain {
  ChainHamiltonian hamiltonian;
  double l = 0.0;
  double s = 0.0;
};

/// Scales every term by pi/(2r) and maps thresholds to l = (r-a)pi/2r, s = (r-b)pi/2r.
inline NormalizedChain normalize(const ChainHamiltonian& h, double a_thr, double b_thr) {
  const auto r = static_cast<double>(h.r());
  if (h.r() == 0) throw InputError("normalize: chain has no terms");
  if (!(0.0 <= a_thr && a_thr < b_thr && b_thr <= r)) {
    throw InputError("normalize: thresholds must satisfy 0 <= a < b <= r (a=" + std::to_string(a_thr) +
                     ", b=" + std::to_string(b_thr) + ", r=" + std::to_string(h.r()) + ")");
  }
  const double factor = std::numbers::pi / (2.0 * r);
  std::vector<LocalTerm> out;
  out.reserve(h.r());
  for (const auto& t : h.terms()) out.push_back({t.site, t.matrix.scaled(factor)});
  return {ChainHamiltonian(h.n(), h.d(), std::move(out)), (r - a_thr) * factor, (r - b_thr) * factor};
}

/// Exact eigenvalue range of the assembled chain.
inline double eig_range_oracle(const ChainHamiltonian& h) { return eig_range(assemble(h)); }

/// Exact ground energy of the assembled chain.
inline double ground_energy(const ChainHamiltonian& h) { return lambda_min(assemble(h)); }

}  // namespace nic
