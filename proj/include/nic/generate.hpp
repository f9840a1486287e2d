#pragma once

// Seeded chain-instance generators for test corpora.
//
//   random      random local terms, thresholds drawn in the rescaled frame
//   yes-biased  every term annihilates one shared product state, so E0 = 0 <= a
//   no-biased   terms with random entangled kernels on an n >= 3 chain; the
//               frustrated ground energy E0 > 0 is computed exactly and b < E0

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "nic/hamiltonian.hpp"
#include "nic/random.hpp"

namespace nic {

enum class InstanceKind { random, yes_biased, no_biased };

inline std::string_view to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::random:
      return "random";
    case InstanceKind::yes_biased:
      return "yes-biased";
    case InstanceKind::no_biased:
      return "no-biased";
  }
  return "random";
}

inline InstanceKind instance_kind_from_string(std::string_view s) {
  if (s == "random") return InstanceKind::random;
  if (s == "yes-biased") return InstanceKind::yes_biased;
  if (s == "no-biased") return InstanceKind::no_biased;
  throw InputError("unknown instance kind \"" + std::string(s) + "\"");
}

namespace detail {

inline Eigen::VectorXcd random_state(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = Complex(gaussian(rng), gaussian(rng));
  return v / v.norm();
}

// PSD term with kernel spanned by `kernel` (unit), other eigenvalues in [floor, 1], top one exactly 1.
inline HermitianMatrix term_with_kernel(const Eigen::VectorXcd& kernel, double floor, Rng& rng) {
  const Eigen::Index dim = kernel.size();
  ComplexMatrix basis = random_unitary(dim, rng);
  basis.col(0) = kernel;
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(basis).householderQ();
  RealVector ev(dim);
  ev[0] = 0.0;
  for (Eigen::Index k = 1; k < dim; ++k) ev[k] = uniform(rng, floor, 1.0);
  if (dim > 1) ev[dim - 1] = 1.0;
  // Column 0 of q equals kernel up to a phase, which the projector ignores.
  return HermitianMatrix(q * ev.cast<Complex>().asDiagonal() * q.adjoint(), 1e-8);
}

}  // namespace detail

/// Smallest ground energy accepted for a no-biased instance.
inline constexpr double kNoBiasedMinEnergy = 1e-3;

inline HamiltonianInstance generate_instance(std::size_t n, std::size_t d, InstanceKind kind, std::uint64_t seed) {
  if (n < 2) throw InputError("gen: n must be >= 2");
  if (d < 1) throw InputError("gen: d must be >= 1");
  std::vector<std::size_t> dims(n, d);
  if (detail::checked_product(dims, 0, n) > kMaxDim) throw ResourceLimit("gen: d^n exceeds the dense limit");
  const auto local = static_cast<Eigen::Index>(d * d);
  const std::size_t r = n - 1;
  nlohmann::json meta = {{"kind", std::string(to_string(kind))}, {"seed", seed}};

  if (kind == InstanceKind::yes_biased) {
    Rng rng = make_rng(derive_seed(seed, {1}));
    std::vector<Eigen::VectorXcd> phi;
    for (std::size_t i = 0; i < n; ++i) phi.push_back(detail::random_state(static_cast<Eigen::Index>(d), rng));
    std::vector<LocalTerm> terms;
    for (std::size_t i = 0; i < r; ++i) {
      const Eigen::VectorXcd v = kron(phi[i], phi[i + 1]);
      terms.push_back({i, detail::term_with_kernel(v, 0.2, rng)});
    }
    ChainHamiltonian h(n, d, std::move(terms));
    meta["ground_energy"] = ground_energy(h);
    const double a = 0.05;
    return HamiltonianInstance(std::move(h), a, std::min(static_cast<double>(r), a + 0.5), std::move(meta));
  }

  if (kind == InstanceKind::no_biased) {
    if (n < 3 || d < 2) throw InputError("gen: no-biased instances need n >= 3 and d >= 2");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
      Rng rng = make_rng(derive_seed(seed, {2, attempt}));
      std::vector<LocalTerm> terms;
      for (std::size_t i = 0; i < r; ++i) terms.push_back({i, detail::term_with_kernel(detail::random_state(local, rng), 0.5, rng)});
      ChainHamiltonian h(n, d, std::move(terms));
      const double e0 = ground_energy(h);
      if (e0 < kNoBiasedMinEnergy) continue;
      meta["ground_energy"] = e0;
      meta["attempt"] = attempt;
      const double b = 0.9 * e0;
      return HamiltonianInstance(std::move(h), b / 3.0, b, std::move(meta));
    }
    throw Error("gen: no frustrated instance found for this seed");
  }

  Rng rng = make_rng(derive_seed(seed, {3}));
  std::vector<LocalTerm> terms;
  for (std::size_t i = 0; i < r; ++i) terms.push_back({i, random_hermitian_bounded(local, -1.0, 1.0, rng)});
  ChainHamiltonian h(n, d, std::move(terms));
  // Draw 0 <= a' < b' <= r in the rescaled frame, then map back.
  const auto info = rescale_psd_with_info(HamiltonianInstance(h, 0.0, 1.0)).second;
  const double a_res = uniform(rng, 0.0, 0.5) * static_cast<double>(r);
  const double b_res = a_res + uniform(rng, 0.1, 1.0) * (static_cast<double>(r) - a_res);
  if (detail::checked_product(dims, 0, n) <= 1024) meta["ground_energy"] = ground_energy(h);
  return HamiltonianInstance(std::move(h), a_res * info.scale + info.total_shift, b_res * info.scale + info.total_shift,
                             std::move(meta));
}

}  // namespace nic
