#pragma once

// Seeded generators for Haar unitaries and Hermitian matrices with a prescribed
// spectral window. Every seed is expanded through splitmix64 so that derived
// per-trial streams are decorrelated.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "nic/linalg.hpp"

namespace nic {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed for a stream identified by (base, k1, k2, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

inline double uniform(Rng& rng, double lo, double hi) {
  // Fixed 53-bit mapping; std::uniform_real_distribution is not pinned across standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline double gaussian(Rng& rng) {
  // Box-Muller on two uniforms in (0, 1].
  const double u1 = 1.0 - uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar unitary: QR of a complex Gaussian matrix with R's diagonal phases moved into Q.
inline ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InputError("random_unitary: dim must be >= 1");
  ComplexMatrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(gaussian(rng), gaussian(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    q.col(k) *= mag > 0.0 ? rkk / mag : Complex(1.0, 0.0);
  }
  return q;
}

inline ComplexMatrix random_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_unitary(dim, rng);
}

/// Random eigenbasis with eigenvalues uniform in [lo, hi].
inline HermitianMatrix random_hermitian_bounded(Eigen::Index dim, double lo, double hi, Rng& rng) {
  if (!(lo <= hi)) throw InputError("random_hermitian_bounded: require lo <= hi");
  const ComplexMatrix v = random_unitary(dim, rng);
  RealVector ev(dim);
  for (Eigen::Index k = 0; k < dim; ++k) ev[k] = uniform(rng, lo, hi);
  return HermitianMatrix(v * ev.cast<Complex>().asDiagonal() * v.adjoint(), 1e-8);
}

inline HermitianMatrix random_hermitian_bounded(Eigen::Index dim, double lo, double hi, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_hermitian_bounded(dim, lo, hi, rng);
}

}  // namespace nic
