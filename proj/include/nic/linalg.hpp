#pragma once

// Dense complex linear algebra for desk-scale operators: Hermitian
// eigendecomposition, the unitary exponential e^{iHt}, norms, tensor
// embedding on qudit chains, and eigenphases of unitaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nic/error.hpp"

namespace nic {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Largest matrix dimension any dense routine accepts.
inline constexpr std::size_t kMaxDim = 4096;

/// Numerical defaults. Every tolerance used by the library is routed through here.
struct Tolerances {
  double hermitian = 1e-10;     // ||A - A^dag||_F accepted by HermitianMatrix
  double unitary = 1e-8;        // ||U^dag U - I|| accepted by eigphases and friends
  double phase_cluster = 1e-8;  // eigenvalue clustering of (U + U^dag)/2
  double det_check = 1e-6;      // sum of phases vs arg det U
  double phase_dedup = 1e-10;   // distinct-phase merging for arcs
  double near_pi = 1e-9;        // arc considered on the alpha = pi boundary
};

inline const Tolerances kDefaultTolerances{};

inline void require_square_finite(const ComplexMatrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InputError(std::string(what) + ": matrix must be square with dim >= 1");
  }
  if (static_cast<std::size_t>(a.rows()) > kMaxDim) {
    throw ResourceLimit(std::string(what) + ": dim " + std::to_string(a.rows()) +
                        " exceeds limit " + std::to_string(kMaxDim));
  }
  if (!a.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

/// A Hermitian operator. Construction checks ||A - A^dag|| and stores (A + A^dag)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& a, double tol = kDefaultTolerances.hermitian) {
    require_square_finite(a, "HermitianMatrix");
    const double asym = (a - a.adjoint()).norm();
    if (asym > tol) {
      throw InputError("HermitianMatrix: ||A - A^dag||_F = " + std::to_string(asym) +
                       " exceeds tolerance");
    }
    m_ = (a + a.adjoint()) * 0.5;
  }

  static HermitianMatrix zero(Eigen::Index dim) { return HermitianMatrix(ComplexMatrix::Zero(dim, dim)); }
  static HermitianMatrix diagonal(std::span<const double> values) {
    RealVector v = Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return HermitianMatrix(v.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  HermitianMatrix scaled(double factor) const { return HermitianMatrix(m_ * factor); }
  HermitianMatrix shifted(double shift) const {
    ComplexMatrix m = m_;
    m.diagonal().array() += shift;
    return HermitianMatrix(m);
  }

  friend HermitianMatrix operator+(const HermitianMatrix& x, const HermitianMatrix& y) {
    if (x.dim() != y.dim()) throw InputError("HermitianMatrix sum: dimension mismatch");
    return HermitianMatrix(x.m_ + y.m_);
  }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are orthonormal eigenvectors
};

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Backed by Eigen's tridiagonal QR solver; limit kMaxDim. Throws
/// ConvergenceError with the reconstruction residual if the solver fails.
inline EigenDecomposition herm_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    double residual = std::numeric_limits<double>::infinity();
    if (solver.eigenvectors().allFinite() && solver.eigenvalues().allFinite()) {
      const ComplexMatrix& v = solver.eigenvectors();
      residual = (v * solver.eigenvalues().cast<Complex>().asDiagonal() * v.adjoint() - h.matrix()).norm();
    }
    throw ConvergenceError("herm_eig: eigensolver did not converge", residual);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only, ascending.
inline RealVector herm_eigvals(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("herm_eigvals: eigensolver did not converge",
                           std::numeric_limits<double>::infinity());
  }
  return solver.eigenvalues();
}

inline double lambda_min(const HermitianMatrix& h) { return herm_eigvals(h).minCoeff(); }
inline double lambda_max(const HermitianMatrix& h) { return herm_eigvals(h).maxCoeff(); }

/// e^{iHt} = V diag(e^{i lambda t}) V^dag.
inline ComplexMatrix expi(const HermitianMatrix& h, double t) {
  const EigenDecomposition eig = herm_eig(h);
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    phases[k] = std::polar(1.0, eig.values[k] * t);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// Largest singular value, sqrt(lambda_max(A^dag A)).
inline double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const HermitianMatrix gram(a.adjoint() * a, std::numeric_limits<double>::infinity());
  return std::sqrt(std::max(0.0, lambda_max(gram)));
}

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

namespace detail {

inline std::size_t checked_product(std::span<const std::size_t> dims, std::size_t begin, std::size_t end) {
  std::size_t p = 1;
  for (std::size_t k = begin; k < end; ++k) {
    if (dims[k] == 0) throw InputError("site dimension must be >= 1");
    p *= dims[k];
    if (p > kMaxDim) {
      throw ResourceLimit("Hilbert space dimension exceeds limit " + std::to_string(kMaxDim));
    }
  }
  return p;
}

// Smallest span >= 1 of contiguous sites from first_site whose dimensions multiply to op_dim.
inline std::size_t span_for(std::size_t op_dim, std::size_t first_site, std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t k = first_site; k < dims.size(); ++k) {
    p *= dims[k];
    if (p == op_dim) return k - first_site + 1;
    if (p > op_dim) break;
  }
  throw InputError("embed_local: operator dimension " + std::to_string(op_dim) +
                   " does not match a contiguous run of sites starting at " + std::to_string(first_site));
}

inline void check_span(std::size_t op_dim, std::size_t first_site, std::size_t span,
                       std::span<const std::size_t> dims) {
  if (span == 0 || first_site + span > dims.size()) throw InputError("operator span exceeds the chain");
  if (checked_product(dims, first_site, first_site + span) != op_dim) {
    throw InputError("operator dimension does not match the product of covered site dimensions");
  }
}

}  // namespace detail

/// Total Hilbert-space dimension of a chain with the given per-site dimensions.
inline std::size_t hilbert_dim(std::span<const std::size_t> dims) { return detail::checked_product(dims, 0, dims.size()); }

/// I_left (x) op (x) I_right where `op` covers sites [first_site, first_site + span).
inline ComplexMatrix embed_span(const ComplexMatrix& op, std::size_t first_site, std::size_t span,
                                std::span<const std::size_t> dims) {
  if (op.rows() != op.cols()) throw InputError("embed_local: operator must be square");
  hilbert_dim(dims);
  detail::check_span(static_cast<std::size_t>(op.rows()), first_site, span, dims);
  const auto l = static_cast<Eigen::Index>(detail::checked_product(dims, 0, first_site));
  const auto r = static_cast<Eigen::Index>(detail::checked_product(dims, first_site + span, dims.size()));
  return kron(kron(ComplexMatrix::Identity(l, l), op), ComplexMatrix::Identity(r, r));
}

/// Embeds `op` on an n-site chain; the covered span is inferred from its dimension.
inline ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t first_site, std::size_t n,
                                 std::span<const std::size_t> dims) {
  if (dims.size() != n) throw InputError("embed_local: dims length must equal n");
  if (first_site >= n) throw InputError("embed_local: first_site out of range");
  const std::size_t span = detail::span_for(static_cast<std::size_t>(op.rows()), first_site, dims);
  return embed_span(op, first_site, span, dims);
}

inline ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t first_site, std::size_t n, std::size_t d) {
  const std::vector<std::size_t> dims(n, d);
  return embed_local(op, first_site, n, dims);
}

/// m <- (I (x) op (x) I) m without forming the embedded operator.
inline void apply_local_left(const ComplexMatrix& op, std::size_t first_site, std::size_t span,
                             std::span<const std::size_t> dims, ComplexMatrix& m) {
  detail::check_span(static_cast<std::size_t>(op.rows()), first_site, span, dims);
  const auto left = static_cast<Eigen::Index>(detail::checked_product(dims, 0, first_site));
  const auto g = op.rows();
  const auto right = static_cast<Eigen::Index>(detail::checked_product(dims, first_site + span, dims.size()));
  if (left * g * right != m.rows()) throw InputError("apply_local_left: register dimension mismatch");
  ComplexMatrix slab(g, m.cols());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index r = 0; r < right; ++r) {
      for (Eigen::Index a = 0; a < g; ++a) slab.row(a) = m.row((l * g + a) * right + r);
      slab = (op * slab).eval();
      for (Eigen::Index a = 0; a < g; ++a) m.row((l * g + a) * right + r) = slab.row(a);
    }
  }
}

/// ||A^dag A - I|| <= tol, measured in spectral norm.
inline bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() == 0 || a.rows() != a.cols() || !a.allFinite()) return false;
  const ComplexMatrix defect = a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols());
  // Frobenius bounds the spectral norm from above; only fall back to the eigensolve near the threshold.
  const double frob = defect.norm();
  if (frob <= tol) return true;
  return spectral_norm(defect) <= tol;
}

/// Maps an angle to the interval (-pi, pi].
inline double wrap_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(theta, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

/// Eigenphases of a unitary: sorted ascending, each in (-pi, pi], with multiplicity.
struct PhaseSpectrum {
  std::vector<double> phases;

  PhaseSpectrum() = default;
  explicit PhaseSpectrum(std::vector<double> p) : phases(std::move(p)) {
    if (phases.empty()) throw InputError("PhaseSpectrum: at least one phase required");
    for (double& x : phases) {
      if (!std::isfinite(x) || x <= -std::numbers::pi || x > std::numbers::pi) {
        throw InputError("PhaseSpectrum: phase outside (-pi, pi]");
      }
    }
    std::sort(phases.begin(), phases.end());
  }

  std::size_t size() const noexcept { return phases.size(); }
};

namespace detail {

// Diagonalizes the restriction of `op` to the column span of `basis` and rotates the basis into its eigenvectors.
inline void refine_in_subspace(const ComplexMatrix& op, ComplexMatrix& basis) {
  const ComplexMatrix restricted = basis.adjoint() * op * basis;
  const HermitianMatrix sub((restricted + restricted.adjoint()) * 0.5);
  basis = basis * herm_eig(sub).vectors;
}

template <class F>
inline void for_each_cluster(const RealVector& sorted_values, double tol, F&& visit) {
  Eigen::Index start = 0;
  const Eigen::Index n = sorted_values.size();
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k == n || sorted_values[k] - sorted_values[k - 1] > tol) {
      visit(start, k - start);
      start = k;
    }
  }
}

}  // namespace detail

/// Eigenphases of a unitary via its commuting Hermitian parts.
///
/// A = (U + U^dag)/2 is diagonalized first. Inside each cluster of nearly
/// equal A-eigenvalues the restriction of B = (U - U^dag)/2i is diagonalized,
/// and inside each cluster of B the restriction of A once more, which yields
/// joint eigenvectors of A and B. Each phase is atan2(<B>, <A>); -pi maps to +pi.
inline PhaseSpectrum eigphases(const ComplexMatrix& u, const Tolerances& tol = kDefaultTolerances) {
  require_square_finite(u, "eigphases");
  if (!is_unitary(u, tol.unitary)) throw InputError("eigphases: matrix is not unitary");

  const ComplexMatrix a = (u + u.adjoint()) * 0.5;
  const ComplexMatrix b = (u - u.adjoint()) * Complex(0.0, -0.5);
  const EigenDecomposition ea = herm_eig(HermitianMatrix(a, std::numeric_limits<double>::infinity()));
  ComplexMatrix vecs = ea.vectors;

  detail::for_each_cluster(ea.values, tol.phase_cluster, [&](Eigen::Index start, Eigen::Index len) {
    if (len < 2) return;
    ComplexMatrix basis = vecs.middleCols(start, len);
    detail::refine_in_subspace(b, basis);
    // Second pass: B-degenerate directions inside the cluster are separated by A.
    const ComplexMatrix rb = basis.adjoint() * b * basis;
    RealVector bvals = rb.diagonal().real();
    detail::for_each_cluster(bvals, tol.phase_cluster, [&](Eigen::Index s2, Eigen::Index l2) {
      if (l2 < 2) return;
      ComplexMatrix sub = basis.middleCols(s2, l2);
      detail::refine_in_subspace(a, sub);
      basis.middleCols(s2, l2) = sub;
    });
    vecs.middleCols(start, len) = basis;
  });

  std::vector<double> phases(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const auto v = vecs.col(k);
    const double re = v.dot(a * v).real();
    const double im = v.dot(b * v).real();
    double theta = std::atan2(im, re);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    phases[static_cast<std::size_t>(k)] = theta;
  }

  const double phase_sum = std::accumulate(phases.begin(), phases.end(), 0.0);
  const double det_arg = std::arg(u.determinant());
  const double mismatch = std::abs(wrap_phase(phase_sum - det_arg));
  if (mismatch > tol.det_check) {
    throw ConvergenceError("eigphases: phases inconsistent with arg det U", mismatch);
  }
  return PhaseSpectrum(std::move(phases));
}

}  // namespace nic
