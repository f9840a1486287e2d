#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nic/linalg.hpp"

namespace nic {

struct Gate {
  std::size_t first_site = 0;
  std::size_t span = 1;
  ComplexMatrix unitary;
};

/// Layers of gates on an n-site chain of local dimension d. Layer 0 acts first.
class LayeredCircuit {
 public:
  LayeredCircuit(std::size_t n, std::size_t d, std::vector<std::vector<Gate>> layers = {},
                 double unitary_tol = 1e-9)
      : n_(n), d_(d), layers_(std::move(layers)) {
    if (n_ < 1) throw InputError("LayeredCircuit: n must be >= 1");
    if (d_ < 1) throw InputError("LayeredCircuit: d must be >= 1");
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      std::vector<bool> used(n_, false);
      for (const auto& g : layers_[li]) {
        if (g.span < 1 || g.first_site + g.span > n_) {
          throw InputError("LayeredCircuit: gate in layer " + std::to_string(li) + " exceeds the register");
        }
        std::size_t expected = 1;
        for (std::size_t k = 0; k < g.span; ++k) expected *= d_;
        if (static_cast<std::size_t>(g.unitary.rows()) != expected || g.unitary.cols() != g.unitary.rows()) {
          throw InputError("LayeredCircuit: gate dimension must be d^span");
        }
        if (!is_unitary(g.unitary, unitary_tol)) {
          throw InputError("LayeredCircuit: gate in layer " + std::to_string(li) + " is not unitary");
        }
        for (std::size_t s = g.first_site; s < g.first_site + g.span; ++s) {
          if (used[s]) throw InputError("LayeredCircuit: overlapping gates in layer " + std::to_string(li));
          used[s] = true;
        }
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  const std::vector<std::vector<Gate>>& layers() const noexcept { return layers_; }
  std::vector<std::size_t> dims() const { return std::vector<std::size_t>(n_, d_); }

  std::size_t gate_count() const noexcept {
    std::size_t c = 0;
    for (const auto& l : layers_) c += l.size();
    return c;
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<std::vector<Gate>> layers_;
};

/// Dense unitary of the whole circuit; later layers multiply on the left.
inline ComplexMatrix simulate(const LayeredCircuit& c) {
  const std::vector<std::size_t> dims = c.dims();
  const auto total = static_cast<Eigen::Index>(hilbert_dim(dims));
  ComplexMatrix u = ComplexMatrix::Identity(total, total);
  for (const auto& layer : c.layers()) {
    for (const auto& g : layer) apply_local_left(g.unitary, g.first_site, g.span, dims, u);
  }
  return u;
}

}  // namespace nic
