#pragma once

// Gate-imperfection bookkeeping: perturb every gate of a circuit by a bounded
// unitary rotation, check that the phase range moves by at most
// pi * sum_i ||E_i||, and size the per-gate precision a compiled circuit needs.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "nic/circuit.hpp"
#include "nic/distance.hpp"
#include "nic/random.hpp"

namespace nic {

struct PerturbationReport {
  std::vector<double> per_gate_error;
  double bound = 0.0;     // pi * sum ||E_i||
  double observed = 0.0;  // |alpha(C) - alpha(C')|
  bool holds = true;      // observed <= bound + tolerance
};

struct DepthBudget {
  std::size_t gate_count = 0;
  double target_gap = 0.0;
  double per_gate_epsilon = 0.0;
  double sk_exponent = 0.0;
  double depth_factor = 0.0;  // (ln 1/epsilon)^delta, asymptotic model without constants
};

struct PerturbedCircuit {
  LayeredCircuit circuit;
  std::vector<double> errors;  // ||V_i - U_i|| in gate order (layer-major)
};

/// Replaces every gate U_i by U_i e^{i G_i} with a seeded random Hermitian ||G_i|| <= epsilon.
inline PerturbedCircuit perturb_circuit(const LayeredCircuit& c, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("perturb_circuit: epsilon must lie in (0, 1)");
  std::vector<std::vector<Gate>> layers;
  std::vector<double> errors;
  std::uint64_t index = 0;
  for (const auto& layer : c.layers()) {
    std::vector<Gate> out;
    for (const auto& g : layer) {
      Rng rng = make_rng(derive_seed(seed, {index++}));
      const HermitianMatrix gen = random_hermitian_bounded(g.unitary.rows(), -epsilon, epsilon, rng);
      ComplexMatrix v = g.unitary * expi(gen, 1.0);
      errors.push_back(spectral_norm(v - g.unitary));
      out.push_back({g.first_site, g.span, std::move(v)});
    }
    layers.push_back(std::move(out));
  }
  return {LayeredCircuit(c.n(), c.d(), std::move(layers)), std::move(errors)};
}

/// Compares alpha of an ideal circuit and an implementation with the same gate layout.
inline PerturbationReport alpha_stability_check(const LayeredCircuit& ideal, const LayeredCircuit& actual,
                                                double tolerance = 1e-9) {
  if (ideal.n() != actual.n() || ideal.d() != actual.d() || ideal.depth() != actual.depth()) {
    throw InputError("alpha_stability_check: circuit shapes differ");
  }
  PerturbationReport rep;
  double sum = 0.0;
  for (std::size_t li = 0; li < ideal.depth(); ++li) {
    const auto& lu = ideal.layers()[li];
    const auto& lv = actual.layers()[li];
    if (lu.size() != lv.size()) throw InputError("alpha_stability_check: layer sizes differ");
    for (std::size_t gi = 0; gi < lu.size(); ++gi) {
      if (lu[gi].first_site != lv[gi].first_site || lu[gi].span != lv[gi].span) {
        throw InputError("alpha_stability_check: gate placement differs");
      }
      const double e = spectral_norm(lv[gi].unitary - lu[gi].unitary);
      rep.per_gate_error.push_back(e);
      sum += e;
    }
  }
  rep.bound = std::numbers::pi * sum;
  rep.observed = std::abs(phase_range(simulate(ideal)) - phase_range(simulate(actual)));
  rep.holds = rep.observed <= rep.bound + tolerance;
  return rep;
}

/// Per-gate precision keeping the total alpha shift under half the promise gap,
/// and the (ln 1/epsilon)^delta depth factor of the compiled gates.
inline DepthBudget depth_budget(std::size_t gate_count, double target_gap, double sk_exponent) {
  if (gate_count < 1) throw InputError("depth_budget: gate_count must be >= 1");
  if (!(target_gap > 0.0) || !std::isfinite(target_gap)) throw InputError("depth_budget: target_gap must be > 0");
  if (!(sk_exponent >= 1.0) || !std::isfinite(sk_exponent)) throw InputError("depth_budget: sk_exponent must be >= 1");
  DepthBudget b;
  b.gate_count = gate_count;
  b.target_gap = target_gap;
  b.sk_exponent = sk_exponent;
  b.per_gate_epsilon = target_gap / (2.0 * std::numbers::pi * static_cast<double>(gate_count));
  if (!(b.per_gate_epsilon < 1.0)) {
    throw InputError("depth_budget: per-gate epsilon must be < 1 (gap too large for this gate count)");
  }
  b.depth_factor = std::pow(std::log(1.0 / b.per_gate_epsilon), sk_exponent);
  return b;
}

}  // namespace nic
