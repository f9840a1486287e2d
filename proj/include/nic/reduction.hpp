#pragma once

// Local Hamiltonian -> Non-Identity Check. A chain instance is rescaled,
// padded and normalized, split into commuting odd/even halves, and mapped to
// the depth-2 circuit U_H = e^{i H_even t} e^{i H_odd t} with t = (l - s)/(2c)
// and thresholds a_nic = s t, b_nic = l t - c t^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nic/circuit.hpp"
#include "nic/distance.hpp"
#include "nic/hamiltonian.hpp"
#include "nic/random.hpp"

namespace nic {

enum class TrotterMode { analytic, empirical };

inline std::string_view to_string(TrotterMode m) { return m == TrotterMode::analytic ? "analytic" : "empirical"; }

/// Bound ||e^{iHt}e^{iKt} - e^{i(H+K)t}|| <= c1 t^2 and its phase-range form c = pi c1.
struct TrotterConstant {
  double c1 = 0.0;
  double c = 0.0;
  TrotterMode mode = TrotterMode::analytic;
  std::size_t samples = 0;

  static TrotterConstant from_c1(double c1, TrotterMode mode, std::size_t samples = 0) {
    if (!(c1 > 0.0) || !std::isfinite(c1)) throw InputError("TrotterConstant: c1 must be positive");
    return {c1, std::numbers::pi * c1, mode, samples};
  }
};

/// ||e^{iHt} e^{iKt} - e^{i(H+K)t}|| in spectral norm.
inline double trotter_error(const HermitianMatrix& h, const HermitianMatrix& k, double t) {
  return spectral_norm(expi(h, t) * expi(k, t) - expi(h + k, t));
}

/// Analytic c1 = (pi^2/4) e^pi.
///
/// From ||e^A e^B - e^{A+B}|| <= (1/2)||[A,B]|| e^{||A||+||B||} with A = iHt,
/// B = iKt, ||H||, ||K|| <= pi/2 and 0 < t < 1: ||[A,B]|| <= 2 (pi/2)^2 t^2 and
/// e^{pi t} <= e^pi.
inline TrotterConstant trotter_constant_analytic() {
  return TrotterConstant::from_c1(std::numbers::pi * std::numbers::pi / 4.0 * std::exp(std::numbers::pi),
                                  TrotterMode::analytic);
}

/// Twice the largest observed ||e^{iHt}e^{iKt} - e^{i(H+K)t}|| / t^2 over random
/// 4-dimensional pairs with spectra in [0, pi/2] and t uniform in (0, 1).
inline TrotterConstant trotter_constant_empirical(std::size_t samples, std::uint64_t seed = 0x7e0775) {
  if (samples == 0) throw InputError("trotter_constant: empirical mode needs samples > 0");
  double sup = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Rng rng = make_rng(derive_seed(seed, {k}));
    const HermitianMatrix h = random_hermitian_bounded(4, 0.0, std::numbers::pi / 2, rng);
    const HermitianMatrix kk = random_hermitian_bounded(4, 0.0, std::numbers::pi / 2, rng);
    const double t = uniform(rng, 1e-3, 1.0);
    sup = std::max(sup, trotter_error(h, kk, t) / (t * t));
  }
  if (!(sup > 0.0)) sup = 1e-12;
  return TrotterConstant::from_c1(2.0 * sup, TrotterMode::empirical, samples);
}

inline TrotterConstant trotter_constant(TrotterMode mode, std::size_t samples = 256, std::uint64_t seed = 0x7e0775) {
  return mode == TrotterMode::analytic ? trotter_constant_analytic() : trotter_constant_empirical(samples, seed);
}

/// Layer 0 holds e^{i H_j t} for the odd part, layer 1 for the even part.
inline LayeredCircuit build_trotter_circuit(const ChainHamiltonian& odd, const ChainHamiltonian& even, double t) {
  if (odd.n() != even.n() || odd.d() != even.d()) throw InputError("build_trotter_circuit: parts disagree on n or d");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("build_trotter_circuit: t must be >= 0");
  auto layer_of = [t](const ChainHamiltonian& part) {
    std::vector<Gate> gates;
    gates.reserve(part.r());
    for (const auto& term : part.terms()) gates.push_back({term.site, 2, expi(term.matrix, t)});
    return gates;
  };
  std::vector<std::vector<Gate>> layers{layer_of(odd), layer_of(even)};
  return LayeredCircuit(odd.n(), odd.d(), std::move(layers));
}

struct ReductionMetadata {
  double l = 0.0;
  double s = 0.0;
  double t = 0.0;
  double c = 0.0;
  std::size_t r = 0;
  double c1 = 0.0;
  TrotterMode c_mode = TrotterMode::analytic;
  std::size_t c_samples = 0;
  double rescale_scale = 1.0;
  double rescale_shift = 0.0;
  double a_rescaled = 0.0;
  double b_rescaled = 0.0;
};

struct NicInstance {
  LayeredCircuit circuit;
  double a_nic = 0.0;
  double b_nic = 0.0;
  nlohmann::json metadata = nlohmann::json::object();

  NicInstance(LayeredCircuit c, double a, double b, nlohmann::json meta = nlohmann::json::object())
      : circuit(std::move(c)), a_nic(a), b_nic(b), metadata(std::move(meta)) {
    if (!(b_nic > a_nic)) throw InputError("NicInstance: require b_nic > a_nic");
  }
};

inline nlohmann::json to_json_metadata(const ReductionMetadata& m) {
  return {{"l", m.l},
          {"s", m.s},
          {"t", m.t},
          {"c", m.c},
          {"r", m.r},
          {"c1", m.c1},
          {"c_mode", std::string(to_string(m.c_mode))},
          {"c_samples", m.c_samples},
          {"rescale_scale", m.rescale_scale},
          {"rescale_shift", m.rescale_shift},
          {"a_rescaled", m.a_rescaled},
          {"b_rescaled", m.b_rescaled}};
}

/// Everything the reduction produced, including the intermediate chains.
struct ReductionTrace {
  ChainHamiltonian normalized;  // padded, normalized H (sum of both halves)
  ReductionMetadata meta;
  NicInstance instance;
};

inline ReductionTrace reduce_traced(const HamiltonianInstance& inst, const TrotterConstant& tc) {
  if (!(inst.b > inst.a)) throw InputError("reduce: require b > a");
  if (!(tc.c > 0.0)) throw InputError("reduce: Trotter constant must be positive");
  const auto [rescaled, info] = rescale_psd_with_info(inst);
  const ChainHamiltonian padded = pad(rescaled.hamiltonian);
  NormalizedChain norm = normalize(padded, rescaled.a, rescaled.b);
  const OddEvenSplit parts = split_odd_even(norm.hamiltonian);

  ReductionMetadata m;
  m.l = norm.l;
  m.s = norm.s;
  m.c = tc.c;
  m.c1 = tc.c1;
  m.c_mode = tc.mode;
  m.c_samples = tc.samples;
  m.r = padded.r();
  m.t = (norm.l - norm.s) / (2.0 * tc.c);
  m.rescale_scale = info.scale;
  m.rescale_shift = info.total_shift;
  m.a_rescaled = rescaled.a;
  m.b_rescaled = rescaled.b;
  if (!(m.t > 0.0 && m.t < 1.0)) throw InputError("reduce: evolution time t = " + std::to_string(m.t) + " not in (0, 1)");

  const double a_nic = m.s * m.t;
  const double b_nic = m.l * m.t - m.c * m.t * m.t;
  const double expected_gap = (m.l - m.s) * (m.l - m.s) / (4.0 * m.c);
  if (std::abs((b_nic - a_nic) - expected_gap) > 1e-12) {
    throw Error("reduce: promise gap deviates from (l - s)^2/(4c)");
  }
  LayeredCircuit circuit = build_trotter_circuit(parts.odd, parts.even, m.t);
  nlohmann::json meta = to_json_metadata(m);
  if (inst.metadata.contains("kind")) meta["source_kind"] = inst.metadata["kind"];
  return {std::move(norm.hamiltonian), m, NicInstance(std::move(circuit), a_nic, b_nic, std::move(meta))};
}

inline NicInstance reduce(const HamiltonianInstance& inst, const TrotterConstant& tc) {
  return reduce_traced(inst, tc).instance;
}

enum class NicVerdict { yes, no, promise_violated };

inline std::string_view to_string(NicVerdict v) {
  switch (v) {
    case NicVerdict::yes:
      return "Yes";
    case NicVerdict::no:
      return "No";
    case NicVerdict::promise_violated:
      return "PromiseViolated";
  }
  return "PromiseViolated";
}

struct NicDecision {
  NicVerdict verdict = NicVerdict::promise_violated;
  double alpha = 0.0;
};

/// Brute-force decision: Yes if alpha(U) >= b_nic, No if alpha(U) <= a_nic.
inline NicDecision decide_nic_detailed(const NicInstance& inst) {
  const double alpha = phase_range(simulate(inst.circuit));
  if (alpha >= inst.b_nic) return {NicVerdict::yes, alpha};
  if (alpha <= inst.a_nic) return {NicVerdict::no, alpha};
  return {NicVerdict::promise_violated, alpha};
}

inline NicVerdict decide_nic(const NicInstance& inst) { return decide_nic_detailed(inst).verdict; }

}  // namespace nic
