// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "nic/nic.hpp"
#include "support/oracles.hpp"

namespace {

using namespace nic;
constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kDistanceTol = 1e-9;
constexpr double kPaddingTol = 1e-9;
constexpr double kReductionTol = 1e-9;
constexpr double kStabilityTol = 1e-9;
constexpr double kGridTol = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr long kGridPoints = 1'000'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome distance_consistency() {
  double worst_diamond = 0, worst_eq5 = 0;
  std::size_t bad = 0;
  for (Eigen::Index dim = 2; dim <= 8; ++dim) {
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const auto r = report(random_unitary(dim, derive_seed(101, {static_cast<std::uint64_t>(dim), k})));
      const double d1 = std::abs(r.diamond - 2 * std::sin(r.alpha / 2));
      const double d2 = std::abs(r.diamond - 2 * std::sqrt(1 - r.nu * r.nu));
      const double lower = 2 * std::sin(r.alpha / 4);
      double e5 = std::max(0.0, lower - r.min_phase_dist);
      if (r.arc < kPi) e5 = std::max(e5, std::abs(r.min_phase_dist - lower));
      worst_diamond = std::max({worst_diamond, d1, d2});
      worst_eq5 = std::max(worst_eq5, e5);
      if (d1 > kDistanceTol || d2 > kDistanceTol || e5 > kDistanceTol) ++bad;
    }
  }
  return {bad == 0, fmt("7000 unitaries, %zu violations, worst diamond dev %.3g, worst eq5 dev %.3g", bad,
                        worst_diamond, worst_eq5)};
}

Outcome lemma_suites() {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto reports = lemmalab::run_suite(lemmalab::default_configs(1000, 1, 1e-9, 2, 6), threads);
  std::size_t failures = 0, rejected = 0;
  double min_scaling = 1.0;
  for (const auto& r : reports) {
    failures += r.failures.size();
    rejected += r.rejected;
    if (r.config.lemma == lemmalab::Lemma::lemma5) {
      min_scaling = std::min(min_scaling, r.stats["scaling_fraction"].get<double>());
    }
  }
  return {lemmalab::all_passed(reports) && min_scaling >= lemmalab::kScalingPassFraction,
          fmt("%zu suites x 1000 trials, %zu failures, %zu rejected, min lemma5 scaling fraction %.4f",
              reports.size(), failures, rejected, min_scaling)};
}

Outcome padding() {
  std::size_t bad = 0;
  double worst_top = 0, worst_min = 0;
  std::size_t count = 0;
  for (std::uint64_t k = 0; count < 200; ++k) {
    Rng rng = make_rng(derive_seed(303, {k}));
    const std::size_t n = 2 + rng() % 4;
    const std::size_t d = 1 + rng() % 3;
    std::size_t padded_dim = 1;
    for (std::size_t i = 0; i < n; ++i) padded_dim *= d + 1;
    if (padded_dim > 1024) continue;
    ++count;
    std::vector<LocalTerm> terms;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      terms.push_back({i, random_hermitian_bounded(static_cast<Eigen::Index>(d * d), -2.0, 2.0, rng)});
    }
    const auto h = rescale_psd(HamiltonianInstance(ChainHamiltonian(n, d, std::move(terms)), 0.0, 1.0)).hamiltonian;
    const auto p = pad(h);
    const HermitianMatrix big = assemble(p);
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(big.dim());
    top[big.dim() - 1] = 1.0;
    const double top_dev = (big.matrix() * top - static_cast<double>(p.r()) * top).norm();
    const double min_dev = std::abs(lambda_min(big) - ground_energy(h));
    worst_top = std::max(worst_top, top_dev);
    worst_min = std::max(worst_min, min_dev);
    if (top_dev > kPaddingTol || min_dev > kPaddingTol) ++bad;
  }
  return {bad == 0, fmt("200 chains, %zu violations, worst top-state residual %.3g, worst ground-energy dev %.3g", bad,
                        worst_top, worst_min)};
}

struct ReductionRun {
  Outcome end_to_end;
  Outcome depth;
};

ReductionRun reduction() {
  const TrotterConstant tc = trotter_constant_empirical(256);
  std::size_t yes_ok = 0, no_ok = 0, violated = 0, bound_bad = 0, shape_bad = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < 200; ++k) {
    const bool yes_side = k % 2 == 0;
    const std::size_t n = 3 + (k / 2) % 3;
    const auto inst = generate_instance(n, 2, yes_side ? InstanceKind::yes_biased : InstanceKind::no_biased,
                                        derive_seed(404, {k}));
    const auto trace = reduce_traced(inst, tc);
    const auto& m = trace.meta;
    const auto& c = trace.instance.circuit;
    bool shape = c.depth() == 2;
    for (const auto& layer : c.layers())
      for (const auto& g : layer) shape = shape && g.span == 2 && g.unitary.rows() == 9;
    if (!shape) ++shape_bad;

    const auto dec = decide_nic_detailed(trace.instance);
    if (dec.verdict == NicVerdict::promise_violated) ++violated;
    if (yes_side) {
      if (dec.verdict == NicVerdict::yes) ++yes_ok;
      const double bound = m.l * m.t - m.c * m.t * m.t;
      if (dec.alpha < bound - kReductionTol) ++bound_bad;
      worst_margin = std::min(worst_margin, (dec.alpha - bound) / (trace.instance.b_nic - trace.instance.a_nic));
    } else {
      if (dec.verdict == NicVerdict::no) ++no_ok;
      const double bound = m.s * m.t;
      if (dec.alpha > bound + kReductionTol) ++bound_bad;
      worst_margin = std::min(worst_margin, (bound - dec.alpha) / (trace.instance.b_nic - trace.instance.a_nic));
    }
  }
  ReductionRun r;
  r.end_to_end = {yes_ok == 100 && no_ok == 100 && violated == 0 && bound_bad == 0,
                  fmt("c = %.6g (empirical), yes %zu/100, no %zu/100, promise violated %zu, bound violations %zu, "
                      "smallest margin %.3g gaps",
                      tc.c, yes_ok, no_ok, violated, bound_bad, worst_margin)};
  r.depth = {shape_bad == 0, fmt("200 reduced circuits, %zu with depth != 2 or a non 2-site gate", shape_bad)};
  return r;
}

// Haar gates almost always give alpha = pi, where the bound holds trivially, so
// odd seeds use near-identity gates that keep alpha below pi.
LayeredCircuit random_depth2_n3(Rng& rng, bool near_identity) {
  const auto gate = [&](Eigen::Index dim) {
    return near_identity ? expi(random_hermitian_bounded(dim, -0.4, 0.4, rng), 1.0) : random_unitary(dim, rng);
  };
  std::vector<Gate> l0{{0, 2, gate(4)}, {2, 1, gate(2)}};
  std::vector<Gate> l1{{0, 1, gate(2)}, {1, 2, gate(4)}};
  return LayeredCircuit(3, 2, {l0, l1});
}

Outcome perturbation() {
  std::size_t trials = 0, held = 0, below_pi = 0;
  double worst_ratio = 0;
  for (double eps : {0.2, 0.05, 0.01}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng = make_rng(derive_seed(606, {seed}));
      const auto c = random_depth2_n3(rng, seed % 2 == 1);
      if (phase_range(simulate(c)) < kPi) ++below_pi;
      const auto rep = alpha_stability_check(c, perturb_circuit(c, eps, derive_seed(607, {seed})).circuit, kStabilityTol);
      ++trials;
      if (rep.holds) ++held;
      if (rep.bound > 0) worst_ratio = std::max(worst_ratio, rep.observed / rep.bound);
    }
  }
  return {held == trials, fmt("%zu/%zu trials within bound, %zu circuits with alpha < pi, largest observed/bound %.4f",
                              held, trials, below_pi, worst_ratio)};
}

Outcome min_phase_oracle() {
  std::size_t bad = 0, closed_checked = 0;
  double worst_grid = 0, worst_closed = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = make_rng(derive_seed(707, {k}));
    const auto dim = static_cast<Eigen::Index>(1 + k % 3);
    ComplexMatrix u;
    if (k % 2 == 0) {
      u = random_unitary(dim, rng);
    } else {
      // Narrow spectra exercise the closed-form branch.
      u = expi(random_hermitian_bounded(dim, -uniform(rng, 0, 1.5), uniform(rng, 0, 1.5), rng), 1.0);
    }
    const auto m = min_phase_dist(u);
    const auto phases = nic::testing::schur_phases(u);
    const auto grid = nic::testing::grid_min_phase_dist(phases, kGridPoints);
    const double g = std::abs(m.value - grid.value);
    worst_grid = std::max(worst_grid, g);
    bool ok = g <= kGridTol;
    const PhaseSpectrum p = eigphases(u);
    const double arc = shortest_arc(p);
    if (arc < kPi) {
      ++closed_checked;
      const double cf = std::abs(m.value - 2 * std::sin(std::min(kPi, arc) / 4));
      worst_closed = std::max(worst_closed, cf);
      ok = ok && cf <= kClosedFormTol;
    }
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("100 unitaries, %zu disagreements, worst grid dev %.3g, closed form checked on %zu (worst %.3g)",
                        bad, worst_grid, closed_checked, worst_closed)};
}

Outcome determinism() {
  auto lemma_json = [](unsigned threads) {
    return io::dump(lemmalab::to_json(lemmalab::run_suite(lemmalab::default_configs(200, 9, 1e-9, 2, 4), threads)));
  };
  auto reduce_json = [] {
    const auto tc = trotter_constant_empirical(64, 5);
    std::string out;
    for (std::uint64_t k = 0; k < 4; ++k) {
      out += io::dump(io::to_json(reduce(generate_instance(3, 2, InstanceKind::random, k), tc)));
    }
    return out;
  };
  auto perturb_json = [] {
    Rng rng = make_rng(3);
    const auto c = random_depth2_n3(rng, true);
    std::string out;
    for (std::uint64_t s = 0; s < 20; ++s) {
      out += io::dump(io::to_json(alpha_stability_check(c, perturb_circuit(c, 0.05, s).circuit)));
    }
    return out;
  };
  const bool lemmas_same = lemma_json(1) == lemma_json(1) && lemma_json(1) == lemma_json(4);
  const bool reduce_same = reduce_json() == reduce_json();
  const bool perturb_same = perturb_json() == perturb_json();
  return {lemmas_same && reduce_same && perturb_same,
          fmt("lemma reports %s (1 vs 4 threads), reductions %s, perturbation reports %s",
              lemmas_same ? "identical" : "DIFFER", reduce_same ? "identical" : "DIFFER",
              perturb_same ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  bool all = true;
  auto run = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  };

  run(1, "distance-calculus consistency", distance_consistency);
  run(2, "lemma suites", lemma_suites);
  run(3, "padding correctness", padding);
  ReductionRun red;
  run(4, "reduction end-to-end", [&] {
    red = reduction();
    return red.end_to_end;
  });
  run(5, "depth invariant", [&] { return red.depth; });
  run(6, "gate-perturbation stability", perturbation);
  run(7, "min_phase_dist oracle equivalence", min_phase_oracle);
  run(8, "determinism", determinism);
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
