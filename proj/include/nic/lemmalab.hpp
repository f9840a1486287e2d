#pragma once

// Randomized verification of the phase-range calculus: composition bounds
// for alpha_max/alpha_min, the exponential-product bound, the triangle and
// metric inequalities, the Lipschitz bound, the Trotter deviation bound and
// min_phi ||U - e^{i phi} I|| >= 2 sin(alpha/4).
//
// Each trial draws from a stream derived from (suite seed, lemma, dim, trial),
// so reports do not depend on thread count. Inequalities are one-sided:
// a clause passes when lhs <= rhs + tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "nic/distance.hpp"
#include "nic/json_io.hpp"
#include "nic/random.hpp"
#include "nic/reduction.hpp"

namespace nic::lemmalab {

using json = nlohmann::json;

enum class Lemma { lemma1, lemma2, lemma3, lemma4, lemma5, eq5 };

inline constexpr Lemma kAllLemmas[] = {Lemma::lemma1, Lemma::lemma2, Lemma::lemma3,
                                       Lemma::lemma4, Lemma::lemma5, Lemma::eq5};

inline std::string to_string(Lemma l) {
  switch (l) {
    case Lemma::lemma1: return "lemma1";
    case Lemma::lemma2: return "lemma2";
    case Lemma::lemma3: return "lemma3";
    case Lemma::lemma4: return "lemma4";
    case Lemma::lemma5: return "lemma5";
    case Lemma::eq5: return "eq5";
  }
  return "?";
}

inline Lemma lemma_from_string(const std::string& s) {
  for (Lemma l : kAllLemmas)
    if (to_string(l) == s) return l;
  throw InputError("unknown lemma id \"" + s + "\"");
}

struct TrialConfig {
  Lemma lemma = Lemma::lemma1;
  Eigen::Index dim = 2;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

struct TrialInputs {
  std::map<std::string, ComplexMatrix> matrices;
  std::map<std::string, double> scalars;
};

struct Clause {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Failure {
  Lemma lemma = Lemma::lemma1;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // seed of the trial's stream
  std::string clause;
  TrialInputs inputs;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SuiteReport {
  TrialConfig config;
  std::size_t trials_run = 0;
  std::size_t rejected = 0;
  std::vector<Failure> failures;
  json stats = json::object();

  bool passed() const noexcept { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// Single-trial evaluations. These take exactly what a failure dump stores.

namespace detail {

inline PhaseExtremes extremes(const ComplexMatrix& u) { return alpha_extremes(eigphases(u)); }

inline const ComplexMatrix& mat(const TrialInputs& in, const char* key) {
  const auto it = in.matrices.find(key);
  if (it == in.matrices.end()) throw InputError(std::string("trial input missing matrix ") + key);
  return it->second;
}

inline double scalar(const TrialInputs& in, const char* key) {
  const auto it = in.scalars.find(key);
  if (it == in.scalars.end()) throw InputError(std::string("trial input missing scalar ") + key);
  return it->second;
}

}  // namespace detail

/// alpha_max(U1 U2) <= alpha_max(U1) + alpha_max(U2) and the alpha_min mirror.
inline std::vector<Clause> eval_lemma1(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  const auto e1 = detail::extremes(u1);
  const auto e2 = detail::extremes(u2);
  const auto e12 = detail::extremes(u1 * u2);
  return {{"alpha_max", e12.alpha_max, e1.alpha_max + e2.alpha_max},
          {"alpha_min", e1.alpha_min + e2.alpha_min, e12.alpha_min}};
}

inline bool lemma1_hypothesis(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  const auto e1 = detail::extremes(u1);
  const auto e2 = detail::extremes(u2);
  return e1.alpha_max + e2.alpha_max < std::numbers::pi && e1.alpha_min + e2.alpha_min > -std::numbers::pi;
}

/// alpha_max(e^{iH} e^{iK}) <= alpha_max(e^{i(H+K)}) and the alpha_min mirror.
inline std::vector<Clause> eval_lemma2(const HermitianMatrix& h, const HermitianMatrix& k) {
  const auto prod = detail::extremes(expi(h, 1.0) * expi(k, 1.0));
  const auto sum = detail::extremes(expi(h + k, 1.0));
  return {{"alpha_max", prod.alpha_max, sum.alpha_max}, {"alpha_min", sum.alpha_min, prod.alpha_min}};
}

/// alpha(U1, U2) <= alpha(U1) + alpha(U2), the metric triangle and symmetry.
inline std::vector<Clause> eval_lemma3(const ComplexMatrix& u1, const ComplexMatrix& u2, const ComplexMatrix& u3) {
  const double a12 = phase_range_pair(u1, u2);
  const double a21 = phase_range_pair(u2, u1);
  return {{"triangle", a12, phase_range(u1) + phase_range(u2)},
          {"metric", phase_range_pair(u1, u3), a12 + phase_range_pair(u2, u3)},
          {"symmetry", std::abs(a12 - a21), 0.0}};
}

/// |alpha(U) - alpha(V)| <= pi ||U - V||.
inline std::vector<Clause> eval_lemma4(const ComplexMatrix& u, const ComplexMatrix& v) {
  return {{"lipschitz", std::abs(phase_range(u) - phase_range(v)), std::numbers::pi * spectral_norm(u - v)}};
}

/// |alpha(e^{iHt} e^{iKt}) - alpha(e^{i(H+K)t})|.
inline double trotter_alpha_deviation(const HermitianMatrix& h, const HermitianMatrix& k, double t) {
  return std::abs(phase_range(expi(h, t) * expi(k, t)) - phase_range(expi(h + k, t)));
}

/// |alpha(e^{iHt} e^{iKt}) - alpha(e^{i(H+K)t})| <= c t^2.
inline std::vector<Clause> eval_lemma5(const HermitianMatrix& h, const HermitianMatrix& k, double t, double c) {
  return {{"trotter", trotter_alpha_deviation(h, k, t), c * t * t}};
}

/// 2 sin(alpha/4) <= min_phi ||U - e^{i phi} I||.
inline std::vector<Clause> eval_eq5(const ComplexMatrix& u) {
  const PhaseSpectrum p = eigphases(u);
  const double alpha = std::min(std::numbers::pi, shortest_arc(p));
  return {{"min_phase", 2.0 * std::sin(0.25 * alpha), min_phase_dist(p).value}};
}

inline std::vector<Clause> evaluate(Lemma lemma, const TrialInputs& in) {
  using detail::mat;
  using detail::scalar;
  switch (lemma) {
    case Lemma::lemma1: return eval_lemma1(mat(in, "U1"), mat(in, "U2"));
    case Lemma::lemma2: return eval_lemma2(HermitianMatrix(mat(in, "H")), HermitianMatrix(mat(in, "K")));
    case Lemma::lemma3: return eval_lemma3(mat(in, "U1"), mat(in, "U2"), mat(in, "U3"));
    case Lemma::lemma4: return eval_lemma4(mat(in, "U"), mat(in, "V"));
    case Lemma::lemma5:
      return eval_lemma5(HermitianMatrix(mat(in, "H")), HermitianMatrix(mat(in, "K")), scalar(in, "t"),
                         scalar(in, "c"));
    case Lemma::eq5: return eval_eq5(mat(in, "U"));
  }
  throw InputError("evaluate: unknown lemma");
}

/// Re-runs the clause a failure names on its stored inputs.
inline Clause recheck(const Failure& f) {
  for (const Clause& c : evaluate(f.lemma, f.inputs))
    if (c.name == f.clause) return c;
  throw InputError("recheck: clause \"" + f.clause + "\" cannot be re-evaluated from stored inputs");
}

// ---------------------------------------------------------------------------
// Generators.

namespace detail {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

inline ComplexMatrix unitary_with_phases(const ComplexMatrix& basis, const RealVector& phases) {
  Eigen::VectorXcd d(phases.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) d[k] = std::polar(1.0, phases[k]);
  return basis * d.asDiagonal() * basis.adjoint();
}

inline RealVector uniform_vector(Rng& rng, Eigen::Index n, Window w) {
  RealVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = uniform(rng, w.lo, w.hi);
  return v;
}

inline HermitianMatrix hermitian_from(const ComplexMatrix& basis, const RealVector& ev) {
  return HermitianMatrix(basis * ev.cast<Complex>().asDiagonal() * basis.adjoint(), 1e-8);
}

// Two spectral windows inside (-pi + m, pi - m) whose upper ends sum below
// pi - m and lower ends above -pi + m. Empty optional means "resample".
inline std::optional<std::pair<Window, Window>> paired_windows(Rng& rng, double margin) {
  const double top = std::numbers::pi - margin;
  const double hi1 = uniform(rng, -top, top);
  const double lo1 = uniform(rng, -top, hi1);
  const double hi2 = uniform(rng, -top, std::min(top, top - hi1));
  const double lo2_floor = std::max(-top, -top - lo1);
  if (lo2_floor > hi2) return std::nullopt;
  const double lo2 = uniform(rng, lo2_floor, hi2);
  return std::make_pair(Window{lo1, hi1}, Window{lo2, hi2});
}

struct TrialOutcome {
  bool rejected = false;
  std::vector<Failure> failures;
  double max_slack = -std::numeric_limits<double>::infinity();  // max(lhs - rhs)
  // Trotter scaling probe: deviation at t and at t/2 (lemma5 only).
  std::optional<std::pair<double, double>> scaling;
};

inline void record(TrialOutcome& out, const TrialConfig& cfg, std::size_t trial, std::uint64_t seed,
                   const TrialInputs& in, const std::vector<Clause>& clauses) {
  for (const Clause& c : clauses) {
    out.max_slack = std::max(out.max_slack, c.lhs - c.rhs);
    if (!(c.lhs <= c.rhs + cfg.tolerance)) out.failures.push_back({cfg.lemma, trial, seed, c.name, in, c.lhs, c.rhs});
  }
}

inline constexpr int kMaxAttempts = 64;

inline TrialOutcome run_trial(const TrialConfig& cfg, std::size_t trial) {
  const std::uint64_t seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(cfg.lemma), static_cast<std::uint64_t>(cfg.dim), trial});
  Rng rng = make_rng(seed);
  const Eigen::Index n = cfg.dim;
  constexpr double pi = std::numbers::pi;
  TrialOutcome out;
  TrialInputs in;

  switch (cfg.lemma) {
    case Lemma::lemma1: {
      // Every fourth trial shares one eigenbasis: commuting pairs saturate the bound.
      const bool commuting = trial % 4 == 0;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const auto w = paired_windows(rng, 1e-3);
        if (!w) continue;
        const ComplexMatrix b1 = random_unitary(n, rng);
        const ComplexMatrix b2 = commuting ? b1 : random_unitary(n, rng);
        const ComplexMatrix u1 = unitary_with_phases(b1, uniform_vector(rng, n, w->first));
        const ComplexMatrix u2 = unitary_with_phases(b2, uniform_vector(rng, n, w->second));
        if (!lemma1_hypothesis(u1, u2)) continue;
        in.matrices = {{"U1", u1}, {"U2", u2}};
        record(out, cfg, trial, seed, in, eval_lemma1(u1, u2));
        return out;
      }
      out.rejected = true;
      return out;
    }
    case Lemma::lemma2: {
      const int kind = static_cast<int>(trial % 8);
      constexpr double margin = 1e-3;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const auto w = paired_windows(rng, margin);
        if (!w) continue;
        const ComplexMatrix bh = random_unitary(n, rng);
        const ComplexMatrix bk = kind == 0 ? bh : random_unitary(n, rng);
        const HermitianMatrix h = hermitian_from(bh, uniform_vector(rng, n, w->first));
        const HermitianMatrix k =
            kind == 1 ? HermitianMatrix::zero(n) : hermitian_from(bk, uniform_vector(rng, n, w->second));
        const RealVector sum_spec = herm_eigvals(h + k);
        if (sum_spec.minCoeff() <= -pi + margin || sum_spec.maxCoeff() >= pi - margin) continue;
        in.matrices = {{"H", h.matrix()}, {"K", k.matrix()}};
        record(out, cfg, trial, seed, in, eval_lemma2(h, k));
        return out;
      }
      out.rejected = true;
      return out;
    }
    case Lemma::lemma3: {
      ComplexMatrix u1;
      ComplexMatrix u2;
      if (trial % 4 == 0) {
        // U2 = U1^dag with a short arc: alpha(U1^dag U2) = 2 alpha(U1), the bound is tight.
        const HermitianMatrix h = random_hermitian_bounded(n, -pi / 4, pi / 4, rng);
        u1 = expi(h, 1.0);
        u2 = u1.adjoint();
      } else {
        u1 = random_unitary(n, rng);
        u2 = random_unitary(n, rng);
      }
      const ComplexMatrix u3 = random_unitary(n, rng);
      in.matrices = {{"U1", u1}, {"U2", u2}, {"U3", u3}};
      record(out, cfg, trial, seed, in, eval_lemma3(u1, u2, u3));
      return out;
    }
    case Lemma::lemma4: {
      const ComplexMatrix u = random_unitary(n, rng);
      ComplexMatrix v;
      switch (trial % 3) {
        case 0:
          v = random_unitary(n, rng);
          break;
        case 1: {
          // Near-identity stress: ||G|| between 1e-6 and 1e-1.
          const double scale = std::pow(10.0, -uniform(rng, 1.0, 6.0));
          v = u * expi(random_hermitian_bounded(n, -scale, scale, rng), 1.0);
          break;
        }
        default:
          v = std::polar(1.0, uniform(rng, -pi, pi)) * u;
          break;
      }
      in.matrices = {{"U", u}, {"V", v}};
      record(out, cfg, trial, seed, in, eval_lemma4(u, v));
      return out;
    }
    case Lemma::lemma5: {
      const bool commuting = trial % 4 == 0;
      const ComplexMatrix bh = random_unitary(n, rng);
      const ComplexMatrix bk = commuting ? bh : random_unitary(n, rng);
      const HermitianMatrix h = hermitian_from(bh, uniform_vector(rng, n, {0.0, pi / 2}));
      const HermitianMatrix k = hermitian_from(bk, uniform_vector(rng, n, {0.0, pi / 2}));
      const double t = uniform(rng, 1e-3, 1.0);
      const double c = trotter_constant_analytic().c;
      in.matrices = {{"H", h.matrix()}, {"K", k.matrix()}};
      in.scalars = {{"t", t}, {"c", c}};
      const auto clauses = eval_lemma5(h, k, t, c);
      record(out, cfg, trial, seed, in, clauses);
      if (!commuting) out.scaling = std::make_pair(clauses.front().lhs, trotter_alpha_deviation(h, k, 0.5 * t));
      return out;
    }
    case Lemma::eq5: {
      ComplexMatrix u;
      if (trial % 3 == 0) {
        // Antipodal pair forces arc >= pi.
        RealVector ph = uniform_vector(rng, n, {-pi, pi});
        ph[1] = wrap_phase(ph[0] + pi);
        u = unitary_with_phases(random_unitary(n, rng), ph);
      } else {
        u = random_unitary(n, rng);
      }
      in.matrices = {{"U", u}};
      record(out, cfg, trial, seed, in, eval_eq5(u));
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Minimum fraction of Trotter pairs whose deviation drops by >= 3x when t halves.
inline constexpr double kScalingPassFraction = 0.95;
inline constexpr double kScalingRatio = 3.0;
inline constexpr double kScalingNoiseFloor = 1e-12;

/// Runs one lemma at one dimension. `threads` only affects wall time.
inline SuiteReport run_check(const TrialConfig& cfg, unsigned threads = 1) {
  if (cfg.dim < 2) throw InputError("TrialConfig: dim must be >= 2");
  if (cfg.trials < 1) throw InputError("TrialConfig: trials must be >= 1");
  std::vector<detail::TrialOutcome> outcomes(cfg.trials);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < cfg.trials; t += threads) outcomes[t] = detail::run_trial(cfg, t);
      });
    }
  }

  SuiteReport rep;
  rep.config = cfg;
  double max_slack = -std::numeric_limits<double>::infinity();
  std::size_t counted = 0;
  std::size_t passing = 0;
  std::size_t below_floor = 0;
  for (auto& o : outcomes) {
    if (o.rejected) {
      ++rep.rejected;
      continue;
    }
    ++rep.trials_run;
    max_slack = std::max(max_slack, o.max_slack);
    for (auto& f : o.failures) rep.failures.push_back(std::move(f));
    if (o.scaling) {
      const auto [dev_t, dev_half] = *o.scaling;
      if (dev_half < kScalingNoiseFloor) {
        ++below_floor;
      } else {
        ++counted;
        if (dev_t / dev_half >= kScalingRatio) ++passing;
      }
    }
  }
  rep.stats["max_slack"] = std::isfinite(max_slack) ? json(max_slack) : json(nullptr);
  if (cfg.lemma == Lemma::lemma5) {
    const double fraction = counted == 0 ? 1.0 : static_cast<double>(passing) / static_cast<double>(counted);
    rep.stats["scaling_counted"] = counted;
    rep.stats["scaling_passing"] = passing;
    rep.stats["scaling_below_noise_floor"] = below_floor;
    rep.stats["scaling_fraction"] = fraction;
    if (fraction < kScalingPassFraction) {
      rep.failures.push_back({cfg.lemma, 0, cfg.seed, "scaling", {}, kScalingPassFraction, fraction});
    }
  }
  return rep;
}

inline std::vector<SuiteReport> run_suite(const std::vector<TrialConfig>& configs, unsigned threads = 1) {
  std::vector<SuiteReport> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_check(c, threads));
  return out;
}

/// Every check at every dim in [dim_lo, dim_hi].
inline std::vector<TrialConfig> default_configs(std::size_t trials = 1000, std::uint64_t seed = 1, double tolerance = 1e-9,
                                                Eigen::Index dim_lo = 2, Eigen::Index dim_hi = 6) {
  std::vector<TrialConfig> out;
  for (Lemma l : kAllLemmas)
    for (Eigen::Index d = dim_lo; d <= dim_hi; ++d) out.push_back({l, d, trials, seed, tolerance});
  return out;
}

inline bool all_passed(const std::vector<SuiteReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); });
}

// ---------------------------------------------------------------------------
// JSON.

inline json to_json(const TrialInputs& in) {
  json m = json::object();
  for (const auto& [k, v] : in.matrices) m[k] = io::to_json(v);
  json s = json::object();
  for (const auto& [k, v] : in.scalars) s[k] = v;
  return {{"matrices", m}, {"scalars", s}};
}

inline TrialInputs inputs_from_json(const json& j) {
  TrialInputs in;
  if (j.contains("matrices"))
    for (const auto& [k, v] : j.at("matrices").items()) in.matrices[k] = io::matrix_from_json(v);
  if (j.contains("scalars"))
    for (const auto& [k, v] : j.at("scalars").items()) in.scalars[k] = v.get<double>();
  return in;
}

inline json to_json(const Failure& f) {
  return {{"lemma", to_string(f.lemma)}, {"trial", f.trial}, {"seed", f.seed}, {"clause", f.clause},
          {"inputs", to_json(f.inputs)}, {"lhs", f.lhs},     {"rhs", f.rhs}};
}

inline Failure failure_from_json(const json& j) {
  try {
    Failure f;
    f.lemma = lemma_from_string(j.at("lemma").get<std::string>());
    f.trial = j.at("trial").get<std::size_t>();
    f.seed = j.at("seed").get<std::uint64_t>();
    f.clause = j.at("clause").get<std::string>();
    f.inputs = inputs_from_json(j.at("inputs"));
    f.lhs = j.at("lhs").get<double>();
    f.rhs = j.at("rhs").get<double>();
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed failure record: ") + e.what());
  }
}

inline json to_json(const SuiteReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back(to_json(f));
  return {{"lemma", to_string(r.config.lemma)},
          {"dim", r.config.dim},
          {"trials", r.config.trials},
          {"seed", r.config.seed},
          {"tolerance", r.config.tolerance},
          {"trials_run", r.trials_run},
          {"rejected", r.rejected},
          {"passed", r.passed()},
          {"failures", std::move(failures)},
          {"stats", r.stats}};
}

inline json to_json(const std::vector<SuiteReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return {{"passed", all_passed(reports)}, {"reports", std::move(arr)}};
}

}  // namespace nic::lemmalab
