#pragma once

// Command-line front end. run() takes the arguments after the program name and
// returns the process exit code:
//   0 success / Yes, 1 No, 2 input error, 3 resource limit,
//   4 promise violated, 5 property-suite failure.

#include <algorithm>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nic/nic.hpp"

namespace nic::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNo = 1,
  kInputError = 2,
  kResourceLimit = 3,
  kPromiseViolated = 4,
  kPropertyFailure = 5,
};

namespace detail {

struct Output {
  std::string path;
  bool quiet = false;
};

// JSON goes to --out when given, otherwise to stdout unless --quiet.
inline void emit(const Output& o, const io::json& j, std::ostream& out) {
  if (!o.path.empty()) {
    io::write_file(o.path, j);
  } else if (!o.quiet) {
    out << io::dump(j) << '\n';
  }
}

// NicInstance files are circuit files with extra fields, so either is accepted.
inline LayeredCircuit read_circuit(const std::string& path) { return io::circuit_from_json(io::read_file(path)); }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unitary-distance calculus and the chain Hamiltonian to Non-Identity Check reduction", "nic"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress standard output");
  int code = kSuccess;

  // reduce
  std::string reduce_in, c_mode = "analytic", reduce_out;
  std::size_t c_samples = 256;
  std::uint64_t c_seed = 0x7e0775;
  auto* reduce = app.add_subcommand("reduce", "Reduce a chain instance to a depth-2 NIC instance");
  reduce->add_option("input", reduce_in, "Hamiltonian instance file")->required();
  reduce->add_option("--c-mode", c_mode, "Trotter constant: analytic or empirical")
      ->check(CLI::IsMember({"analytic", "empirical"}));
  reduce->add_option("--c-samples", c_samples, "Samples for the empirical constant");
  reduce->add_option("--c-seed", c_seed, "Seed for the empirical constant");
  reduce->add_option("-o,--out", reduce_out, "Write the NIC instance here");

  // alpha / simulate
  std::string alpha_in, alpha_out;
  auto* alpha = app.add_subcommand("alpha", "Distance report of a circuit's unitary");
  alpha->add_option("input", alpha_in, "Circuit or NIC instance file")->required();
  alpha->add_option("-o,--out", alpha_out, "Write the report here");

  std::string sim_in, sim_out;
  auto* sim = app.add_subcommand("simulate", "Dense unitary of a circuit");
  sim->add_option("input", sim_in, "Circuit or NIC instance file")->required();
  sim->add_option("-o,--out", sim_out, "Write the matrix here");

  // decide
  std::string decide_in, decide_out;
  auto* decide = app.add_subcommand("decide", "Brute-force NIC decision (exit 0 Yes, 1 No, 4 promise violated)");
  decide->add_option("input", decide_in, "NIC instance file")->required();
  decide->add_option("-o,--out", decide_out, "Write the decision here");

  // lemmas
  std::size_t trials = 1000;
  std::uint64_t lemma_seed = 1;
  double tolerance = 1e-9;
  Eigen::Index dim_lo = 2, dim_hi = 6;
  std::vector<std::string> lemma_ids;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string lemmas_out;
  auto* lemmas = app.add_subcommand("lemmas", "Randomized lemma suites (exit 5 on any failure)");
  lemmas->add_option("--trials", trials, "Trials per lemma and dimension")->check(CLI::PositiveNumber);
  lemmas->add_option("--seed", lemma_seed, "Suite seed");
  lemmas->add_option("--tolerance", tolerance, "One-sided tolerance")->check(CLI::NonNegativeNumber);
  lemmas->add_option("--dim-lo", dim_lo, "Smallest dimension")->check(CLI::Range(2, 8));
  lemmas->add_option("--dim-hi", dim_hi, "Largest dimension")->check(CLI::Range(2, 8));
  lemmas->add_option("--lemma", lemma_ids, "Restrict to these checks (lemma1..lemma5, eq5)");
  lemmas->add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  lemmas->add_option("-o,--out", lemmas_out, "Write the report here");

  // perturb
  std::string perturb_in, perturb_out;
  double epsilon = 0.01;
  std::size_t seeds = 1;
  std::uint64_t perturb_seed = 1;
  double perturb_tol = 1e-9;
  auto* perturb = app.add_subcommand("perturb", "Perturb every gate and check the alpha-stability bound");
  perturb->add_option("input", perturb_in, "Circuit or NIC instance file")->required();
  perturb->add_option("--epsilon", epsilon, "Per-gate generator norm bound")->required();
  perturb->add_option("--seeds", seeds, "Number of perturbation seeds")->check(CLI::PositiveNumber);
  perturb->add_option("--seed", perturb_seed, "Base seed");
  perturb->add_option("--tolerance", perturb_tol, "Slack on the bound")->check(CLI::NonNegativeNumber);
  perturb->add_option("-o,--out", perturb_out, "Write the report here");

  // budget
  std::size_t gates = 0;
  double gap = 0.0, sk_exponent = 0.0;
  std::string budget_out;
  auto* budget = app.add_subcommand("budget", "Per-gate precision and depth factor for a gate count and gap");
  budget->add_option("--gates", gates, "Gate count")->required();
  budget->add_option("--gap", gap, "Promise gap b - a")->required();
  budget->add_option("--sk-exponent", sk_exponent, "Compilation exponent delta (no default)")->required();
  budget->add_option("-o,--out", budget_out, "Write the budget here");

  // gen
  std::size_t gen_n = 3, gen_d = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_kind = "random", gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded chain instance");
  gen->add_option("--n", gen_n, "Number of sites")->required();
  gen->add_option("--d", gen_d, "Local dimension")->required();
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--kind", gen_kind, "random, yes-biased or no-biased")
      ->check(CLI::IsMember({"random", "yes-biased", "no-biased"}));
  gen->add_option("-o,--out", gen_out, "Write the instance here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kSuccess : kInputError;
  }

  try {
    if (reduce->parsed()) {
      const auto inst = io::instance_from_json(io::read_file(reduce_in));
      const TrotterConstant tc = trotter_constant(c_mode == "empirical" ? TrotterMode::empirical : TrotterMode::analytic,
                                                  c_samples, c_seed);
      const auto trace = reduce_traced(inst, tc);
      const auto& m = trace.meta;
      const io::json summary = {{"l", m.l},
                                {"s", m.s},
                                {"t", m.t},
                                {"c", m.c},
                                {"gap", trace.instance.b_nic - trace.instance.a_nic},
                                {"a_nic", trace.instance.a_nic},
                                {"b_nic", trace.instance.b_nic}};
      if (reduce_out.empty()) {
        if (!quiet) out << io::dump(io::to_json(trace.instance)) << '\n';
        err << io::dump(summary, -1) << '\n';
      } else {
        io::write_file(reduce_out, io::to_json(trace.instance));
        if (!quiet) out << io::dump(summary) << '\n';
      }
    } else if (alpha->parsed()) {
      detail::emit({alpha_out, quiet}, io::to_json(report(simulate(detail::read_circuit(alpha_in)))), out);
    } else if (sim->parsed()) {
      detail::emit({sim_out, quiet}, io::to_json(simulate(detail::read_circuit(sim_in))), out);
    } else if (decide->parsed()) {
      const auto inst = io::nic_from_json(io::read_file(decide_in));
      const auto d = decide_nic_detailed(inst);
      detail::emit({decide_out, quiet},
                   {{"verdict", std::string(to_string(d.verdict))},
                    {"alpha", d.alpha},
                    {"a_nic", inst.a_nic},
                    {"b_nic", inst.b_nic}},
                   out);
      code = d.verdict == NicVerdict::yes ? kSuccess : d.verdict == NicVerdict::no ? kNo : kPromiseViolated;
    } else if (lemmas->parsed()) {
      if (dim_lo > dim_hi) throw InputError("--dim-lo must not exceed --dim-hi");
      std::vector<lemmalab::TrialConfig> configs;
      for (const auto& c : lemmalab::default_configs(trials, lemma_seed, tolerance, dim_lo, dim_hi)) {
        if (lemma_ids.empty() ||
            std::find(lemma_ids.begin(), lemma_ids.end(), lemmalab::to_string(c.lemma)) != lemma_ids.end()) {
          configs.push_back(c);
        }
      }
      for (const auto& id : lemma_ids) lemmalab::lemma_from_string(id);
      const auto reports = lemmalab::run_suite(configs, threads);
      detail::emit({lemmas_out, quiet}, lemmalab::to_json(reports), out);
      if (!lemmalab::all_passed(reports)) code = kPropertyFailure;
    } else if (perturb->parsed()) {
      const LayeredCircuit c = detail::read_circuit(perturb_in);
      io::json runs = io::json::array();
      bool all_hold = true;
      for (std::size_t k = 0; k < seeds; ++k) {
        const std::uint64_t s = perturb_seed + k;
        const auto p = perturb_circuit(c, epsilon, s);
        const auto rep = alpha_stability_check(c, p.circuit, perturb_tol);
        all_hold = all_hold && rep.holds;
        io::json j = io::to_json(rep);
        j["seed"] = s;
        runs.push_back(std::move(j));
      }
      detail::emit({perturb_out, quiet}, {{"epsilon", epsilon}, {"all_hold", all_hold}, {"runs", std::move(runs)}}, out);
      if (!all_hold) code = kPropertyFailure;
    } else if (budget->parsed()) {
      detail::emit({budget_out, quiet}, io::to_json(depth_budget(gates, gap, sk_exponent)), out);
    } else if (gen->parsed()) {
      const auto inst = generate_instance(gen_n, gen_d, instance_kind_from_string(gen_kind), gen_seed);
      detail::emit({gen_out, quiet}, io::to_json(inst), out);
    }
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return code;
}

}  // namespace nic::cli
