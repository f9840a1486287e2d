#pragma once

// JSON encodings for matrices, chain instances, circuits, NIC instances and
// reports, plus a writer that prints every real with 17 significant digits.
//
// Matrix:   {"dim": n, "entries": [[re, im], ...]}   (row-major, n^2 entries)
// Instance: {"n", "d", "a", "b", "terms": [{"site", "matrix"}], "metadata"?}
// Circuit:  {"n", "d", "layers": [[{"first_site", "span", "unitary"}]]}
// NIC:      circuit fields plus {"a_nic", "b_nic", "metadata"}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nic/distance.hpp"
#include "nic/gateset.hpp"
#include "nic/hamiltonian.hpp"
#include "nic/reduction.hpp"

namespace nic::io {

using json = nlohmann::json;

namespace detail {

inline void write_double(std::string& out, double v) {
  if (!std::isfinite(v)) throw InputError("JSON output: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  out += s;
}

inline void write(std::string& out, const json& j, int indent, int level) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric pairs such as [re, im] stay on one line.
      const bool inline_pair = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += inline_pair && indent >= 0 ? ", " : ",";
        first = false;
        if (!inline_pair) newline(level + 1);
        write(out, e, indent, level + 1);
      }
      if (!inline_pair) newline(level);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      write_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Serializes with %.17g reals; indent < 0 gives a single line.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::write(out, j, indent, 0);
  return out;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << dump(j) << '\n';
}

namespace detail {

inline std::size_t count_field(const json& j, const char* key) {
  const json& v = j.contains(key) ? j.at(key) : json();
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline double real_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw InputError(std::string("field \"") + key + "\" must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace detail

inline json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t dim = detail::count_field(j, "dim");
  if (dim < 1) throw InputError("matrix dim must be >= 1");
  if (dim > kMaxDim) throw ResourceLimit("matrix dim exceeds limit");
  const json& entries = j.contains("entries") ? j.at("entries") : json();
  if (!entries.is_array() || entries.size() != dim * dim) throw InputError("matrix needs dim^2 entries");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c, ++k) {
      const json& e = entries[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError("matrix entry must be [re, im]");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!m.allFinite()) throw InputError("matrix has non-finite entries");
  return m;
}

inline json to_json(const HamiltonianInstance& inst) {
  const auto& h = inst.hamiltonian;
  json terms = json::array();
  for (const auto& t : h.terms()) terms.push_back({{"site", t.site}, {"matrix", to_json(t.matrix.matrix())}});
  json j = {{"n", h.n()}, {"d", h.d()}, {"a", inst.a}, {"b", inst.b}, {"terms", std::move(terms)}};
  if (!inst.metadata.empty()) j["metadata"] = inst.metadata;
  return j;
}

inline HamiltonianInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object");
  const std::size_t n = detail::count_field(j, "n");
  const std::size_t d = detail::count_field(j, "d");
  const double a = detail::real_field(j, "a");
  const double b = detail::real_field(j, "b");
  const json& terms = j.contains("terms") ? j.at("terms") : json();
  if (!terms.is_array() || terms.empty()) throw InputError("instance needs a non-empty \"terms\" array");
  std::vector<LocalTerm> out;
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("matrix")) throw InputError("term needs a \"matrix\"");
    out.push_back({detail::count_field(t, "site"), HermitianMatrix(matrix_from_json(t.at("matrix")))});
  }
  json meta = j.contains("metadata") ? j.at("metadata") : json::object();
  return HamiltonianInstance(ChainHamiltonian(n, d, std::move(out)), a, b, std::move(meta));
}

inline json to_json(const LayeredCircuit& c) {
  json layers = json::array();
  for (const auto& layer : c.layers()) {
    json gates = json::array();
    for (const auto& g : layer) {
      gates.push_back({{"first_site", g.first_site}, {"span", g.span}, {"unitary", to_json(g.unitary)}});
    }
    layers.push_back(std::move(gates));
  }
  return {{"n", c.n()}, {"d", c.d()}, {"layers", std::move(layers)}};
}

inline LayeredCircuit circuit_from_json(const json& j) {
  if (!j.is_object()) throw InputError("circuit must be a JSON object");
  const std::size_t n = detail::count_field(j, "n");
  const std::size_t d = detail::count_field(j, "d");
  const json& layers = j.contains("layers") ? j.at("layers") : json();
  if (!layers.is_array()) throw InputError("circuit needs a \"layers\" array");
  std::vector<std::vector<Gate>> out;
  for (const auto& layer : layers) {
    if (!layer.is_array()) throw InputError("each layer must be an array of gates");
    std::vector<Gate> gates;
    for (const auto& g : layer) {
      if (!g.is_object() || !g.contains("unitary")) throw InputError("gate needs a \"unitary\"");
      gates.push_back({detail::count_field(g, "first_site"), detail::count_field(g, "span"),
                       matrix_from_json(g.at("unitary"))});
    }
    out.push_back(std::move(gates));
  }
  return LayeredCircuit(n, d, std::move(out));
}

inline json to_json(const NicInstance& inst) {
  json j = to_json(inst.circuit);
  j["a_nic"] = inst.a_nic;
  j["b_nic"] = inst.b_nic;
  j["metadata"] = inst.metadata;
  return j;
}

inline NicInstance nic_from_json(const json& j) {
  LayeredCircuit c = circuit_from_json(j);
  json meta = j.contains("metadata") ? j.at("metadata") : json::object();
  return NicInstance(std::move(c), detail::real_field(j, "a_nic"), detail::real_field(j, "b_nic"), std::move(meta));
}

inline json to_json(const DistanceReport& r) {
  return {{"alpha_max", r.alpha_max}, {"alpha_min", r.alpha_min},           {"arc", r.arc},
          {"alpha", r.alpha},         {"nu", r.nu},                         {"diamond", r.diamond},
          {"min_phase_dist", r.min_phase_dist}, {"argmin_phi", r.argmin_phi}};
}

inline json to_json(const PerturbationReport& r) {
  return {{"per_gate_error", r.per_gate_error}, {"bound", r.bound}, {"observed", r.observed}, {"holds", r.holds}};
}

inline json to_json(const DepthBudget& b) {
  return {{"gate_count", b.gate_count},
          {"target_gap", b.target_gap},
          {"per_gate_epsilon", b.per_gate_epsilon},
          {"sk_exponent", b.sk_exponent},
          {"depth_factor", b.depth_factor}};
}

}  // namespace nic::io
