#include "qtsp/json_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "json.hpp"

namespace qtsp {

namespace {

using Json = nlohmann::ordered_json;

const char* flag_name(ValueFlag f) {
  switch (f) {
    case ValueFlag::exact: return "exact";
    case ValueFlag::upper_bound: return "bound";
    case ValueFlag::exponential: return "exponential";
  }
  return "?";
}

Json value_json(const ResourceValue& v) {
  if (v.flag == ValueFlag::exponential) return Json{{"flag", "exponential"}};
  return Json{{"value", v.value}, {"flag", flag_name(v.flag)}};
}

std::string value_cell(const ResourceValue& v) {
  if (v.flag == ValueFlag::exponential) return "exponential";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.10g", v.flag == ValueFlag::upper_bound ? "<=" : "", v.value);
  return buf;
}

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::multi_z: return "multi_z";
    case GateKind::cnot_ladder: return "cnot_ladder";
    case GateKind::ancilla_cnot: return "ancilla_cnot";
    case GateKind::ancilla_rz: return "ancilla_rz";
  }
  return "?";
}

}  // namespace

std::string instance_to_json(const TspInstance& inst) {
  Json j;
  j["n"] = inst.n;
  Json rows = Json::array();
  for (std::uint32_t i = 0; i < inst.n; ++i) {
    Json row = Json::array();
    for (std::uint32_t jj = 0; jj < inst.n; ++jj) row.push_back(inst.weight(i, jj));
    rows.push_back(std::move(row));
  }
  j["w"] = std::move(rows);
  j["a1"] = inst.a1;
  j["a2"] = inst.a2;
  j["b"] = inst.b;
  return j.dump(2);
}

TspInstance instance_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  TspInstance inst;
  inst.n = j.at("n").get<std::uint32_t>();
  const auto& rows = j.at("w");
  if (!rows.is_array() || rows.size() != inst.n)
    throw std::invalid_argument("instance json: w must be an n x n matrix");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != inst.n)
      throw std::invalid_argument("instance json: w must be an n x n matrix");
    for (const auto& v : row) inst.w.push_back(v.get<double>());
  }
  if (j.contains("a1")) inst.a1 = j.at("a1").get<double>();
  if (j.contains("a2")) inst.a2 = j.at("a2").get<double>();
  if (j.contains("b")) inst.b = j.at("b").get<double>();
  inst.validate();
  return inst;
}

std::string problem_summary_json(const EncodedProblem& problem) {
  Json j;
  j["kind"] = to_string(problem.kind);
  j["num_qubits"] = problem.num_qubits;
  if (problem.hamiltonian) {
    j["num_terms"] = term_count(*problem.hamiltonian);
    j["order"] = order(*problem.hamiltonian);
  } else {
    j["num_terms"] = nullptr;
    j["order"] = nullptr;
  }
  Json lay;
  if (const auto* ql = std::get_if<QuboLayout>(&problem.layout)) {
    lay["slots"] = ql->n;
    lay["fix_first_city"] = ql->fix_first_city;
  } else if (const auto* hl = std::get_if<HoboLayout>(&problem.layout)) {
    lay["slots"] = hl->n;
    lay["bits_per_slot"] = hl->k;
  } else if (const auto* ml = std::get_if<MixedLayout>(&problem.layout)) {
    lay["slots"] = ml->n;
    lay["bits_per_bunch"] = ml->k;
    lay["bunches"] = ml->l;
    lay["slack_bits"] = ml->s;
  } else if (const auto* el = std::get_if<EnumLayout>(&problem.layout)) {
    lay["cities"] = el->n;
    lay["qubits"] = el->num_qubits;
  }
  j["layout"] = std::move(lay);
  return j.dump(2);
}

std::string polynomial_to_json(const BinaryPolynomial& p) {
  Json j;
  j["num_vars"] = p.num_vars;
  Json terms = Json::array();
  for (const auto& [vars, coeff] : p.terms) {
    Json t;
    t["vars"] = vars;
    t["coeff"] = coeff;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j.dump(2);
}

std::string schedule_to_json(const GateSchedule& s, bool include_gates) {
  Json j;
  j["num_qubits"] = s.num_qubits;
  j["ancilla_count"] = s.ancilla_count;
  j["constant_coeff"] = s.constant_coeff;
  j["rounds"] = s.rounds.size();
  j["depth_phase"] = depth(s, DepthUnit::phase_gate);
  j["depth_cnot"] = depth(s, DepthUnit::cnot_rotation);
  j["volume_phase"] = volume(s, DepthUnit::phase_gate);
  j["volume_cnot"] = volume(s, DepthUnit::cnot_rotation);
  std::size_t gates = 0;
  for (const auto& r : s.rounds) gates += r.size();
  j["num_gates"] = gates;
  if (include_gates) {
    Json rounds = Json::array();
    for (const auto& r : s.rounds) {
      Json round = Json::array();
      for (const Gate& g : r) {
        Json gate;
        gate["qubits"] = g.qubits;
        gate["kind"] = kind_name(g.kind);
        if (g.kind != GateKind::ancilla_cnot) {
          gate["support"] = g.support;
          gate["coeff"] = g.coeff;
        }
        round.push_back(std::move(gate));
      }
      rounds.push_back(std::move(round));
    }
    j["gates"] = std::move(rounds);
  }
  return j.dump(2);
}

std::string reports_to_json(const std::vector<ResourceReport>& rows) {
  Json arr = Json::array();
  for (const ResourceReport& r : rows) {
    Json j;
    j["kind"] = to_string(r.kind);
    j["n"] = r.n;
    if (r.k) j["k"] = *r.k;
    j["qubits"] = r.qubits;
    j["ancillas"] = r.ancillas;
    j["terms"] = value_json(r.terms);
    if (r.depth_phase) j["depth_phase"] = value_json(*r.depth_phase);
    if (r.depth_cnot) j["depth_cnot"] = value_json(*r.depth_cnot);
    j["volume"] = value_json(r.volume);
    j["energy_range"] = Json::array({r.energy_lo, r.energy_hi});
    j["samples"] = Json{{"range", r.samples_range}, {"range_squared", r.samples_range_squared}};
    if (r.bunch) {
      j["alpha"] = r.bunch->alpha;
      j["c_alpha"] = r.bunch->c;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string reports_to_table(const std::vector<ResourceReport>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %4s %3s %8s %8s %14s %14s %14s %12s %12s\n", "kind",
                "n", "k", "qubits", "ancilla", "terms", "depth", "volume", "M(range)", "M(range^2)");
  out << line;
  for (const ResourceReport& r : rows) {
    const ResourceValue d = r.depth_cnot ? *r.depth_cnot : *r.depth_phase;
    std::snprintf(line, sizeof line, "%-6s %4u %3s %8llu %8llu %14s %14s %14s %12llu %12llu\n",
                  to_string(r.kind).c_str(), r.n, r.k ? std::to_string(*r.k).c_str() : "-",
                  static_cast<unsigned long long>(r.qubits),
                  static_cast<unsigned long long>(r.ancillas), value_cell(r.terms).c_str(),
                  value_cell(d).c_str(), value_cell(r.volume).c_str(),
                  static_cast<unsigned long long>(r.samples_range),
                  static_cast<unsigned long long>(r.samples_range_squared));
    out << line;
  }
  return out.str();
}

void apply_config_json(const std::string& text, OptimizerConfig& cfg) {
  const Json j = Json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config json: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "grad_tol") cfg.grad_tol = value.get<double>();
    else if (key == "max_iters") cfg.max_iters = value.get<std::uint32_t>();
    else if (key == "objective_period") cfg.objective_period = value.get<double>();
    else if (key == "restarts") cfg.restarts = value.get<std::uint32_t>();
    else if (key == "retry_factor") cfg.retry_factor = value.get<std::uint32_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "workers") cfg.workers = value.get<std::uint32_t>();
    else throw std::invalid_argument("config json: unknown key '" + key + "'");
  }
}

}  // namespace qtsp
