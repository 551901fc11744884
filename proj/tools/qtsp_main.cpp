#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qtsp/circuits.hpp"
#include "qtsp/encodings.hpp"
#include "qtsp/json_io.hpp"
#include "qtsp/optimizer.hpp"
#include "qtsp/resources.hpp"
#include "qtsp/simulator.hpp"
#include "qtsp/tsp.hpp"

namespace {

using qtsp::EncodingKind;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct InstanceOptions {
  std::string kind = "qubo";
  std::uint32_t n = 3;
  std::optional<std::uint32_t> k;
  std::string weights = "zero";  // zero | random | file
  std::string weights_file;
  std::uint64_t seed = 0;
  std::optional<double> a1, a2, b;
  bool fix_first_city = false;
  std::optional<double> slack_weight;
  std::optional<double> e_pen;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& o, bool with_kind = true) {
  if (with_kind)
    cmd->add_option("--kind", o.kind, "encoding: qubo | hobo | mixed | enum")
        ->check(CLI::IsMember({"qubo", "hobo", "mixed", "enum"}));
  cmd->add_option("--n", o.n, "number of cities")->check(CLI::Range(2u, 64u));
  cmd->add_option("--k", o.k, "bits per bunch (mixed encoding)");
  cmd->add_option("--w", o.weights, "weight matrix: zero | random | file")
      ->check(CLI::IsMember({"zero", "random", "file"}));
  cmd->add_option("--w-file", o.weights_file, "instance JSON path for --w file");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--a1", o.a1, "slot-constraint penalty weight");
  cmd->add_option("--a2", o.a2, "city-constraint penalty weight");
  cmd->add_option("--b", o.b, "tour-cost weight");
  cmd->add_flag("--fix-first-city", o.fix_first_city, "pin city 0 to slot 0 (qubo)");
  cmd->add_option("--slack-weight", o.slack_weight, "slack penalty weight (mixed)");
  cmd->add_option("--e-pen", o.e_pen, "out-of-range penalty (enum)");
}

qtsp::TspInstance build_instance(const InstanceOptions& o, std::uint64_t seed) {
  qtsp::TspInstance inst;
  if (o.weights == "zero") {
    inst = qtsp::zero_instance(o.n);
  } else if (o.weights == "random") {
    inst = qtsp::random_instance(o.n, seed);
  } else {
    std::ifstream in(o.weights_file);
    if (!in) throw std::runtime_error("cannot open " + o.weights_file);
    std::stringstream buf;
    buf << in.rdbuf();
    inst = qtsp::instance_from_json(buf.str());
  }
  if (o.a1) inst.a1 = *o.a1;
  if (o.a2) inst.a2 = *o.a2;
  if (o.b) inst.b = *o.b;
  inst.validate();
  return inst;
}

EncodingKind parse_kind(const std::string& name) {
  const auto kind = qtsp::encoding_kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown encoding kind: " + name);
  return *kind;
}

qtsp::EncodedProblem build_problem(const InstanceOptions& o, const qtsp::TspInstance& inst) {
  switch (parse_kind(o.kind)) {
    case EncodingKind::qubo:
      return qtsp::encode_qubo(inst, o.fix_first_city);
    case EncodingKind::hobo:
      return qtsp::encode_hobo(inst);
    case EncodingKind::mixed:
      if (!o.k) throw std::invalid_argument("mixed encoding needs --k");
      return qtsp::encode_mixed(inst, *o.k, o.slack_weight);
    case EncodingKind::enumeration:
      return qtsp::encode_enum(inst, o.e_pen);
  }
  throw std::invalid_argument("unknown encoding kind");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SweepOptions {
  InstanceOptions inst;
  std::uint32_t r_max = 15;
  std::uint32_t instances = 1;
  std::uint32_t restarts = 0;  // 0: 100 for zero weights, 40 for random
  std::uint32_t samples = 0;   // alias for --restarts
  std::string out;
  std::string agg_out;
  qtsp::OptimizerConfig cfg;
  std::string config_file;
};

int run_sweep(const SweepOptions& so) {
  qtsp::OptimizerConfig cfg = so.cfg;
  if (!so.config_file.empty()) {
    std::ifstream in(so.config_file);
    if (!in) throw std::runtime_error("cannot open " + so.config_file);
    std::stringstream buf;
    buf << in.rdbuf();
    qtsp::apply_config_json(buf.str(), cfg);
  }
  cfg.restarts = so.restarts ? so.restarts
                             : (so.samples ? so.samples
                                           : (so.inst.weights == "random" ? 40u : 100u));

  std::ostringstream csv;
  csv << "encoding,n,w_id,r,best_feasible_prob,best_energy,n_accepted\n";
  // per depth: accepted per-instance best probabilities, for the aggregate
  std::vector<std::vector<double>> probs_by_depth(so.r_max + 1);

  const std::uint32_t count = so.inst.weights == "random" ? so.instances : 1;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint64_t inst_seed = mix_seed(so.inst.seed, i);
    const qtsp::TspInstance inst = build_instance(so.inst, inst_seed);
    const qtsp::EncodedProblem problem = build_problem(so.inst, inst);
    qtsp::OptimizerConfig run_cfg = cfg;
    run_cfg.seed = inst_seed;
    const auto levels = qtsp::run_experiment(problem, so.r_max, run_cfg);
    const std::uint32_t w_id = so.inst.weights == "random" ? i + 1 : 0;
    for (const auto& lv : levels) {
      csv << so.inst.kind << ',' << so.inst.n << ',' << w_id << ',' << lv.layers << ','
          << fmt_double(lv.best_feasible_prob) << ',' << fmt_double(lv.best_energy) << ','
          << lv.accepted << '\n';
      if (lv.accepted > 0) probs_by_depth[lv.layers].push_back(lv.best_feasible_prob);
    }
  }
  write_output(so.out, csv.str());

  if (count > 1) {
    std::ostringstream agg;
    agg << "encoding,n,r,mean_best_prob,min_best_prob,max_best_prob,instances_with_data\n";
    for (std::uint32_t r = 1; r <= so.r_max; ++r) {
      const auto& v = probs_by_depth[r];
      double mean = std::nan(""), lo = std::nan(""), hi = std::nan("");
      if (!v.empty()) {
        mean = 0.0;
        lo = hi = v[0];
        for (double p : v) {
          mean += p;
          lo = std::min(lo, p);
          hi = std::max(hi, p);
        }
        mean /= double(v.size());
      }
      agg << so.inst.kind << ',' << so.inst.n << ',' << r << ',' << fmt_double(mean) << ','
          << fmt_double(lo) << ',' << fmt_double(hi) << ',' << v.size() << '\n';
    }
    std::string agg_path = so.agg_out;
    if (agg_path.empty() && !so.out.empty()) agg_path = so.out + ".agg.csv";
    if (agg_path.empty())
      std::cout << '\n' << agg.str();
    else
      write_output(agg_path, agg.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSP-to-qubit encoding workbench: compile, schedule, estimate, simulate"};
  app.require_subcommand(1);

  // encode
  InstanceOptions enc_opts;
  bool enc_poly = false;
  bool enc_inst = false;
  std::string enc_out;
  auto* enc = app.add_subcommand("encode", "encode an instance and print a summary");
  add_instance_options(enc, enc_opts);
  enc->add_flag("--polynomial", enc_poly, "include the full polynomial");
  enc->add_flag("--with-instance", enc_inst, "include the weight matrix");
  enc->add_option("--out", enc_out, "output path (default stdout)");

  // schedule
  InstanceOptions sch_opts;
  std::string sch_strategy = "per-term";
  bool sch_gates = false;
  std::string sch_out;
  auto* sch = app.add_subcommand("schedule", "compile the phase polynomial into rounds");
  add_instance_options(sch, sch_opts);
  sch->add_option("--strategy", sch_strategy, "per-term | gray-ancilla")
      ->check(CLI::IsMember({"per-term", "gray-ancilla"}));
  sch->add_flag("--gates", sch_gates, "include every gate");
  sch->add_option("--out", sch_out, "output path (default stdout)");

  // resources
  std::vector<std::uint32_t> res_n;
  std::vector<std::string> res_kinds;
  std::optional<std::uint32_t> res_k;
  std::optional<double> res_alpha;
  bool res_json = false;
  std::string res_out;
  qtsp::MeasurementSettings ms;
  auto* res = app.add_subcommand("resources", "closed-form resource table");
  res->add_option("--n", res_n, "city counts (repeatable)")->required()->check(CLI::Range(2u, 4096u));
  res->add_option("--kind", res_kinds, "encodings to include (default all)")
      ->check(CLI::IsMember({"qubo", "hobo", "mixed", "enum"}));
  res->add_option("--k", res_k, "bits per bunch for mixed rows (default 1)");
  res->add_option("--alpha", res_alpha, "derive mixed k from alpha instead of --k");
  res->add_option("--t", ms.t, "measurement accuracy");
  res->add_option("--delta", ms.delta, "measurement confidence");
  res->add_option("--max-w", ms.max_w, "weight scale for the energy range");
  res->add_option("--a1", ms.a1, "slot-constraint weight");
  res->add_option("--a2", ms.a2, "city-constraint weight");
  res->add_option("--b", ms.b, "tour-cost weight");
  res->add_flag("--json", res_json, "JSON instead of a text table");
  res->add_option("--out", res_out, "output path (default stdout)");

  // simulate
  InstanceOptions sim_opts;
  std::uint32_t sim_r = 1;
  std::vector<double> sim_obj, sim_mix;
  qtsp::OptimizerConfig sim_cfg;
  std::string sim_config_file, sim_out;
  auto* sim = app.add_subcommand("simulate", "exact statevector run at one depth");
  add_instance_options(sim, sim_opts);
  sim->add_option("--r", sim_r, "number of layers")->check(CLI::Range(0u, 64u));
  sim->add_option("--theta-obj", sim_obj, "objective angles (else optimized)");
  sim->add_option("--theta-mix", sim_mix, "mixer angles (else optimized)");
  sim->add_option("--restarts", sim_cfg.restarts, "optimizer starts");
  sim->add_option("--max-iters", sim_cfg.max_iters, "optimizer iteration cap");
  sim->add_option("--grad-tol", sim_cfg.grad_tol, "convergence threshold");
  sim->add_option("--opt-seed", sim_cfg.seed, "optimizer seed");
  sim->add_option("--workers", sim_cfg.workers, "parallel starts (0: QTSP_WORKERS)");
  sim->add_option("--config", sim_config_file, "optimizer config JSON");
  sim->add_option("--out", sim_out, "output path (default stdout)");

  // sweep
  SweepOptions so;
  auto* swp = app.add_subcommand("sweep", "depth sweep, CSV per instance and depth");
  add_instance_options(swp, so.inst);
  swp->add_option("--rmax", so.r_max, "deepest circuit")->check(CLI::Range(1u, 64u));
  swp->add_option("--instances", so.instances, "random instances to draw")
      ->check(CLI::Range(1u, 100000u));
  swp->add_option("--restarts", so.restarts, "starts per depth (0: 100 zero / 40 random)");
  swp->add_option("--samples", so.samples, "alias for --restarts");
  swp->add_option("--grad-tol", so.cfg.grad_tol, "convergence threshold");
  swp->add_option("--max-iters", so.cfg.max_iters, "optimizer iteration cap");
  swp->add_option("--workers", so.cfg.workers, "parallel starts (0: QTSP_WORKERS)");
  swp->add_option("--config", so.config_file, "optimizer config JSON");
  swp->add_option("--out", so.out, "CSV path (default stdout)");
  swp->add_option("--agg-out", so.agg_out, "aggregate CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      const auto inst = build_instance(enc_opts, enc_opts.seed);
      const auto problem = build_problem(enc_opts, inst);
      nlohmann::ordered_json j = nlohmann::ordered_json::parse(qtsp::problem_summary_json(problem));
      if (enc_inst) j["instance"] = nlohmann::ordered_json::parse(qtsp::instance_to_json(inst));
      if (enc_poly) {
        if (!problem.hamiltonian)
          throw std::invalid_argument("the rank encoding has no polynomial to print");
        j["polynomial"] =
            nlohmann::ordered_json::parse(qtsp::polynomial_to_json(*problem.hamiltonian));
      }
      write_output(enc_out, j.dump(2));
    } else if (*sch) {
      const auto inst = build_instance(sch_opts, sch_opts.seed);
      const auto problem = build_problem(sch_opts, inst);
      const auto strategy = sch_strategy == "per-term" ? qtsp::ScheduleStrategy::per_term
                                                       : qtsp::ScheduleStrategy::gray_ancilla;
      write_output(sch_out, qtsp::schedule_to_json(qtsp::schedule(problem, strategy), sch_gates));
    } else if (*res) {
      if (res_kinds.empty()) res_kinds = {"qubo", "hobo", "mixed", "enum"};
      std::vector<qtsp::ResourceReport> rows;
      for (const std::uint32_t n : res_n)
        for (const std::string& ks : res_kinds) {
          const EncodingKind kind = parse_kind(ks);
          std::optional<std::uint32_t> k;
          if (kind == EncodingKind::mixed) {
            if (res_alpha)
              k = qtsp::bunch_form_from_alpha(n, *res_alpha).k;
            else
              k = res_k.value_or(1);
          }
          rows.push_back(qtsp::resource_report(kind, n, k, ms));
        }
      write_output(res_out, res_json ? qtsp::reports_to_json(rows) : qtsp::reports_to_table(rows));
    } else if (*sim) {
      const auto inst = build_instance(sim_opts, sim_opts.seed);
      const auto problem = build_problem(sim_opts, inst);
      const auto h = qtsp::build_diagonal(problem);
      if (!sim_config_file.empty()) {
        std::ifstream in(sim_config_file);
        if (!in) throw std::runtime_error("cannot open " + sim_config_file);
        std::stringstream buf;
        buf << in.rdbuf();
        qtsp::apply_config_json(buf.str(), sim_cfg);
      }
      const double period = sim_cfg.objective_period > 0.0
                                ? sim_cfg.objective_period
                                : qtsp::default_objective_period(problem.kind);
      nlohmann::ordered_json j;
      j["kind"] = sim_opts.kind;
      j["n"] = sim_opts.n;
      j["num_qubits"] = problem.num_qubits;
      j["r"] = sim_r;
      if (!sim_obj.empty() || !sim_mix.empty()) {
        if (sim_obj.size() != sim_mix.size())
          throw std::invalid_argument("need matching --theta-obj / --theta-mix counts");
        qtsp::QaoaParams p;
        p.theta_obj = sim_obj;
        p.theta_mix = sim_mix;
        p.objective_period = period;
        const auto s = qtsp::qaoa_state(h, p);
        j["energy"] = qtsp::expectation(s, h);
        j["feasible_probability"] = qtsp::feasible_probability(s, h);
      } else {
        qtsp::OptimizerConfig cfg = sim_cfg;
        cfg.objective_period = period;
        const auto levels = qtsp::run_experiment(problem, sim_r, cfg);
        const auto& lv = levels.at(sim_r - 1);
        j["energy"] = lv.best_energy;
        j["feasible_probability"] = lv.best_feasible_prob;
        j["accepted_runs"] = lv.accepted;
      }
      write_output(sim_out, j.dump(2));
    } else if (*swp) {
      return run_sweep(so);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
