#pragma once

// Brute-force oracles shared by the unit suites and the acceptance harness.
// Everything here recomputes results from first principles (replay, exhaustive
// scans, least squares) so library code is never checked against itself.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qtsp/circuits.hpp"
#include "qtsp/encodings.hpp"
#include "qtsp/polynomial.hpp"
#include "qtsp/tsp.hpp"

namespace oracles {

// Applies the schedule gate by gate to basis state b, tracking ancilla
// parities through the CNOTs, and returns the accumulated phase coefficient.
// anc_clean reports whether every ancilla returned to |0>.
inline double replay(const qtsp::GateSchedule& s, std::uint64_t b, bool* anc_clean) {
  std::vector<int> anc(s.ancilla_count, 0);
  double phase = s.constant_coeff;
  for (const auto& round : s.rounds) {
    for (const qtsp::Gate& g : round) {
      if (g.kind == qtsp::GateKind::ancilla_cnot) {
        anc.at(g.qubits[1] - s.num_qubits) ^= int((b >> g.qubits[0]) & 1);
      } else if (g.kind == qtsp::GateKind::ancilla_rz) {
        phase += g.coeff * (1 - 2 * anc.at(g.qubits[0] - s.num_qubits));
      } else {
        double sgn = 1.0;
        for (auto q : g.support) sgn *= 1.0 - 2.0 * double((b >> q) & 1);
        phase += g.coeff * sgn;
      }
    }
  }
  *anc_clean = true;
  for (int a : anc)
    if (a) *anc_clean = false;
  return phase;
}

// Exhaustive energy statistics of an encoded problem (2^num_qubits states).
struct SpectrumScan {
  double min_energy = 1e300;
  double min_feasible = 1e300;
  double max_feasible = -1e300;
  double min_infeasible = 1e300;
  std::uint64_t feasible = 0;
  std::uint64_t cost_mismatches = 0;  // feasible states where energy != b * route_cost
};

inline SpectrumScan scan_spectrum(const qtsp::EncodedProblem& p) {
  SpectrumScan out;
  const std::uint64_t states = std::uint64_t{1} << p.num_qubits;
  for (std::uint64_t b = 0; b < states; ++b) {
    const double e = p.energy_oracle(b);
    out.min_energy = std::min(out.min_energy, e);
    if (const auto route = p.decode(b)) {
      ++out.feasible;
      if (e != p.instance.b * qtsp::route_cost(p.instance, *route)) ++out.cost_mismatches;
      out.min_feasible = std::min(out.min_feasible, e);
      out.max_feasible = std::max(out.max_feasible, e);
    } else {
      out.min_infeasible = std::min(out.min_infeasible, e);
    }
  }
  return out;
}

inline double exhaustive_max(const qtsp::EncodedProblem& p) {
  double m = -1e300;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.num_qubits); ++b)
    m = std::max(m, p.energy_oracle(b));
  return m;
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace oracles
