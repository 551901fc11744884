#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qtsp/encodings.hpp"

namespace qtsp {

/// Full statevector over num_qubits wires; qubit 0 is the least significant
/// bit of the basis index.
struct StateVector {
  std::uint32_t num_qubits = 0;
  std::vector<std::complex<double>> amplitudes;
};

StateVector uniform_state(std::uint32_t num_qubits);

/// Dense table of a diagonal Hamiltonian: one energy per basis state, plus a
/// flag for the states that decode to a tour.
struct DiagonalHamiltonian {
  std::uint32_t num_qubits = 0;
  std::vector<double> energies;
  std::vector<std::uint8_t> feasible;
};

/// Tabulates problem.energy_oracle over all basis states. Refuses more than
/// 26 qubits; the table alone would pass a gigabyte beyond that.
DiagonalHamiltonian build_diagonal(const EncodedProblem& problem);

/// Alternating-operator angles. Objective angles live on [0, objective_period)
/// and mixer angles on [0, pi); wrap_angles reduces into those windows.
struct QaoaParams {
  std::vector<double> theta_obj;
  std::vector<double> theta_mix;
  double objective_period = 2.0 * std::numbers::pi;

  std::uint32_t layers() const { return static_cast<std::uint32_t>(theta_obj.size()); }
};

QaoaParams wrap_angles(QaoaParams p);

/// amp_b *= exp(-i theta E_b)
void apply_objective(StateVector& s, const DiagonalHamiltonian& h, double theta);

/// exp(-i theta sum_q X_q): each qubit pair (a0, a1) maps to
/// (cos(theta) a0 - i sin(theta) a1, -i sin(theta) a0 + cos(theta) a1).
void apply_mixer(StateVector& s, double theta);

/// Uniform start, then objective and mixer phases per layer, objective first.
StateVector qaoa_state(const DiagonalHamiltonian& h, const QaoaParams& p);

double expectation(const StateVector& s, const DiagonalHamiltonian& h);
double feasible_probability(const StateVector& s, const DiagonalHamiltonian& h);

/// Exact derivative of expectation(qaoa_state(h, p), h) for all angles,
/// ordered [d/d theta_obj_1 .. theta_obj_r, d/d theta_mix_1 .. theta_mix_r].
/// Single reverse sweep, two statevectors of memory.
std::vector<double> gradient(const DiagonalHamiltonian& h, const QaoaParams& p);

}  // namespace qtsp
