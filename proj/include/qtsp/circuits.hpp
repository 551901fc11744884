#pragma once

#include <cstdint>
#include <vector>

#include "qtsp/encodings.hpp"
#include "qtsp/polynomial.hpp"

namespace qtsp {

enum class GateKind {
  multi_z,       // diagonal phase exp(-i theta c Z_support), left unexpanded
  cnot_ladder,   // same phase, decomposed as 2(w-1) CNOTs + 1 rotation
  ancilla_cnot,  // CNOT from a data qubit onto an ancilla (parity update)
  ancilla_rz,    // Z rotation on an ancilla currently holding Z_support parity
};

enum class ScheduleStrategy { per_term, gray_ancilla };
enum class DepthUnit { phase_gate, cnot_rotation };

/// One scheduled gate. qubits lists the physical wires touched (data and
/// ancilla); support is the logical Z-term the gate realizes, empty for pure
/// parity updates.
struct Gate {
  std::vector<std::uint32_t> qubits;
  VarSet support;
  double coeff = 0.0;
  GateKind kind = GateKind::multi_z;
};

/// Depth-counted compilation of exp(-i theta H) for a diagonal H. Gates within
/// a round touch pairwise-disjoint wires; rounds run in sequence. The identity
/// component of H is kept in constant_coeff (a global phase, never scheduled).
struct GateSchedule {
  std::vector<std::vector<Gate>> rounds;
  std::uint32_t num_qubits = 0;
  std::uint32_t ancilla_count = 0;
  double constant_coeff = 0.0;
};

/// All-pairs tournament rounds over n items (circle method): n-1 rounds for
/// even n, n rounds for odd n, each round a maximal set of disjoint pairs.
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> round_robin(std::uint32_t n);

/// Nonzero subsets of {0..k-1} as bitmasks in reflected Gray order: every
/// subset once, consecutive masks differing in exactly one bit.
std::vector<std::uint64_t> gray_sequence(std::uint32_t k);

/// Compiles to_ising(problem.hamiltonian) into rounds.
///
/// per_term: every Z-term becomes one cnot_ladder gate; one-hot problems get
/// the staged layout (one 1-local round, slot-internal pair rounds, then
/// shift-class rounds for slot-to-slot terms), others a generic slot-pair
/// round-robin. gray_ancilla (slot-coded problems only): slot pairs are
/// round-robin scheduled and each pair walks its term masks on an ancilla,
/// toggling one control per step where the masks allow.
///
/// Throws std::invalid_argument for problems without a polynomial Hamiltonian
/// and for strategy/encoding combinations listed above as unsupported.
GateSchedule schedule(const EncodedProblem& problem, ScheduleStrategy strategy);

/// phase_gate: each round holding at least one rotation costs 1; rounds made
/// of parity toggles alone are free here and priced by cnot_rotation instead.
/// cnot_rotation: a round costs its most expensive gate, where a w-local
/// ladder costs 2(w-1)+1 and ancilla gates cost 1.
std::uint64_t depth(const GateSchedule& s, DepthUnit unit);

/// depth x (data qubits + ancillas).
std::uint64_t volume(const GateSchedule& s, DepthUnit unit);

}  // namespace qtsp
