#pragma once

#include <cstdint>
#include <optional>

#include "qtsp/encodings.hpp"

namespace qtsp {

enum class ValueFlag { exact, upper_bound, exponential };

struct ResourceValue {
  double value = 0.0;
  ValueFlag flag = ValueFlag::exact;
};

/// Register width by closed form. For the bunched encoding this counts data
/// and parity-work qubits together; ancilla_count gives the split.
std::uint64_t qubit_count(EncodingKind kind, std::uint32_t n,
                          std::optional<std::uint32_t> k = std::nullopt);

/// Parity registers the pair-tournament schedule adds on top of the data
/// register: one per concurrent slot pair (and per bunch for the bunched
/// encoding), none for one-hot or rank encodings.
std::uint64_t ancilla_count(EncodingKind kind, std::uint32_t n,
                            std::optional<std::uint32_t> k = std::nullopt);

/// Exponent bookkeeping for the bunched encoding: code bits K against
/// alpha = K / log2(N), with the constant c = 2^K / N^alpha in [1/2, 1].
struct BunchForm {
  std::uint32_t k = 1;
  double alpha = 0.0;
  double c = 1.0;
};
BunchForm bunch_form_from_k(std::uint32_t n, std::uint32_t k);
BunchForm bunch_form_from_alpha(std::uint32_t n, double alpha);

ResourceValue term_count_formula(EncodingKind kind, std::uint32_t n,
                                 std::optional<std::uint32_t> k = std::nullopt);

/// Table depth: one-hot in cnot-rotation units (12N+1 on the cycle), coded
/// encodings in phase-gate units (2N^3-1 binary, 2 c^2 N^{1+2 alpha} bunched).
ResourceValue depth_formula(EncodingKind kind, std::uint32_t n,
                            std::optional<std::uint32_t> k = std::nullopt);

/// depth_formula x qubit_count (parity registers included).
ResourceValue volume_formula(EncodingKind kind, std::uint32_t n,
                             std::optional<std::uint32_t> k = std::nullopt);

/// Worst-case objective value, assembled addend by addend from the penalty
/// weights; dominates every basis state of the actual encoding.
double energy_upper_bound(const EncodedProblem& problem);

/// Same bound from shape parameters only, for table rows too large to encode.
double energy_bound_formula(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k,
                            double a1, double a2, double b, double max_w,
                            std::optional<double> slack_weight = std::nullopt,
                            std::optional<double> e_pen = std::nullopt);

/// Tail conventions for hoeffding_samples: the two-sided bound reads
/// 2 exp(-2 M t^2 / D) with D the energy range (range) or its square
/// (range_squared, the classical inequality and the default).
enum class HoeffdingConvention { range, range_squared };

/// Smallest M whose two-sided tail bound at accuracy t drops below delta.
/// Solved in closed form, then nudged so that exact-boundary inputs do not
/// round up through float error.
std::uint64_t hoeffding_samples(double range_width, double t, double delta,
                                HoeffdingConvention convention = HoeffdingConvention::range_squared);

struct MeasurementSettings {
  double t = 0.1;
  double delta = 0.05;
  double a1 = 2.01;
  double a2 = 2.01;
  double b = 1.0;
  double max_w = 1.0;
};

struct ResourceReport {
  EncodingKind kind = EncodingKind::qubo;
  std::uint32_t n = 0;
  std::optional<std::uint32_t> k;
  std::uint64_t qubits = 0;
  std::uint64_t ancillas = 0;
  ResourceValue terms;
  std::optional<ResourceValue> depth_phase;
  std::optional<ResourceValue> depth_cnot;
  ResourceValue volume;
  double energy_lo = 0.0;
  double energy_hi = 0.0;
  std::uint64_t samples_range = 0;
  std::uint64_t samples_range_squared = 0;
  std::optional<BunchForm> bunch;
};

ResourceReport resource_report(EncodingKind kind, std::uint32_t n,
                               std::optional<std::uint32_t> k = std::nullopt,
                               const MeasurementSettings& ms = {});

}  // namespace qtsp
