#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "qtsp/polynomial.hpp"
#include "qtsp/tsp.hpp"

namespace qtsp {

enum class EncodingKind { qubo, hobo, mixed, enumeration };

std::string to_string(EncodingKind kind);
std::optional<EncodingKind> encoding_kind_from_string(const std::string& name);

/// One-hot layout: qubit (t, i) set means city i is visited at time t.
/// With fix_first_city, city 0 is pinned to slot 0 and both indices start at 1.
struct QuboLayout {
  std::uint32_t n = 0;
  bool fix_first_city = false;

  std::uint32_t num_qubits() const {
    const std::uint32_t m = fix_first_city ? n - 1 : n;
    return m * m;
  }
  std::uint32_t qubit(std::uint32_t t, std::uint32_t i) const {
    return fix_first_city ? (t - 1) * (n - 1) + (i - 1) : t * n + i;
  }
};

/// Binary layout: slot t holds a K-bit city code, bit k is the 2^k place.
struct HoboLayout {
  std::uint32_t n = 0;
  std::uint32_t k = 0;

  std::uint32_t num_qubits() const { return n * k; }
  std::uint32_t qubit(std::uint32_t t, std::uint32_t bit) const { return t * k + bit; }
};

/// Bunched layout: slot t holds l bunches of k bits plus s slack bits.
/// Bunch l with nonzero code v encodes city l*(2^k - 1) + v - 1; code 0 in a
/// bunch means "not this bunch".
struct MixedLayout {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t l = 0;
  std::uint32_t s = 0;

  std::uint32_t codes_per_bunch() const { return (1u << k) - 1; }
  std::uint32_t slot_width() const { return k * l + s; }
  std::uint32_t num_qubits() const { return n * slot_width(); }
  std::uint32_t bunch_bit(std::uint32_t t, std::uint32_t bunch, std::uint32_t bit) const {
    return t * slot_width() + bunch * k + bit;
  }
  std::uint32_t slack_bit(std::uint32_t t, std::uint32_t i) const {
    return t * slot_width() + k * l + i;
  }
};

/// Rank layout: the whole register, read as a little-endian integer, is a
/// factoradic rank of a permutation when it is below n!.
struct EnumLayout {
  std::uint32_t n = 0;
  std::uint32_t num_qubits = 0;
};

using Layout = std::variant<QuboLayout, HoboLayout, MixedLayout, EnumLayout>;

/// A TSP instance compiled to qubits. energy_oracle is total and exact:
/// penalty counts are accumulated in integers and the route cost in slot
/// order, so on every b with decode(b) = route the energy equals
/// b_weight * route_cost bitwise. hamiltonian is absent for the rank
/// encoding, whose diagonal has no compact polynomial form.
struct EncodedProblem {
  EncodingKind kind = EncodingKind::qubo;
  std::uint32_t num_qubits = 0;
  std::optional<BinaryPolynomial> hamiltonian;
  std::function<double(std::uint64_t)> energy_oracle;
  std::function<std::optional<Route>(std::uint64_t)> decode;
  Layout layout;
  TspInstance instance;
  std::optional<double> slack_weight;  // bunched encoding only
  std::optional<double> e_pen;         // rank encoding only
};

/// One-hot encoding: n^2 qubits ((n-1)^2 with fix_first_city), order-2
/// Hamiltonian a1 * rows + a2 * columns + b * cost.
EncodedProblem encode_qubo(const TspInstance& inst, bool fix_first_city = false);

/// Polynomial over k bits that is 0 on codes < n_values and 1 on the rest.
/// Requires 1 <= n_values <= 2^k; identically zero when n_values = 2^k.
BinaryPolynomial h_valid_hobo(std::uint32_t n_values, std::uint32_t k_bits);

/// Binary encoding: n * ceil(log2 n) qubits; slot codes >= n and repeated
/// codes are penalized, the cost addend matches codes against city bit
/// patterns.
EncodedProblem encode_hobo(const TspInstance& inst);

/// Bunched encoding with k bits per bunch, ceil(n / (2^k - 1)) bunches and
/// ceil(log2(k * l)) slack bits per slot. slack_weight defaults to inst.a1.
EncodedProblem encode_mixed(const TspInstance& inst, std::uint32_t k,
                            std::optional<double> slack_weight = std::nullopt);

/// Rank encoding on ceil(log2 n!) qubits; codes >= n! cost e_pen, which
/// defaults to b * n * max_weight (or 1 when that vanishes).
EncodedProblem encode_enum(const TspInstance& inst, std::optional<double> e_pen = std::nullopt);

/// n! for n <= 20.
std::uint64_t factorial(std::uint32_t n);

/// Lexicographic (factoradic) unranking: 0 <= idx < n! maps to the idx-th
/// permutation of {0..n-1} in lexicographic order. Throws on idx >= n!.
Route index_to_permutation(std::uint64_t idx, std::uint32_t n);

/// Inverse of index_to_permutation.
std::uint64_t permutation_to_index(const Route& route);

}  // namespace qtsp
