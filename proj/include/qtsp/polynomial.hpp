#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace qtsp {

// Sorted, duplicate-free variable indices. The empty set keys the constant term.
using VarSet = std::vector<std::uint32_t>;

// Coefficients with |c| below this threshold are dropped during normalization.
inline constexpr double kCoeffEps = 1e-12;

/// Multilinear polynomial over binary variables b_i in {0,1}, kept in canonical
/// form: idempotence b_i^2 = b_i applied eagerly, terms keyed by sorted index
/// sets, no stored coefficient of magnitude below kCoeffEps.
struct BinaryPolynomial {
  std::map<VarSet, double> terms;
  std::uint32_t num_vars = 0;

  static BinaryPolynomial zero(std::uint32_t n = 0);
  static BinaryPolynomial constant(double c, std::uint32_t n = 0);
  static BinaryPolynomial variable(std::uint32_t i);

  /// Adds c * prod_{i in vars} b_i. vars need not be sorted; duplicates collapse.
  void add_term(VarSet vars, double c);

  BinaryPolynomial& operator+=(const BinaryPolynomial& other);
  BinaryPolynomial& operator-=(const BinaryPolynomial& other);
  BinaryPolynomial& operator*=(double s);

  bool operator==(const BinaryPolynomial& other) const = default;
};

BinaryPolynomial add(const BinaryPolynomial& p, const BinaryPolynomial& q);
BinaryPolynomial sub(const BinaryPolynomial& p, const BinaryPolynomial& q);
BinaryPolynomial mul(const BinaryPolynomial& p, const BinaryPolynomial& q);

inline BinaryPolynomial operator+(const BinaryPolynomial& p, const BinaryPolynomial& q) { return add(p, q); }
inline BinaryPolynomial operator-(const BinaryPolynomial& p, const BinaryPolynomial& q) { return sub(p, q); }
inline BinaryPolynomial operator*(const BinaryPolynomial& p, const BinaryPolynomial& q) { return mul(p, q); }
BinaryPolynomial operator*(double s, const BinaryPolynomial& p);

/// Evaluates p at the given 0/1 assignment. Throws std::invalid_argument when
/// the assignment is shorter than num_vars.
double evaluate(const BinaryPolynomial& p, const std::vector<std::uint8_t>& assignment);

/// Evaluates p at the assignment packed into a bitmask (bit i = variable i).
/// Requires num_vars <= 64.
double evaluate_bits(const BinaryPolynomial& p, std::uint64_t bits);

/// Z-basis polynomial over spin variables z_i in {-1,+1}; same canonical form.
struct IsingPolynomial {
  std::map<VarSet, double> terms;
  std::uint32_t num_qubits = 0;

  void add_term(VarSet vars, double c);
  bool operator==(const IsingPolynomial& other) const = default;
};

/// Substitutes b_i = (1 - Z_i) / 2. A term of order w expands into 2^w
/// Z-products, so inputs are limited to order <= 30.
IsingPolynomial to_ising(const BinaryPolynomial& p);

/// Evaluates the Ising polynomial at z_i = 1 - 2*b_i with b packed as a bitmask.
double evaluate_spins(const IsingPolynomial& p, std::uint64_t bits);

std::size_t term_count(const BinaryPolynomial& p);
std::size_t term_count(const IsingPolynomial& p);
std::uint32_t order(const BinaryPolynomial& p);
std::uint32_t order(const IsingPolynomial& p);

/// Returns p with every variable index i replaced by i + offset.
BinaryPolynomial shift_vars(const BinaryPolynomial& p, std::uint32_t offset);

/// VarSet <-> bitmask conversions for num_vars <= 64.
std::uint64_t varset_to_mask(const VarSet& vars);
VarSet mask_to_varset(std::uint64_t mask);

}  // namespace qtsp
