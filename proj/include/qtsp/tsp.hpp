#pragma once

#include <cstdint>
#include <vector>

namespace qtsp {

/// Symmetric travelling-salesman instance with penalty weights attached.
/// w is row-major n x n, zero on the diagonal, non-negative off it.
struct TspInstance {
  std::uint32_t n = 0;
  std::vector<double> w;
  double a1 = 1.0;
  double a2 = 1.0;
  double b = 1.0;

  double weight(std::uint32_t i, std::uint32_t j) const { return w[i * n + j]; }
  double max_weight() const;

  /// Throws std::invalid_argument unless n >= 2, w is n x n, symmetric,
  /// zero-diagonal, non-negative, and a1, a2 > b * max_weight() when any
  /// weight is nonzero (penalties must dominate any single edge swap).
  void validate() const;
};

/// Instance with all weights zero; only the constraint structure remains.
TspInstance zero_instance(std::uint32_t n);

/// Random symmetric instance, W = X + X^T off-diagonal with X ~ U(0,1)
/// i.i.d. (entries in [0,2]), b = 1. Default penalties a1 = a2 =
/// 2.01 * max_weight: repairing one constraint violation changes the tour by
/// at most two edges, so any margin above 2 * b * max_weight keeps every
/// infeasible state above the optimum.
TspInstance random_instance(std::uint32_t n, std::uint64_t seed);

/// City visiting order; slot t holds the city visited at time t.
struct Route {
  std::vector<std::uint32_t> order;
};

/// Closed-tour cost sum_t W[pi_t][pi_{t+1 mod n}].
double route_cost(const TspInstance& inst, const Route& route);

/// Minimum closed-tour cost by brute force (n <= 10). Enumerates all n!
/// visiting orders so the scanned float sums match any encoding's feasible
/// energies bit for bit; fix_first restricts to orders starting at city 0.
double brute_force_optimum(const TspInstance& inst, bool fix_first = false);

}  // namespace qtsp
