#include "qtsp/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qtsp {

double TspInstance::max_weight() const {
  double m = 0.0;
  for (double x : w) m = std::max(m, x);
  return m;
}

void TspInstance::validate() const {
  if (n < 2) throw std::invalid_argument("TspInstance: n must be >= 2");
  if (w.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("TspInstance: weight matrix must be n x n");
  for (std::uint32_t i = 0; i < n; ++i) {
    if (weight(i, i) != 0.0) throw std::invalid_argument("TspInstance: diagonal must be zero");
    for (std::uint32_t j = 0; j < n; ++j) {
      const double wij = weight(i, j);
      if (!(wij >= 0.0)) throw std::invalid_argument("TspInstance: weights must be non-negative");
      if (wij != weight(j, i)) throw std::invalid_argument("TspInstance: weights must be symmetric");
    }
  }
  if (!(b > 0.0)) throw std::invalid_argument("TspInstance: b must be positive");
  const double edge = b * max_weight();
  if (edge > 0.0 && (a1 <= edge || a2 <= edge))
    throw std::invalid_argument("TspInstance: a1 and a2 must exceed b * max_weight");
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw std::invalid_argument("TspInstance: a1 and a2 must be positive");
}

TspInstance zero_instance(std::uint32_t n) {
  TspInstance inst;
  inst.n = n;
  inst.w.assign(static_cast<std::size_t>(n) * n, 0.0);
  inst.validate();
  return inst;
}

TspInstance random_instance(std::uint32_t n, std::uint64_t seed) {
  TspInstance inst;
  inst.n = n;
  inst.w.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n) * n);
  for (double& v : x) v = uni(rng);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (i != j) inst.w[i * n + j] = x[i * n + j] + x[j * n + i];
  inst.b = 1.0;
  inst.a1 = inst.a2 = 2.01 * inst.max_weight();
  inst.validate();
  return inst;
}

double route_cost(const TspInstance& inst, const Route& route) {
  if (route.order.size() != inst.n) throw std::invalid_argument("route_cost: wrong route length");
  double total = 0.0;
  for (std::uint32_t t = 0; t < inst.n; ++t)
    total += inst.weight(route.order[t], route.order[(t + 1) % inst.n]);
  return total;
}

double brute_force_optimum(const TspInstance& inst, bool fix_first) {
  if (inst.n > 10) throw std::invalid_argument("brute_force_optimum: n too large");
  Route route;
  route.order.resize(inst.n);
  std::iota(route.order.begin(), route.order.end(), 0u);
  const auto first = fix_first ? route.order.begin() + 1 : route.order.begin();
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, route_cost(inst, route));
  } while (std::next_permutation(first, route.order.end()));
  return best;
}

}  // namespace qtsp
