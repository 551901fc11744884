#include "qtsp/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qtsp {

namespace {

void sort_unique(VarSet& vars) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
}

template <typename Map>
void insert_term(Map& terms, VarSet key, double c) {
  auto it = terms.find(key);
  if (it == terms.end()) {
    if (std::abs(c) >= kCoeffEps) terms.emplace(std::move(key), c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) < kCoeffEps) terms.erase(it);
}

}  // namespace

BinaryPolynomial BinaryPolynomial::zero(std::uint32_t n) {
  BinaryPolynomial p;
  p.num_vars = n;
  return p;
}

BinaryPolynomial BinaryPolynomial::constant(double c, std::uint32_t n) {
  BinaryPolynomial p;
  p.num_vars = n;
  if (std::abs(c) >= kCoeffEps) p.terms.emplace(VarSet{}, c);
  return p;
}

BinaryPolynomial BinaryPolynomial::variable(std::uint32_t i) {
  BinaryPolynomial p;
  p.num_vars = i + 1;
  p.terms.emplace(VarSet{i}, 1.0);
  return p;
}

void BinaryPolynomial::add_term(VarSet vars, double c) {
  sort_unique(vars);
  if (!vars.empty()) num_vars = std::max(num_vars, vars.back() + 1);
  insert_term(terms, std::move(vars), c);
}

BinaryPolynomial& BinaryPolynomial::operator+=(const BinaryPolynomial& other) {
  num_vars = std::max(num_vars, other.num_vars);
  for (const auto& [vars, c] : other.terms) insert_term(terms, vars, c);
  return *this;
}

BinaryPolynomial& BinaryPolynomial::operator-=(const BinaryPolynomial& other) {
  num_vars = std::max(num_vars, other.num_vars);
  for (const auto& [vars, c] : other.terms) insert_term(terms, vars, -c);
  return *this;
}

BinaryPolynomial& BinaryPolynomial::operator*=(double s) {
  if (std::abs(s) < kCoeffEps) {
    terms.clear();
    return *this;
  }
  for (auto it = terms.begin(); it != terms.end();) {
    it->second *= s;
    it = std::abs(it->second) < kCoeffEps ? terms.erase(it) : std::next(it);
  }
  return *this;
}

BinaryPolynomial add(const BinaryPolynomial& p, const BinaryPolynomial& q) {
  BinaryPolynomial r = p;
  r += q;
  return r;
}

BinaryPolynomial sub(const BinaryPolynomial& p, const BinaryPolynomial& q) {
  BinaryPolynomial r = p;
  r -= q;
  return r;
}

BinaryPolynomial mul(const BinaryPolynomial& p, const BinaryPolynomial& q) {
  BinaryPolynomial r;
  r.num_vars = std::max(p.num_vars, q.num_vars);
  VarSet merged;
  for (const auto& [pv, pc] : p.terms) {
    for (const auto& [qv, qc] : q.terms) {
      merged.clear();
      std::set_union(pv.begin(), pv.end(), qv.begin(), qv.end(), std::back_inserter(merged));
      insert_term(r.terms, merged, pc * qc);
    }
  }
  return r;
}

BinaryPolynomial operator*(double s, const BinaryPolynomial& p) {
  BinaryPolynomial r = p;
  r *= s;
  return r;
}

double evaluate(const BinaryPolynomial& p, const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() < p.num_vars)
    throw std::invalid_argument("evaluate: assignment shorter than num_vars");
  double total = 0.0;
  for (const auto& [vars, c] : p.terms) {
    bool on = true;
    for (std::uint32_t v : vars)
      if (!assignment[v]) {
        on = false;
        break;
      }
    if (on) total += c;
  }
  return total;
}

double evaluate_bits(const BinaryPolynomial& p, std::uint64_t bits) {
  if (p.num_vars > 64) throw std::invalid_argument("evaluate_bits: num_vars > 64");
  double total = 0.0;
  for (const auto& [vars, c] : p.terms) {
    bool on = true;
    for (std::uint32_t v : vars)
      if (!((bits >> v) & 1u)) {
        on = false;
        break;
      }
    if (on) total += c;
  }
  return total;
}

void IsingPolynomial::add_term(VarSet vars, double c) {
  sort_unique(vars);
  if (!vars.empty()) num_qubits = std::max(num_qubits, vars.back() + 1);
  insert_term(terms, std::move(vars), c);
}

IsingPolynomial to_ising(const BinaryPolynomial& p) {
  IsingPolynomial z;
  z.num_qubits = p.num_vars;
  for (const auto& [vars, c] : p.terms) {
    const std::size_t w = vars.size();
    if (w > 30) throw std::invalid_argument("to_ising: term order > 30");
    const double base = c / static_cast<double>(1u << w);
    VarSet subset;
    for (std::uint32_t s = 0; s < (1u << w); ++s) {
      subset.clear();
      for (std::size_t j = 0; j < w; ++j)
        if ((s >> j) & 1u) subset.push_back(vars[j]);
      const double sign = (std::popcount(s) % 2 == 0) ? 1.0 : -1.0;
      insert_term(z.terms, subset, sign * base);
    }
  }
  return z;
}

double evaluate_spins(const IsingPolynomial& p, std::uint64_t bits) {
  if (p.num_qubits > 64) throw std::invalid_argument("evaluate_spins: num_qubits > 64");
  double total = 0.0;
  for (const auto& [vars, c] : p.terms) {
    int sign = 1;
    for (std::uint32_t v : vars)
      if ((bits >> v) & 1u) sign = -sign;
    total += sign * c;
  }
  return total;
}

std::size_t term_count(const BinaryPolynomial& p) { return p.terms.size(); }
std::size_t term_count(const IsingPolynomial& p) { return p.terms.size(); }

std::uint32_t order(const BinaryPolynomial& p) {
  std::size_t w = 0;
  for (const auto& [vars, c] : p.terms) w = std::max(w, vars.size());
  return static_cast<std::uint32_t>(w);
}

std::uint32_t order(const IsingPolynomial& p) {
  std::size_t w = 0;
  for (const auto& [vars, c] : p.terms) w = std::max(w, vars.size());
  return static_cast<std::uint32_t>(w);
}

BinaryPolynomial shift_vars(const BinaryPolynomial& p, std::uint32_t offset) {
  BinaryPolynomial r;
  r.num_vars = p.num_vars + offset;
  for (const auto& [vars, c] : p.terms) {
    VarSet shifted = vars;
    for (std::uint32_t& v : shifted) v += offset;
    r.terms.emplace(std::move(shifted), c);
  }
  return r;
}

std::uint64_t varset_to_mask(const VarSet& vars) {
  std::uint64_t m = 0;
  for (std::uint32_t v : vars) {
    if (v >= 64) throw std::invalid_argument("varset_to_mask: index >= 64");
    m |= std::uint64_t{1} << v;
  }
  return m;
}

VarSet mask_to_varset(std::uint64_t mask) {
  VarSet vars;
  while (mask) {
    vars.push_back(static_cast<std::uint32_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return vars;
}

}  // namespace qtsp
