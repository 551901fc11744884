#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qtsp/polynomial.hpp"

using namespace qtsp;

namespace {

BinaryPolynomial random_poly(std::mt19937_64& rng, std::uint32_t n, int terms) {
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  BinaryPolynomial p = BinaryPolynomial::zero(n);
  for (int t = 0; t < terms; ++t) {
    VarSet vars;
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng() & 1) vars.push_back(i);
    p.add_term(vars, coeff(rng));
  }
  return p;
}

// Multilinear coefficients recovered from point evaluations alone:
// c_S = sum_{T subset S} (-1)^{|S \ T|} f(indicator of T).
std::map<VarSet, double> mobius_coefficients(const BinaryPolynomial& p) {
  std::map<VarSet, double> out;
  const std::uint64_t space = std::uint64_t{1} << p.num_vars;
  for (std::uint64_t s = 0; s < space; ++s) {
    double c = 0.0;
    for (std::uint64_t t = s;; t = (t - 1) & s) {
      const int sign = (std::popcount(s ^ t) % 2) ? -1 : 1;
      c += sign * evaluate_bits(p, t);
      if (t == 0) break;
    }
    if (std::abs(c) > 1e-9) out[mask_to_varset(s)] = c;
  }
  return out;
}

}  // namespace

TEST_SUITE("polynomial") {

TEST_CASE("add_term collapses duplicates and sorts") {
  BinaryPolynomial p = BinaryPolynomial::zero(4);
  p.add_term({2, 0, 2}, 1.5);  // b2*b0*b2 = b0*b2
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms.count(VarSet{0, 2}) == 1);
  p.add_term({0, 2}, -1.5);  // cancels to zero, term must vanish
  CHECK(p.terms.empty());
}

TEST_CASE("near-zero coefficients are dropped") {
  BinaryPolynomial p = BinaryPolynomial::zero(2);
  p.add_term({0}, 1.0);
  p.add_term({0}, -1.0 + 0.25 * kCoeffEps);
  CHECK(p.terms.empty());
  p.add_term({1}, 2 * kCoeffEps);
  CHECK(p.terms.size() == 1);
}

TEST_CASE("arithmetic matches pointwise evaluation") {
  std::mt19937_64 rng(11);
  const std::uint32_t n = 6;
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryPolynomial p = random_poly(rng, n, 8);
    const BinaryPolynomial q = random_poly(rng, n, 8);
    const BinaryPolynomial s = p + q, d = p - q, m = p * q, h = 0.5 * p;
    int bad = 0;
    for (std::uint64_t b = 0; b < (1u << n); ++b) {
      const double pv = evaluate_bits(p, b), qv = evaluate_bits(q, b);
      if (std::abs(evaluate_bits(s, b) - (pv + qv)) > 1e-9) ++bad;
      if (std::abs(evaluate_bits(d, b) - (pv - qv)) > 1e-9) ++bad;
      if (std::abs(evaluate_bits(m, b) - pv * qv) > 1e-9) ++bad;
      if (std::abs(evaluate_bits(h, b) - 0.5 * pv) > 1e-12) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("multiplication respects idempotence") {
  const BinaryPolynomial x = BinaryPolynomial::variable(3);
  CHECK(x * x == x);
  const BinaryPolynomial c = BinaryPolynomial::constant(2.0, 4);
  CHECK((c * x).terms.at(VarSet{3}) == 2.0);
}

TEST_CASE("canonical form equals Mobius reconstruction") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryPolynomial p = random_poly(rng, 6, 12);
    const auto recon = mobius_coefficients(p);
    REQUIRE(recon.size() == p.terms.size());
    for (const auto& [vars, c] : p.terms) {
      const auto it = recon.find(vars);
      REQUIRE(it != recon.end());
      CHECK(std::abs(it->second - c) < 1e-8);
    }
  }
}

TEST_CASE("evaluate agrees with evaluate_bits and validates length") {
  std::mt19937_64 rng(33);
  const BinaryPolynomial p = random_poly(rng, 5, 10);
  for (std::uint64_t b = 0; b < 32; ++b) {
    std::vector<std::uint8_t> a(5);
    for (int i = 0; i < 5; ++i) a[i] = (b >> i) & 1;
    CHECK(evaluate(p, a) == evaluate_bits(p, b));
  }
  CHECK_THROWS_AS(evaluate(p, std::vector<std::uint8_t>(4, 0)), std::invalid_argument);
}

TEST_CASE("to_ising preserves values on every assignment") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryPolynomial p = random_poly(rng, 6, 10);
    const IsingPolynomial z = to_ising(p);
    CHECK(z.num_qubits == p.num_vars);
    int bad = 0;
    for (std::uint64_t b = 0; b < 64; ++b) {
      const double want = evaluate_bits(p, b);
      if (std::abs(evaluate_spins(z, b) - want) > 1e-9 * (1.0 + std::abs(want))) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("to_ising of a bare product gives the 2^w expansion") {
  BinaryPolynomial p = BinaryPolynomial::zero(3);
  p.add_term({0, 1, 2}, 8.0);  // 8*b0*b1*b2 = (1-Z0)(1-Z1)(1-Z2)
  const IsingPolynomial z = to_ising(p);
  CHECK(term_count(z) == 8);
  CHECK(z.terms.at(VarSet{}) == 1.0);
  CHECK(z.terms.at(VarSet{0, 1, 2}) == -1.0);
  CHECK(z.terms.at(VarSet{1, 2}) == 1.0);
}

TEST_CASE("order and term_count") {
  BinaryPolynomial p = BinaryPolynomial::zero(5);
  CHECK(order(p) == 0);
  p.add_term({}, 3.0);
  p.add_term({1, 3, 4}, 2.0);
  CHECK(order(p) == 3);
  CHECK(term_count(p) == 2);
}

TEST_CASE("shift_vars relabels without changing values") {
  std::mt19937_64 rng(55);
  const BinaryPolynomial p = random_poly(rng, 4, 8);
  const BinaryPolynomial q = shift_vars(p, 3);
  CHECK(q.num_vars == 7);
  for (std::uint64_t b = 0; b < 16; ++b)
    CHECK(evaluate_bits(q, b << 3) == evaluate_bits(p, b));
}

TEST_CASE("varset/mask roundtrip") {
  for (std::uint64_t m = 0; m < 256; ++m) CHECK(varset_to_mask(mask_to_varset(m)) == m);
  CHECK(mask_to_varset(0b1010) == VarSet{1, 3});
}

}  // TEST_SUITE
