#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qtsp/encodings.hpp"
#include "qtsp/json_io.hpp"
#include "qtsp/polynomial.hpp"
#include "qtsp/tsp.hpp"
#include "support/oracles.hpp"

using namespace qtsp;

namespace {

std::uint64_t fact(std::uint32_t n) { return factorial(n); }

// Exhaustive contract of one encoded problem:
//  - the polynomial (when present) matches the oracle on every basis state
//  - every feasible state's energy equals b * route_cost of its decode, bitwise
//  - the global minimum equals the brute-force optimum, bitwise
//  - every infeasible state sits strictly above the worst feasible one
void check_contract(const EncodedProblem& p, std::uint64_t want_feasible) {
  INFO("kind=" << to_string(p.kind) << " n=" << p.instance.n << " qubits=" << p.num_qubits);
  if (p.hamiltonian) {
    std::uint64_t poly_bad = 0;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.num_qubits); ++b) {
      const double e = p.energy_oracle(b);
      if (std::abs(evaluate_bits(*p.hamiltonian, b) - e) > 1e-9 * (1.0 + std::abs(e))) ++poly_bad;
    }
    CHECK(poly_bad == 0);
  }
  const auto scan = oracles::scan_spectrum(p);
  const auto* ql = std::get_if<QuboLayout>(&p.layout);
  const bool fixed = ql && ql->fix_first_city;
  const double opt = p.instance.b * brute_force_optimum(p.instance, fixed);
  CHECK(scan.feasible == want_feasible);
  CHECK(scan.cost_mismatches == 0);
  CHECK(scan.min_energy == opt);
  CHECK(scan.min_feasible == opt);
  CHECK(scan.min_infeasible > scan.max_feasible);
}

}  // namespace

TEST_SUITE("encodings") {

TEST_CASE("h_valid_hobo is the exact out-of-range indicator") {
  for (std::uint32_t n = 2; n <= 64; ++n) {
    std::uint32_t k = 1;
    while ((1u << k) < n) ++k;
    const BinaryPolynomial h = h_valid_hobo(n, k);
    std::uint32_t bad = 0;
    for (std::uint32_t c = 0; c < (1u << k); ++c)
      if (evaluate_bits(h, c) != (c < n ? 0.0 : 1.0)) ++bad;
    INFO("n=" << n << " k=" << k);
    CHECK(bad == 0);
  }
  CHECK(h_valid_hobo(4, 2).terms.empty());  // full range: nothing to flag
  CHECK_THROWS_AS(h_valid_hobo(5, 2), std::invalid_argument);
}

TEST_CASE("every encoding meets the energy contract at n=3") {
  const auto inst = random_instance(3, 45);
  const auto zero = zero_instance(3);
  for (const auto* i : {&inst, &zero}) {
    check_contract(encode_qubo(*i, false), fact(3));
    check_contract(encode_qubo(*i, true), fact(2));
    check_contract(encode_hobo(*i), fact(3));
    check_contract(encode_mixed(*i, 1), fact(3));
    check_contract(encode_mixed(*i, 2), fact(3));
    check_contract(encode_enum(*i), fact(3));
  }
}

TEST_CASE("every encoding meets the energy contract at n=4") {
  const auto inst = random_instance(4, 46);
  check_contract(encode_qubo(inst, false), fact(4));
  check_contract(encode_qubo(inst, true), fact(3));
  check_contract(encode_hobo(inst), fact(4));
  check_contract(encode_enum(inst), fact(4));
}

TEST_CASE("bunched encoding at n=4: sampled polynomial, exhaustive minimum") {
  const auto inst = random_instance(4, 46);
  const auto p = encode_mixed(inst, 2);  // 24 qubits: sample the polynomial
  REQUIRE(p.hamiltonian);
  std::mt19937_64 rng(48);
  std::uint64_t poly_bad = 0;
  for (int s = 0; s < 20000; ++s) {
    const std::uint64_t b = rng() & ((std::uint64_t{1} << p.num_qubits) - 1);
    const double e = p.energy_oracle(b);
    if (std::abs(evaluate_bits(*p.hamiltonian, b) - e) > 1e-9 * (1.0 + std::abs(e))) ++poly_bad;
  }
  CHECK(poly_bad == 0);
  double min_e = 1e300;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.num_qubits); ++b)
    min_e = std::min(min_e, p.energy_oracle(b));
  CHECK(min_e == inst.b * brute_force_optimum(inst));
}

TEST_CASE("zero weights leave exactly the feasible states at energy zero") {
  const auto z = zero_instance(3);
  for (const auto& p : {encode_qubo(z), encode_hobo(z)}) {
    std::uint64_t zeros = 0;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.num_qubits); ++b)
      if (p.energy_oracle(b) == 0.0) ++zeros;
    CHECK(zeros == 6);
  }
}

TEST_CASE("term counts of the constructed polynomials") {
  CHECK(term_count(*encode_qubo(random_instance(3, 7)).hamiltonian) == 46);
  CHECK(term_count(*encode_qubo(random_instance(4, 7)).hamiltonian) == 113);
  CHECK(term_count(*encode_hobo(random_instance(3, 7)).hamiltonian) == 37);
  CHECK(term_count(*encode_hobo(random_instance(4, 7)).hamiltonian) == 67);
  CHECK(term_count(*encode_hobo(random_instance(5, 7)).hamiltonian) == 526);
  CHECK(order(*encode_hobo(random_instance(4, 7)).hamiltonian) == 4);
  CHECK(order(*encode_qubo(random_instance(4, 7)).hamiltonian) == 2);
}

TEST_CASE("register widths") {
  CHECK(encode_qubo(zero_instance(4)).num_qubits == 16);
  CHECK(encode_qubo(zero_instance(4), true).num_qubits == 9);
  CHECK(encode_hobo(zero_instance(4)).num_qubits == 8);
  CHECK(encode_hobo(zero_instance(5)).num_qubits == 15);
  CHECK(encode_mixed(zero_instance(6), 2).num_qubits == 36);
  CHECK(encode_enum(zero_instance(4)).num_qubits == 5);   // ceil(log2 24)
  CHECK(encode_enum(zero_instance(3)).num_qubits == 3);   // ceil(log2 6)
}

TEST_CASE("factoradic rank maps") {
  const Route r = index_to_permutation(3, 3);
  CHECK(r.order == std::vector<std::uint32_t>{1, 2, 0});
  for (std::uint64_t i = 0; i < 120; ++i)
    CHECK(permutation_to_index(index_to_permutation(i, 5)) == i);
  CHECK_THROWS_AS(index_to_permutation(6, 3), std::invalid_argument);
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == 2432902008176640000ull);
}

TEST_CASE("rank encoding penalizes exactly the states past n!") {
  const auto inst = random_instance(3, 9);
  const auto p = encode_enum(inst, 123.5);
  REQUIRE(p.e_pen == 123.5);
  for (std::uint64_t b = 0; b < 8; ++b) {
    if (b < 6) {
      const auto route = p.decode(b);
      REQUIRE(route);
      CHECK(p.energy_oracle(b) == inst.b * route_cost(inst, *route));
    } else {
      CHECK(!p.decode(b));
      CHECK(p.energy_oracle(b) == 123.5);
    }
  }
}

TEST_CASE("bunched encoding records its slack weight") {
  const auto inst = random_instance(4, 10);
  CHECK(encode_mixed(inst, 1).slack_weight == inst.a1);
  CHECK(encode_mixed(inst, 1, 7.5).slack_weight == 7.5);
  CHECK(!encode_mixed(inst, 1).e_pen);
}

TEST_CASE("instance validation rejects malformed inputs") {
  TspInstance bad = zero_instance(3);
  bad.w[1] = 1.0;  // asymmetric
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TspInstance neg = zero_instance(3);
  neg.w[1] = neg.w[3] = -1.0;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  TspInstance weak = random_instance(3, 2);
  weak.a1 = 0.5 * weak.max_weight();  // penalty below the dominance threshold
  CHECK_THROWS_AS(weak.validate(), std::invalid_argument);
  CHECK_NOTHROW(random_instance(5, 3).validate());
}

TEST_CASE("kind names roundtrip") {
  for (auto k : {EncodingKind::qubo, EncodingKind::hobo, EncodingKind::mixed,
                 EncodingKind::enumeration})
    CHECK(encoding_kind_from_string(to_string(k)) == k);
  CHECK(!encoding_kind_from_string("nonsense"));
}

TEST_CASE("instance JSON roundtrip") {
  const auto inst = random_instance(4, 77);
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(back.n == inst.n);
  CHECK(back.w == inst.w);
  CHECK(back.a1 == inst.a1);
  CHECK(back.a2 == inst.a2);
  CHECK(back.b == inst.b);
  CHECK_THROWS(instance_from_json("{\"n\": 2, \"w\": [[0, 1]]}"));  // not square
}

}  // TEST_SUITE
