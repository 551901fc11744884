#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "qtsp/circuits.hpp"
#include "qtsp/encodings.hpp"
#include "qtsp/json_io.hpp"
#include "qtsp/polynomial.hpp"
#include "qtsp/tsp.hpp"
#include "support/oracles.hpp"

using namespace qtsp;

namespace {

// Full contract of a schedule against its source polynomial:
//  - summed gate coefficients reproduce the Z-basis expansion term by term
//  - no wire is touched twice within a round
//  - gate-by-gate replay on basis states reproduces the energy, ancillas
//    return to zero (exhaustive below 18 qubits, sampled above)
void check_schedule(const EncodedProblem& p, ScheduleStrategy st) {
  INFO("kind=" << to_string(p.kind) << " n=" << p.instance.n
               << " strategy=" << (st == ScheduleStrategy::per_term ? "per-term" : "gray-ancilla"));
  const GateSchedule s = schedule(p, st);
  const IsingPolynomial ising = to_ising(*p.hamiltonian);

  std::map<VarSet, double> agg;
  if (s.constant_coeff != 0.0) agg[VarSet{}] += s.constant_coeff;
  for (const auto& r : s.rounds)
    for (const Gate& g : r)
      if (g.kind != GateKind::ancilla_cnot) agg[g.support] += g.coeff;
  REQUIRE(agg.size() == ising.terms.size());
  std::uint64_t coeff_bad = 0;
  for (const auto& [vars, c] : ising.terms) {
    const auto it = agg.find(vars);
    if (it == agg.end() || std::abs(it->second - c) > 1e-12) ++coeff_bad;
  }
  CHECK(coeff_bad == 0);

  std::uint64_t wire_bad = 0;
  for (const auto& r : s.rounds) {
    std::set<std::uint32_t> used;
    for (const Gate& g : r)
      for (auto q : g.qubits) {
        if (q >= s.num_qubits + s.ancilla_count) ++wire_bad;
        if (!used.insert(q).second) ++wire_bad;
      }
  }
  CHECK(wire_bad == 0);

  std::uint64_t replay_bad = 0, dirty = 0;
  auto one = [&](std::uint64_t b) {
    bool clean = false;
    const double got = oracles::replay(s, b, &clean);
    if (!clean) ++dirty;
    const double want = evaluate_spins(ising, b);
    if (std::abs(got - want) > 1e-9 * (1.0 + std::abs(want))) ++replay_bad;
  };
  if (p.num_qubits < 18) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << p.num_qubits); ++b) one(b);
  } else {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 2000; ++i) one(rng() & ((std::uint64_t{1} << p.num_qubits) - 1));
  }
  CHECK(replay_bad == 0);
  CHECK(dirty == 0);
}

}  // namespace

TEST_SUITE("circuits") {

TEST_CASE("round_robin covers every pair once with disjoint rounds") {
  for (std::uint32_t n = 2; n <= 20; ++n) {
    const auto rounds = round_robin(n);
    CHECK(rounds.size() == (n % 2 == 0 ? n - 1 : n));
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::uint32_t bad = 0;
    for (const auto& r : rounds) {
      std::set<std::uint32_t> used;
      for (const auto& [a, b] : r) {
        if (!(a < b && b < n)) ++bad;
        if (!used.insert(a).second || !used.insert(b).second) ++bad;
        if (!seen.insert({a, b}).second) ++bad;
      }
    }
    INFO("n=" << n);
    CHECK(bad == 0);
    CHECK(seen.size() == std::size_t(n) * (n - 1) / 2);
  }
}

TEST_CASE("gray_sequence walks all nonzero masks by single-bit steps") {
  for (std::uint32_t k = 1; k <= 8; ++k) {
    const auto seq = gray_sequence(k);
    REQUIRE(seq.size() == (std::uint64_t{1} << k) - 1);
    std::set<std::uint64_t> seen(seq.begin(), seq.end());
    CHECK(seen.size() == seq.size());
    CHECK(!seen.count(0));
    std::uint64_t prev = 0;
    std::uint32_t bad = 0;
    for (auto m : seq) {
      if (std::popcount(prev ^ m) != 1) ++bad;
      prev = m;
    }
    INFO("k=" << k);
    CHECK(bad == 0);
  }
}

TEST_CASE("schedules reproduce their polynomial exactly") {
  std::mt19937_64 seed(7);
  for (std::uint32_t n = 3; n <= 4; ++n) {
    const auto inst = random_instance(n, seed());
    const auto zero = zero_instance(n);
    check_schedule(encode_qubo(inst), ScheduleStrategy::per_term);
    check_schedule(encode_qubo(inst, true), ScheduleStrategy::per_term);
    check_schedule(encode_qubo(zero), ScheduleStrategy::per_term);
    check_schedule(encode_hobo(inst), ScheduleStrategy::per_term);
    check_schedule(encode_hobo(inst), ScheduleStrategy::gray_ancilla);
    check_schedule(encode_hobo(zero), ScheduleStrategy::gray_ancilla);
    check_schedule(encode_mixed(inst, 1), ScheduleStrategy::per_term);
    check_schedule(encode_mixed(inst, 1), ScheduleStrategy::gray_ancilla);
    check_schedule(encode_mixed(zero, 1), ScheduleStrategy::gray_ancilla);
  }
  check_schedule(encode_hobo(random_instance(5, 99)), ScheduleStrategy::gray_ancilla);
  check_schedule(encode_mixed(random_instance(5, 99), 2), ScheduleStrategy::gray_ancilla);
}

TEST_CASE("one-hot CNOT depth hits the closed form") {
  for (std::uint32_t n = 3; n <= 6; ++n) {
    const auto s = schedule(encode_qubo(random_instance(n, 1000 + n)), ScheduleStrategy::per_term);
    const std::uint64_t want = n % 2 ? 12 * n + 1 : 12 * n - 11;
    INFO("n=" << n);
    CHECK(depth(s, DepthUnit::cnot_rotation) == want);
    const auto sf =
        schedule(encode_qubo(random_instance(n, 2000 + n), true), ScheduleStrategy::per_term);
    CHECK(depth(sf, DepthUnit::cnot_rotation) <= want);
  }
}

TEST_CASE("binary-code phase depth stays within the cubic budget for zero weights") {
  for (std::uint32_t n = 3; n <= 6; ++n) {
    const auto s = schedule(encode_hobo(zero_instance(n)), ScheduleStrategy::gray_ancilla);
    INFO("n=" << n);
    CHECK(depth(s, DepthUnit::phase_gate) <= 2ull * n * n * n - 1);
  }
}

TEST_CASE("bunched phase depth stays within 2n*4^k for zero weights") {
  for (std::uint32_t n = 3; n <= 6; ++n)
    for (std::uint32_t k = 1; k <= 2; ++k) {
      if ((std::uint32_t{1} << k) - 1 >= n) continue;  // one bunch would cover all cities
      const auto s = schedule(encode_mixed(zero_instance(n), k), ScheduleStrategy::gray_ancilla);
      INFO("n=" << n << " k=" << k);
      CHECK(depth(s, DepthUnit::phase_gate) <= (2ull * n) << (2 * k));
    }
}

TEST_CASE("volume is depth times total width") {
  const auto s = schedule(encode_hobo(zero_instance(4)), ScheduleStrategy::gray_ancilla);
  CHECK(volume(s, DepthUnit::phase_gate) ==
        depth(s, DepthUnit::phase_gate) * (s.num_qubits + s.ancilla_count));
}

TEST_CASE("rank encoding cannot be scheduled") {
  CHECK_THROWS_AS(schedule(encode_enum(zero_instance(3)), ScheduleStrategy::per_term),
                  std::invalid_argument);
}

TEST_CASE("schedule JSON carries depths and optional gate lists") {
  const auto s = schedule(encode_hobo(zero_instance(3)), ScheduleStrategy::gray_ancilla);
  const auto brief = schedule_to_json(s, false);
  CHECK(brief.find("\"depth_phase\"") != std::string::npos);
  CHECK(brief.find("\"gates\"") == std::string::npos);
  const auto full = schedule_to_json(s, true);
  CHECK(full.find("\"gates\"") != std::string::npos);
}

}  // TEST_SUITE
