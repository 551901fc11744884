#include "qtsp/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <variant>

namespace qtsp {

namespace {

using SlotPair = std::pair<std::uint32_t, std::uint32_t>;

// Position of i(n reflected Gray order: inverse of i ^ (i >> 1).
std::uint64_t gray_rank(std::uint64_t mask) {
  std::uint64_t r = mask;
  for (int shift = 1; shift < 64; shift <<= 1) r ^= r >> shift;
  return r;
}

Gate phase_gate_for(const VarSet& support, double coeff, GateKind kind) {
  Gate g;
  g.qubits.assign(support.begin(), support.end());
  g.support = support;
  g.coeff = coeff;
  g.kind = kind;
  return g;
}

void append_nonempty(GateSchedule& s, std::vector<std::vector<Gate>>&& layers) {
  for (auto& lay : layers)
    if (!lay.empty()) s.rounds.push_back(std::move(lay));
}

// Pops `vars` from `remaining` as a gate if the term is present.
bool take_term(std::map<VarSet, double>& remaining, VarSet vars, GateKind kind,
               std::vector<Gate>& out) {
  std::sort(vars.begin(), vars.end());
  auto it = remaining.find(vars);
  if (it == remaining.end()) return false;
  out.push_back(phase_gate_for(it->first, it->second, kind));
  remaining.erase(it);
  return true;
}

// ---------------------------------------------------------------------------
// One-hot layout: explicit stages. 1-local terms first, then slot-internal
// pairs (tournament over cities, all slots in parallel), then same-city pairs
// (tournament over slots), then the tour-edge couplings grouped so that each
// round is a set of disjoint slot pairs all running one cyclic-shift class of
// city pairs at once.
// ---------------------------------------------------------------------------

GateSchedule schedule_one_hot(const EncodedProblem& problem, const IsingPolynomial& ising) {
  const auto& ql = std::get<QuboLayout>(problem.layout);
  const std::uint32_t n = ql.n;
  const bool fixed = ql.fix_first_city;
  const std::uint32_t span = fixed ? n - 1 : n;  // cities per slot == usable slots
  const std::uint32_t base = fixed ? 1 : 0;      // first real slot / city index

  GateSchedule s;
  s.num_qubits = problem.num_qubits;
  { const auto cit = ising.terms.find(VarSet{}); s.constant_coeff = cit == ising.terms.end() ? 0.0 : cit->second; }
  std::map<VarSet, double> remaining = ising.terms;
  remaining.erase(VarSet{});

  std::vector<Gate> singles;
  for (auto it = remaining.begin(); it != remaining.end();) {
    if (it->first.size() == 1) {
      singles.push_back(phase_gate_for(it->first, it->second, GateKind::multi_z));
      it = remaining.erase(it);
    } else {
      ++it;
    }
  }
  if (!singles.empty()) s.rounds.push_back(std::move(singles));

  const auto tournament = round_robin(span);

  // Slot-internal city pairs.
  for (const auto& rr : tournament) {
    std::vector<Gate> round;
    for (std::uint32_t t = base; t < n; ++t)
      for (const auto& [a, b] : rr)
        take_term(remaining, {ql.qubit(t, base + a), ql.qubit(t, base + b)},
                  GateKind::cnot_ladder, round);
    if (!round.empty()) s.rounds.push_back(std::move(round));
  }

  // Same-city slot pairs.
  for (const auto& rr : tournament) {
    std::vector<Gate> round;
    for (std::uint32_t c = base; c < n; ++c)
      for (const auto& [a, b] : rr)
        take_term(remaining, {ql.qubit(base + a, c), ql.qubit(base + b, c)},
                  GateKind::cnot_ladder, round);
    if (!round.empty()) s.rounds.push_back(std::move(round));
  }

  // Tour-edge couplings. A slot pair (t, t+1) running shift class k holds the
  // n disjoint gates {q(t,i), q(t+1, i+k mod n)}; it needs every k in 1..n-1.
  auto edge_round = [&](const std::vector<std::pair<SlotPair, std::uint32_t>>& work) {
    std::vector<Gate> round;
    for (const auto& [pair, k] : work) {
      const auto [t, u] = pair;
      for (std::uint32_t a = 0; a < span; ++a) {
        const std::uint32_t i = base + a;
        const std::uint32_t j = base + (a + k) % span;
        take_term(remaining, {ql.qubit(t, i), ql.qubit(u, j)}, GateKind::cnot_ladder, round);
      }
    }
    if (!round.empty()) s.rounds.push_back(std::move(round));
  };

  if (!fixed && n % 2 == 1) {
    // Odd cycle: rotate a near-perfect matching around the slot ring, giving
    // each of the n edges exactly n-1 active layers out of 2n.
    std::map<std::uint32_t, std::uint32_t> shift_count;
    for (std::uint32_t layer = 0; layer < 2 * n; ++layer) {
      const std::uint32_t v = layer / 2;
      std::vector<std::pair<SlotPair, std::uint32_t>> work;
      for (std::uint32_t o = 1; o + 1 < n; o += 2) {
        const std::uint32_t t = (v + o) % n;
        work.push_back({{t, (t + 1) % n}, ++shift_count[t]});
      }
      edge_round(work);
    }
  } else if (!fixed) {
    // Even cycle: alternate edges form two perfect matchings.
    for (std::uint32_t parity = 0; parity < 2; ++parity)
      for (std::uint32_t k = 1; k < n; ++k) {
        std::vector<std::pair<SlotPair, std::uint32_t>> work;
        for (std::uint32_t t = parity; t < n; t += 2) work.push_back({{t, (t + 1) % n}, k});
        edge_round(work);
      }
  } else {
    // Pinned first slot: remaining slots form a path; alternate edges again,
    // with shifts over the reduced city set.
    for (std::uint32_t parity = 1; parity < 3; ++parity)
      for (std::uint32_t k = 1; k < span; ++k) {
        std::vector<std::pair<SlotPair, std::uint32_t>> work;
        for (std::uint32_t t = parity; t + 1 < n; t += 2) work.push_back({{t, t + 1}, k});
        edge_round(work);
      }
  }

  if (!remaining.empty())
    throw std::logic_error("schedule: one-hot classification left terms unscheduled");
  return s;
}

// ---------------------------------------------------------------------------
// Slot-coded layouts (binary and bunched registers).
// ---------------------------------------------------------------------------

struct CodedTerm {
  VarSet support;
  double coeff;
};

// Serial gate list realizing all (mask -> coeff) phases of one slot pair on an
// ancilla: walk the masks, toggling the parity register by the mask difference
// and rotating once per mask, then restore the ancilla. Mask order is greedy
// nearest-neighbour with Gray-position tie-breaks, which reproduces the Gray
// walk when every mask is present and shortens it when terms have cancelled.
std::vector<Gate> ancilla_walk(const std::map<std::uint64_t, CodedTerm>& masks,
                               const std::vector<std::uint32_t>& wires, std::uint32_t ancilla) {
  std::vector<Gate> gates;
  std::set<std::uint64_t> remaining;
  for (const auto& [m, term] : masks) remaining.insert(m);

  std::uint64_t cur = 0;
  auto toggle_to = [&](std::uint64_t next) {
    std::uint64_t diff = cur ^ next;
    while (diff != 0) {
      const int bit = std::countr_zero(diff);
      diff &= diff - 1;
      Gate g;
      g.qubits = {wires[static_cast<std::size_t>(bit)], ancilla};
      g.kind = GateKind::ancilla_cnot;
      gates.push_back(std::move(g));
    }
    cur = next;
  };

  while (!remaining.empty()) {
    std::uint64_t best = 0;
    int best_dist = -1;
    for (const std::uint64_t m : remaining) {
      const int d = std::popcount(cur ^ m);
      if (best_dist < 0 || d < best_dist ||
          (d == best_dist && gray_rank(m) < gray_rank(best))) {
        best = m;
        best_dist = d;
      }
    }
    toggle_to(best);
    remaining.erase(best);
    const CodedTerm& term = masks.at(best);
    Gate rz;
    rz.qubits = {ancilla};
    rz.support = term.support;
    rz.coeff = term.coeff;
    rz.kind = GateKind::ancilla_rz;
    gates.push_back(std::move(rz));
  }
  toggle_to(0);
  return gates;
}

struct CodedLayoutInfo {
  std::uint32_t slot_width = 0;
  std::uint32_t code_bits = 0;     // bits per bunch (== slot width for plain binary)
  std::uint32_t bunches = 1;       // sub-registers per slot
};

CodedLayoutInfo coded_info(const EncodedProblem& problem) {
  CodedLayoutInfo info;
  if (problem.kind == EncodingKind::hobo) {
    const auto& hl = std::get<HoboLayout>(problem.layout);
    info.slot_width = hl.k;
    info.code_bits = hl.k;
    info.bunches = 1;
  } else {
    const auto& ml = std::get<MixedLayout>(problem.layout);
    info.slot_width = ml.slot_width();
    info.code_bits = ml.k;
    info.bunches = ml.l;
  }
  return info;
}

GateSchedule schedule_coded(const EncodedProblem& problem, const IsingPolynomial& ising,
                            ScheduleStrategy strategy) {
  const CodedLayoutInfo info = coded_info(problem);
  const std::uint32_t n = problem.instance.n;
  const std::uint32_t width = info.slot_width;

  GateSchedule s;
  s.num_qubits = problem.num_qubits;
  { const auto cit = ising.terms.find(VarSet{}); s.constant_coeff = cit == ising.terms.end() ? 0.0 : cit->second; }

  std::vector<Gate> singles;
  std::map<VarSet, double> remaining = ising.terms;
  remaining.erase(VarSet{});

  // Split terms by the set of slots they touch.
  std::vector<CodedTerm> internal;                 // one slot, weight >= 2
  std::map<SlotPair, std::vector<CodedTerm>> pairs;  // exactly two slots
  for (const auto& [vars, coeff] : remaining) {
    std::set<std::uint32_t> slots;
    for (const std::uint32_t v : vars) slots.insert(v / width);
    if (vars.size() == 1) {
      singles.push_back(phase_gate_for(vars, coeff, GateKind::multi_z));
    } else if (slots.size() == 1) {
      internal.push_back({vars, coeff});
    } else if (slots.size() == 2) {
      pairs[{*slots.begin(), *std::next(slots.begin())}].push_back({vars, coeff});
    } else {
      throw std::logic_error("schedule: term spans more than two slots");
    }
  }
  if (!singles.empty()) s.rounds.push_back(std::move(singles));

  // Slot-internal stage: tournament rounds for the pair terms, everything
  // wider slotted in greedily wherever its wires are free.
  {
    std::vector<std::vector<Gate>> rounds;
    std::vector<std::set<std::uint32_t>> used;
    std::map<VarSet, double> pair_terms;
    std::vector<CodedTerm> wide;
    for (auto& term : internal) {
      if (term.support.size() == 2)
        pair_terms.emplace(term.support, term.coeff);
      else
        wide.push_back(std::move(term));
    }
    for (const auto& rr : round_robin(width)) {
      std::vector<Gate> round;
      for (std::uint32_t t = 0; t < n; ++t)
        for (const auto& [a, b] : rr)
          take_term(pair_terms, {t * width + a, t * width + b}, GateKind::cnot_ladder, round);
      if (round.empty()) continue;
      std::set<std::uint32_t> wires;
      for (const Gate& g : round) wires.insert(g.qubits.begin(), g.qubits.end());
      rounds.push_back(std::move(round));
      used.push_back(std::move(wires));
    }
    for (const auto& term : wide) {
      std::size_t slot = rounds.size();
      for (std::size_t r = 0; r < rounds.size(); ++r) {
        const bool clash = std::any_of(term.support.begin(), term.support.end(),
                                       [&](std::uint32_t v) { return used[r].count(v) != 0; });
        if (!clash) {
          slot = r;
          break;
        }
      }
      if (slot == rounds.size()) {
        rounds.emplace_back();
        used.emplace_back();
      }
      rounds[slot].push_back(phase_gate_for(term.support, term.coeff, GateKind::cnot_ladder));
      used[slot].insert(term.support.begin(), term.support.end());
    }
    append_nonempty(s, std::move(rounds));
  }

  // Pair stage: tournament over slots; each active pair contributes a serial
  // block, blocks of one round interleave layer by layer.
  std::uint32_t max_ancilla = 0;
  const std::uint32_t anc_stride = info.bunches;  // parity registers per pair

  auto bunch_wires = [&](std::uint32_t slot, std::uint32_t bunch) {
    std::vector<std::uint32_t> w(info.code_bits);
    for (std::uint32_t b = 0; b < info.code_bits; ++b) w[b] = slot * width + bunch * info.code_bits + b;
    return w;
  };

  auto build_block = [&](const SlotPair& pr, std::uint32_t pair_idx)
      -> std::vector<std::vector<Gate>> {
    const auto it = pairs.find(pr);
    if (it == pairs.end()) return {};
    std::vector<std::vector<Gate>> layers;
    if (strategy == ScheduleStrategy::per_term) {
      for (const CodedTerm& term : it->second)
        layers.push_back({phase_gate_for(term.support, term.coeff, GateKind::cnot_ladder)});
      return layers;
    }

    // Bucket the pair's terms by the bunch each side lives in; masks use the
    // first code_bits positions for the low slot, the rest for the high one.
    const auto [t, u] = pr;
    std::map<SlotPair, std::map<std::uint64_t, CodedTerm>> blocks;
    for (const CodedTerm& term : it->second) {
      std::uint64_t mask = 0;
      std::int64_t bt = -1;
      std::int64_t bu = -1;
      for (const std::uint32_t v : term.support) {
        const std::uint32_t slot = v / width;
        const std::uint32_t off = v % width;
        if (off >= info.code_bits * info.bunches)
          throw std::logic_error("schedule: pair term touches a slack bit");
        const std::uint32_t bunch = off / info.code_bits;
        const std::uint32_t bit = off % info.code_bits;
        auto& side = slot == t ? bt : bu;
        if (side >= 0 && side != static_cast<std::int64_t>(bunch))
          throw std::logic_error("schedule: pair term spans two bunches on one side");
        side = bunch;
        mask |= std::uint64_t{1} << (bit + (slot == t ? 0 : info.code_bits));
      }
      blocks[{static_cast<std::uint32_t>(std::max<std::int64_t>(bt, 0)),
              static_cast<std::uint32_t>(std::max<std::int64_t>(bu, 0))}]
            .emplace(mask, term);
    }

    // Round-robin over bunch offsets: phase d runs the blocks (l, l+d mod L)
    // of every l in parallel, each on its own parity register.
    for (std::uint32_t d = 0; d < info.bunches; ++d) {
      std::vector<std::vector<Gate>> phase;
      for (std::uint32_t l = 0; l < info.bunches; ++l) {
        const SlotPair key{l, (l + d) % info.bunches};
        const auto bit = blocks.find(key);
        if (bit == blocks.end()) continue;
        std::vector<std::uint32_t> wires = bunch_wires(t, key.first);
        const auto uw = bunch_wires(u, key.second);
        wires.insert(wires.end(), uw.begin(), uw.end());
        const std::uint32_t anc = s.num_qubits + pair_idx * anc_stride + l;
        max_ancilla = std::max(max_ancilla, anc + 1 - s.num_qubits);
        const auto walk = ancilla_walk(bit->second, wires, anc);
        for (std::size_t j = 0; j < walk.size(); ++j) {
          if (phase.size() <= j) phase.emplace_back();
          phase[j].push_back(walk[j]);
        }
      }
      for (auto& lay : phase) layers.push_back(std::move(lay));
    }
    return layers;
  };

  for (const auto& rr : round_robin(n)) {
    std::vector<std::vector<Gate>> layers;
    std::uint32_t pair_idx = 0;
    for (const auto& pr : rr) {
      auto block = build_block(pr, pair_idx++);
      for (std::size_t j = 0; j < block.size(); ++j) {
        if (layers.size() <= j) layers.emplace_back();
        auto& dst = layers[j];
        auto& src = block[j];
        dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                   std::make_move_iterator(src.end()));
      }
    }
    append_nonempty(s, std::move(layers));
  }

  s.ancilla_count = strategy == ScheduleStrategy::gray_ancilla ? max_ancilla : 0;
  return s;
}

}  // namespace

std::vector<std::vector<SlotPair>> round_robin(std::uint32_t n) {
  std::vector<std::vector<SlotPair>> rounds;
  if (n < 2) return rounds;
  const std::uint32_t m = n % 2 == 0 ? n : n + 1;  // odd n gets a bye slot
  std::vector<std::uint32_t> ring(m);
  std::iota(ring.begin(), ring.end(), 0u);
  for (std::uint32_t r = 0; r + 1 < m; ++r) {
    std::vector<SlotPair> round;
    for (std::uint32_t i = 0; i < m / 2; ++i) {
      std::uint32_t a = ring[i];
      std::uint32_t b = ring[m - 1 - i];
      if (a >= n || b >= n) continue;
      if (a > b) std::swap(a, b);
      round.push_back({a, b});
    }
    std::sort(round.begin(), round.end());
    rounds.push_back(std::move(round));
    std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
  }
  return rounds;
}

std::vector<std::uint64_t> gray_sequence(std::uint32_t k) {
  if (k > 24) throw std::length_error("gray_sequence: k too large");
  std::vector<std::uint64_t> seq;
  const std::uint64_t count = std::uint64_t{1} << k;
  seq.reserve(count - 1);
  for (std::uint64_t i = 1; i < count; ++i) seq.push_back(i ^ (i >> 1));
  return seq;
}

GateSchedule schedule(const EncodedProblem& problem, ScheduleStrategy strategy) {
  if (!problem.hamiltonian)
    throw std::invalid_argument("schedule: encoding carries no polynomial Hamiltonian");
  const IsingPolynomial ising = to_ising(*problem.hamiltonian);
  switch (problem.kind) {
    case EncodingKind::qubo:
      if (strategy == ScheduleStrategy::gray_ancilla)
        throw std::invalid_argument("schedule: gray_ancilla requires a slot-coded register");
      return schedule_one_hot(problem, ising);
    case EncodingKind::hobo:
    case EncodingKind::mixed:
      return schedule_coded(problem, ising, strategy);
    default:
      throw std::invalid_argument("schedule: encoding carries no polynomial Hamiltonian");
  }
}

std::uint64_t depth(const GateSchedule& s, DepthUnit unit) {
  std::uint64_t total = 0;
  for (const auto& round : s.rounds) {
    if (round.empty()) continue;
    if (unit == DepthUnit::phase_gate) {
      // Rotation rounds only: parity toggles are CNOTs and are priced by the
      // cnot_rotation unit, not here.
      for (const Gate& g : round)
        if (g.kind != GateKind::ancilla_cnot) {
          total += 1;
          break;
        }
      continue;
    }
    std::uint64_t worst = 0;
    for (const Gate& g : round) {
      std::uint64_t cost = 1;
      if (g.kind == GateKind::multi_z || g.kind == GateKind::cnot_ladder)
        cost = 2 * (g.support.size() - 1) + 1;
      worst = std::max(worst, cost);
    }
    total += worst;
  }
  return total;
}

std::uint64_t volume(const GateSchedule& s, DepthUnit unit) {
  return depth(s, unit) * (s.num_qubits + s.ancilla_count);
}

}  // namespace qtsp
