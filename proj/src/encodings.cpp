#include "qtsp/encodings.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace qtsp {

namespace {

// Smallest number of bits addressing `values` distinct codes; bits_for(1) = 0.
std::uint32_t bits_for(std::uint64_t values) {
  return values <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(values - 1));
}

BinaryPolynomial one_minus(std::uint32_t var) {
  BinaryPolynomial p = BinaryPolynomial::constant(1.0);
  p -= BinaryPolynomial::variable(var);
  return p;
}

// Indicator polynomial of "these qubits spell the k-bit pattern `code`".
BinaryPolynomial bit_pattern_indicator(const std::vector<std::uint32_t>& qubits,
                                       std::uint32_t code) {
  BinaryPolynomial p = BinaryPolynomial::constant(1.0);
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const bool bit = (code >> k) & 1u;
    p = mul(p, bit ? BinaryPolynomial::variable(qubits[k]) : one_minus(qubits[k]));
  }
  return p;
}

// Indicator polynomial of "slot qubits a and b hold equal k-bit codes":
// prod_k (1 - a_k - b_k + 2 a_k b_k).
BinaryPolynomial equal_code_indicator(const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b) {
  BinaryPolynomial p = BinaryPolynomial::constant(1.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    BinaryPolynomial factor = BinaryPolynomial::constant(1.0);
    factor.add_term({a[k]}, -1.0);
    factor.add_term({b[k]}, -1.0);
    factor.add_term({a[k], b[k]}, 2.0);
    p = mul(p, factor);
  }
  return p;
}

}  // namespace

std::string to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::qubo: return "qubo";
    case EncodingKind::hobo: return "hobo";
    case EncodingKind::mixed: return "mixed";
    case EncodingKind::enumeration: return "enum";
  }
  return "unknown";
}

std::optional<EncodingKind> encoding_kind_from_string(const std::string& name) {
  if (name == "qubo") return EncodingKind::qubo;
  if (name == "hobo") return EncodingKind::hobo;
  if (name == "mixed") return EncodingKind::mixed;
  if (name == "enum" || name == "enumeration") return EncodingKind::enumeration;
  return std::nullopt;
}

EncodedProblem encode_qubo(const TspInstance& inst, bool fix_first_city) {
  inst.validate();
  const std::uint32_t n = inst.n;
  QuboLayout lay{n, fix_first_city};
  const std::uint32_t nq = lay.num_qubits();
  if (nq > 64) throw std::invalid_argument("encode_qubo: more than 64 qubits");

  const std::uint32_t lo = fix_first_city ? 1 : 0;
  BinaryPolynomial h = BinaryPolynomial::zero(nq);

  for (std::uint32_t t = lo; t < n; ++t) {
    BinaryPolynomial row = BinaryPolynomial::constant(1.0);
    for (std::uint32_t i = lo; i < n; ++i) row.add_term({lay.qubit(t, i)}, -1.0);
    h += inst.a1 * mul(row, row);
  }
  for (std::uint32_t i = lo; i < n; ++i) {
    BinaryPolynomial col = BinaryPolynomial::constant(1.0);
    for (std::uint32_t t = lo; t < n; ++t) col.add_term({lay.qubit(t, i)}, -1.0);
    h += inst.a2 * mul(col, col);
  }

  if (!fix_first_city) {
    for (std::uint32_t t = 0; t < n; ++t) {
      const std::uint32_t t2 = (t + 1) % n;
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
          if (i != j && inst.weight(i, j) != 0.0)
            h.add_term({lay.qubit(t, i), lay.qubit(t2, j)}, inst.b * inst.weight(i, j));
    }
  } else {
    // Slot 0 is pinned to city 0, so the two edges touching it are linear.
    for (std::uint32_t j = 1; j < n; ++j)
      if (inst.weight(0, j) != 0.0) h.add_term({lay.qubit(1, j)}, inst.b * inst.weight(0, j));
    for (std::uint32_t i = 1; i < n; ++i)
      if (inst.weight(i, 0) != 0.0) h.add_term({lay.qubit(n - 1, i)}, inst.b * inst.weight(i, 0));
    for (std::uint32_t t = 1; t + 1 < n; ++t)
      for (std::uint32_t i = 1; i < n; ++i)
        for (std::uint32_t j = 1; j < n; ++j)
          if (i != j && inst.weight(i, j) != 0.0)
            h.add_term({lay.qubit(t, i), lay.qubit(t + 1, j)}, inst.b * inst.weight(i, j));
  }
  h.num_vars = nq;

  EncodedProblem enc;
  enc.kind = EncodingKind::qubo;
  enc.num_qubits = nq;
  enc.hamiltonian = std::move(h);
  enc.layout = lay;
  enc.instance = inst;

  // Occupancy per slot as a city bitmask; slot 0 = {city 0} when pinned.
  auto slot_masks = [n, lay](std::uint64_t bits) {
    std::array<std::uint32_t, 64> mask{};
    const std::uint32_t lo2 = lay.fix_first_city ? 1 : 0;
    if (lay.fix_first_city) mask[0] = 1u;
    for (std::uint32_t t = lo2; t < n; ++t)
      for (std::uint32_t i = lo2; i < n; ++i)
        if ((bits >> lay.qubit(t, i)) & 1u) mask[t] |= 1u << i;
    return mask;
  };

  enc.energy_oracle = [inst, n, lay, slot_masks](std::uint64_t bits) -> double {
    const auto mask = slot_masks(bits);
    const std::uint32_t lo2 = lay.fix_first_city ? 1 : 0;
    std::int64_t p1 = 0, p2 = 0;
    std::array<std::int32_t, 64> col{};
    for (std::uint32_t t = lo2; t < n; ++t) {
      const std::int64_t d = 1 - std::popcount(mask[t]);
      p1 += d * d;
      for (std::uint32_t i = lo2; i < n; ++i)
        if ((mask[t] >> i) & 1u) ++col[i];
    }
    for (std::uint32_t i = lo2; i < n; ++i) {
      const std::int64_t d = 1 - col[i];
      p2 += d * d;
    }
    double cost = 0.0;
    for (std::uint32_t t = 0; t < n; ++t) {
      const std::uint32_t t2 = (t + 1) % n;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (!((mask[t] >> i) & 1u)) continue;
        for (std::uint32_t j = 0; j < n; ++j)
          if (j != i && ((mask[t2] >> j) & 1u)) cost += inst.weight(i, j);
      }
    }
    return inst.a1 * static_cast<double>(p1) + inst.a2 * static_cast<double>(p2) + inst.b * cost;
  };

  enc.decode = [n, slot_masks](std::uint64_t bits) -> std::optional<Route> {
    const auto mask = slot_masks(bits);
    Route route;
    route.order.resize(n);
    std::uint32_t seen = 0;
    for (std::uint32_t t = 0; t < n; ++t) {
      if (std::popcount(mask[t]) != 1) return std::nullopt;
      const auto city = static_cast<std::uint32_t>(std::countr_zero(mask[t]));
      if (seen & (1u << city)) return std::nullopt;
      seen |= 1u << city;
      route.order[t] = city;
    }
    return route;
  };
  return enc;
}

BinaryPolynomial h_valid_hobo(std::uint32_t n_values, std::uint32_t k_bits) {
  if (k_bits < 1 || k_bits > 30) throw std::invalid_argument("h_valid_hobo: k_bits out of range");
  if (n_values < 1 || n_values > (1u << k_bits))
    throw std::invalid_argument("h_valid_hobo: k_bits too small for n_values");
  const std::uint32_t top = n_values - 1;  // largest valid code
  BinaryPolynomial h = BinaryPolynomial::zero(k_bits);
  // A code exceeds `top` iff at some position k0 it has a 1 where top has a 0
  // while agreeing with top on all higher bits; the events are disjoint.
  for (std::uint32_t k0 = 0; k0 < k_bits; ++k0) {
    if ((top >> k0) & 1u) continue;
    BinaryPolynomial term = BinaryPolynomial::variable(k0);
    for (std::uint32_t k = k0 + 1; k < k_bits; ++k)
      term = mul(term, ((top >> k) & 1u) ? BinaryPolynomial::variable(k) : one_minus(k));
    h += term;
  }
  h.num_vars = k_bits;
  return h;
}

EncodedProblem encode_hobo(const TspInstance& inst) {
  inst.validate();
  const std::uint32_t n = inst.n;
  const std::uint32_t k = bits_for(n);
  HoboLayout lay{n, k};
  const std::uint32_t nq = lay.num_qubits();
  if (nq > 64) throw std::invalid_argument("encode_hobo: more than 64 qubits");

  auto slot_qubits = [&](std::uint32_t t) {
    std::vector<std::uint32_t> q(k);
    for (std::uint32_t bit = 0; bit < k; ++bit) q[bit] = lay.qubit(t, bit);
    return q;
  };

  BinaryPolynomial h = BinaryPolynomial::zero(nq);
  const BinaryPolynomial valid = h_valid_hobo(n, k);
  for (std::uint32_t t = 0; t < n; ++t) h += inst.a1 * shift_vars(valid, t * k);
  for (std::uint32_t t = 0; t < n; ++t)
    for (std::uint32_t u = t + 1; u < n; ++u)
      h += inst.a2 * equal_code_indicator(slot_qubits(t), slot_qubits(u));

  std::vector<std::vector<BinaryPolynomial>> delta(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    delta[t].reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
      delta[t].push_back(bit_pattern_indicator(slot_qubits(t), i));
  }
  for (std::uint32_t t = 0; t < n; ++t) {
    const std::uint32_t t2 = (t + 1) % n;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j && inst.weight(i, j) != 0.0)
          h += (inst.b * inst.weight(i, j)) * mul(delta[t][i], delta[t2][j]);
  }
  h.num_vars = nq;

  EncodedProblem enc;
  enc.kind = EncodingKind::hobo;
  enc.num_qubits = nq;
  enc.hamiltonian = std::move(h);
  enc.layout = lay;
  enc.instance = inst;

  const std::uint64_t code_mask = (std::uint64_t{1} << k) - 1;
  enc.energy_oracle = [inst, n, k, code_mask](std::uint64_t bits) -> double {
    std::array<std::uint32_t, 64> code{};
    std::int64_t p1 = 0, p2 = 0;
    for (std::uint32_t t = 0; t < n; ++t) {
      code[t] = static_cast<std::uint32_t>((bits >> (t * k)) & code_mask);
      if (code[t] >= n) ++p1;
    }
    for (std::uint32_t t = 0; t < n; ++t)
      for (std::uint32_t u = t + 1; u < n; ++u)
        if (code[t] == code[u]) ++p2;
    double cost = 0.0;
    for (std::uint32_t t = 0; t < n; ++t) {
      const std::uint32_t i = code[t], j = code[(t + 1) % n];
      if (i < n && j < n && i != j) cost += inst.weight(i, j);
    }
    return inst.a1 * static_cast<double>(p1) + inst.a2 * static_cast<double>(p2) + inst.b * cost;
  };

  enc.decode = [n, k, code_mask](std::uint64_t bits) -> std::optional<Route> {
    Route route;
    route.order.resize(n);
    std::uint64_t seen = 0;
    for (std::uint32_t t = 0; t < n; ++t) {
      const auto c = static_cast<std::uint32_t>((bits >> (t * k)) & code_mask);
      if (c >= n || (seen & (std::uint64_t{1} << c))) return std::nullopt;
      seen |= std::uint64_t{1} << c;
      route.order[t] = c;
    }
    return route;
  };
  return enc;
}

EncodedProblem encode_mixed(const TspInstance& inst, std::uint32_t k,
                            std::optional<double> slack_weight) {
  inst.validate();
  const std::uint32_t n = inst.n;
  if (k < 1 || k > bits_for(n)) throw std::invalid_argument("encode_mixed: k out of range");
  const std::uint32_t v = (1u << k) - 1;         // nonzero codes per bunch
  const std::uint32_t l = (n + v - 1) / v;       // bunches per slot
  const std::uint32_t s = bits_for(k * l);       // slack bits per slot
  MixedLayout lay{n, k, l, s};
  const std::uint32_t nq = lay.num_qubits();
  if (nq > 64) throw std::invalid_argument("encode_mixed: more than 64 qubits");
  const double a_slack = slack_weight.value_or(inst.a1);

  // Codes allowed in the last bunch: 0..n_last-1 with n_last - 1 the highest
  // in-range city code; n_last = 2^k makes the guard vanish.
  const std::uint32_t n_last = n - (l - 1) * v + 1;
  const BinaryPolynomial guard = h_valid_hobo(n_last, k);

  auto bunch_qubits = [&](std::uint32_t t, std::uint32_t bunch) {
    std::vector<std::uint32_t> q(k);
    for (std::uint32_t bit = 0; bit < k; ++bit) q[bit] = lay.bunch_bit(t, bunch, bit);
    return q;
  };

  BinaryPolynomial h = BinaryPolynomial::zero(nq);
  for (std::uint32_t t = 0; t < n; ++t) {
    BinaryPolynomial d = BinaryPolynomial::constant(1.0);
    for (std::uint32_t bl = 0; bl < l; ++bl)
      for (std::uint32_t bit = 0; bit < k; ++bit) d.add_term({lay.bunch_bit(t, bl, bit)}, -1.0);
    for (std::uint32_t i = 0; i < s; ++i)
      d.add_term({lay.slack_bit(t, i)}, static_cast<double>(1u << i));
    h += a_slack * mul(d, d);

    std::vector<BinaryPolynomial> pop(l, BinaryPolynomial::zero());
    for (std::uint32_t bl = 0; bl < l; ++bl)
      for (std::uint32_t bit = 0; bit < k; ++bit) pop[bl].add_term({lay.bunch_bit(t, bl, bit)}, 1.0);
    for (std::uint32_t bl = 0; bl < l; ++bl)
      for (std::uint32_t bm = bl + 1; bm < l; ++bm) h += (2.0 * inst.a1) * mul(pop[bl], pop[bm]);

    h += inst.a1 * shift_vars(guard, lay.bunch_bit(t, l - 1, 0));
  }

  for (std::uint32_t t = 0; t < n; ++t)
    for (std::uint32_t u = t + 1; u < n; ++u)
      for (std::uint32_t bl = 0; bl < l; ++bl) {
        const auto qa = bunch_qubits(t, bl), qb = bunch_qubits(u, bl);
        BinaryPolynomial sum = BinaryPolynomial::zero();
        for (std::uint32_t bit = 0; bit < k; ++bit) {
          sum.add_term({qa[bit]}, 1.0);
          sum.add_term({qb[bit]}, 1.0);
        }
        h += inst.a2 * mul(sum, equal_code_indicator(qa, qb));
      }

  // delta[t][i] = indicator that slot t's bunch of city i spells city i's code.
  std::vector<std::vector<BinaryPolynomial>> delta(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    delta[t].reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
      delta[t].push_back(bit_pattern_indicator(bunch_qubits(t, i / v), i % v + 1));
  }
  for (std::uint32_t t = 0; t < n; ++t) {
    const std::uint32_t t2 = (t + 1) % n;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j && inst.weight(i, j) != 0.0)
          h += (inst.b * inst.weight(i, j)) * mul(delta[t][i], delta[t2][j]);
  }
  h.num_vars = nq;

  EncodedProblem enc;
  enc.kind = EncodingKind::mixed;
  enc.num_qubits = nq;
  enc.hamiltonian = std::move(h);
  enc.layout = lay;
  enc.instance = inst;
  enc.slack_weight = a_slack;

  const std::uint64_t code_mask = (std::uint64_t{1} << k) - 1;
  const std::uint64_t slack_mask = (std::uint64_t{1} << s) - 1;

  // Cities named by nonzero bunch codes in range; ascending bunch order.
  auto matched_cities = [n, l, v, k, lay, code_mask](std::uint64_t bits, std::uint32_t t,
                                                     std::array<std::uint32_t, 16>& out) {
    std::uint32_t count = 0;
    for (std::uint32_t bl = 0; bl < l; ++bl) {
      const auto c = static_cast<std::uint32_t>((bits >> lay.bunch_bit(t, bl, 0)) & code_mask);
      if (c == 0) continue;
      const std::uint32_t city = bl * v + c - 1;
      if (city < n) out[count++] = city;
    }
    return count;
  };

  enc.energy_oracle = [inst, n, k, l, s, v, n_last, lay, a_slack, code_mask, slack_mask,
                       matched_cities](std::uint64_t bits) -> double {
    std::int64_t sq = 0, pair = 0, guard_hits = 0, neq = 0;
    for (std::uint32_t t = 0; t < n; ++t) {
      std::int64_t total = 0, sum_p2 = 0;
      for (std::uint32_t bl = 0; bl < l; ++bl) {
        const auto c = (bits >> lay.bunch_bit(t, bl, 0)) & code_mask;
        const std::int64_t p = std::popcount(c);
        total += p;
        sum_p2 += p * p;
        if (bl == l - 1 && c >= n_last) ++guard_hits;
      }
      const auto slack = static_cast<std::int64_t>((bits >> lay.slack_bit(t, 0)) & slack_mask);
      const std::int64_t d = 1 - total + slack;
      sq += d * d;
      pair += total * total - sum_p2;
    }
    for (std::uint32_t t = 0; t < n; ++t)
      for (std::uint32_t u = t + 1; u < n; ++u)
        for (std::uint32_t bl = 0; bl < l; ++bl) {
          const auto ct = (bits >> lay.bunch_bit(t, bl, 0)) & code_mask;
          const auto cu = (bits >> lay.bunch_bit(u, bl, 0)) & code_mask;
          if (ct == cu) neq += 2 * std::popcount(ct);
        }
    double cost = 0.0;
    std::array<std::uint32_t, 16> at{}, next{};
    for (std::uint32_t t = 0; t < n; ++t) {
      const std::uint32_t ca = matched_cities(bits, t, at);
      const std::uint32_t cb = matched_cities(bits, (t + 1) % n, next);
      for (std::uint32_t x = 0; x < ca; ++x)
        for (std::uint32_t y = 0; y < cb; ++y)
          if (at[x] != next[y]) cost += inst.weight(at[x], next[y]);
    }
    return a_slack * static_cast<double>(sq) +
           inst.a1 * static_cast<double>(pair + guard_hits) +
           inst.a2 * static_cast<double>(neq) + inst.b * cost;
  };

  enc.decode = [n, k, l, s, v, lay, code_mask, slack_mask](std::uint64_t bits)
      -> std::optional<Route> {
    Route route;
    route.order.resize(n);
    std::uint64_t seen = 0;
    for (std::uint32_t t = 0; t < n; ++t) {
      std::uint32_t hits = 0, city = 0, pop = 0;
      for (std::uint32_t bl = 0; bl < l; ++bl) {
        const auto c = static_cast<std::uint32_t>((bits >> lay.bunch_bit(t, bl, 0)) & code_mask);
        if (c == 0) continue;
        ++hits;
        city = bl * v + c - 1;
        pop = static_cast<std::uint32_t>(std::popcount(c));
      }
      if (hits != 1 || city >= n) return std::nullopt;
      const auto slack = static_cast<std::uint32_t>((bits >> lay.slack_bit(t, 0)) & slack_mask);
      if (slack != pop - 1) return std::nullopt;
      if (seen & (std::uint64_t{1} << city)) return std::nullopt;
      seen |= std::uint64_t{1} << city;
      route.order[t] = city;
    }
    return route;
  };
  return enc;
}

std::uint64_t factorial(std::uint32_t n) {
  if (n > 20) throw std::invalid_argument("factorial: n > 20 overflows 64 bits");
  std::uint64_t f = 1;
  for (std::uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

Route index_to_permutation(std::uint64_t idx, std::uint32_t n) {
  if (idx >= factorial(n)) throw std::invalid_argument("index_to_permutation: idx >= n!");
  std::vector<std::uint32_t> avail(n);
  for (std::uint32_t i = 0; i < n; ++i) avail[i] = i;
  Route route;
  route.order.resize(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    const std::uint64_t f = factorial(n - 1 - t);
    const auto d = static_cast<std::size_t>(idx / f);
    idx %= f;
    route.order[t] = avail[d];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return route;
}

std::uint64_t permutation_to_index(const Route& route) {
  const auto n = static_cast<std::uint32_t>(route.order.size());
  std::uint64_t idx = 0;
  for (std::uint32_t t = 0; t < n; ++t) {
    std::uint64_t smaller = 0;
    for (std::uint32_t u = t + 1; u < n; ++u)
      if (route.order[u] < route.order[t]) ++smaller;
    idx += smaller * factorial(n - 1 - t);
  }
  return idx;
}

EncodedProblem encode_enum(const TspInstance& inst, std::optional<double> e_pen) {
  inst.validate();
  const std::uint32_t n = inst.n;
  const std::uint64_t n_fact = factorial(n);
  EnumLayout lay{n, bits_for(n_fact)};
  if (lay.num_qubits > 63) throw std::invalid_argument("encode_enum: more than 63 qubits");

  double pen = e_pen.value_or(inst.b * n * inst.max_weight());
  if (!e_pen && pen == 0.0) pen = 1.0;
  if (!(pen > 0.0)) throw std::invalid_argument("encode_enum: e_pen must be positive");

  EncodedProblem enc;
  enc.kind = EncodingKind::enumeration;
  enc.num_qubits = lay.num_qubits;
  enc.hamiltonian = std::nullopt;
  enc.layout = lay;
  enc.instance = inst;
  enc.e_pen = pen;
  enc.energy_oracle = [inst, n, n_fact, pen](std::uint64_t bits) -> double {
    if (bits >= n_fact) return pen;
    return inst.b * route_cost(inst, index_to_permutation(bits, n));
  };
  enc.decode = [n, n_fact](std::uint64_t bits) -> std::optional<Route> {
    if (bits >= n_fact) return std::nullopt;
    return index_to_permutation(bits, n);
  };
  return enc;
}

}  // namespace qtsp
