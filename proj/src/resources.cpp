#include "qtsp/resources.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <variant>

namespace qtsp {

namespace {

std::uint32_t code_bits(std::uint32_t n) {
  return std::max<std::uint32_t>(1, std::uint32_t(std::bit_width(std::uint64_t(n) - 1)));
}

struct BunchShape {
  std::uint32_t v;  // codes per bunch
  std::uint32_t l;  // bunches per slot
  std::uint32_t s;  // slack bits per slot
};

BunchShape bunch_shape(std::uint32_t n, std::uint32_t k) {
  BunchShape sh;
  sh.v = (std::uint32_t{1} << k) - 1;
  sh.l = (n + sh.v - 1) / sh.v;
  sh.s = std::uint32_t(std::bit_width(std::uint64_t(k) * sh.l - 1));
  return sh;
}

void check_shape(EncodingKind kind, std::uint32_t n, const std::optional<std::uint32_t>& k) {
  if (n < 2) throw std::invalid_argument("resources: n must be at least 2");
  if (kind == EncodingKind::mixed) {
    if (!k) throw std::invalid_argument("resources: bunched encoding needs k");
    if (*k < 1 || *k > code_bits(n)) throw std::invalid_argument("resources: k out of range");
  }
}

double log2_factorial(std::uint32_t n) { return std::lgamma(double(n) + 1.0) / std::numbers::ln2; }

}  // namespace

std::uint64_t qubit_count(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k) {
  check_shape(kind, n, k);
  switch (kind) {
    case EncodingKind::qubo:
      return std::uint64_t(n) * n;
    case EncodingKind::hobo:
      return std::uint64_t(n) * code_bits(n);
    case EncodingKind::mixed: {
      const BunchShape sh = bunch_shape(n, *k);
      return std::uint64_t(n) * *k * sh.l + std::uint64_t(n / 2) * sh.l + std::uint64_t(n) * sh.s;
    }
    case EncodingKind::enumeration:
      if (n <= 20) return std::uint64_t(std::bit_width(factorial(n) - 1));
      return std::uint64_t(std::ceil(log2_factorial(n) - 1e-9));
  }
  throw std::invalid_argument("resources: unknown encoding");
}

std::uint64_t ancilla_count(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k) {
  check_shape(kind, n, k);
  switch (kind) {
    case EncodingKind::hobo:
      return n / 2;
    case EncodingKind::mixed:
      return std::uint64_t(n / 2) * bunch_shape(n, *k).l;
    default:
      return 0;
  }
}

BunchForm bunch_form_from_k(std::uint32_t n, std::uint32_t k) {
  check_shape(EncodingKind::mixed, n, k);
  BunchForm f;
  f.k = k;
  f.alpha = double(k) / std::log2(double(n));
  f.c = 1.0;  // 2^k / n^alpha collapses exactly
  return f;
}

BunchForm bunch_form_from_alpha(std::uint32_t n, double alpha) {
  if (n < 2 || !(alpha > 0.0)) throw std::invalid_argument("resources: bad alpha");
  const double x = alpha * std::log2(double(n));
  BunchForm f;
  f.k = std::max<std::uint32_t>(1, std::uint32_t(std::floor(x)));
  f.k = std::min(f.k, code_bits(n));
  f.alpha = alpha;
  f.c = std::exp2(double(f.k) - x);
  return f;
}

ResourceValue term_count_formula(EncodingKind kind, std::uint32_t n,
                                 std::optional<std::uint32_t> k) {
  check_shape(kind, n, k);
  const double dn = n;
  switch (kind) {
    case EncodingKind::qubo:
      return {2.0 * dn * dn * dn - dn * dn + 1.0, ValueFlag::exact};
    case EncodingKind::hobo:
      return {0.5 * dn * dn * dn * dn - 0.5 * dn * dn * dn + dn * dn, ValueFlag::upper_bound};
    case EncodingKind::mixed:
      // (c/2) n^{3+alpha} with c n^alpha = 2^k in either parameter form.
      return {0.5 * dn * dn * dn * std::exp2(double(*k)), ValueFlag::upper_bound};
    case EncodingKind::enumeration:
      return {0.0, ValueFlag::exponential};
  }
  throw std::invalid_argument("resources: unknown encoding");
}

ResourceValue depth_formula(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k) {
  check_shape(kind, n, k);
  const double dn = n;
  switch (kind) {
    case EncodingKind::qubo:
      return {12.0 * dn + 1.0, ValueFlag::upper_bound};
    case EncodingKind::hobo:
      return {2.0 * dn * dn * dn - 1.0, ValueFlag::upper_bound};
    case EncodingKind::mixed:
      // 2 c^2 n^{1+2 alpha} = 2 n 4^k in either parameter form.
      return {2.0 * dn * std::exp2(2.0 * double(*k)), ValueFlag::upper_bound};
    case EncodingKind::enumeration:
      return {0.0, ValueFlag::exponential};
  }
  throw std::invalid_argument("resources: unknown encoding");
}

ResourceValue volume_formula(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k) {
  const ResourceValue d = depth_formula(kind, n, k);
  if (d.flag == ValueFlag::exponential) return d;
  const double width = double(qubit_count(kind, n, k)) +
                       (kind == EncodingKind::mixed ? 0.0 : double(ancilla_count(kind, n, k)));
  return {d.value * width, ValueFlag::upper_bound};
}

double energy_bound_formula(EncodingKind kind, std::uint32_t n, std::optional<std::uint32_t> k,
                            double a1, double a2, double b, double max_w,
                            std::optional<double> slack_weight, std::optional<double> e_pen) {
  check_shape(kind, n, k);
  const double dn = n;
  switch (kind) {
    case EncodingKind::qubo:
      // all-ones maximizes every addend: each constraint misses by n-1, every
      // ordered city pair contributes per slot.
      return a1 * dn * (dn - 1) * (dn - 1) + a2 * dn * (dn - 1) * (dn - 1) +
             b * dn * dn * (dn - 1) * max_w;
    case EncodingKind::hobo:
      // one indicator per slot, one clash per slot pair, one edge per slot.
      return a1 * dn + a2 * dn * (dn - 1) / 2.0 + b * dn * max_w;
    case EncodingKind::mixed: {
      const BunchShape sh = bunch_shape(n, *k);
      const double sl = std::exp2(double(sh.s)) - 1.0;
      const double dk = *k;
      const double dl = sh.l;
      return slack_weight.value_or(a1) * dn * (1.0 + sl) * (1.0 + sl) +
             a1 * (dn * dk * dk * dl * (dl - 1) + dn) +
             a2 * dn * (dn - 1) / 2.0 * 2.0 * dk * dl + b * dn * dl * dl * max_w;
    }
    case EncodingKind::enumeration: {
      double pen = e_pen.value_or(b * dn * max_w);
      if (!e_pen && pen == 0.0) pen = 1.0;
      return std::max(pen, b * dn * max_w);
    }
  }
  throw std::invalid_argument("resources: unknown encoding");
}

double energy_upper_bound(const EncodedProblem& problem) {
  std::optional<std::uint32_t> k;
  if (const auto* ml = std::get_if<MixedLayout>(&problem.layout)) k = ml->k;
  const TspInstance& inst = problem.instance;
  return energy_bound_formula(problem.kind, inst.n, k, inst.a1, inst.a2, inst.b,
                              inst.max_weight(), problem.slack_weight, problem.e_pen);
}

std::uint64_t hoeffding_samples(double range_width, double t, double delta,
                                HoeffdingConvention convention) {
  if (!(range_width > 0.0) || !(t > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("hoeffding_samples: need range, t > 0 and delta in (0,1)");
  const double d =
      convention == HoeffdingConvention::range ? range_width : range_width * range_width;
  const double x = d * std::log(2.0 / delta) / (2.0 * t * t);
  if (!(x < 9.0e18)) throw std::length_error("hoeffding_samples: sample count overflows");
  // floor first: when x sits exactly on the boundary, ceil of the rounded
  // value would overshoot by one.
  const double m0 = std::floor(x);
  const bool holds = 2.0 * std::exp(-2.0 * m0 * t * t / d) <= delta * (1.0 + 1e-9);
  const double m = (holds ? m0 : m0 + 1.0);
  return std::uint64_t(std::max(1.0, m));
}

ResourceReport resource_report(EncodingKind kind, std::uint32_t n,
                               std::optional<std::uint32_t> k, const MeasurementSettings& ms) {
  if (kind == EncodingKind::hobo && !k) k = code_bits(n);
  check_shape(kind, n, k);
  ResourceReport r;
  r.kind = kind;
  r.n = n;
  r.k = kind == EncodingKind::mixed || kind == EncodingKind::hobo ? k : std::nullopt;
  r.qubits = qubit_count(kind, n, kind == EncodingKind::mixed ? k : std::nullopt);
  r.ancillas = ancilla_count(kind, n, kind == EncodingKind::mixed ? k : std::nullopt);
  r.terms = term_count_formula(kind, n, kind == EncodingKind::mixed ? k : std::nullopt);
  const ResourceValue d = depth_formula(kind, n, kind == EncodingKind::mixed ? k : std::nullopt);
  switch (kind) {
    case EncodingKind::qubo:
      r.depth_cnot = d;
      r.depth_phase = ResourceValue{n % 2 == 1 ? 4.0 * n + 1.0 : 4.0 * n - 3.0,
                                    ValueFlag::upper_bound};
      break;
    case EncodingKind::hobo:
    case EncodingKind::mixed:
      r.depth_phase = d;
      break;
    case EncodingKind::enumeration:
      r.depth_phase = d;
      break;
  }
  r.volume = volume_formula(kind, n, kind == EncodingKind::mixed ? k : std::nullopt);
  r.energy_lo = 0.0;
  r.energy_hi = energy_bound_formula(kind, n, kind == EncodingKind::mixed ? k : std::nullopt,
                                     ms.a1, ms.a2, ms.b, ms.max_w);
  r.samples_range =
      hoeffding_samples(r.energy_hi - r.energy_lo, ms.t, ms.delta, HoeffdingConvention::range);
  r.samples_range_squared = hoeffding_samples(r.energy_hi - r.energy_lo, ms.t, ms.delta,
                                              HoeffdingConvention::range_squared);
  if (kind == EncodingKind::mixed) r.bunch = bunch_form_from_k(n, *k);
  return r;
}

}  // namespace qtsp
