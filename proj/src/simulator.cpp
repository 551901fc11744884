#include "qtsp/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace qtsp {

namespace {

constexpr std::uint32_t kMaxTableQubits = 26;

void check_layers(const QaoaParams& p) {
  if (p.theta_obj.size() != p.theta_mix.size())
    throw std::invalid_argument("qaoa: objective and mixer angle counts differ");
}

double wrap_into(double x, double period) {
  const double y = std::fmod(x, period);
  return y < 0.0 ? y + period : y;
}

}  // namespace

StateVector uniform_state(std::uint32_t num_qubits) {
  StateVector s;
  s.num_qubits = num_qubits;
  const std::size_t dim = std::size_t{1} << num_qubits;
  s.amplitudes.assign(dim, std::complex<double>(1.0 / std::sqrt(double(dim)), 0.0));
  return s;
}

DiagonalHamiltonian build_diagonal(const EncodedProblem& problem) {
  if (problem.num_qubits > kMaxTableQubits)
    throw std::length_error("build_diagonal: register exceeds the 26-qubit table cap");
  DiagonalHamiltonian h;
  h.num_qubits = problem.num_qubits;
  const std::uint64_t dim = std::uint64_t{1} << problem.num_qubits;
  h.energies.resize(dim);
  h.feasible.resize(dim);
  for (std::uint64_t b = 0; b < dim; ++b) {
    h.energies[b] = problem.energy_oracle(b);
    h.feasible[b] = problem.decode(b).has_value() ? 1 : 0;
  }
  return h;
}

QaoaParams wrap_angles(QaoaParams p) {
  for (double& t : p.theta_obj) t = wrap_into(t, p.objective_period);
  for (double& t : p.theta_mix) t = wrap_into(t, std::numbers::pi);
  return p;
}

void apply_objective(StateVector& s, const DiagonalHamiltonian& h, double theta) {
  if (s.num_qubits != h.num_qubits)
    throw std::invalid_argument("apply_objective: register size mismatch");
  for (std::size_t b = 0; b < s.amplitudes.size(); ++b)
    s.amplitudes[b] *= std::polar(1.0, -theta * h.energies[b]);
}

void apply_mixer(StateVector& s, double theta) {
  const double c = std::cos(theta);
  const std::complex<double> ms(0.0, -std::sin(theta));
  auto& a = s.amplitudes;
  for (std::uint32_t q = 0; q < s.num_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < a.size(); base += 2 * stride)
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t i0 = base + off;
        const std::size_t i1 = i0 + stride;
        const std::complex<double> a0 = a[i0];
        const std::complex<double> a1 = a[i1];
        a[i0] = c * a0 + ms * a1;
        a[i1] = ms * a0 + c * a1;
      }
  }
}

StateVector qaoa_state(const DiagonalHamiltonian& h, const QaoaParams& p) {
  check_layers(p);
  StateVector s = uniform_state(h.num_qubits);
  for (std::uint32_t i = 0; i < p.layers(); ++i) {
    apply_objective(s, h, p.theta_obj[i]);
    apply_mixer(s, p.theta_mix[i]);
  }
  return s;
}

double expectation(const StateVector& s, const DiagonalHamiltonian& h) {
  double e = 0.0;
  for (std::size_t b = 0; b < s.amplitudes.size(); ++b)
    e += std::norm(s.amplitudes[b]) * h.energies[b];
  return e;
}

double feasible_probability(const StateVector& s, const DiagonalHamiltonian& h) {
  double p = 0.0;
  for (std::size_t b = 0; b < s.amplitudes.size(); ++b)
    if (h.feasible[b]) p += std::norm(s.amplitudes[b]);
  return p;
}

std::vector<double> gradient(const DiagonalHamiltonian& h, const QaoaParams& p) {
  check_layers(p);
  const std::uint32_t r = p.layers();
  if (r == 0) return {};

  // Adjoint sweep: lambda = H psi stays the fixed bra while both vectors are
  // rewound layer by layer; each angle's derivative is an overlap at the point
  // where its gate acts.
  StateVector psi = qaoa_state(h, p);
  StateVector lam = psi;
  for (std::size_t b = 0; b < lam.amplitudes.size(); ++b) lam.amplitudes[b] *= h.energies[b];

  std::vector<double> grad(2 * r, 0.0);
  for (std::uint32_t i = r; i-- > 0;) {
    // d/d theta_mix: generator sum_q X_q acting after this layer's mixer.
    double g_mix = 0.0;
    for (std::uint32_t q = 0; q < h.num_qubits; ++q) {
      const std::size_t stride = std::size_t{1} << q;
      std::complex<double> dot = 0.0;
      for (std::size_t base = 0; base < psi.amplitudes.size(); base += 2 * stride)
        for (std::size_t off = 0; off < stride; ++off) {
          const std::size_t i0 = base + off;
          const std::size_t i1 = i0 + stride;
          dot += std::conj(lam.amplitudes[i0]) * psi.amplitudes[i1] +
                 std::conj(lam.amplitudes[i1]) * psi.amplitudes[i0];
        }
      g_mix += 2.0 * dot.imag();  // 2 Re(-i dot)
    }
    grad[r + i] = g_mix;

    apply_mixer(psi, -p.theta_mix[i]);
    apply_mixer(lam, -p.theta_mix[i]);

    std::complex<double> dot = 0.0;
    for (std::size_t b = 0; b < psi.amplitudes.size(); ++b)
      dot += std::conj(lam.amplitudes[b]) * h.energies[b] * psi.amplitudes[b];
    grad[i] = 2.0 * dot.imag();

    apply_objective(psi, h, -p.theta_obj[i]);
    apply_objective(lam, h, -p.theta_obj[i]);
  }
  return grad;
}

}  // namespace qtsp
