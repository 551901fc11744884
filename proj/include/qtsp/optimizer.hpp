#pragma once

#include <cstdint>
#include <vector>

#include "qtsp/simulator.hpp"

namespace qtsp {

struct OptimizerConfig {
  double grad_tol = 1e-5;          // convergence: gradient max-norm below this
  std::uint32_t max_iters = 500;   // outer L-BFGS iterations per start
  double objective_period = 0.0;   // 0: pick per encoding (pi for one-hot, else 2pi)
  std::uint32_t restarts = 100;    // independent starts per depth
  std::uint32_t retry_factor = 5;  // extra draws allowed per start that fails to converge
  std::uint64_t seed = 0;
  std::uint32_t workers = 0;       // 0: QTSP_WORKERS env var, else hardware threads
};

double default_objective_period(EncodingKind kind);

struct MinimizeResult {
  QaoaParams params;
  double energy = 0.0;
  bool converged = false;
  std::uint32_t iterations = 0;
};

/// Local minimum of expectation(qaoa_state(h, .), h) from the given start:
/// L-BFGS with a strong Wolfe line search. Every iterate is wrapped back onto
/// the angle torus; if the wrap shifts the energy (spectra incommensurate with
/// the objective window) the curvature history restarts from the wrapped
/// point. Non-convergence is reported, never thrown.
MinimizeResult minimize(const DiagonalHamiltonian& h, const QaoaParams& init,
                        const OptimizerConfig& cfg);

/// One layer deeper, initialized by duplicating the final angles. Throws for
/// an empty trajectory.
QaoaParams extend_trajectory(const QaoaParams& p);

struct LevelResult {
  std::uint32_t layers = 0;
  double best_feasible_prob = 0.0;  // NaN when no start converged
  double best_energy = 0.0;         // NaN when no start converged
  std::uint32_t accepted = 0;
};

/// Depth sweep 1..r_max. Depths below 5 run best-of-restarts from uniform
/// random angles; from depth 5 on, each converged depth-5 start is deepened
/// one layer at a time (extend_trajectory, re-minimize), so later angles
/// refine earlier ones. Only converged runs count; a depth where every start
/// failed is reported as a NaN row. Deterministic for a fixed seed, workers
/// only split independent starts.
std::vector<LevelResult> run_experiment(const EncodedProblem& problem, std::uint32_t r_max,
                                        const OptimizerConfig& cfg);

}  // namespace qtsp
