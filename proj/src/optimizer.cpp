#include "qtsp/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

namespace qtsp {

namespace {

constexpr double kC1 = 1e-4;  // Armijo slope fraction
constexpr double kC2 = 0.9;   // curvature fraction
constexpr std::size_t kHistory = 10;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Flat parameter layout [theta_obj..., theta_mix...], matching gradient().
QaoaParams unpack(const std::vector<double>& x, double period) {
  const std::size_t r = x.size() / 2;
  QaoaParams p;
  p.objective_period = period;
  p.theta_obj.assign(x.begin(), x.begin() + r);
  p.theta_mix.assign(x.begin() + r, x.end());
  return p;
}

std::vector<double> pack(const QaoaParams& p) {
  std::vector<double> x;
  x.reserve(2 * p.theta_obj.size());
  x.insert(x.end(), p.theta_obj.begin(), p.theta_obj.end());
  x.insert(x.end(), p.theta_mix.begin(), p.theta_mix.end());
  return x;
}

struct Eval {
  double f = 0.0;
  std::vector<double> g;
};

Eval evaluate(const DiagonalHamiltonian& h, const std::vector<double>& x, double period) {
  const QaoaParams p = unpack(x, period);
  Eval e;
  e.f = expectation(qaoa_state(h, p), h);
  e.g = gradient(h, p);
  return e;
}

struct LinePoint {
  bool ok = false;
  double alpha = 0.0;
  std::vector<double> x;
  Eval e;
};

// Strong Wolfe line search (bracket then bisection zoom). Falls back to the
// best strictly-decreasing point seen if the Wolfe pair never materializes.
LinePoint line_search(const DiagonalHamiltonian& h, const std::vector<double>& x0,
                      const std::vector<double>& d, const Eval& e0, double period) {
  const double phi0 = e0.f;
  const double dphi0 = dot(e0.g, d);
  LinePoint best;  // best decrease fallback

  auto probe = [&](double a) {
    LinePoint p;
    p.alpha = a;
    p.x = x0;
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] += a * d[i];
    p.e = evaluate(h, p.x, period);
    if (p.e.f < phi0 - 1e-15 * (1.0 + std::abs(phi0)) &&
        (!best.ok || p.e.f < best.e.f)) {
      best = p;
      best.ok = true;
    }
    return p;
  };

  auto wolfe_ok = [&](const LinePoint& p) {
    return p.e.f <= phi0 + kC1 * p.alpha * dphi0 && std::abs(dot(p.e.g, d)) <= -kC2 * dphi0;
  };

  auto zoom = [&](LinePoint lo, double hi_a) -> LinePoint {
    for (int it = 0; it < 40; ++it) {
      const double a = 0.5 * (lo.alpha + hi_a);
      LinePoint p = probe(a);
      if (p.e.f > phi0 + kC1 * a * dphi0 || p.e.f >= lo.e.f) {
        hi_a = a;
      } else {
        if (wolfe_ok(p)) {
          p.ok = true;
          return p;
        }
        if (dot(p.e.g, d) * (hi_a - lo.alpha) >= 0.0) hi_a = lo.alpha;
        lo = p;
      }
      if (std::abs(hi_a - lo.alpha) < 1e-14) break;
    }
    return best;
  };

  double a_prev = 0.0;
  Eval e_prev = e0;
  double a = 1.0;
  for (int it = 0; it < 20; ++it) {
    LinePoint p = probe(a);
    if (p.e.f > phi0 + kC1 * a * dphi0 || (it > 0 && p.e.f >= e_prev.f)) {
      LinePoint lo;
      lo.alpha = a_prev;
      lo.e = e_prev;
      lo.x = x0;
      for (std::size_t i = 0; i < lo.x.size(); ++i) lo.x[i] += a_prev * d[i];
      return zoom(lo, a);
    }
    if (wolfe_ok(p)) {
      p.ok = true;
      return p;
    }
    if (dot(p.e.g, d) >= 0.0) return zoom(p, a_prev);
    a_prev = a;
    e_prev = p.e;
    a *= 2.0;
    if (a > 1e6) break;
  }
  return best;
}

}  // namespace

double default_objective_period(EncodingKind kind) {
  // One-hot penalties land on even integers, halving the objective window.
  return kind == EncodingKind::qubo ? std::numbers::pi : 2.0 * std::numbers::pi;
}

MinimizeResult minimize(const DiagonalHamiltonian& h, const QaoaParams& init,
                        const OptimizerConfig& cfg) {
  const double period = init.objective_period;
  std::vector<double> x = pack(wrap_angles(init));
  Eval e = evaluate(h, x, period);

  std::deque<std::pair<std::vector<double>, std::vector<double>>> hist;  // (s, y)
  MinimizeResult res;

  for (std::uint32_t iter = 0; iter < cfg.max_iters; ++iter) {
    if (max_abs(e.g) < cfg.grad_tol) break;

    // Two-loop recursion for -H g.
    std::vector<double> d = e.g;
    std::vector<double> alpha(hist.size());
    for (std::size_t i = hist.size(); i-- > 0;) {
      const auto& [s, y] = hist[i];
      alpha[i] = dot(s, d) / dot(y, s);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] -= alpha[i] * y[j];
    }
    if (!hist.empty()) {
      const auto& [s, y] = hist.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (double& v : d) v *= gamma;
    }
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const auto& [s, y] = hist[i];
      const double beta = dot(y, d) / dot(y, s);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] += (alpha[i] - beta) * s[j];
    }
    for (double& v : d) v = -v;
    if (dot(d, e.g) >= 0.0) {  // stale curvature; fall back to steepest descent
      hist.clear();
      d = e.g;
      for (double& v : d) v = -v;
    }

    LinePoint step = line_search(h, x, d, e, period);
    res.iterations = iter + 1;
    if (!step.ok) break;

    std::vector<double> y(e.g.size());
    std::vector<double> s(e.g.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j] = step.x[j] - x[j];
      y[j] = step.e.g[j] - e.g[j];
    }

    const std::vector<double> xw = pack(wrap_angles(unpack(step.x, period)));
    if (xw == step.x) {
      x = step.x;
      e = step.e;
    } else {
      // Same point on the torus unless the spectrum clashes with the window;
      // then the quasi-Newton history no longer describes the neighbourhood.
      Eval ew = evaluate(h, xw, period);
      if (std::abs(ew.f - step.e.f) > 1e-9 * (1.0 + std::abs(step.e.f))) hist.clear();
      x = xw;
      e = ew;
    }
    if (dot(s, y) > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      hist.emplace_back(std::move(s), std::move(y));
      if (hist.size() > kHistory) hist.pop_front();
    }
  }

  res.converged = max_abs(e.g) < cfg.grad_tol;
  res.params = unpack(x, period);
  res.energy = e.f;
  return res;
}

QaoaParams extend_trajectory(const QaoaParams& p) {
  if (p.layers() == 0) throw std::invalid_argument("extend_trajectory: empty trajectory");
  QaoaParams q = p;
  q.theta_obj.push_back(q.theta_obj.back());
  q.theta_mix.push_back(q.theta_mix.back());
  return q;
}

std::vector<LevelResult> run_experiment(const EncodedProblem& problem, std::uint32_t r_max,
                                        const OptimizerConfig& cfg) {
  std::vector<LevelResult> out;
  if (r_max == 0) return out;

  const DiagonalHamiltonian h = build_diagonal(problem);
  const double period =
      cfg.objective_period > 0.0 ? cfg.objective_period : default_objective_period(problem.kind);

  std::uint32_t workers = cfg.workers;
  if (workers == 0)
    if (const char* env = std::getenv("QTSP_WORKERS")) workers = std::uint32_t(std::atoi(env));
  if (workers == 0) workers = std::thread::hardware_concurrency();
  workers = std::max<std::uint32_t>(1, std::min(workers, cfg.restarts));

  // table[r][slot]: (feasible prob, energy) of the converged run, if any.
  using Cell = std::optional<std::pair<double, double>>;
  std::vector<std::vector<Cell>> table(r_max + 1, std::vector<Cell>(cfg.restarts));

  auto random_start = [&](std::uint32_t layers, std::uint32_t slot,
                          std::uint32_t attempt) {
    const std::uint64_t key =
        splitmix64(cfg.seed ^ splitmix64((std::uint64_t(layers) << 40) ^
                                         (std::uint64_t(slot) << 16) ^ attempt));
    std::mt19937_64 rng(key);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    QaoaParams p;
    p.objective_period = period;
    for (std::uint32_t i = 0; i < layers; ++i) {
      p.theta_obj.push_back(u01(rng) * period);
      p.theta_mix.push_back(u01(rng) * std::numbers::pi);
    }
    return p;
  };

  auto converged_start = [&](std::uint32_t layers,
                             std::uint32_t slot) -> std::optional<MinimizeResult> {
    for (std::uint32_t a = 0; a < std::max<std::uint32_t>(1, cfg.retry_factor); ++a) {
      MinimizeResult res = minimize(h, random_start(layers, slot, a), cfg);
      if (res.converged) return res;
    }
    return std::nullopt;
  };

  auto record = [&](std::uint32_t r, std::uint32_t slot, const MinimizeResult& res) {
    const StateVector s = qaoa_state(h, res.params);
    table[r][slot] = std::make_pair(feasible_probability(s, h), res.energy);
  };

  // Task list: one per (shallow depth, slot), plus one trajectory per slot.
  struct Task {
    std::uint32_t level;  // 0 marks a trajectory chain
    std::uint32_t slot;
  };
  std::vector<Task> tasks;
  for (std::uint32_t r = 1; r <= std::min<std::uint32_t>(r_max, 4); ++r)
    for (std::uint32_t j = 0; j < cfg.restarts; ++j) tasks.push_back({r, j});
  if (r_max >= 5)
    for (std::uint32_t j = 0; j < cfg.restarts; ++j) tasks.push_back({0, j});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto [level, slot] = tasks[t];
      if (level != 0) {
        if (auto res = converged_start(level, slot)) record(level, slot, *res);
        continue;
      }
      auto base = converged_start(5, slot);
      if (!base) continue;
      record(5, slot, *base);
      QaoaParams cur = base->params;
      for (std::uint32_t r = 6; r <= r_max; ++r) {
        MinimizeResult res = minimize(h, extend_trajectory(cur), cfg);
        cur = res.params;
        if (res.converged) record(r, slot, res);
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::uint32_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::uint32_t r = 1; r <= r_max; ++r) {
    LevelResult lr;
    lr.layers = r;
    lr.best_feasible_prob = nan;
    lr.best_energy = nan;
    for (const Cell& c : table[r]) {
      if (!c) continue;
      ++lr.accepted;
      if (std::isnan(lr.best_feasible_prob) || c->first > lr.best_feasible_prob)
        lr.best_feasible_prob = c->first;
      if (std::isnan(lr.best_energy) || c->second < lr.best_energy)
        lr.best_energy = c->second;
    }
    out.push_back(lr);
  }
  return out;
}

}  // namespace qtsp
