#include "ladder/propagator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ladder/errors.hpp"
#include "ladder/kernels.hpp"

namespace ladder {

void PropagationSettings::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (krylov_dim < 2) throw ConfigError("krylov_dim must be at least 2");
  if (!(step_tol > 0.0)) throw ConfigError("step_tol must be positive");
  if (!(dt_min > 0.0)) throw ConfigError("dt_min must be positive");
  if (!(max_bias_step > 0.0)) throw ConfigError("max_bias_step must be positive");
  if (sample_stride < 1) throw ConfigError("sample_stride must be at least 1");
  if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
}

namespace {

using Vector = std::vector<Complex>;

// Orthonormal Lanczos basis of K_m(H, v0) and its tridiagonal projection.
struct Krylov {
  std::vector<Vector> basis;
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis[j] and basis[j+1]
  bool invariant = false;    // happy breakdown: the subspace is exact
  double next_beta = 0.0;    // norm of the residual after the last vector

  int size() const { return static_cast<int>(basis.size()); }
};

// `converged(k)` is consulted after each new tridiagonal entry and may stop
// the expansion early.
template <typename Stop>
Krylov lanczos(const LinearMap& h, const Vector& start, int max_dim, Stop&& converged) {
  const std::size_t n = h.dimension();
  const int m = static_cast<int>(std::min<std::size_t>(max_dim, n));
  Krylov k;
  k.basis.reserve(m);
  k.basis.push_back(start);
  Vector w(n);
  double scale = 0.0;
  for (int j = 0; j < m; ++j) {
    h.apply(k.basis[j], w);
    const double a = kernels::dot_omp(k.basis[j], w).real();
    k.alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis; this
    // subsumes the three-term recurrence.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const Complex c = kernels::dot_omp(k.basis[i], w);
        kernels::axpy_omp(-c, k.basis[i], w);
      }
    }
    const double b = kernels::norm2_omp(w);
    scale = std::max({scale, std::abs(a), b});
    if (b <= 1e-13 * std::max(scale, 1.0)) {
      k.invariant = true;
      k.next_beta = 0.0;
      break;
    }
    if (j + 1 == m) {
      k.next_beta = b;
      k.invariant = (m == static_cast<int>(n));
      break;
    }
    k.next_beta = b;
    if (converged(k)) break;
    k.beta.push_back(b);
    for (auto& x : w) x /= b;
    k.basis.push_back(w);
  }
  return k;
}

Krylov lanczos(const LinearMap& h, const Vector& start, int max_dim) {
  return lanczos(h, start, max_dim, [](const Krylov&) { return false; });
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tridiagonal_eigen(const Krylov& k) {
  const int m = k.size();
  Eigen::VectorXd d(m);
  Eigen::VectorXd e(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) d[i] = k.alpha[i];
  for (int i = 0; i + 1 < m; ++i) e[i] = k.beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  return es;
}

// exp(-i T tau) e_1 and the a posteriori error beta0 * next_beta * |last component|.
struct Propagated {
  Eigen::VectorXcd coeffs;
  double error = 0.0;
};

Propagated propagate(const Krylov& k, const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, double tau,
                     double beta0) {
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const Eigen::MatrixXd& q = es.eigenvectors();
  const Eigen::VectorXcd phases = (lambda.cast<Complex>() * Complex{0.0, -tau}).array().exp().matrix();
  Propagated p;
  p.coeffs = q.cast<Complex>() * phases.cwiseProduct(q.row(0).transpose().cast<Complex>());
  p.error = k.invariant ? 0.0 : beta0 * k.next_beta * std::abs(p.coeffs[k.size() - 1]);
  return p;
}

Vector combine(const Krylov& k, const Eigen::VectorXcd& coeffs, double scale) {
  Vector out(k.basis.front().size(), Complex{0.0, 0.0});
  for (int i = 0; i < k.size(); ++i) kernels::axpy_omp(scale * coeffs[i], k.basis[i], out);
  return out;
}

}  // namespace

GroundState ground_state(const LinearMap& h, double tol, std::uint64_t seed, int krylov_dim, int max_restarts) {
  const std::size_t n = h.dimension();
  if (n == 0) throw DomainError("ground_state: empty operator");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = uniform(rng);
  const double v_norm = kernels::norm2_omp(v);
  for (auto& x : v) x /= v_norm;

  Vector hv(n);
  GroundState result;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    const Krylov k = lanczos(h, v, krylov_dim);
    const auto es = tridiagonal_eigen(k);
    const Eigen::VectorXcd s = es.eigenvectors().col(0).cast<Complex>();
    v = combine(k, s, 1.0);
    const double nv = kernels::norm2_omp(v);
    for (auto& x : v) x /= nv;

    h.apply(v, hv);
    const double energy = kernels::dot_omp(v, hv).real();
    kernels::axpy_omp(-energy, v, hv);
    const double residual = kernels::norm2_omp(hv);
    result.energy = energy;
    result.residual = residual;
    result.restarts = restart;
    if (residual <= tol) {
      result.state.amplitudes = std::move(v);
      return result;
    }
  }
  throw NumericalError("ground_state: Lanczos did not converge, residual " + std::to_string(result.residual),
                       result.residual);
}

StepReport evolve_step(StateVector& psi, const LinearMap& h, double dt, const PropagationSettings& settings) {
  StepReport report;
  report.substeps = 0;
  if (psi.dimension() != h.dimension()) throw DomainError("evolve_step: state and operator dimensions differ");
  double remaining = dt;
  while (remaining > 0.0) {
    const double beta0 = kernels::norm2_omp(psi.amplitudes);
    if (beta0 == 0.0) break;
    Vector start = psi.amplitudes;
    for (auto& x : start) x /= beta0;
    const double target = remaining;
    const Krylov k = lanczos(h, start, settings.krylov_dim, [&](const Krylov& partial) {
      return propagate(partial, tridiagonal_eigen(partial), target, beta0).error <= settings.step_tol;
    });
    const auto es = tridiagonal_eigen(k);

    double tau = remaining;
    Propagated step;
    for (;;) {
      step = propagate(k, es, tau, beta0);
      if (step.error <= settings.step_tol) break;
      tau *= 0.5;
      if (tau < settings.dt_min) {
        throw NumericalError("evolve_step: Krylov error " + std::to_string(step.error) +
                                 " above tolerance at dt_min",
                             step.error);
      }
    }
    const Eigen::VectorXcd& coeffs = step.coeffs;
    const double error = step.error;
    psi.amplitudes = combine(k, coeffs, beta0);
    psi.time += tau;
    report.error_estimate = std::max(report.error_estimate, error);
    ++report.substeps;
    remaining = tau == remaining ? 0.0 : remaining - tau;
  }
  return report;
}

ResultSeries evolve_schedule(const StateVector& psi0, const BiasedHamiltonian& h, const BiasSchedule& schedule,
                             const PropagationSettings& settings, const ObservableSampler& sampler) {
  settings.validate();
  if (psi0.dimension() != h.dimension()) throw DomainError("evolve_schedule: state and operator dimensions differ");
  const double duration = schedule.duration();
  if (duration > settings.max_time) throw ConfigError("schedule duration exceeds max_time");

  double dt = settings.dt;
  if (schedule.mode() == BiasMode::Sweep) dt = std::min(dt, settings.max_bias_step / std::abs(schedule.rate()));
  const std::size_t steps = duration > 0.0 ? static_cast<std::size_t>(std::ceil(duration / dt - 1e-12)) : 0;
  const double step = steps > 0 ? duration / static_cast<double>(steps) : 0.0;

  ResultSeries series;
  StateVector psi = psi0;
  psi.time = 0.0;
  const double norm0 = psi.norm();
  series.records.push_back(sampler(0.0, schedule(0.0), psi));
  for (std::size_t s = 0; s < steps; ++s) {
    const double t0 = static_cast<double>(s) * step;
    const BiasedMap map(h, schedule(t0 + 0.5 * step));
    const auto report = evolve_step(psi, map, step, settings);
    series.diagnostics.substeps += static_cast<std::size_t>(std::max(report.substeps - 1, 0));
    const double t1 = static_cast<double>(s + 1) * step;
    psi.time = t1;
    series.diagnostics.max_norm_drift = std::max(series.diagnostics.max_norm_drift, std::abs(psi.norm() - norm0));
    if ((s + 1) % static_cast<std::size_t>(settings.sample_stride) == 0 || s + 1 == steps) {
      series.records.push_back(sampler(t1, schedule(t1), psi));
    }
  }
  series.diagnostics.steps = steps;
  if (schedule.mode() == BiasMode::Quench) {
    const double e0 = series.records.front().energy;
    const double denom = std::max(std::abs(e0), 1.0);
    for (const auto& r : series.records) {
      series.diagnostics.energy_drift = std::max(series.diagnostics.energy_drift, std::abs(r.energy - e0) / denom);
    }
  }
  series.final_state = std::move(psi);
  return series;
}

}  // namespace ladder
