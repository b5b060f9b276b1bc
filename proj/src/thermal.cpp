#include "ladder/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ladder/errors.hpp"

namespace ladder {

Spectrum full_spectrum(const SparseOperator& h, std::size_t dense_cap) {
  const std::size_t dim = h.dimension();
  if (dim > dense_cap) {
    throw ConfigError("full_spectrum: dimension " + std::to_string(dim) + " exceeds the dense cap " +
                      std::to_string(dense_cap) + "; lower N, L_s or n_max, or raise dense_cap");
  }
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto rp = h.row_ptr();
  const auto cols = h.cols();
  const auto vals = h.values();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) dense(i, cols[p]) = vals[p];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw NumericalError("full_spectrum: dense eigensolver failed", 0.0);
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd boltzmann_weights(const Spectrum& spectrum, double beta) {
  const auto& e = spectrum.values;
  const double reference = beta >= 0.0 ? e.minCoeff() : e.maxCoeff();
  Eigen::VectorXd w = (-beta * (e.array() - reference)).exp().matrix();
  const double z = w.sum();
  if (!std::isfinite(z) || z <= 0.0) throw NumericalError("boltzmann_weights: partition function overflow", z);
  return w / z;
}

Eigen::VectorXd eigen_expectations(const Spectrum& spectrum, const SparseOperator& a) {
  const auto& v = spectrum.vectors;
  const Eigen::Index dim = v.rows();
  if (static_cast<std::size_t>(dim) != a.dimension()) throw DomainError("eigen_expectations: dimension mismatch");
  // (A V) column by column against V.
  Eigen::MatrixXd av = Eigen::MatrixXd::Zero(dim, v.cols());
  const auto rp = a.row_ptr();
  const auto cols = a.cols();
  const auto vals = a.values();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) av.row(i) += vals[p] * v.row(cols[p]);
  }
  return (v.array() * av.array()).colwise().sum().transpose();
}

namespace {

double weighted(const Eigen::VectorXd& weights, const Eigen::VectorXd& values) {
  const double r = weights.dot(values);
  if (std::isnan(r)) throw NumericalError("thermal expectation is NaN", r);
  return r;
}

}  // namespace

double thermal_expectation(const Spectrum& spectrum, double beta, const SparseOperator& a) {
  return weighted(boltzmann_weights(spectrum, beta), eigen_expectations(spectrum, a));
}

double thermal_energy(const Spectrum& spectrum, double beta) {
  return weighted(boltzmann_weights(spectrum, beta), spectrum.values);
}

BetaMatch match_beta(const Spectrum& spectrum, double target, double tol) {
  const double e_min = spectrum.values.minCoeff();
  const double e_max = spectrum.values.maxCoeff();
  if (!(target >= e_min && target <= e_max)) {
    throw DomainError("match_beta: target energy " + std::to_string(target) + " outside spectral range [" +
                      std::to_string(e_min) + ", " + std::to_string(e_max) + "]");
  }
  BetaMatch m;
  const double e_inf = thermal_energy(spectrum, 0.0);
  m.negative = target > e_inf;

  constexpr double kBetaLimit = 1e8;
  double lo = -50.0;
  double hi = 50.0;
  while (thermal_energy(spectrum, hi) > target && hi < kBetaLimit) hi *= 2.0;
  while (thermal_energy(spectrum, lo) < target && lo > -kBetaLimit) lo *= 2.0;

  auto finish = [&](double beta) {
    m.beta = beta;
    m.energy = thermal_energy(spectrum, beta);
    m.residual = std::abs(m.energy - target);
    return m;
  };
  if (target - e_min <= tol || thermal_energy(spectrum, hi) > target + tol) {
    m.saturated = true;
    return finish(hi);
  }
  if (e_max - target <= tol || thermal_energy(spectrum, lo) < target - tol) {
    m.saturated = true;
    return finish(lo);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = thermal_energy(spectrum, mid);
    if (std::abs(e - target) <= tol) return finish(mid);
    if (e > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) break;
  }
  return finish(0.5 * (lo + hi));
}

Eigen::MatrixXcd thermal_one_body_density_matrix(const LadderSystem& system, const Spectrum& spectrum, double beta,
                                                 Leg leg) {
  const auto& geom = system.basis.geometry();
  const int rungs = geom.rungs;
  const Eigen::VectorXd w = boltzmann_weights(spectrum, beta);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(rungs, rungs);
  for (int m = 0; m < rungs; ++m) {
    for (int s = m; s < rungs; ++s) {
      const auto op = hopping_operator(system.basis, geom.site(leg, m), geom.site(leg, s));
      const double value = weighted(w, eigen_expectations(spectrum, op));
      g(m, s) = value;
      g(s, m) = value;
    }
  }
  return g;
}

double quench_energy(const LadderSystem& system, const StateVector& psi0, double final_bias) {
  std::vector<Complex> h_psi(psi0.dimension());
  system.hamiltonian.apply(final_bias, psi0.amplitudes, h_psi);
  Complex e = 0.0;
  for (std::size_t i = 0; i < h_psi.size(); ++i) e += std::conj(psi0.amplitudes[i]) * h_psi[i];
  return e.real() / std::pow(psi0.norm(), 2);
}

ThermalPoint thermal_point(const LadderSystem& system, double final_bias, double energy, double tol,
                           std::size_t dense_cap) {
  const auto spectrum = full_spectrum(system.hamiltonian.at(final_bias), dense_cap);
  const auto match = match_beta(spectrum, energy, tol);
  ThermalPoint p;
  p.final_bias = final_bias;
  p.beta = match.beta;
  p.energy = match.energy;
  p.negative_beta = match.beta < 0.0;
  if (match.saturated) {
    p.flagged = true;
    p.note = "beta clipped at bracket limit";
  } else if (p.negative_beta) {
    p.flagged = true;
    p.note = "negative temperature";
  }
  const double n = system.particles();
  p.n_right = n > 0 ? thermal_expectation(spectrum, match.beta, system.hamiltonian.bias_generator()) / n : 0.0;
  for (const Leg leg : {Leg::Left, Leg::Right}) {
    const auto g = thermal_one_body_density_matrix(system, spectrum, match.beta, leg);
    const auto nk = momentum_distribution(g, system.grid);
    (leg == Leg::Left ? p.k2_left : p.k2_right) = momentum_width(nk, system.grid);
  }
  return p;
}

std::vector<ThermalPoint> thermal_curve(const LadderSystem& system, std::span<const double> final_biases,
                                        std::optional<std::span<const double>> energies, const StateVector& initial,
                                        double tol, std::size_t dense_cap, int threads) {
  if (energies && energies->size() != final_biases.size()) {
    throw ConfigError("thermal_curve: energies and biases differ in length");
  }
  std::vector<ThermalPoint> points(final_biases.size());
  const auto count = static_cast<std::ptrdiff_t>(final_biases.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double bias = final_biases[i];
    try {
      const double e = energies ? (*energies)[i] : quench_energy(system, initial, bias);
      points[i] = thermal_point(system, bias, e, tol, dense_cap);
    } catch (const std::exception& ex) {
      points[i].final_bias = bias;
      points[i].flagged = true;
      points[i].note = ex.what();
      points[i].n_right = std::numeric_limits<double>::quiet_NaN();
      points[i].beta = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return points;
}

Eigen::MatrixXd single_particle_hamiltonian(const HamiltonianParams& params, const LadderGeometry& geometry,
                                            double bias) {
  params.validate(geometry);
  const int sites = geometry.num_sites();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sites, sites);
  for (int i = 0; i < geometry.rungs; ++i) {
    const int l = geometry.site(Leg::Left, i);
    const int r = geometry.site(Leg::Right, i);
    h(l, r) = h(r, l) = -kRungHopping;
    h(r, r) = bias;
  }
  const int last = params.boundary == Boundary::Periodic ? geometry.rungs : geometry.rungs - 1;
  for (const Leg leg : {Leg::Left, Leg::Right}) {
    for (int i = 0; i < last; ++i) {
      const int a = geometry.site(leg, i);
      const int b = geometry.site(leg, (i + 1) % geometry.rungs);
      h(a, b) -= params.leg_hopping;
      h(b, a) -= params.leg_hopping;
    }
  }
  return h;
}

namespace {

// Solves sum_i 1/(exp(beta e_i + gamma) - 1) = n for gamma.
double solve_gamma(const Eigen::VectorXd& e, double beta, double n) {
  const double gamma_min = (-beta * e.array()).maxCoeff();
  auto count = [&](double u) {
    const double gamma = gamma_min + std::exp(u);
    double total = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) total += 1.0 / std::expm1(beta * e[i] + gamma);
    return total;
  };
  double lo = -200.0;
  double hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) > n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return gamma_min + std::exp(0.5 * (lo + hi));
}

std::vector<double> occupations(const Eigen::VectorXd& e, double beta, double gamma) {
  std::vector<double> f(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) f[i] = 1.0 / std::expm1(beta * e[i] + gamma);
  return f;
}

}  // namespace

IdealGasPoint ideal_gas_point(const HamiltonianParams& params, const LadderGeometry& geometry, int particles,
                              double final_bias, double energy) {
  if (particles < 1) throw DomainError("ideal gas needs at least one particle");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(single_particle_hamiltonian(params, geometry, final_bias));
  const Eigen::VectorXd& e = es.eigenvalues();
  const Eigen::MatrixXd& phi = es.eigenvectors();
  const double n = particles;

  IdealGasPoint out;
  out.point.final_bias = final_bias;
  out.mode_energies.assign(e.data(), e.data() + e.size());

  auto mean_energy = [&](double beta) {
    const double gamma = solve_gamma(e, beta, n);
    const auto f = occupations(e, beta, gamma);
    double total = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) total += f[i] * e[i];
    return total;
  };

  const double lowest = n * e.minCoeff();
  const double highest = n * e.maxCoeff();
  const Eigen::Index modes = e.size();
  if (energy <= lowest || energy >= highest) {
    // Unreachable energy: condense into the extreme mode (beta -> +-inf).
    out.point.flagged = true;
    out.point.note = "energy outside (N e_min, N e_max); condensed into the extreme mode";
    out.point.beta = energy <= lowest ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
    out.occupations.assign(modes, 0.0);
    out.occupations[energy <= lowest ? 0 : modes - 1] = n;
  } else {
    double lo = -50.0;
    double hi = 50.0;
    while (mean_energy(hi) > energy && hi < 1e6) hi *= 2.0;
    while (mean_energy(lo) < energy && lo > -1e6) lo *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mean_energy(mid) > energy) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.point.beta = 0.5 * (lo + hi);
    out.gamma = solve_gamma(e, out.point.beta, n);
    out.occupations = occupations(e, out.point.beta, out.gamma);
    out.point.negative_beta = out.point.beta < 0.0;
    if (out.point.negative_beta) {
      out.point.flagged = true;
      out.point.note = "negative temperature";
    }
  }

  double energy_sum = 0.0;
  double right = 0.0;
  for (Eigen::Index i = 0; i < modes; ++i) {
    energy_sum += out.occupations[i] * e[i];
    for (int r = 0; r < geometry.rungs; ++r) {
      right += out.occupations[i] * phi(geometry.site(Leg::Right, r), i) * phi(geometry.site(Leg::Right, r), i);
    }
  }
  out.point.energy = energy_sum;
  out.point.n_right = right / n;
  const MomentumGrid grid = MomentumGrid::for_rungs(geometry.rungs);
  for (const Leg leg : {Leg::Left, Leg::Right}) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(geometry.rungs, geometry.rungs);
    for (int m = 0; m < geometry.rungs; ++m) {
      for (int s = 0; s < geometry.rungs; ++s) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < modes; ++i) {
          sum += out.occupations[i] * phi(geometry.site(leg, m), i) * phi(geometry.site(leg, s), i);
        }
        g(m, s) = sum;
      }
    }
    (leg == Leg::Left ? out.point.k2_left : out.point.k2_right) = momentum_width(momentum_distribution(g, grid), grid);
  }
  return out;
}

std::vector<ThermalPoint> ideal_gas_reference(const HamiltonianParams& params, const LadderGeometry& geometry,
                                              int particles, std::span<const double> final_biases,
                                              std::optional<double> energy) {
  const double e = energy.value_or(-2.0 * params.leg_hopping * particles);
  std::vector<ThermalPoint> points;
  points.reserve(final_biases.size());
  for (const double bias : final_biases) points.push_back(ideal_gas_point(params, geometry, particles, bias, e).point);
  return points;
}

}  // namespace ladder
