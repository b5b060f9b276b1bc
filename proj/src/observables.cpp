#include "ladder/observables.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "ladder/errors.hpp"
#include "ladder/kernels.hpp"

namespace ladder {

double MomentumGrid::spacing() const { return 2.0 * std::numbers::pi / points; }

double MomentumGrid::k(int j) const { return -std::numbers::pi + spacing() * j; }

SparseOperator hopping_operator(const FockBasis& basis, int create_site, int annihilate_site) {
  const int sites = basis.num_sites();
  if (create_site < 0 || create_site >= sites || annihilate_site < 0 || annihilate_site >= sites) {
    throw DomainError("hopping_operator: site out of range");
  }
  std::vector<Triplet> triplets;
  FockState work(sites);
  for (std::size_t j = 0; j < basis.dimension(); ++j) {
    const auto state = basis.state(j);
    if (create_site == annihilate_site) {
      triplets.push_back({j, j, static_cast<double>(state[create_site])});
      continue;
    }
    const int n_a = state[annihilate_site];
    const int n_c = state[create_site];
    if (n_a == 0 || n_c == basis.max_occupation()) continue;
    std::copy(state.begin(), state.end(), work.begin());
    --work[annihilate_site];
    ++work[create_site];
    triplets.push_back({*basis.find(work), j, std::sqrt(static_cast<double>(n_a * (n_c + 1)))});
  }
  return SparseOperator::from_triplets(basis.dimension(), std::move(triplets), create_site == annihilate_site);
}

double leg_population(const StateVector& psi, const FockBasis& basis) {
  if (psi.dimension() != basis.dimension()) throw DomainError("leg_population: dimension mismatch");
  if (basis.particles() == 0) return 0.0;
  const std::size_t dim = basis.dimension();
  std::vector<double> weights(dim);
  for (std::size_t j = 0; j < dim; ++j) weights[j] = basis.right_count(j);
  const double right = kernels::weighted_population_omp(psi.amplitudes, weights);
  const double total = kernels::norm2_omp(psi.amplitudes);
  return right / (basis.particles() * total * total);
}

namespace {

Eigen::MatrixXcd obdm(const StateVector& psi, const FockBasis& basis, Leg leg, bool parallel) {
  if (psi.dimension() != basis.dimension()) throw DomainError("one_body_density_matrix: dimension mismatch");
  const auto& geom = basis.geometry();
  const int rungs = geom.rungs;
  const int cap = basis.max_occupation();
  const std::size_t dim = basis.dimension();
  const auto blocks = static_cast<std::ptrdiff_t>((dim + kernels::kReductionBlock - 1) / kernels::kReductionBlock);
  std::vector<Eigen::MatrixXcd> partial(blocks, Eigen::MatrixXcd::Zero(rungs, rungs));
  const auto& amp = psi.amplitudes;

#pragma omp parallel for schedule(dynamic) if (parallel && blocks > 1)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    FockState work(basis.num_sites());
    Eigen::MatrixXcd& g = partial[b];
    const std::size_t lo = static_cast<std::size_t>(b) * kernels::kReductionBlock;
    const std::size_t hi = std::min(dim, lo + kernels::kReductionBlock);
    for (std::size_t j = lo; j < hi; ++j) {
      const Complex a = amp[j];
      if (a == Complex{0.0, 0.0}) continue;
      const auto state = basis.state(j);
      for (int s = 0; s < rungs; ++s) {
        const int site_s = geom.site(leg, s);
        const int n_s = state[site_s];
        if (n_s == 0) continue;
        g(s, s) += static_cast<double>(n_s) * std::norm(a);
        for (int m = 0; m < rungs; ++m) {
          if (m == s) continue;
          const int site_m = geom.site(leg, m);
          const int n_m = state[site_m];
          if (n_m == cap) continue;
          std::copy(state.begin(), state.end(), work.begin());
          --work[site_s];
          ++work[site_m];
          const std::size_t jp = *basis.find(work);
          g(m, s) += std::conj(amp[jp]) * a * std::sqrt(static_cast<double>(n_s * (n_m + 1)));
        }
      }
    }
  }
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(rungs, rungs);
  for (const auto& g : partial) total += g;
  return total;
}

}  // namespace

Eigen::MatrixXcd one_body_density_matrix(const StateVector& psi, const FockBasis& basis, Leg leg) {
  return obdm(psi, basis, leg, true);
}

Eigen::MatrixXcd one_body_density_matrix_serial(const StateVector& psi, const FockBasis& basis, Leg leg) {
  return obdm(psi, basis, leg, false);
}

std::vector<double> momentum_distribution(const Eigen::MatrixXcd& g, const MomentumGrid& grid) {
  const int rungs = static_cast<int>(g.rows());
  if (g.cols() != rungs) throw DomainError("momentum_distribution: G must be square");
  std::vector<double> nk(grid.points);
  for (int j = 0; j < grid.points; ++j) {
    const double k = grid.k(j);
    Complex sum = 0.0;
    for (int m = 0; m < rungs; ++m) {
      for (int s = 0; s < rungs; ++s) sum += std::polar(1.0, -k * (m - s)) * g(m, s);
    }
    double value = sum.real() / rungs;
    if (value < 0.0) {
      if (value < -1e-10) throw DomainError("momentum_distribution: negative n_k, G is not positive semidefinite");
      value = 0.0;
    }
    nk[j] = value;
  }
  return nk;
}

std::optional<double> momentum_width(std::span<const double> nk, const MomentumGrid& grid) {
  if (static_cast<int>(nk.size()) != grid.points) throw DomainError("momentum_width: grid size mismatch");
  // Trapezoid on [-pi, pi]: the -pi sample carries both endpoint halves.
  double moment = 0.0;
  double mass = 0.0;
  for (int j = 0; j < grid.points; ++j) {
    const double k = grid.k(j);
    moment += k * k * nk[j];
    mass += nk[j];
  }
  if (!(mass > 0.0)) return std::nullopt;
  return moment / mass;
}

double momentum_sum(std::span<const double> nk, const MomentumGrid& grid, int rungs) {
  double mass = 0.0;
  for (const double v : nk) mass += v;
  return rungs / (2.0 * std::numbers::pi) * grid.spacing() * mass;
}

double entanglement_entropy(const StateVector& psi, const FockBasis& basis, Bipartition cut) {
  if (psi.dimension() != basis.dimension()) throw DomainError("entanglement_entropy: dimension mismatch");
  const auto& geom = basis.geometry();
  std::vector<bool> in_a(basis.num_sites(), false);
  if (cut.kind == CutKind::Legs) {
    for (int i = 0; i < geom.rungs; ++i) in_a[geom.site(Leg::Left, i)] = true;
  } else {
    if (cut.rungs_in_a < 0 || cut.rungs_in_a > geom.rungs) throw DomainError("rung cut out of range");
    for (int i = 0; i < cut.rungs_in_a; ++i) {
      in_a[geom.site(Leg::Left, i)] = true;
      in_a[geom.site(Leg::Right, i)] = true;
    }
  }

  // Schmidt decomposition sector by sector in the particle number of A.
  struct Sector {
    std::map<FockState, int> rows;
    std::map<FockState, int> cols;
    std::vector<std::tuple<int, int, Complex>> entries;
  };
  std::map<int, Sector> sectors;
  for (std::size_t j = 0; j < basis.dimension(); ++j) {
    const auto state = basis.state(j);
    FockState a;
    FockState b;
    int n_a = 0;
    for (int s = 0; s < basis.num_sites(); ++s) {
      if (in_a[s]) {
        a.push_back(state[s]);
        n_a += state[s];
      } else {
        b.push_back(state[s]);
      }
    }
    auto& sec = sectors[n_a];
    const int r = sec.rows.try_emplace(a, static_cast<int>(sec.rows.size())).first->second;
    const int c = sec.cols.try_emplace(b, static_cast<int>(sec.cols.size())).first->second;
    sec.entries.emplace_back(r, c, psi.amplitudes[j]);
  }

  const double norm2 = std::pow(psi.norm(), 2);
  double entropy = 0.0;
  for (const auto& [n_a, sec] : sectors) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sec.rows.size()),
                                                static_cast<Eigen::Index>(sec.cols.size()));
    for (const auto& [r, c, v] : sec.entries) m(r, c) = v;
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    for (const double s : svd.singularValues()) {
      const double p = s * s / norm2;
      if (p > 1e-300) entropy -= p * std::log(p);
    }
  }
  return std::max(entropy, 0.0);
}

}  // namespace ladder
