#include "support.hpp"

#include <cmath>

namespace oracle {

std::vector<Occ> brute_force_states(int sites, int particles, int cap) {
  std::vector<Occ> out;
  Occ occ(sites, 0);
  long long total = 1;
  for (int s = 0; s < sites; ++s) total *= cap + 1;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    int sum = 0;
    for (int s = 0; s < sites; ++s) {
      occ[s] = static_cast<int>(c % (cap + 1));
      c /= cap + 1;
      sum += occ[s];
    }
    if (sum == particles) out.push_back(occ);
  }
  return out;
}

std::vector<std::pair<int, int>> bonds(int rungs, ladder::Boundary boundary) {
  std::vector<std::pair<int, int>> b;
  for (int r = 0; r < rungs; ++r) b.push_back({r, rungs + r});
  for (int leg = 0; leg < 2; ++leg) {
    for (int r = 0; r + 1 < rungs; ++r) b.push_back({leg * rungs + r, leg * rungs + r + 1});
    if (boundary == ladder::Boundary::Periodic && rungs >= 3) b.push_back({leg * rungs, leg * rungs + rungs - 1});
  }
  return b;
}

namespace {

std::map<Occ, int> index_map(const std::vector<Occ>& states) {
  std::map<Occ, int> m;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) m[states[i]] = i;
  return m;
}

}  // namespace

Eigen::MatrixXd dense_hamiltonian(const std::vector<Occ>& states, int rungs, const ladder::HamiltonianParams& p,
                                  double bias) {
  const int dim = static_cast<int>(states.size());
  const auto lookup = index_map(states);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const Occ& occ = states[a];
    for (int s = 0; s < 2 * rungs; ++s) {
      h(a, a) += 0.5 * p.interaction * occ[s] * (occ[s] - 1);
      if (s >= rungs) h(a, a) += bias * occ[s];
    }
    for (const auto& [i, j] : bonds(rungs, p.boundary)) {
      const double t = i + rungs == j && i < rungs ? 1.0 : p.leg_hopping;
      // b+_i b_j and b+_j b_i
      for (const auto& [to, from] : {std::pair{i, j}, std::pair{j, i}}) {
        if (occ[from] == 0) continue;
        Occ next = occ;
        const double amp = std::sqrt(static_cast<double>(next[from])) * std::sqrt(static_cast<double>(next[to] + 1));
        next[from] -= 1;
        next[to] += 1;
        const auto it = lookup.find(next);
        if (it == lookup.end()) continue;  // over the cap
        h(it->second, a) += -t * amp;
      }
    }
  }
  return h;
}

Eigen::MatrixXcd obdm(const std::vector<Occ>& states, const std::vector<ladder::Complex>& psi, int rungs, int leg,
                      int /*cap*/) {
  const auto lookup = index_map(states);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(rungs, rungs);
  for (int m = 0; m < rungs; ++m) {
    for (int s = 0; s < rungs; ++s) {
      const int sm = leg * rungs + m;
      const int ss = leg * rungs + s;
      ladder::Complex acc{};
      for (std::size_t a = 0; a < states.size(); ++a) {
        if (states[a][ss] == 0) continue;
        Occ next = states[a];
        double amp = std::sqrt(static_cast<double>(next[ss]));
        next[ss] -= 1;
        amp *= std::sqrt(static_cast<double>(next[sm] + 1));
        next[sm] += 1;
        const auto it = lookup.find(next);
        if (it == lookup.end()) continue;
        acc += std::conj(psi[it->second]) * amp * psi[a];
      }
      g(m, s) = acc;
    }
  }
  return g;
}

Eigen::MatrixXd to_dense(const ladder::SparseOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = op.at(i, j);
  return d;
}

Eigen::VectorXcd evolve(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi, double t) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<ladder::Complex>();
  Eigen::VectorXcd phase(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phase(i) = std::exp(ladder::Complex(0.0, -es.eigenvalues()(i) * t));
  return v * phase.asDiagonal() * v.adjoint() * psi;
}

Eigen::VectorXcd to_eigen(const ladder::StateVector& psi) {
  Eigen::VectorXcd v(psi.amplitudes.size());
  for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) v(i) = psi.amplitudes[i];
  return v;
}

}  // namespace oracle
