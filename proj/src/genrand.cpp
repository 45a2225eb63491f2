#include "nls/genrand.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace nls {

namespace {

constexpr int kMaxAttempts = 100;
constexpr double kDistinctness = 1e-6;

bool acceptable_fixed_point(const ProbabilityVector& p) {
  std::vector<double> w(p.weights().data(), p.weights().data() + p.size());
  std::sort(w.begin(), w.end());
  if (w.front() < kDistinctness) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] - w[i - 1] < kDistinctness) return false;
  }
  return true;
}

Eigen::MatrixXd metropolis(const Eigen::VectorXd& target, Rng& rng) {
  const Index n = target.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Index m = 0; m < n; ++m) {
    for (Index k = m + 1; k < n; ++k) {
      const double q = rng.uniform() / double(n);
      t(m, k) = q * std::min(1.0, target[m] / target[k]);
      t(k, m) = q * std::min(1.0, target[k] / target[m]);
    }
  }
  for (Index k = 0; k < n; ++k) t(k, k) = 1.0 - (t.col(k).sum() - t(k, k));
  return t;
}

}  // namespace

TransitionMatrix random_stochastic(Index n, Rng& rng) {
  if (n < 2) throw InvalidInput(fmt::format("random_stochastic: n = {} < 2", n));
  Eigen::MatrixXd t(n, n);
  for (Index col = 0; col < n; ++col) {
    for (Index row = 0; row < n; ++row) t(row, col) = rng.uniform();
    t.col(col) /= t.col(col).sum();
  }
  return TransitionMatrix(std::move(t));
}

TransitionMatrix random_stochastic(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_stochastic(n, rng);
}

ProbabilityVector stationary_distribution(const TransitionMatrix& t) {
  const Index n = t.size();
  const Eigen::MatrixXd a = t.entries() - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < n - 1) {
    throw MultiplicityError(
        fmt::format("stationary_distribution: fixed space has dimension {}", n - lu.rank()));
  }
  Eigen::MatrixXd bordered(n + 1, n);
  bordered.topRows(n) = a;
  bordered.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::VectorXd p = bordered.colPivHouseholderQr().solve(rhs);
  // Rounding can leave entries of magnitude ~1e-17 below zero.
  p = p.cwiseMax(0.0);
  p /= p.sum();
  return ProbabilityVector(std::move(p));
}

RandomInstance random_gibbs_instance(Index n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput(fmt::format("random_gibbs_instance: n = {} < 2", n));
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    TransitionMatrix t = random_stochastic(n, rng);
    const ProbabilityVector p0 = stationary_distribution(t);
    if (!acceptable_fixed_point(p0)) continue;
    std::vector<double> energies(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) energies[std::size_t(i)] = -std::log(p0[i]);
    LevelSystem system = LevelSystem::nondegenerate(std::move(energies));
    GibbsMatrix g = make_gibbs_matrix(std::move(t), system, 1.0);
    return {seed, std::move(system), std::move(g)};
  }
  throw GenerationFailure(fmt::format(
      "random_gibbs_instance: {} draws rejected for n = {}, seed = {}", kMaxAttempts, n, seed));
}

ProbabilityVector random_probability_vector(Index n, Rng& rng) {
  Eigen::VectorXd w(n);
  for (Index i = 0; i < n; ++i) w[i] = rng.uniform();
  w /= w.sum();
  return ProbabilityVector(std::move(w));
}

std::vector<Index> random_permutation(Index n, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[std::size_t(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    std::swap(perm[std::size_t(i)], perm[rng.below(std::uint64_t(i) + 1)]);
  }
  return perm;
}

TransitionMatrix random_bistochastic(Index n, int terms, Rng& rng) {
  if (terms < 1) throw InvalidInput("random_bistochastic: need at least one permutation");
  const ProbabilityVector weights = random_probability_vector(terms, rng);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < terms; ++k) {
    const std::vector<Index> perm = random_permutation(n, rng);
    for (Index col = 0; col < n; ++col) t(perm[std::size_t(col)], col) += weights[k];
  }
  return TransitionMatrix(std::move(t));
}

LevelSystem random_level_system(Index n, Rng& rng, double spread, int max_degeneracy) {
  std::vector<double> e(static_cast<std::size_t>(n));
  std::vector<int> d(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = rng.uniform(-spread, spread);
    d[i] = 1 + int(rng.below(std::uint64_t(std::max(1, max_degeneracy))));
  }
  return LevelSystem(std::move(e), std::move(d));
}

GibbsMatrix random_gibbs_matrix_for(const LevelSystem& system, double beta0, Rng& rng) {
  const Eigen::VectorXd p0 = make_gibbs_state(system, beta0).probabilities().weights();
  Eigen::MatrixXd t = metropolis(p0, rng) * metropolis(p0, rng);
  // Renormalize columns so rounding in the product stays well inside 1e-12.
  for (Index col = 0; col < t.cols(); ++col) t.col(col) /= t.col(col).sum();
  return make_gibbs_matrix(TransitionMatrix(std::move(t)), system, beta0);
}

PerturbationGenerator random_perturbation_generator(Index n, Rng& rng, double eps_max) {
  const TransitionMatrix s = random_stochastic(n, rng);
  Eigen::MatrixXd t = s.entries() - Eigen::MatrixXd::Identity(n, n);
  const double worst_diag = (-t.diagonal()).maxCoeff();
  const double scale = std::min(1.0, 1.0 / (eps_max * worst_diag));
  t *= scale;
  // Restore exact zero column sums after scaling.
  for (Index col = 0; col < n; ++col) t(col, col) -= t.col(col).sum();
  return PerturbationGenerator(std::move(t));
}

}  // namespace nls
