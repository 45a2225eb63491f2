#include "nls/spin_boson.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include <fmt/format.h>

#include "nls/fluctuation.hpp"

namespace nls::spin_boson {

namespace {

constexpr double kTailBound = 1e-12;
constexpr double kDegeneracyTol = 1e-10;

double tail_bound(double beta0, int n_max) {
  return std::exp(-beta0 * n_max) / -std::expm1(-beta0);
}

// Final spin distribution (indexed 0,1,2 for m = 1,0,-1) after time
// averaging, starting from the basis state at `start` inside a block whose
// basis states carry the spin indices in `spins`.
template <int N>
Eigen::Vector3d averaged_block_distribution(const Eigen::Matrix<double, N, N>& h,
                                            const std::array<int, N>& spins, int start) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> solver(h);
  const auto& ev = solver.eigenvalues();
  for (int j = 1; j < N; ++j) {
    if (ev[j] - ev[j - 1] <= kDegeneracyTol) {
      throw NumericalDegeneracy(
          fmt::format("eigenvalues {} and {} inside a block are not separated", ev[j - 1], ev[j]));
    }
  }
  const auto& v = solver.eigenvectors();
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int s = 0; s < N; ++s) {
    double prob = 0.0;
    for (int j = 0; j < N; ++j) prob += v(start, j) * v(start, j) * v(s, j) * v(s, j);
    out[spins[s]] += prob;
  }
  return out;
}

// Column contributions of oscillator level k: column i is the averaged final
// spin distribution starting from |m_i, k>.
Eigen::Matrix3d level_contribution(int k, double lambda) {
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  // m = 1: |1, k> sits at the top of triplet n = k + 1.
  c.col(0) = averaged_block_distribution<3>(make_triplet_block(k + 1, lambda).matrix, {0, 1, 2}, 0);
  if (k == 0) {
    // Doublet {|0,0>, |-1,1>}: H = 1/2 + lambda sqrt(2) sigma_x, eigenvectors
    // (1, +-1)/sqrt(2) for any lambda != 0, so the average splits evenly.
    if (2.0 * std::abs(lambda) * std::sqrt(2.0) <= kDegeneracyTol) {
      throw NumericalDegeneracy("doublet eigenvalues are not separated");
    }
    c(1, 1) = 0.5;
    c(2, 1) = 0.5;
    // Singlet |-1,0> is annihilated by the interaction.
    c(2, 2) = 1.0;
  } else {
    c.col(1) = averaged_block_distribution<3>(make_triplet_block(k, lambda).matrix, {0, 1, 2}, 1);
    if (k == 1) {
      c(1, 2) = 0.5;
      c(2, 2) = 0.5;
    } else {
      c.col(2) =
          averaged_block_distribution<3>(make_triplet_block(k - 1, lambda).matrix, {0, 1, 2}, 2);
    }
  }
  return c;
}

std::vector<double> oscillator_weights(const SpinBosonParams& params) {
  std::vector<double> w(std::size_t(params.n_max()) + 1);
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(-params.beta0() * double(k));
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

TransitionMatrix reduce_contributions(const std::vector<double>& weights,
                                      const std::vector<Eigen::Matrix3d>& contributions) {
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  for (std::size_t k = 0; k < weights.size(); ++k) t += weights[k] * contributions[k];
  return TransitionMatrix(Eigen::MatrixXd(t));
}

}  // namespace

double lerch_phi(double z, double s, double a) {
  if (!std::isfinite(z) || !std::isfinite(s) || !std::isfinite(a)) {
    throw DomainError("lerch_phi: non-finite argument");
  }
  if (std::abs(z) >= 1.0) throw DomainError(fmt::format("lerch_phi: |z| = {} >= 1", std::abs(z)));
  if (a <= 0.0) throw DomainError(fmt::format("lerch_phi: a = {} <= 0", a));

  constexpr long kMaxTerms = 100'000'000;
  double sum = 0.0;
  double zk = 1.0;
  for (long k = 0; k < kMaxTerms; ++k) {
    const double term = zk / std::pow(double(k) + a, s);
    if (k >= 10 && std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    sum += term;
    zk *= z;
  }
  throw DomainError(fmt::format("lerch_phi: series did not converge for z = {}", z));
}

SpinBosonParams::SpinBosonParams(double beta0, double lambda, int n_max)
    : beta0_(beta0), lambda_(lambda), n_max_(n_max) {
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) {
    throw DomainError(fmt::format("spin-boson: beta0 must be positive, got {}", beta0));
  }
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw DomainError("spin-boson: lambda must be finite and nonzero");
  }
  if (n_max < 1 || tail_bound(beta0, n_max) > kTailBound) {
    throw DomainError(fmt::format(
        "spin-boson: n_max = {} leaves oscillator tail {:.3e} > 1e-12 (need n_max >= {})", n_max,
        n_max < 1 ? 1.0 : tail_bound(beta0, n_max), min_n_max(beta0)));
  }
}

int SpinBosonParams::min_n_max(double beta0) {
  if (!(beta0 > 0.0)) throw DomainError("spin-boson: beta0 must be positive");
  int n = std::max(1, int(std::floor(std::log(1.0 / (kTailBound * -std::expm1(-beta0))) / beta0)));
  while (tail_bound(beta0, n) > kTailBound) ++n;
  return n;
}

SpinBosonParams SpinBosonParams::with_auto_truncation(double beta0, double lambda) {
  return SpinBosonParams(beta0, lambda, min_n_max(beta0));
}

std::array<double, 3> TripletBlock::closed_form_eigenvalues() const {
  const double c = n + 0.5;
  const double split = std::abs(lambda) * std::sqrt(4.0 * n + 2.0);
  return {c - split, c, c + split};
}

TripletBlock make_triplet_block(int n, double lambda) {
  if (n < 1) throw DomainError("triplet blocks start at n = 1");
  const double c = n + 0.5;
  const double upper = lambda * std::sqrt(2.0 * n);
  const double lower = lambda * std::sqrt(2.0 * n + 2.0);
  Eigen::Matrix3d h;
  h << c, upper, 0.0,
       upper, c, lower,
       0.0, lower, c;
  return {n, lambda, h};
}

TransitionMatrix analytic_transition_matrix(double beta0) {
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) {
    throw DomainError(fmt::format("analytic_transition_matrix: beta0 must be positive, got {}", beta0));
  }
  const double b = beta0;
  const double e = std::exp(b);
  const double em1 = std::expm1(b);
  const double phi = lerch_phi(std::exp(-b), 2.0, 1.5);
  // arccoth(e^{b/2}) = artanh(e^{-b/2})
  const double acoth_half = std::atanh(std::exp(-b / 2.0));
  const double atanh_half = acoth_half;
  const double sh = std::sinh(b / 2.0) * atanh_half;

  Eigen::Matrix3d t;
  t(0, 0) = em1 * (12.0 / em1 + 8.0 * std::exp(b / 2.0) * acoth_half + 3.0 * std::exp(-b) * phi - 8.0) / 32.0;
  t(0, 1) = (1.0 - 2.0 * sh) / 4.0;
  t(0, 2) = 3.0 / 32.0 * std::exp(-3.0 * b) * (4.0 * e - em1 * phi);
  t(1, 0) = e * (1.0 - 2.0 * sh) / 4.0;
  t(1, 1) = 0.5;
  t(1, 2) = std::exp(-1.5 * b) * (std::exp(b / 2.0) + em1 * atanh_half) / 4.0;
  t(2, 0) = 3.0 / 32.0 * std::exp(-b) * (4.0 * e - em1 * phi);
  t(2, 1) = (2.0 * sh + 1.0) / 4.0;
  t(2, 2) = std::exp(-3.0 * b) *
            (4.0 * std::exp(2.0 * b) *
                 (11.0 * std::sinh(b) + 5.0 * std::cosh(b) - 4.0 * std::sinh(b / 2.0) * acoth_half - 2.0) +
             3.0 * em1 * phi) /
            32.0;
  // The printed formulas cancel terms of size e^{beta0}; past beta0 ~ 10 the
  // result is no longer stochastic to 1e-12 in double precision.
  const double drift = (t.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (!(drift <= kIdentityTol) || !(t.minCoeff() >= 0.0)) {
    throw DomainError(fmt::format(
        "analytic_transition_matrix: closed form loses precision at beta0 = {} "
        "(column-sum drift {:.3e})",
        beta0, drift));
  }
  return TransitionMatrix(Eigen::MatrixXd(t));
}

TransitionMatrix numerical_transition_matrix_serial(const SpinBosonParams& params) {
  const std::vector<double> weights = oscillator_weights(params);
  std::vector<Eigen::Matrix3d> contributions(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    contributions[k] = level_contribution(int(k), params.lambda());
  }
  return reduce_contributions(weights, contributions);
}

TransitionMatrix numerical_transition_matrix(const SpinBosonParams& params) {
  const std::vector<double> weights = oscillator_weights(params);
  std::vector<Eigen::Matrix3d> contributions(weights.size());
  const long levels = long(weights.size());
  // Exceptions must not escape the parallel region; collect and rethrow.
  std::vector<std::exception_ptr> errors(weights.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < levels; ++k) {
    try {
      contributions[std::size_t(k)] = level_contribution(int(k), params.lambda());
    } catch (...) {
      errors[std::size_t(k)] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return reduce_contributions(weights, contributions);
}

LevelSystem spin1_level_system() { return LevelSystem::nondegenerate({1.0, 0.0, -1.0}); }

GibbsMatrix spin1_gibbs_matrix(double beta0) {
  return make_gibbs_matrix(analytic_transition_matrix(beta0), spin1_level_system(), beta0);
}

EntropyArgmax delta_s_argmax(double beta0) {
  const GibbsMatrix g = spin1_gibbs_matrix(beta0);
  const LevelSystem system = spin1_level_system();
  const auto objective = [&](double beta) {
    return std::abs(evaluate_heat_process(g.matrix(), system, beta).mean_ds);
  };
  constexpr double kTol = 1e-6;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = beta0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kTol) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double beta = 0.5 * (lo + hi);
  const bool boundary = beta < 2.0 * kTol || beta > beta0 - 2.0 * kTol;
  return {beta, objective(beta), boundary};
}

}  // namespace nls::spin_boson
