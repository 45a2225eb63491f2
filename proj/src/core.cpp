#include "nls/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace nls {

namespace {

void require_same_size(Index a, Index b, const char* what) {
  if (a != b) {
    throw InvalidInput(fmt::format("{}: dimension mismatch ({} vs {})", what, a, b));
  }
}

// x log(x / d) with the 0 log 0 = 0 convention.
double xlogx_over(double x, double d) { return x > 0.0 ? x * std::log(x / d) : 0.0; }

}  // namespace

LevelSystem::LevelSystem(std::vector<double> energies, std::vector<int> degeneracies) {
  if (energies.size() != degeneracies.size()) {
    throw InvalidInput(fmt::format("LevelSystem: {} energies but {} degeneracies",
                                   energies.size(), degeneracies.size()));
  }
  if (energies.size() < 2) {
    throw InvalidInput("LevelSystem: at least two levels are required");
  }
  for (std::size_t n = 0; n < energies.size(); ++n) {
    if (!std::isfinite(energies[n])) {
      throw InvalidInput(fmt::format("LevelSystem: energy[{}] is not finite", n));
    }
    if (degeneracies[n] < 1) {
      throw InvalidInput(fmt::format("LevelSystem: degeneracy[{}] = {} < 1", n, degeneracies[n]));
    }
  }
  energies_ = Eigen::Map<const Eigen::VectorXd>(energies.data(), Index(energies.size()));
  degeneracies_ = Eigen::Map<const Eigen::VectorXi>(degeneracies.data(), Index(degeneracies.size()));
}

LevelSystem LevelSystem::nondegenerate(std::vector<double> energies) {
  std::vector<int> ones(energies.size(), 1);
  return LevelSystem(std::move(energies), std::move(ones));
}

bool LevelSystem::is_nondegenerate() const { return (degeneracies_.array() == 1).all(); }

ProbabilityVector::ProbabilityVector(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1) throw InvalidInput("ProbabilityVector: empty");
  for (Index i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0 || w > 1.0 + kIdentityTol) {
      throw InvalidInput(fmt::format("ProbabilityVector: weight[{}] = {} outside [0, 1]", i, w));
    }
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kIdentityTol) {
    throw InvalidInput(fmt::format("ProbabilityVector: weights sum to {:.17g}", total));
  }
}

ProbabilityVector ProbabilityVector::uniform(Index n) {
  return ProbabilityVector(Eigen::VectorXd::Constant(n, 1.0 / double(n)));
}

ProbabilityVector ProbabilityVector::point_mass(Index n, Index k) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[k] = 1.0;
  return ProbabilityVector(std::move(w));
}

double GibbsState::partition_function() const { return std::exp(log_z_); }

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InvalidInput(fmt::format("TransitionMatrix: shape {}x{} is not square",
                                   entries_.rows(), entries_.cols()));
  }
  for (Index n = 0; n < entries_.cols(); ++n) {
    for (Index m = 0; m < entries_.rows(); ++m) {
      const double t = entries_(m, n);
      if (!std::isfinite(t) || t < 0.0) {
        throw InvalidInput(fmt::format("TransitionMatrix: entry ({}, {}) = {} is negative", m, n, t));
      }
    }
    const double col = entries_.col(n).sum();
    if (std::abs(col - 1.0) > kIdentityTol) {
      throw InvalidInput(fmt::format("TransitionMatrix: column {} sums to {:.17g}", n, col));
    }
  }
}

TransitionMatrix TransitionMatrix::identity(Index n) {
  return TransitionMatrix(Eigen::MatrixXd::Identity(n, n));
}

TransitionMatrix TransitionMatrix::rank_one(const ProbabilityVector& column) {
  const Index n = column.size();
  return TransitionMatrix(column.weights() * Eigen::RowVectorXd::Ones(n));
}

bool TransitionMatrix::is_bistochastic(double tol) const {
  return ((entries_.rowwise().sum().array() - 1.0).abs() <= tol).all();
}

std::string CertificationReport::describe() const {
  return fmt::format(
      "max column-sum deviation {:.3e}, max fixed-point residual {:.3e}, min entry {:.3e}, "
      "tolerance {:.1e}: {}",
      max_column_deviation, max_fixed_point_residual, min_entry, tolerance,
      passed ? "pass" : "FAIL");
}

CertificationReport certify_gibbs_matrix(const Eigen::MatrixXd& t, const LevelSystem& system,
                                         double beta0, double tol) {
  require_same_size(t.rows(), system.size(), "certify_gibbs_matrix");
  require_same_size(t.cols(), system.size(), "certify_gibbs_matrix");
  CertificationReport r;
  r.tolerance = tol;
  r.min_entry = t.minCoeff();
  r.max_column_deviation = (t.colwise().sum().array() - 1.0).abs().maxCoeff();
  const Eigen::VectorXd p0 = make_gibbs_state(system, beta0).probabilities().weights();
  r.max_fixed_point_residual = (t * p0 - p0).cwiseAbs().maxCoeff();
  r.passed = t.allFinite() && r.min_entry >= 0.0 && r.max_column_deviation <= tol &&
             r.max_fixed_point_residual <= tol;
  return r;
}

CertificationReport certify_gibbs_matrix(const TransitionMatrix& t, const LevelSystem& system,
                                         double beta0, double tol) {
  return certify_gibbs_matrix(t.entries(), system, beta0, tol);
}

GibbsMatrix make_gibbs_matrix(TransitionMatrix t, const LevelSystem& system, double beta0,
                              double tol) {
  const CertificationReport report = certify_gibbs_matrix(t, system, beta0, tol);
  if (!report.passed) {
    throw CertificationError("not a Gibbs matrix: " + report.describe());
  }
  ProbabilityVector fixed = make_gibbs_state(system, beta0).probabilities();
  return GibbsMatrix(std::move(t), beta0, std::move(fixed), report);
}

TwoPointDistribution::TwoPointDistribution(const TransitionMatrix& t, const ProbabilityVector& p)
    : joint_(t.entries() * p.weights().asDiagonal()), initial_(p), final_(propagate(t, p)) {}

GibbsState make_gibbs_state(const LevelSystem& system, double beta) {
  if (!std::isfinite(beta)) throw InvalidInput("make_gibbs_state: beta is not finite");
  const Index n = system.size();
  Eigen::VectorXd log_w(n);
  for (Index i = 0; i < n; ++i) {
    log_w[i] = std::log(double(system.degeneracy(i))) - beta * system.energy(i);
  }
  const double shift = log_w.maxCoeff();
  Eigen::VectorXd w = (log_w.array() - shift).exp().matrix();
  const double total = w.sum();
  w /= total;
  return GibbsState(beta, ProbabilityVector(std::move(w)), shift + std::log(total));
}

ProbabilityVector propagate(const TransitionMatrix& t, const ProbabilityVector& p) {
  require_same_size(t.size(), p.size(), "propagate");
  Eigen::VectorXd q = t.entries() * p.weights();
  return ProbabilityVector(std::move(q));
}

double expectation(const TwoPointDistribution& joint, const RandomVariable& rv) {
  double sum = 0.0;
  const Index n_levels = joint.size();
  for (Index n = 0; n < n_levels; ++n) {
    for (Index m = 0; m < n_levels; ++m) {
      const double w = joint(m, n);
      if (w <= 0.0) continue;
      const double y = rv(m, n);
      if (!std::isfinite(y)) {
        throw EvaluationError(
            fmt::format("random variable is not finite at (m={}, n={})", m, n), long(m), long(n));
      }
      sum += w * y;
    }
  }
  return sum;
}

double mean_energy(const LevelSystem& system, const ProbabilityVector& p) {
  require_same_size(system.size(), p.size(), "mean_energy");
  return system.energies().dot(p.weights());
}

double second_moment_energy(const LevelSystem& system, const ProbabilityVector& p) {
  require_same_size(system.size(), p.size(), "second_moment_energy");
  return system.energies().cwiseAbs2().dot(p.weights());
}

double entropy(const LevelSystem& system, const ProbabilityVector& p) {
  require_same_size(system.size(), p.size(), "entropy");
  double s = 0.0;
  for (Index n = 0; n < p.size(); ++n) s -= xlogx_over(p[n], double(system.degeneracy(n)));
  return s;
}

double kl_divergence(const ProbabilityVector& q, const ProbabilityVector& p) {
  require_same_size(q.size(), p.size(), "kl_divergence");
  double s = 0.0;
  for (Index n = 0; n < q.size(); ++n) {
    if (q[n] <= 0.0) continue;
    if (p[n] <= 0.0) return std::numeric_limits<double>::infinity();
    s += q[n] * std::log(q[n] / p[n]);
  }
  return s;
}

RandomVariable delta_q_rv(const LevelSystem& system) {
  return [e = system.energies()](Index m, Index n) { return e[m] - e[n]; };
}

RandomVariable delta_s_rv(const LevelSystem& system, const ProbabilityVector& p,
                          const ProbabilityVector& q) {
  require_same_size(system.size(), p.size(), "delta_s_rv");
  require_same_size(system.size(), q.size(), "delta_s_rv");
  Eigen::VectorXd log_p(p.size());
  Eigen::VectorXd log_q(q.size());
  for (Index i = 0; i < p.size(); ++i) {
    const double d = double(system.degeneracy(i));
    log_p[i] = std::log(p[i] / d);
    log_q[i] = std::log(q[i] / d);
  }
  return [log_p = std::move(log_p), log_q = std::move(log_q)](Index m, Index n) {
    return log_p[n] - log_q[m];
  };
}

}  // namespace nls
