// Core types for an N-level system exchanging heat with a bath: level
// structure, probability vectors, Gibbs states, left-stochastic transition
// matrices and the two-point (initial, final) measurement distribution.
//
// Conventions used throughout the library:
//   * matrices are indexed (m, n) = P(m <- n), i.e. columns are the initial
//     level and sum to one;
//   * logarithms are natural and 0 log 0 = 0;
//   * all values are immutable after construction, so every function here is
//     safe to call concurrently.
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nls/error.hpp"

namespace nls {

using Index = Eigen::Index;

/// Tolerance for exact algebraic identities evaluated in double precision.
inline constexpr double kIdentityTol = 1e-12;
/// Tolerance for fixed-point residuals of externally supplied matrices.
inline constexpr double kFixedPointTol = 1e-10;

class LevelSystem {
 public:
  LevelSystem(std::vector<double> energies, std::vector<int> degeneracies);

  /// All degeneracies equal to one.
  static LevelSystem nondegenerate(std::vector<double> energies);

  Index size() const { return energies_.size(); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::VectorXi& degeneracies() const { return degeneracies_; }
  double energy(Index n) const { return energies_[n]; }
  int degeneracy(Index n) const { return degeneracies_[n]; }
  bool is_nondegenerate() const;

 private:
  Eigen::VectorXd energies_;
  Eigen::VectorXi degeneracies_;
};

class ProbabilityVector {
 public:
  /// Validates nonnegativity and normalization (absolute tolerance 1e-12).
  explicit ProbabilityVector(Eigen::VectorXd weights);

  static ProbabilityVector uniform(Index n);
  static ProbabilityVector point_mass(Index n, Index k);

  Index size() const { return weights_.size(); }
  double operator[](Index i) const { return weights_[i]; }
  const Eigen::VectorXd& weights() const { return weights_; }
  bool strictly_positive() const { return weights_.minCoeff() > 0.0; }

 private:
  Eigen::VectorXd weights_;
};

class GibbsState {
 public:
  GibbsState(double beta, ProbabilityVector probabilities, double log_partition)
      : beta_(beta), probabilities_(std::move(probabilities)), log_z_(log_partition) {}

  double beta() const { return beta_; }
  const ProbabilityVector& probabilities() const { return probabilities_; }
  double log_partition_function() const { return log_z_; }
  /// May overflow to +inf for extreme beta; log_partition_function() never does.
  double partition_function() const;

 private:
  double beta_;
  ProbabilityVector probabilities_;
  double log_z_;
};

class TransitionMatrix {
 public:
  /// Validates square shape, nonnegative entries and unit column sums
  /// (absolute tolerance 1e-12).
  explicit TransitionMatrix(Eigen::MatrixXd entries);

  static TransitionMatrix identity(Index n);
  /// Every column equal to `column`.
  static TransitionMatrix rank_one(const ProbabilityVector& column);

  Index size() const { return entries_.rows(); }
  double operator()(Index m, Index n) const { return entries_(m, n); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  bool is_bistochastic(double tol = kIdentityTol) const;

 private:
  Eigen::MatrixXd entries_;
};

struct CertificationReport {
  double max_column_deviation = 0.0;
  double max_fixed_point_residual = 0.0;
  double min_entry = 0.0;
  double tolerance = kFixedPointTol;
  bool passed = false;

  std::string describe() const;
};

CertificationReport certify_gibbs_matrix(const Eigen::MatrixXd& t, const LevelSystem& system,
                                         double beta0, double tol = kFixedPointTol);
CertificationReport certify_gibbs_matrix(const TransitionMatrix& t, const LevelSystem& system,
                                         double beta0, double tol = kFixedPointTol);

/// A transition matrix that leaves the Gibbs state at beta0 invariant.
class GibbsMatrix {
 public:
  const TransitionMatrix& matrix() const { return matrix_; }
  double beta0() const { return beta0_; }
  const ProbabilityVector& fixed_point() const { return fixed_point_; }
  const CertificationReport& certification() const { return report_; }
  Index size() const { return matrix_.size(); }

 private:
  friend GibbsMatrix make_gibbs_matrix(TransitionMatrix, const LevelSystem&, double, double);
  GibbsMatrix(TransitionMatrix t, double beta0, ProbabilityVector fixed, CertificationReport r)
      : matrix_(std::move(t)), beta0_(beta0), fixed_point_(std::move(fixed)), report_(r) {}

  TransitionMatrix matrix_;
  double beta0_;
  ProbabilityVector fixed_point_;
  CertificationReport report_;
};

/// Certifies `t` against the Gibbs state of `system` at `beta0`; throws
/// CertificationError if the report fails.
GibbsMatrix make_gibbs_matrix(TransitionMatrix t, const LevelSystem& system, double beta0,
                              double tol = kFixedPointTol);

class TwoPointDistribution {
 public:
  TwoPointDistribution(const TransitionMatrix& t, const ProbabilityVector& p);

  Index size() const { return joint_.rows(); }
  /// joint(m, n) = T(m, n) p(n)
  double operator()(Index m, Index n) const { return joint_(m, n); }
  const Eigen::MatrixXd& joint() const { return joint_; }
  const ProbabilityVector& initial_distribution() const { return initial_; }
  const ProbabilityVector& final_distribution() const { return final_; }

 private:
  Eigen::MatrixXd joint_;
  ProbabilityVector initial_;
  ProbabilityVector final_;
};

/// Random variable on elementary events (m final, n initial).
using RandomVariable = std::function<double(Index m, Index n)>;

GibbsState make_gibbs_state(const LevelSystem& system, double beta);

ProbabilityVector propagate(const TransitionMatrix& t, const ProbabilityVector& p);

/// Sum over positive-probability events only; zero-probability events are
/// never evaluated. Throws EvaluationError naming (m, n) on a non-finite value.
double expectation(const TwoPointDistribution& joint, const RandomVariable& rv);

double mean_energy(const LevelSystem& system, const ProbabilityVector& p);
double second_moment_energy(const LevelSystem& system, const ProbabilityVector& p);

/// -sum p_n log(p_n / d_n)
double entropy(const LevelSystem& system, const ProbabilityVector& p);

/// sum q_n log(q_n / p_n); +inf when q is not absolutely continuous w.r.t. p.
double kl_divergence(const ProbabilityVector& q, const ProbabilityVector& p);

/// Heat E_m - E_n.
RandomVariable delta_q_rv(const LevelSystem& system);

/// Entropy increase log(p_n/d_n) - log(q_m/d_m). Only evaluate it with
/// q = T p: then joint(m,n) = T(m,n) p_n > 0 forces p_n > 0 and
/// q_m >= T(m,n) p_n > 0, so both logarithms are finite on the support.
RandomVariable delta_s_rv(const LevelSystem& system, const ProbabilityVector& p,
                          const ProbabilityVector& q);

}  // namespace nls
