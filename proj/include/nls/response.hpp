// Linear response around the bath temperature. The slope
//   a = d(beta <dQ>)/d(beta) at beta = beta0
// is computed four independent ways (direct double sum, symmetrized
// quadratic form, variance of dQ at the fixed point, central finite
// difference) so that each can check the others.
#pragma once

#include <span>
#include <vector>

#include "nls/core.hpp"

namespace nls {

struct SlopeBundle {
  double direct = 0.0;
  double symmetrized = 0.0;
  double fluctuation = 0.0;
  double numeric = 0.0;

  /// Pairwise agreement (1e-9 relative for the closed forms, 1e-4 for the
  /// finite difference) and nonnegativity within 1e-10.
  bool consistent() const;
};

/// Zero-column-sum generator t of a weak-coupling family T = I + eps t.
class PerturbationGenerator {
 public:
  explicit PerturbationGenerator(Eigen::MatrixXd t);

  static PerturbationGenerator zero(Index n);

  Index size() const { return t_.rows(); }
  const Eigen::MatrixXd& matrix() const { return t_; }
  /// I + eps t is entrywise nonnegative.
  bool valid_for(double eps) const;
  TransitionMatrix at(double eps) const;

 private:
  Eigen::MatrixXd t_;
};

inline constexpr double kDefaultSlopeStep = 1e-4;

double slope_direct(const GibbsMatrix& g, const LevelSystem& system);
double slope_symmetrized(const GibbsMatrix& g, const LevelSystem& system);
double slope_fluctuation(const GibbsMatrix& g, const LevelSystem& system);
/// Central difference of beta <dQ>(beta) at beta0; h must lie in
/// [1e-6, 1e-2] * max(1, beta0).
double slope_numeric(const GibbsMatrix& g, const LevelSystem& system, double h);
/// h defaults to kDefaultSlopeStep * max(1, beta0).
SlopeBundle slope_bundle(const GibbsMatrix& g, const LevelSystem& system, double h = 0.0);

/// Central-difference slopes of beta <dQ> and <dS> at beta0; both equal a.
struct TangentSlopes {
  double heat;
  double entropy;
};
TangentSlopes common_tangent(const GibbsMatrix& g, const LevelSystem& system, double h = 0.0);

struct CumulantCheck {
  std::vector<double> t_values;
  std::vector<double> residuals;  // |log<e^{t dQ}> - (k1 t + k2 t^2 / 2)|
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double max_deviation = 0.0;
  double fitted_exponent = 0.0;  // NaN if fewer than two nonzero residuals
};

/// dQ is sampled at the fixed point (beta = beta0).
CumulantCheck cumulant_check(const GibbsMatrix& g, const LevelSystem& system,
                             std::span<const double> t_values);

/// The heat conduction coefficient a * beta0 in <dQ> = -a beta0 (tau - tau0).
double newton_cooling_coefficient(const GibbsMatrix& g, const LevelSystem& system);

/// Largest deviation of <dQ> from the linear cooling law at
/// tau = tau0 (1 +- delta). Requires beta0 > 0.
double newton_cooling_residual(const GibbsMatrix& g, const LevelSystem& system, double delta);

struct WeakCouplingFit {
  std::vector<double> eps;
  std::vector<double> residuals;  // |<dS> - beta dE|
  double exponent = 0.0;          // NaN if fewer than two nonzero residuals
};

WeakCouplingFit weak_coupling_residual(const PerturbationGenerator& gen, const LevelSystem& system,
                                       double beta, std::span<const double> eps_list);

/// Least-squares slope of log|y| against log|x|, skipping pairs where either
/// is zero. NaN when fewer than two pairs remain.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace nls
