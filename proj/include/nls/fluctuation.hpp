// Jarzynski-type equations and the second-law inequalities that follow from
// them for heat processes: the general J-equation, heat flow direction, the
// two Clausius inequalities, entropy flow direction, KL-divergence
// monotonicity and the bi-stochastic (pure work) limit.
#pragma once

#include <string>

#include "nls/core.hpp"

namespace nls {

/// One-sided tolerance for inequality checks.
inline constexpr double kSlackTol = 1e-12;

/// Records lhs <= rhs.
struct InequalityReport {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;  // slack >= -kSlackTol

  static InequalityReport make(std::string label, double lhs, double rhs);
};

/// Everything measured in a heat process started from the Gibbs state at beta.
struct HeatProcess {
  GibbsState initial;
  ProbabilityVector final_state;
  double mean_dq;  // <dQ>
  double mean_ds;  // <dS>
};

HeatProcess evaluate_heat_process(const TransitionMatrix& t, const LevelSystem& system,
                                  double beta);

/// <p0_i ptilde_j / (q0_j p_i)> over P(i, j) = T_ji p_i with q0 = T p0.
/// Mathematically identically one; returns the computed value.
double general_j_expectation(const TransitionMatrix& t, const ProbabilityVector& p,
                             const ProbabilityVector& p0, const ProbabilityVector& ptilde);

/// <exp(-(beta - beta0) dQ)> for a Gibbs initial state at beta.
double j_heat_expectation(const GibbsMatrix& g, const LevelSystem& system, double beta);

/// 0 <= (beta - beta0) <dQ>
InequalityReport heat_flow_check(const GibbsMatrix& g, const LevelSystem& system, double beta);

struct ClausiusBounds {
  double beta0_dq;
  double ds;
  double beta_dq;
  InequalityReport second;  // beta0 <dQ> <= <dS>
  InequalityReport first;   // <dS> <= beta <dQ>
};

ClausiusBounds clausius_bounds(const GibbsMatrix& g, const LevelSystem& system, double beta);

/// 0 <= (beta - beta0) <dS>; requires beta >= 0 and beta0 > 0.
InequalityReport entropy_flow_check(const GibbsMatrix& g, const LevelSystem& system, double beta);

/// S(T p || T p0) <= S(p || p0) for any left-stochastic T; p, p0 > 0.
InequalityReport kl_monotonicity_check(const TransitionMatrix& t, const ProbabilityVector& p,
                                       const ProbabilityVector& p0);

struct BistochasticReports {
  InequalityReport entropy_increase;  // 0 <= <dS>, i.e. S(q) >= S(p)
  InequalityReport work_bound;        // <dS> <= beta <w>
};

/// Requires T bi-stochastic, d == 1 and beta >= 0.
BistochasticReports bistochastic_work_check(const TransitionMatrix& t, const LevelSystem& system,
                                            double beta);

}  // namespace nls
