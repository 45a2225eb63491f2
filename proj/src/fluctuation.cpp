#include "nls/fluctuation.hpp"

#include <cmath>

#include <fmt/format.h>

namespace nls {

InequalityReport InequalityReport::make(std::string label, double lhs, double rhs) {
  const double slack = rhs - lhs;
  return {std::move(label), lhs, rhs, slack, slack >= -kSlackTol};
}

HeatProcess evaluate_heat_process(const TransitionMatrix& t, const LevelSystem& system,
                                  double beta) {
  if (t.size() != system.size()) {
    throw InvalidInput("evaluate_heat_process: matrix and level system differ in size");
  }
  GibbsState initial = make_gibbs_state(system, beta);
  const TwoPointDistribution joint(t, initial.probabilities());
  const double dq = expectation(joint, delta_q_rv(system));
  const double ds = expectation(
      joint, delta_s_rv(system, initial.probabilities(), joint.final_distribution()));
  return {std::move(initial), joint.final_distribution(), dq, ds};
}

double general_j_expectation(const TransitionMatrix& t, const ProbabilityVector& p,
                             const ProbabilityVector& p0, const ProbabilityVector& ptilde) {
  const Index n = t.size();
  if (p.size() != n || p0.size() != n || ptilde.size() != n) {
    throw InvalidInput("general_j_expectation: dimension mismatch");
  }
  if (!p.strictly_positive()) {
    throw PreconditionError("general_j_expectation: p must be strictly positive");
  }
  if (!p0.strictly_positive()) {
    throw PreconditionError("general_j_expectation: p0 must be strictly positive");
  }
  const Eigen::VectorXd q0 = t.entries() * p0.weights();
  const TwoPointDistribution joint(t, p);
  return expectation(joint, [&](Index j, Index i) {
    // q0_j >= T_ji p0_i > 0 on the support, so this never divides by zero
    // for valid input; a zero would surface as an EvaluationError.
    return p0[i] * ptilde[j] / (q0[j] * p[i]);
  });
}

double j_heat_expectation(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  const GibbsState state = make_gibbs_state(system, beta);
  const TwoPointDistribution joint(g.matrix(), state.probabilities());
  const double dbeta = beta - g.beta0();
  const Eigen::VectorXd& e = system.energies();
  double sum = 0.0;
  for (Index n = 0; n < joint.size(); ++n) {
    for (Index m = 0; m < joint.size(); ++m) {
      const double w = joint(m, n);
      if (w <= 0.0) continue;
      sum += std::exp(std::log(w) - dbeta * (e[m] - e[n]));
    }
  }
  return sum;
}

InequalityReport heat_flow_check(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  const HeatProcess hp = evaluate_heat_process(g.matrix(), system, beta);
  return InequalityReport::make("heat_flow", 0.0, (beta - g.beta0()) * hp.mean_dq);
}

ClausiusBounds clausius_bounds(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  const HeatProcess hp = evaluate_heat_process(g.matrix(), system, beta);
  const double b0q = g.beta0() * hp.mean_dq;
  const double bq = beta * hp.mean_dq;
  return {b0q, hp.mean_ds, bq, InequalityReport::make("clausius_second", b0q, hp.mean_ds),
          InequalityReport::make("clausius_first", hp.mean_ds, bq)};
}

InequalityReport entropy_flow_check(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  if (beta < 0.0) {
    throw PreconditionError(
        fmt::format("entropy_flow_check: requires beta >= 0, got {}", beta));
  }
  if (g.beta0() <= 0.0) {
    throw PreconditionError("entropy_flow_check: requires beta0 > 0");
  }
  const HeatProcess hp = evaluate_heat_process(g.matrix(), system, beta);
  return InequalityReport::make("entropy_flow", 0.0, (beta - g.beta0()) * hp.mean_ds);
}

InequalityReport kl_monotonicity_check(const TransitionMatrix& t, const ProbabilityVector& p,
                                       const ProbabilityVector& p0) {
  if (!p.strictly_positive() || !p0.strictly_positive()) {
    throw PreconditionError("kl_monotonicity_check: p and p0 must be strictly positive");
  }
  const double after = kl_divergence(propagate(t, p), propagate(t, p0));
  const double before = kl_divergence(p, p0);
  return InequalityReport::make("kl_monotonicity", after, before);
}

BistochasticReports bistochastic_work_check(const TransitionMatrix& t, const LevelSystem& system,
                                            double beta) {
  if (!t.is_bistochastic()) {
    throw PreconditionError("bistochastic_work_check: row sums of T are not all 1");
  }
  if (!system.is_nondegenerate()) {
    throw PreconditionError("bistochastic_work_check: degeneracies must all be 1");
  }
  if (beta < 0.0) {
    throw PreconditionError("bistochastic_work_check: requires beta >= 0");
  }
  const HeatProcess hp = evaluate_heat_process(t, system, beta);
  const double work = mean_energy(system, hp.final_state) -
                      mean_energy(system, hp.initial.probabilities());
  return {InequalityReport::make("shannon_entropy_increase", 0.0, hp.mean_ds),
          InequalityReport::make("work_bound", hp.mean_ds, beta * work)};
}

}  // namespace nls
