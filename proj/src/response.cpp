#include "nls/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nls/fluctuation.hpp"

namespace nls {

namespace {

double relative_gap(double a, double b, double scale) {
  return std::abs(a - b) / std::max(1.0, std::abs(scale));
}

double mean_heat(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  return evaluate_heat_process(g.matrix(), system, beta).mean_dq;
}

double default_step(const GibbsMatrix& g, double h) {
  return h > 0.0 ? h : kDefaultSlopeStep * std::max(1.0, g.beta0());
}

}  // namespace

bool SlopeBundle::consistent() const {
  const double floor = -1e-10;
  if (direct < floor || symmetrized < floor || fluctuation < floor || numeric < floor) return false;
  return relative_gap(direct, symmetrized, direct) <= 1e-9 &&
         relative_gap(direct, fluctuation, direct) <= 1e-9 &&
         relative_gap(direct, numeric, direct) <= 1e-4;
}

PerturbationGenerator::PerturbationGenerator(Eigen::MatrixXd t) : t_(std::move(t)) {
  if (t_.rows() != t_.cols() || t_.rows() < 1) {
    throw InvalidInput("PerturbationGenerator: matrix must be square");
  }
  if (!t_.allFinite()) throw InvalidInput("PerturbationGenerator: non-finite entry");
  for (Index n = 0; n < t_.cols(); ++n) {
    const double col = t_.col(n).sum();
    if (std::abs(col) > kIdentityTol) {
      throw InvalidInput(fmt::format("PerturbationGenerator: column {} sums to {:.3e}", n, col));
    }
  }
}

PerturbationGenerator PerturbationGenerator::zero(Index n) {
  return PerturbationGenerator(Eigen::MatrixXd::Zero(n, n));
}

bool PerturbationGenerator::valid_for(double eps) const {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(size(), size()) + eps * t_;
  return m.minCoeff() >= 0.0;
}

TransitionMatrix PerturbationGenerator::at(double eps) const {
  if (!valid_for(eps)) {
    throw PreconditionError(fmt::format("I + eps t has a negative entry at eps = {}", eps));
  }
  return TransitionMatrix(Eigen::MatrixXd::Identity(size(), size()) + eps * t_);
}

double slope_direct(const GibbsMatrix& g, const LevelSystem& system) {
  const Eigen::MatrixXd& t = g.matrix().entries();
  const Eigen::VectorXd& p0 = g.fixed_point().weights();
  const Eigen::VectorXd& e = system.energies();
  double sum = 0.0;
  for (Index m = 0; m < t.cols(); ++m) {
    for (Index n = 0; n < t.rows(); ++n) sum += t(n, m) * p0[m] * e[m] * (e[m] - e[n]);
  }
  return g.beta0() * sum;
}

double slope_symmetrized(const GibbsMatrix& g, const LevelSystem& system) {
  const Eigen::MatrixXd& t = g.matrix().entries();
  const Eigen::VectorXd& p0 = g.fixed_point().weights();
  const Eigen::VectorXd& e = system.energies();
  double sum = 0.0;
  for (Index m = 0; m < t.cols(); ++m) {
    for (Index n = 0; n < t.rows(); ++n) {
      const double de = e[m] - e[n];
      sum += (t(n, m) * p0[m] + t(m, n) * p0[n]) * de * de;
    }
  }
  return 0.25 * g.beta0() * sum;
}

double slope_fluctuation(const GibbsMatrix& g, const LevelSystem& system) {
  const TwoPointDistribution joint(g.matrix(), g.fixed_point());
  const RandomVariable dq = delta_q_rv(system);
  const double k1 = expectation(joint, dq);
  const double m2 = expectation(joint, [&](Index m, Index n) {
    const double x = dq(m, n);
    return x * x;
  });
  return 0.5 * g.beta0() * (m2 - k1 * k1);
}

double slope_numeric(const GibbsMatrix& g, const LevelSystem& system, double h) {
  const double scale = std::max(1.0, g.beta0());
  if (!(h >= 1e-6 * scale && h <= 1e-2 * scale)) {
    throw InvalidInput(fmt::format("slope_numeric: step {} outside [1e-6, 1e-2] * {}", h, scale));
  }
  const double b0 = g.beta0();
  const double up = (b0 + h) * mean_heat(g, system, b0 + h);
  const double down = (b0 - h) * mean_heat(g, system, b0 - h);
  return (up - down) / (2.0 * h);
}

SlopeBundle slope_bundle(const GibbsMatrix& g, const LevelSystem& system, double h) {
  return {slope_direct(g, system), slope_symmetrized(g, system), slope_fluctuation(g, system),
          slope_numeric(g, system, default_step(g, h))};
}

TangentSlopes common_tangent(const GibbsMatrix& g, const LevelSystem& system, double h) {
  h = default_step(g, h);
  const double b0 = g.beta0();
  const HeatProcess up = evaluate_heat_process(g.matrix(), system, b0 + h);
  const HeatProcess down = evaluate_heat_process(g.matrix(), system, b0 - h);
  return {((b0 + h) * up.mean_dq - (b0 - h) * down.mean_dq) / (2.0 * h),
          (up.mean_ds - down.mean_ds) / (2.0 * h)};
}

CumulantCheck cumulant_check(const GibbsMatrix& g, const LevelSystem& system,
                             std::span<const double> t_values) {
  const TwoPointDistribution joint(g.matrix(), g.fixed_point());
  const RandomVariable dq = delta_q_rv(system);
  CumulantCheck out;
  out.kappa1 = expectation(joint, dq);
  out.kappa2 = expectation(joint, [&](Index m, Index n) {
                 const double x = dq(m, n) - out.kappa1;
                 return x * x;
               });
  // Dividing by the summed mass makes t = 0 exact despite rounding in T p0.
  const double mass = expectation(joint, [](Index, Index) { return 1.0; });
  for (const double t : t_values) {
    const double mgf =
        expectation(joint, [&](Index m, Index n) { return std::exp(t * dq(m, n)); }) / mass;
    const double r = std::abs(std::log(mgf) - (out.kappa1 * t + 0.5 * out.kappa2 * t * t));
    out.t_values.push_back(t);
    out.residuals.push_back(r);
    out.max_deviation = std::max(out.max_deviation, r);
  }
  out.fitted_exponent = loglog_slope(out.t_values, out.residuals);
  return out;
}

double newton_cooling_coefficient(const GibbsMatrix& g, const LevelSystem& system) {
  return slope_direct(g, system) * g.beta0();
}

double newton_cooling_residual(const GibbsMatrix& g, const LevelSystem& system, double delta) {
  if (g.beta0() <= 0.0) throw PreconditionError("newton_cooling_residual: requires beta0 > 0");
  const double coeff = newton_cooling_coefficient(g, system);
  const double tau0 = 1.0 / g.beta0();
  double worst = 0.0;
  for (const double sign : {1.0, -1.0}) {
    const double tau = tau0 * (1.0 + sign * delta);
    const double law = -coeff * (tau - tau0);
    worst = std::max(worst, std::abs(mean_heat(g, system, 1.0 / tau) - law));
  }
  return worst;
}

WeakCouplingFit weak_coupling_residual(const PerturbationGenerator& gen, const LevelSystem& system,
                                       double beta, std::span<const double> eps_list) {
  if (gen.size() != system.size()) {
    throw InvalidInput("weak_coupling_residual: generator and level system differ in size");
  }
  for (const double eps : eps_list) {
    if (!gen.valid_for(eps)) {
      throw PreconditionError(
          fmt::format("weak_coupling_residual: I + eps t has a negative entry at eps = {}", eps));
    }
  }
  WeakCouplingFit fit;
  for (const double eps : eps_list) {
    const HeatProcess hp = evaluate_heat_process(gen.at(eps), system, beta);
    fit.eps.push_back(eps);
    fit.residuals.push_back(std::abs(hp.mean_ds - beta * hp.mean_dq));
  }
  fit.exponent = loglog_slope(fit.eps, fit.residuals);
  return fit;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
    if (xs[i] == 0.0 || ys[i] == 0.0) continue;
    lx.push_back(std::log(std::abs(xs[i])));
    ly.push_back(std::log(std::abs(ys[i])));
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double k = double(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

}  // namespace nls
