#include "nls/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>

#include <fmt/format.h>
#include <json.hpp>

#include "nls/response.hpp"
#include "nls/sweep.hpp"

namespace nls {

namespace {

constexpr double kJTol = 1e-10;
constexpr double kClosedFormSlopeTol = 1e-9;
constexpr double kNumericSlopeTol = 1e-4;
constexpr double kCumulantExponent = 2.5;
constexpr double kCumulantT[] = {-0.1, -0.05, -0.025, 0.025, 0.05, 0.1};

std::string at_beta(const char* name, double beta) { return fmt::format("{}[beta={}]", name, beta); }

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

std::vector<InequalityReport> certification_checks(const InstanceData& instance) {
  const CertificationReport r =
      certify_gibbs_matrix(instance.transition, instance.system, instance.beta0);
  return {InequalityReport::make("certify.nonnegative_entries", 0.0, r.min_entry),
          InequalityReport::make("certify.column_sums", r.max_column_deviation, kIdentityTol),
          InequalityReport::make("certify.fixed_point", r.max_fixed_point_residual, r.tolerance)};
}

std::vector<InequalityReport> checks_at(const GibbsMatrix& g, const LevelSystem& system,
                                        double beta, const std::set<std::string>& suites) {
  std::vector<InequalityReport> out;
  const bool jarzynski = suites.contains("jarzynski");
  const bool clausius = suites.contains("clausius");
  if (jarzynski) {
    const double jh = j_heat_expectation(g, system, beta);
    out.push_back(InequalityReport::make(at_beta("j_heat", beta), std::abs(jh - 1.0), kJTol));
    const ProbabilityVector p = make_gibbs_state(system, beta).probabilities();
    if (p.strictly_positive() && g.fixed_point().strictly_positive()) {
      const double jg =
          general_j_expectation(g.matrix(), p, g.fixed_point(), propagate(g.matrix(), p));
      out.push_back(InequalityReport::make(at_beta("j_general", beta), std::abs(jg - 1.0), kJTol));
    }
  }
  if (clausius) {
    InequalityReport heat = heat_flow_check(g, system, beta);
    heat.label = at_beta("heat_flow", beta);
    out.push_back(std::move(heat));
    ClausiusBounds cb = clausius_bounds(g, system, beta);
    cb.second.label = at_beta("clausius_second", beta);
    cb.first.label = at_beta("clausius_first", beta);
    out.push_back(std::move(cb.second));
    out.push_back(std::move(cb.first));
    if (beta >= 0.0 && g.beta0() > 0.0) {
      InequalityReport ent = entropy_flow_check(g, system, beta);
      ent.label = at_beta("entropy_flow", beta);
      out.push_back(std::move(ent));
    }
  }
  if (suites.contains("kl")) {
    const ProbabilityVector p = make_gibbs_state(system, beta).probabilities();
    if (p.strictly_positive() && g.fixed_point().strictly_positive()) {
      InequalityReport kl = kl_monotonicity_check(g.matrix(), p, g.fixed_point());
      kl.label = at_beta("kl_monotonicity", beta);
      out.push_back(std::move(kl));
    }
  }
  return out;
}

std::vector<InequalityReport> slope_checks(const GibbsMatrix& g, const LevelSystem& system) {
  std::vector<InequalityReport> out;
  const SlopeBundle a = slope_bundle(g, system);
  out.push_back(InequalityReport::make("slope.symmetrized_nonnegative", 0.0, a.symmetrized));
  out.push_back(InequalityReport::make("slope.direct_nonnegative", -1e-10, a.direct));
  out.push_back(InequalityReport::make("slope.fluctuation_nonnegative", -1e-10, a.fluctuation));
  out.push_back(InequalityReport::make("slope.numeric_nonnegative", -1e-10, a.numeric));
  out.push_back(InequalityReport::make("slope.direct_vs_symmetrized",
                                       relative_gap(a.direct, a.symmetrized), kClosedFormSlopeTol));
  out.push_back(InequalityReport::make("slope.direct_vs_fluctuation",
                                       relative_gap(a.direct, a.fluctuation), kClosedFormSlopeTol));
  out.push_back(InequalityReport::make("slope.direct_vs_numeric",
                                       relative_gap(a.direct, a.numeric), kNumericSlopeTol));
  const TangentSlopes tangent = common_tangent(g, system);
  out.push_back(InequalityReport::make("slope.common_tangent",
                                       relative_gap(tangent.heat, tangent.entropy),
                                       kNumericSlopeTol));
  const CumulantCheck cumulant = cumulant_check(g, system, kCumulantT);
  if (cumulant.max_deviation == 0.0) {
    // dQ vanishes on the support (e.g. T = identity); the expansion is exact.
    out.push_back(InequalityReport::make("cumulant.residual_vanishes", 0.0, 0.0));
  } else {
    out.push_back(InequalityReport::make("cumulant.residual_exponent", kCumulantExponent,
                                         cumulant.fitted_exponent));
  }
  return out;
}

}  // namespace

VerificationReport run_verification(const InstanceData& instance, const std::string& descriptor,
                                    const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::set<std::string> suites = options.suites.empty() ? kVerifySuites : options.suites;
  for (const auto& s : suites) {
    if (!kVerifySuites.contains(s)) throw InvalidInput(fmt::format("unknown suite '{}'", s));
  }

  VerificationReport report;
  report.instance = descriptor;
  report.suite.clear();
  for (const auto& s : suites) report.suite += (report.suite.empty() ? "" : ",") + s;

  report.checks = certification_checks(instance);
  const bool certified = std::all_of(report.checks.begin(), report.checks.end(),
                                     [](const InequalityReport& r) { return r.holds; });
  if (certified) {
    const LevelSystem& system = instance.system;
    const GibbsMatrix g =
        make_gibbs_matrix(TransitionMatrix(instance.transition), system, instance.beta0);
    const double b0 = instance.beta0;
    const double scale = b0 != 0.0 ? std::abs(b0) : 1.0;
    const std::vector<double> grid = uniform_grid(options.beta_min.value_or(-10.0 * scale),
                                                  options.beta_max.value_or(10.0 * scale),
                                                  options.steps);

    std::vector<std::vector<InequalityReport>> per_beta(grid.size());
    std::exception_ptr error;
    const long count = long(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      try {
        per_beta[std::size_t(i)] = checks_at(g, system, grid[std::size_t(i)], suites);
      } catch (...) {
#pragma omp critical(nls_verify_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    for (auto& rows : per_beta) {
      for (auto& r : rows) report.checks.push_back(std::move(r));
    }

    if (suites.contains("slope")) {
      for (auto& r : slope_checks(g, system)) report.checks.push_back(std::move(r));
    }
  }

  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const InequalityReport& r) { return r.holds; });
  report.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_to_json(const VerificationReport& report, bool include_timing) {
  nlohmann::ordered_json doc;
  doc["suite"] = report.suite;
  doc["instance"] = report.instance;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json row;
    row["label"] = c.label;
    row["lhs"] = c.lhs;
    row["rhs"] = c.rhs;
    row["slack"] = c.slack;
    row["holds"] = c.holds;
    checks.push_back(std::move(row));
  }
  doc["checks"] = std::move(checks);
  doc["pass"] = report.pass;
  if (include_timing) doc["timing_ms"] = report.timing_ms;
  return doc.dump(2) + "\n";
}

}  // namespace nls
