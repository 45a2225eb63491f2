// Full verification run over one instance: certification, J-equations,
// heat/entropy flow, Clausius ordering, slope cross-checks, cumulant
// expansion and KL monotonicity, serialized as a JSON report.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nls/fluctuation.hpp"
#include "nls/instance_io.hpp"

namespace nls {

inline const std::set<std::string> kVerifySuites = {"jarzynski", "clausius", "slope", "kl"};

struct VerifyOptions {
  /// Grid defaults to [-10 |beta0|, 10 |beta0|] (unit scale if beta0 = 0) when
  /// min/max are left unset.
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  int steps = 21;
  /// Subset of kVerifySuites; empty means all. Certification always runs.
  std::set<std::string> suites;
};

struct VerificationReport {
  std::string suite;
  std::string instance;
  std::vector<InequalityReport> checks;
  bool pass = false;
  double timing_ms = 0.0;
};

VerificationReport run_verification(const InstanceData& instance, const std::string& descriptor,
                                    const VerifyOptions& options);

/// Timing is omitted unless requested so that reports are byte-identical
/// across runs.
std::string report_to_json(const VerificationReport& report, bool include_timing = false);

}  // namespace nls
