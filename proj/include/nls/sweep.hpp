// Inverse-temperature sweeps of the Clausius terms. sweep_parallel is the
// OpenMP kernel; sweep_serial is the reference it is tested against. Both
// evaluate each grid point independently, so their output is bit-identical.
#pragma once

#include <span>
#include <vector>

#include "nls/core.hpp"

namespace nls {

struct SweepRecord {
  double beta;
  double beta_dq;   // beta <dQ>
  double beta0_dq;  // beta0 <dQ>
  double ds;        // <dS>

  /// beta0 <dQ> <= <dS> <= beta <dQ> within kSlackTol.
  bool ordered() const;
};

/// `steps` points from lo to hi inclusive; the last point is exactly hi.
std::vector<double> uniform_grid(double lo, double hi, int steps);

SweepRecord sweep_point(const GibbsMatrix& g, const LevelSystem& system, double beta);

std::vector<SweepRecord> sweep_serial(const GibbsMatrix& g, const LevelSystem& system,
                                      std::span<const double> betas);
std::vector<SweepRecord> sweep_parallel(const GibbsMatrix& g, const LevelSystem& system,
                                        std::span<const double> betas);

}  // namespace nls
