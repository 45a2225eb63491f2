#include "nls/sweep.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "nls/fluctuation.hpp"

namespace nls {

bool SweepRecord::ordered() const {
  return ds - beta0_dq >= -kSlackTol && beta_dq - ds >= -kSlackTol;
}

std::vector<double> uniform_grid(double lo, double hi, int steps) {
  if (steps < 2) throw InvalidInput(fmt::format("uniform_grid: steps = {} < 2", steps));
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidInput(fmt::format("uniform_grid: invalid range [{}, {}]", lo, hi));
  }
  std::vector<double> grid(static_cast<std::size_t>(steps));
  const double h = (hi - lo) / double(steps - 1);
  for (int i = 0; i < steps; ++i) grid[std::size_t(i)] = lo + h * double(i);
  grid.back() = hi;
  return grid;
}

SweepRecord sweep_point(const GibbsMatrix& g, const LevelSystem& system, double beta) {
  const HeatProcess hp = evaluate_heat_process(g.matrix(), system, beta);
  return {beta, beta * hp.mean_dq, g.beta0() * hp.mean_dq, hp.mean_ds};
}

std::vector<SweepRecord> sweep_serial(const GibbsMatrix& g, const LevelSystem& system,
                                      std::span<const double> betas) {
  std::vector<SweepRecord> out;
  out.reserve(betas.size());
  for (const double beta : betas) out.push_back(sweep_point(g, system, beta));
  return out;
}

std::vector<SweepRecord> sweep_parallel(const GibbsMatrix& g, const LevelSystem& system,
                                        std::span<const double> betas) {
  std::vector<SweepRecord> out(betas.size());
  std::exception_ptr error;
  const long count = long(betas.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      out[std::size_t(i)] = sweep_point(g, system, betas[std::size_t(i)]);
    } catch (...) {
#pragma omp critical(nls_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace nls
