// Serial reference vs OpenMP kernels: beta sweeps and the spin-boson oracle.
// Usage: nls_bench [levels] [grid points] [repeats]

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <fmt/format.h>
#include <omp.h>

#include "nls/genrand.hpp"
#include "nls/spin_boson.hpp"
#include "nls/sweep.hpp"

namespace {

template <class F>
double best_of_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const long levels = argc > 1 ? std::atol(argv[1]) : 16;
  const int points = argc > 2 ? std::atoi(argv[2]) : 4001;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  fmt::print("threads: {}\n", omp_get_max_threads());

  const nls::RandomInstance inst = nls::random_gibbs_instance(levels, 7);
  const std::vector<double> grid = nls::uniform_grid(-10.0, 10.0, points);
  std::vector<nls::SweepRecord> serial, parallel;
  const double t_serial =
      best_of_ms(repeats, [&] { serial = nls::sweep_serial(inst.gibbs, inst.system, grid); });
  const double t_parallel =
      best_of_ms(repeats, [&] { parallel = nls::sweep_parallel(inst.gibbs, inst.system, grid); });
  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i) {
    same = serial[i].beta_dq == parallel[i].beta_dq && serial[i].ds == parallel[i].ds;
  }
  fmt::print("sweep  N={:<3} points={:<6} serial {:9.3f} ms  parallel {:9.3f} ms  speedup {:5.2f}  {}\n",
             levels, points, t_serial, t_parallel, t_serial / t_parallel,
             same ? "identical" : "MISMATCH");

  const nls::spin_boson::SpinBosonParams params(0.05, 1.0, 20000);
  Eigen::MatrixXd a, b;
  const double o_serial = best_of_ms(
      repeats, [&] { a = nls::spin_boson::numerical_transition_matrix_serial(params).entries(); });
  const double o_parallel = best_of_ms(
      repeats, [&] { b = nls::spin_boson::numerical_transition_matrix(params).entries(); });
  fmt::print("oracle n_max={:<6}             serial {:9.3f} ms  parallel {:9.3f} ms  speedup {:5.2f}  {}\n",
             params.n_max(), o_serial, o_parallel, o_serial / o_parallel,
             a == b ? "identical" : "MISMATCH");
  return same && a == b ? 0 : 1;
}
