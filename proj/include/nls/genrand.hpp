// Seeded generation of random test instances.
//
// Stream semantics: every public generator that takes a seed builds one
// std::mt19937_64 from it and consumes it in a fixed order, so output is
// identical across platforms and thread counts. Uniform variates are
// (x >> 11 + 0.5) * 2^-53, i.e. strictly inside (0, 1), and integer choices
// use x % bound; neither depends on <random> distribution internals.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nls/core.hpp"
#include "nls/response.hpp"

namespace nls {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform() { return (double(engine_() >> 11) + 0.5) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
};

/// Entries i.i.d. uniform(0,1), then each column normalized. Columns are
/// drawn in order, rows within a column in order.
TransitionMatrix random_stochastic(Index n, Rng& rng);
TransitionMatrix random_stochastic(Index n, std::uint64_t seed);

/// Unique fixed point of T via the bordered system [T - I; 1^T] p = [0; 1].
/// Throws MultiplicityError if T - I has rank below n - 1.
ProbabilityVector stationary_distribution(const TransitionMatrix& t);

struct RandomInstance {
  std::uint64_t seed;
  LevelSystem system;  // E_n = -log p0_n, d == 1
  GibbsMatrix gibbs;   // certified at beta0 = 1

  const TransitionMatrix& matrix() const { return gibbs.matrix(); }
  double beta0() const { return gibbs.beta0(); }
};

/// Random stochastic matrix whose stationary distribution (entries >= 1e-6,
/// pairwise >= 1e-6 apart) defines the energies. Redraws from the same
/// stream at most 100 times before throwing GenerationFailure.
RandomInstance random_gibbs_instance(Index n, std::uint64_t seed);

/// Strictly positive, normalized uniforms.
ProbabilityVector random_probability_vector(Index n, Rng& rng);

std::vector<Index> random_permutation(Index n, Rng& rng);

/// Convex mixture of `terms` random permutation matrices.
TransitionMatrix random_bistochastic(Index n, int terms, Rng& rng);

/// Energies uniform in [-spread, spread], degeneracies uniform in
/// {1, ..., max_degeneracy}.
LevelSystem random_level_system(Index n, Rng& rng, double spread = 2.0, int max_degeneracy = 1);

/// Non-reversible Gibbs matrix for an arbitrary level system: product of two
/// Metropolis matrices built from random symmetric proposals.
GibbsMatrix random_gibbs_matrix_for(const LevelSystem& system, double beta0, Rng& rng);

/// (S - I) scaled so that I + eps t stays nonnegative for eps <= eps_max;
/// the scale is capped at 1.
PerturbationGenerator random_perturbation_generator(Index n, Rng& rng, double eps_max = 0.1);

}  // namespace nls
