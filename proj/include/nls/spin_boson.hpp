// Spin-1 coupled to a harmonic-oscillator bath through
//   H = s_z + (a^+ a + 1/2) + lambda (s^+ a + s^- a^+).
// The time-averaged spin transition matrix is available in closed form
// (analytic_transition_matrix) and from exact block diagonalization of H on
// its invariant subspaces (numerical_transition_matrix), which serves as an
// independent oracle for the closed form.
//
// Level ordering everywhere is (m = 1, m = 0, m = -1) -> indices (0, 1, 2).
#pragma once

#include <array>

#include <Eigen/Dense>

#include "nls/core.hpp"

namespace nls::spin_boson {

/// Lerch transcendent sum_{k>=0} z^k / (k + a)^s for |z| < 1, a > 0.
double lerch_phi(double z, double s, double a);

class SpinBosonParams {
 public:
  /// Throws DomainError unless beta0 > 0, lambda != 0 and the oscillator
  /// tail exp(-beta0 n_max) / (1 - exp(-beta0)) is at most 1e-12.
  SpinBosonParams(double beta0, double lambda, int n_max);

  /// Smallest n_max satisfying the tail bound.
  static int min_n_max(double beta0);
  static SpinBosonParams with_auto_truncation(double beta0, double lambda = 1.0);

  double beta0() const { return beta0_; }
  double lambda() const { return lambda_; }
  int n_max() const { return n_max_; }

 private:
  double beta0_;
  double lambda_;
  int n_max_;
};

/// H restricted to span{|1, n-1>, |0, n>, |-1, n+1>}, n >= 1.
struct TripletBlock {
  int n;
  double lambda;
  Eigen::Matrix3d matrix;

  /// n + 1/2 and n + 1/2 +- lambda sqrt(4n + 2), ascending.
  std::array<double, 3> closed_form_eigenvalues() const;
};

TripletBlock make_triplet_block(int n, double lambda);

/// Closed-form time-averaged transition matrix; beta0 > 0.
TransitionMatrix analytic_transition_matrix(double beta0);

/// Oracle: sum over oscillator Gibbs weights of eigenprojector sandwiches in
/// each invariant block. OpenMP-parallel over oscillator levels with a fixed
/// reduction order, so it is bit-identical to the serial version.
TransitionMatrix numerical_transition_matrix(const SpinBosonParams& params);
TransitionMatrix numerical_transition_matrix_serial(const SpinBosonParams& params);

LevelSystem spin1_level_system();

/// analytic_transition_matrix(beta0) certified against spin1_level_system().
GibbsMatrix spin1_gibbs_matrix(double beta0);

struct EntropyArgmax {
  double beta;
  double abs_ds;
  bool at_boundary;
};

/// Maximizer of |<dS>(beta)| on (0, beta0) by golden-section search
/// (absolute tolerance 1e-6 on beta).
EntropyArgmax delta_s_argmax(double beta0);

}  // namespace nls::spin_boson
