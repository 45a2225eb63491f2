#include <cmath>
#include <vector>

#include <doctest.h>

#include "nls/fluctuation.hpp"
#include "nls/genrand.hpp"
#include "nls/response.hpp"
#include "nls/spin_boson.hpp"
#include "oracle.hpp"

using namespace nls;

namespace {

GibbsMatrix identity_gibbs(const LevelSystem& sys, double beta0) {
  return make_gibbs_matrix(TransitionMatrix::identity(sys.size()), sys, beta0);
}

// Two-level Gibbs matrix with T(1,0) = a p0_1 and T(0,1) = a p0_0, which
// balances the flux between the levels for any 0 < a <= 1.
GibbsMatrix two_level(double beta0, double a) {
  const LevelSystem sys = LevelSystem::nondegenerate({0.0, 1.0});
  const auto p0 = make_gibbs_state(sys, beta0).probabilities();
  Eigen::MatrixXd t(2, 2);
  t << 1.0 - a * p0[1], a * p0[0], a * p0[1], 1.0 - a * p0[0];
  return make_gibbs_matrix(TransitionMatrix(t), sys, beta0);
}

}  // namespace

TEST_CASE("slopes vanish for the identity") {
  const LevelSystem sys = LevelSystem::nondegenerate({-1.0, 0.3, 2.0});
  const GibbsMatrix g = identity_gibbs(sys, 1.5);
  CHECK(slope_direct(g, sys) == 0.0);
  CHECK(slope_symmetrized(g, sys) == 0.0);
  CHECK(slope_fluctuation(g, sys) == 0.0);
  CHECK(std::abs(slope_numeric(g, sys, 1e-4)) < 1e-12);
  CHECK(newton_cooling_coefficient(g, sys) == 0.0);
}

TEST_CASE("slopes vanish at beta0 = 0") {
  Rng rng(4);
  const LevelSystem sys = random_level_system(4, rng);
  const GibbsMatrix g = random_gibbs_matrix_for(sys, 0.0, rng);
  CHECK(slope_direct(g, sys) == 0.0);
  CHECK(slope_symmetrized(g, sys) == 0.0);
}

TEST_CASE("spin-1 slope bundle") {
  const auto sys = spin_boson::spin1_level_system();
  const auto g = spin_boson::spin1_gibbs_matrix(1.0);
  const SlopeBundle b = slope_bundle(g, sys);
  CHECK(b.consistent());
  CHECK(std::abs(b.direct - b.fluctuation) <= 1e-9 * std::max(1.0, b.direct));
  CHECK(std::abs(slope_numeric(g, sys, 1e-4) - b.direct) < 1e-6);
  CHECK(b.symmetrized >= 0.0);
  CHECK(b.direct > 0.0);
}

TEST_CASE("two-level hand expansion") {
  for (double beta0 : {0.3, 1.0, 2.7}) {
    for (double a : {0.1, 0.6, 1.0}) {
      const GibbsMatrix g = two_level(beta0, a);
      const LevelSystem sys = LevelSystem::nondegenerate({0.0, 1.0});
      const auto& t = g.matrix();
      const auto& p0 = g.fixed_point();
      const double hand = 0.5 * beta0 * (t(0, 1) * p0[1] + t(1, 0) * p0[0]);
      CHECK(slope_fluctuation(g, sys) == doctest::Approx(hand).epsilon(1e-14));
      CHECK(slope_direct(g, sys) == doctest::Approx(hand).epsilon(1e-12));
      CHECK(slope_symmetrized(g, sys) == doctest::Approx(hand).epsilon(1e-12));
    }
  }
}

TEST_CASE("symmetrized form matches the direct sum on a random N=4 instance") {
  const RandomInstance inst = random_gibbs_instance(4, 12);
  const double d = slope_direct(inst.gibbs, inst.system);
  const double s = slope_symmetrized(inst.gibbs, inst.system);
  CHECK(std::abs(d - s) <= 1e-9 * std::max(1.0, std::abs(d)));
  CHECK(s >= 0.0);
}

TEST_CASE("finite difference converges at second order") {
  const RandomInstance inst = random_gibbs_instance(5, 77);
  const double exact = slope_direct(inst.gibbs, inst.system);
  const double e1 = std::abs(slope_numeric(inst.gibbs, inst.system, 4e-3) - exact);
  const double e2 = std::abs(slope_numeric(inst.gibbs, inst.system, 2e-3) - exact);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(slope_numeric(inst.gibbs, inst.system, 1e-1), InvalidInput);
  CHECK_THROWS_AS(slope_numeric(inst.gibbs, inst.system, 1e-8), InvalidInput);
}

TEST_CASE("slope bundle property: 500 random instances") {
  Rng rng(500);
  int inconsistent = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + Index(rng.below(15));
    const RandomInstance inst = random_gibbs_instance(n, 5000 + std::uint64_t(trial));
    if (!slope_bundle(inst.gibbs, inst.system).consistent()) ++inconsistent;
  }
  CHECK(inconsistent == 0);
}

TEST_CASE("common tangent") {
  const auto sys = spin_boson::spin1_level_system();
  const auto g = spin_boson::spin1_gibbs_matrix(1.0);
  const TangentSlopes ts = common_tangent(g, sys);
  CHECK(std::abs(ts.heat - ts.entropy) < 1e-4);
  CHECK(std::abs(ts.heat - slope_direct(g, sys)) < 1e-6);

  const RandomInstance inst = random_gibbs_instance(9, 3);
  const TangentSlopes tr = common_tangent(inst.gibbs, inst.system);
  CHECK(std::abs(tr.heat - tr.entropy) < 1e-4 * std::max(1.0, std::abs(tr.heat)));
}

TEST_CASE("cumulant expansion") {
  const auto sys = spin_boson::spin1_level_system();
  const auto g = spin_boson::spin1_gibbs_matrix(1.0);
  SUBCASE("t = 0") {
    const std::vector<double> t{0.0};
    CHECK(cumulant_check(g, sys, t).max_deviation == 0.0);
  }
  SUBCASE("kappa1 vanishes and kappa2 is twice the slope over beta0") {
    const std::vector<double> t{0.01};
    const CumulantCheck c = cumulant_check(g, sys, t);
    CHECK(std::abs(c.kappa1) < 1e-12);
    CHECK(c.kappa2 == doctest::Approx(2.0 * slope_fluctuation(g, sys) / g.beta0()).epsilon(1e-12));
  }
  SUBCASE("residual is cubic") {
    const std::vector<double> t{0.1, -0.1, 0.05, -0.05, 0.025, -0.025};
    const CumulantCheck c = cumulant_check(g, sys, t);
    CHECK(c.fitted_exponent >= 2.5);
    CHECK(c.max_deviation < 1e-3);
  }
}

TEST_CASE("Newton cooling") {
  const auto sys = spin_boson::spin1_level_system();
  const auto g = spin_boson::spin1_gibbs_matrix(1.0);
  const double coeff = newton_cooling_coefficient(g, sys);
  CHECK(coeff == doctest::Approx(slope_direct(g, sys) * 1.0).epsilon(1e-15));
  const double r1 = newton_cooling_residual(g, sys, 1e-3);
  const double r2 = newton_cooling_residual(g, sys, 5e-4);
  CHECK(r1 < 1e-5 * std::abs(coeff));
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));

  const LevelSystem flat = LevelSystem::nondegenerate({0.0, 1.0});
  CHECK_THROWS_AS(newton_cooling_residual(identity_gibbs(flat, 0.0), flat, 1e-3), PreconditionError);
}

TEST_CASE("perturbation generator") {
  Eigen::MatrixXd t(2, 2);
  t << -1.0, 0.5, 1.0, -0.5;
  const PerturbationGenerator gen(t);
  CHECK(gen.valid_for(1.0));
  CHECK_FALSE(gen.valid_for(1.5));
  CHECK_THROWS_AS(gen.at(1.5), PreconditionError);
  Eigen::MatrixXd bad = t;
  bad(0, 0) = -0.9;
  CHECK_THROWS_AS(PerturbationGenerator{bad}, InvalidInput);
}

TEST_CASE("weak coupling Clausius equality") {
  const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  Rng rng(41);
  const LevelSystem sys = random_level_system(4, rng);
  SUBCASE("eps = 0") {
    const auto gen = random_perturbation_generator(4, rng);
    const std::vector<double> zero{0.0};
    CHECK(weak_coupling_residual(gen, sys, 1.3, zero).residuals[0] == 0.0);
  }
  SUBCASE("t = 0") {
    const auto fit = weak_coupling_residual(PerturbationGenerator::zero(4), sys, 1.3, eps);
    for (double r : fit.residuals) CHECK(r == 0.0);
    CHECK(std::isnan(fit.exponent));
  }
  SUBCASE("random generator scales quadratically") {
    const auto gen = random_perturbation_generator(4, rng);
    const auto fit = weak_coupling_residual(gen, sys, 1.3, eps);
    CHECK(fit.exponent >= 1.9);
    CHECK(fit.exponent <= 2.1);
  }
  SUBCASE("invalid eps is named") {
    const auto gen = random_perturbation_generator(4, rng, 0.1);
    const std::vector<double> big{0.05, 1e6};
    try {
      weak_coupling_residual(gen, sys, 1.0, big);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(std::string(e.what()).find("1000000") != std::string::npos);
    }
  }
}

TEST_CASE("loglog slope") {
  const std::vector<double> x{1.0, 2.0, 4.0, 0.0};
  const std::vector<double> y{3.0, 12.0, 48.0, 5.0};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-14));
  const std::vector<double> one{1.0};
  CHECK(std::isnan(loglog_slope(one, one)));
}

TEST_CASE("weak coupling needs eps small against the smallest population") {
  // p = (1 - 3e-4, 3e-4): eps = 0.1 already shifts p_1 by about 150 p_1.
  const LevelSystem sys = LevelSystem::nondegenerate({0.0, 1.0});
  Eigen::MatrixXd t(2, 2);
  t << -0.5, 0.5, 0.5, -0.5;
  const PerturbationGenerator gen(t);
  const std::vector<double> coarse{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const std::vector<double> fine{1e-5, 3e-6, 1e-6, 3e-7, 1e-7};
  const double beta = 8.0;
  CHECK(weak_coupling_residual(gen, sys, beta, coarse).exponent < 1.9);
  const double k = weak_coupling_residual(gen, sys, beta, fine).exponent;
  CHECK(k >= 1.9);
  CHECK(k <= 2.1);
}
