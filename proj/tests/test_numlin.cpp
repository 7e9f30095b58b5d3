#include "coopreg/numlin.hpp"

#include <random>

#include <gtest/gtest.h>

#include "coopreg/error.hpp"
#include "test_util.hpp"

namespace coopreg {
namespace {

using Eigen::MatrixXd;
using test::random_matrix;
using test::random_stable;

MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(RegulatorEquation, HomogeneousGivesZero) {
  const MatrixXd a = mat({{0, 1}, {0, 0}});
  const MatrixXd b = mat({{0}, {1}});
  const auto sol = solve_regulator_equation(a, b, MatrixXd::Identity(2, 2),
                                            MatrixXd::Zero(2, 1), a,
                                            MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2));
  EXPECT_LE(sol.Pi.norm(), 1e-14);
  EXPECT_LE(sol.Gamma.norm(), 1e-14);
}

TEST(RegulatorEquation, DoubleIntegratorTracking) {
  const MatrixXd a = mat({{0, 1}, {0, 0}});
  const MatrixXd b = mat({{0}, {1}});
  const auto sol = solve_regulator_equation(a, b, MatrixXd::Identity(2, 2),
                                            MatrixXd::Zero(2, 1), a,
                                            MatrixXd::Zero(2, 2), -MatrixXd::Identity(2, 2));
  EXPECT_TRUE(sol.Pi.isApprox(MatrixXd::Identity(2, 2), 1e-12));
  EXPECT_LE(sol.Gamma.norm(), 1e-12);
  EXPECT_LE(sol.residual, 1e-12);
}

TEST(RegulatorEquation, Scalar) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  const auto sol = solve_regulator_equation(-one, one, one, 0 * one, 0 * one,
                                            0 * one, -one);
  EXPECT_NEAR(sol.Pi(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(sol.Gamma(0, 0), 1.0, 1e-12);
}

TEST(RegulatorEquation, RandomConstructedSolvable) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5, m = 1 + trial % 3, q = 1 + trial % 2, d = 1 + trial % 3;
    const MatrixXd a = random_matrix(rng, n, n), b = random_matrix(rng, n, m);
    const MatrixXd ce = random_matrix(rng, q, n), de = random_matrix(rng, q, m);
    const MatrixXd s = random_matrix(rng, d, d);
    const MatrixXd pi = random_matrix(rng, n, d), gamma = random_matrix(rng, m, d);
    const MatrixXd bd = -(a * pi + b * gamma - pi * s);
    const MatrixXd ded = -(ce * pi + de * gamma);
    const auto sol = solve_regulator_equation(a, b, ce, de, s, bd, ded);
    EXPECT_LE(regulator_residual(a, b, ce, de, s, bd, ded, sol.Pi, sol.Gamma),
              1e-8 * (1 + sol.Pi.norm() + sol.Gamma.norm()));
  }
}

TEST(RegulatorEquation, UnsolvableRaises) {
  const MatrixXd zero = MatrixXd::Zero(1, 1), one = MatrixXd::Ones(1, 1);
  try {
    solve_regulator_equation(zero, zero, zero, zero, zero, zero, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSolution);
  }
}

TEST(RegulatorEquation, DimensionMismatch) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  EXPECT_THROW(solve_regulator_equation(one, MatrixXd::Ones(2, 1), one, one, one,
                                        one, one),
               Error);
}

TEST(Care, ScalarExamples) {
  const MatrixXd one = MatrixXd::Ones(1, 1), zero = MatrixXd::Zero(1, 1);
  EXPECT_NEAR(solve_care(zero, one, one, one)(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(lqr_gain(zero, one, one, one)(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(solve_care(one, one, zero, one)(0, 0), 2.0, 1e-10);
  EXPECT_NEAR(lqr_gain(one, one, zero, one)(0, 0), 2.0, 1e-10);
}

TEST(Care, RandomResidualAndStability) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6, m = 1 + trial % 3;
    const MatrixXd a = random_matrix(rng, n, n), b = random_matrix(rng, n, m);
    const MatrixXd qf = random_matrix(rng, n, n);
    const MatrixXd q = qf * qf.transpose() + 0.1 * MatrixXd::Identity(n, n);
    const MatrixXd rf = random_matrix(rng, m, m);
    const MatrixXd r = rf * rf.transpose() + MatrixXd::Identity(m, m);
    const MatrixXd p = solve_care(a, b, q, r);
    const MatrixXd res = a.transpose() * p + p * a - p * b * r.inverse() * b.transpose() * p + q;
    EXPECT_LE(res.norm(), 1e-9 * (1 + p.norm())) << "trial " << trial;
    EXPECT_LT(spectral_abscissa(a - b * lqr_gain(a, b, q, r)), 0.0);
  }
}

TEST(Care, NotStabilizable) {
  const MatrixXd a = mat({{1, 0}, {0, -1}});
  try {
    solve_care(a, mat({{0}, {1}}), MatrixXd::Identity(2, 2), MatrixXd::Ones(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStabilizable);
  }
}

TEST(Pbh, Examples) {
  EXPECT_TRUE(is_stabilizable(mat({{0, 1}, {0, 0}}), mat({{0}, {1}})));
  EXPECT_TRUE(is_stabilizable(mat({{1, 0}, {0, -1}}), mat({{1}, {0}})));
  EXPECT_FALSE(is_stabilizable(mat({{1, 0}, {0, -1}}), mat({{0}, {1}})));
  // The stable mode becomes critical under a shift.
  EXPECT_FALSE(is_stabilizable(mat({{1, 0}, {0, -1}}), mat({{1}, {0}}), 1.0));
  EXPECT_TRUE(is_detectable(mat({{0, 1}, {0, 0}}), mat({{1, 0}})));
  EXPECT_FALSE(is_detectable(MatrixXd::Identity(2, 2), mat({{1, 0}})));
  EXPECT_TRUE(is_observable(mat({{0, 1}, {0, 0}}), mat({{1, 0}})));
  EXPECT_FALSE(is_observable(mat({{0, 1}, {0, 0}}), mat({{0, 1}})));
}

TEST(SpectralAbscissa, Examples) {
  EXPECT_NEAR(spectral_abscissa(mat({{0, 1}, {-1, 0}})), 0.0, 1e-14);
  EXPECT_NEAR(spectral_abscissa(mat({{-1, 0}, {0, -2}})), -1.0, 1e-14);
  EXPECT_NEAR(spectral_abscissa(mat({{0, 1}, {-2, -2}})), -1.0, 1e-12);
}

TEST(HinfNorm, Examples) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  EXPECT_NEAR(hinf_norm(StateSpace(-one, one, one, 0 * one)), 1.0, 1e-6);
  const MatrixXd a = mat({{0, 1}, {-1, -0.1}});
  const StateSpace lightly_damped(a, mat({{0}, {1}}), mat({{1, 0}}), MatrixXd::Zero(1, 1));
  const double oracle = test::grid_peak_gain(a, mat({{0}, {1}}), mat({{1, 0}}),
                                             MatrixXd::Zero(1, 1), -3, 3, 100000);
  EXPECT_NEAR(oracle, 10.0125, 0.01);
  EXPECT_NEAR(hinf_norm(lightly_damped), oracle, 1e-3 * oracle);
  EXPECT_NEAR(hinf_norm(StateSpace::gain(mat({{2, 0}, {0, 1}}))), 2.0, 1e-12);
}

TEST(HinfNorm, NotStable) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  try {
    hinf_norm(StateSpace(one, one, one, 0 * one));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStable);
  }
}

TEST(HinfNorm, MatchesGridOracleOnRandomSystems) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6, m = 1 + trial % 2, p = 1 + trial % 3;
    const MatrixXd a = random_stable(rng, n, 0.2);
    const MatrixXd b = random_matrix(rng, n, m), c = random_matrix(rng, p, n);
    const MatrixXd d = trial % 2 ? random_matrix(rng, p, m) : MatrixXd::Zero(p, m);
    const double oracle = test::grid_peak_gain(a, b, c, d, -3, 3, 20000);
    const double value = hinf_norm(StateSpace(a, b, c, d));
    EXPECT_GE(value, oracle * (1 - 1e-6));
    EXPECT_LE(value, oracle * 1.01) << "trial " << trial;
  }
}

TEST(Observer, DualLqrDecay) {
  const MatrixXd zero = MatrixXd::Zero(1, 1), one = MatrixXd::Ones(1, 1);
  EXPECT_LT(spectral_abscissa(zero - place_observer_gain(zero, one, 1.0) * one), -1.0);
  const MatrixXd a = mat({{0, 1}, {0, 0}}), c = mat({{1, 0}});
  EXPECT_LT(spectral_abscissa(a - place_observer_gain(a, c, 2.0) * c), -2.0);
  try {
    place_observer_gain(MatrixXd::Identity(2, 2), c, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDetectable);
  }
}

TEST(Observer, ExactPoles) {
  const MatrixXd a = mat({{0, 1}, {0, 0}}), c = mat({{1, 0}});
  const std::vector<std::complex<double>> targets{-10.0, -11.0};
  const MatrixXd l = place_poles_exact(a, c, targets);
  EXPECT_LE(max_relative_pole_mismatch(eigenvalues(a - l * c), targets), 1e-6);
  EXPECT_NEAR(place_poles_exact(MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1), {-5.0})(0, 0),
              5.0, 1e-12);
  EXPECT_THROW(place_poles_exact(a, c, {{-1.0, 1.0}, {-2.0, 0.0}}), Error);
}

TEST(Observer, ExactPolesMultiOutput) {
  std::mt19937_64 rng(9);
  const MatrixXd a = random_matrix(rng, 6, 6);
  const MatrixXd c = random_matrix(rng, 3, 6);
  std::vector<std::complex<double>> targets;
  for (int i = 0; i < 6; ++i) targets.emplace_back(-12.0 + 0.4 * i, 0.0);
  const MatrixXd l = place_poles_exact(a, c, targets);
  EXPECT_LE(max_relative_pole_mismatch(eigenvalues(a - l * c), targets), 1e-6);
}

}  // namespace
}  // namespace coopreg
