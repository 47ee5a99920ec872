#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "ruelle/error.hpp"
#include "ruelle/floquet.hpp"
#include "support/floquet_cases.hpp"

using namespace ruelle;
using namespace ruelle::fixtures;
using Eigen::Matrix2d;
using Eigen::MatrixXd;

namespace {

constexpr double kTol = 1e-10;
constexpr double kPi = std::numbers::pi;

Matrix2d rotation_generator() {
  Matrix2d j;
  j << 0, -1, 1, 0;
  return j;
}

}  // namespace

TEST(IntegrateFundamental, ZeroCoefficientIsIdentity) {
  const auto c = PeriodicCoefficient::constant(MatrixXd::Zero(3, 3), 1.0);
  EXPECT_TRUE(integrate_fundamental(c, 0.3, 2.7).isApprox(MatrixXd::Identity(3, 3), 1e-14));
}

TEST(IntegrateFundamental, ConstantDiagonal) {
  const auto c = worked_coefficients()[0];
  const MatrixXd u = integrate_fundamental(c, 0.0, 1.0);
  EXPECT_NEAR(u(0, 0), std::exp(-1.0), 10 * kTol);
  EXPECT_NEAR(u(1, 1), std::exp(2.0), 10 * kTol * std::exp(2.0));
  EXPECT_NEAR(u(0, 1), 0.0, 1e-14);
}

TEST(IntegrateFundamental, FullRotation) {
  const auto c = PeriodicCoefficient::constant(2 * kPi * rotation_generator(), 1.0);
  EXPECT_LT((integrate_fundamental(c, 0.0, 1.0) - MatrixXd::Identity(2, 2)).norm(), 10 * kTol);
}

TEST(IntegrateFundamental, SameEndpointIsExactIdentity) {
  const MatrixXd u = integrate_fundamental(wobbling(), 0.4, 0.4);
  EXPECT_EQ(u, MatrixXd::Identity(2, 2));
}

TEST(Monodromy, Examples) {
  EXPECT_NEAR(monodromy(worked_coefficients()[0])(1, 1), std::exp(2.0), 1e-8);
  const MatrixXd m = monodromy(rotation_dilation(0.7));
  EXPECT_LT((m + std::exp(0.7) * MatrixXd::Identity(2, 2)).norm(), 1e-8);
  const auto unit_trace = PeriodicCoefficient::constant((Matrix2d() << 0.2, 3.0, -1.0, 0.8).finished(), 1.0);
  EXPECT_NEAR(monodromy(unit_trace).determinant(), std::exp(1.0), 1e-8);
}

TEST(Monodromy, ConjugationAcrossBasePoints) {
  const auto c = wobbling();
  const MatrixXd m = monodromy(c);
  for (double t0 : {0.1, 0.45, 0.8}) {
    const MatrixXd u = integrate_fundamental(c, 0.0, t0);
    const MatrixXd shifted = integrate_fundamental(c, t0, t0 + 1.0);
    EXPECT_LT((u * m * u.inverse() - shifted).norm() / shifted.norm(), 1e-8);
  }
}

TEST(FloquetDecompose, PositiveMultipliers) {
  const auto dec = floquet_decompose(Eigen::Vector2d(0.5, 3.0).asDiagonal().toDenseMatrix(), 1.0);
  EXPECT_NEAR(dec.lyapunov[0], -std::log(2.0), 1e-12);
  EXPECT_NEAR(dec.lyapunov[1], std::log(3.0), 1e-12);
  EXPECT_EQ(dec.twists, (std::vector<Rational>{0, 0}));
  EXPECT_TRUE(dec.orientable_u);
}

TEST(FloquetDecompose, NegativeStableMultiplier) {
  const auto dec = floquet_decompose(Eigen::Vector2d(-0.5, 3.0).asDiagonal().toDenseMatrix(), 1.0);
  EXPECT_EQ(dec.twists, (std::vector<Rational>{Rational(1, 2), 0}));
  EXPECT_FALSE(dec.orientable_s);
  EXPECT_TRUE(dec.orientable_u);
  EXPECT_TRUE(dec.generator.isApprox(Eigen::Vector2d(-std::log(2.0), std::log(3.0)).asDiagonal().toDenseMatrix(), 1e-12));
}

TEST(FloquetDecompose, RotationDilation) {
  const auto dec = floquet_decompose(monodromy(rotation_dilation(1.0)), 1.0);
  ASSERT_EQ(dec.multipliers.size(), 2U);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(dec.multipliers[i].real(), -std::exp(1.0), 1e-8);
    EXPECT_NEAR(dec.lyapunov[i], 1.0, 1e-8);
    EXPECT_EQ(dec.twists[i], Rational(1, 2));
  }
  EXPECT_TRUE(dec.orientable_u);
}

TEST(FloquetDecompose, GeneratorSquaresToMonodromySquared) {
  for (const auto& c : worked_coefficients()) {
    const MatrixXd m = monodromy(c);
    const auto dec = floquet_decompose(m, c.period);
    const MatrixXd lhs = (2.0 * c.period * dec.generator).exp();
    EXPECT_LT((lhs - m * m).norm() / (m * m).norm(), 1e-8);
  }
}

TEST(FloquetDecompose, RejectsNonHyperbolic) {
  EXPECT_THROW(floquet_decompose(Eigen::Vector2d(1.0, 3.0).asDiagonal().toDenseMatrix(), 1.0), FloquetError);
  const MatrixXd rot = (0.3 * rotation_generator()).exp();
  EXPECT_THROW(floquet_decompose(rot, 1.0), FloquetError);
}

TEST(FloquetDecompose, RejectsJordanBlock) {
  Matrix2d j;
  j << 2.0, 1.0, 0.0, 2.0;
  EXPECT_THROW(floquet_decompose(j, 1.0), FloquetError);
}

TEST(PeriodicFactor, Examples) {
  const auto constant = worked_coefficients()[0];
  for (double t : {0.0, 0.3, 1.7}) EXPECT_LT((periodic_factor(constant, t) - MatrixXd::Identity(2, 2)).norm(), 1e-8);
  EXPECT_LT((periodic_factor(rotation_dilation(1.0), 1.0) + MatrixXd::Identity(2, 2)).norm(), 1e-8);
  EXPECT_LT((periodic_factor(wobbling(), 0.0) - MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(FloquetInvariants, Groupoid) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto& c : worked_coefficients()) {
    for (int trial = 0; trial < 10; ++trial) {
      const double a = u(rng), b = u(rng), d = u(rng);
      const MatrixXd lhs = integrate_fundamental(c, b, a, kTol) * integrate_fundamental(c, d, b, kTol);
      const MatrixXd rhs = integrate_fundamental(c, d, a, kTol);
      EXPECT_LE((lhs - rhs).norm() / std::max(1.0, rhs.norm()), 10 * kTol);
    }
  }
}

TEST(FloquetInvariants, Liouville) {
  for (const auto& c : worked_coefficients()) {
    for (double t : {0.3, 1.0, 1.6}) {
      const double det = integrate_fundamental(c, 0.0, t, kTol).determinant();
      const double expected = std::exp(trace_integral(c, 0.0, t));
      EXPECT_LE(std::abs(det - expected) / expected, 10 * kTol);
    }
  }
}

TEST(FloquetInvariants, ReconstructionAndPeriodicity) {
  for (const auto& c : worked_coefficients()) {
    const auto dec = floquet_decompose(monodromy(c, kTol), c.period);
    for (int i = 0; i <= 16; ++i) {
      const double theta = 2.0 * c.period * i / 16.0;
      const MatrixXd u = integrate_fundamental(c, 0.0, theta, kTol);
      const MatrixXd recon = periodic_factor(c, dec, theta, kTol) * (theta * dec.generator).exp();
      EXPECT_LE((u - recon).norm() / std::max(1.0, u.norm()), 10 * kTol);
    }
    const MatrixXd pp = periodic_factor(c, dec, c.period, kTol);
    for (int i = 0; i < pp.rows(); ++i) {
      for (int j = 0; j < pp.cols(); ++j) {
        if (i != j) EXPECT_LE(std::abs(pp(i, j)), 1e-8);
      }
      EXPECT_NEAR(std::abs(pp(i, i)), 1.0, 1e-8);
    }
    EXPECT_LT((periodic_factor(c, dec, 2 * c.period + 0.3, kTol) - periodic_factor(c, dec, 0.3, kTol)).norm(), 1e-7);
  }
}

TEST(FloquetInvariants, DeterminantPositiveAndOrientabilityEquivalent) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXd a0(3, 3), a1(3, 3);
    for (int i = 0; i < 9; ++i) {
      a0(i) = g(rng);
      a1(i) = g(rng);
    }
    PeriodicCoefficient c;
    c.period = 1.0;
    c.size = 3;
    c.evaluate = [a0, a1](double t) -> MatrixXd { return a0 + std::sin(2 * kPi * t) * a1; };
    const MatrixXd m = monodromy(c);
    EXPECT_GT(m.determinant(), 0.0);
    try {
      const auto dec = floquet_decompose(m, 1.0);
      EXPECT_EQ(dec.orientable_u, dec.orientable_s);
    } catch (const FloquetError&) {
      // a random draw may be non-hyperbolic; nothing to check then
    }
  }
}

TEST(SampledCoefficient, MatchesClosedForm) {
  const auto exact = wobbling();
  std::vector<double> theta;
  std::vector<MatrixXd> samples;
  for (int i = 0; i < 256; ++i) {
    theta.push_back(i / 256.0);
    samples.push_back(exact.evaluate(i / 256.0));
  }
  const auto sampled = PeriodicCoefficient::sampled(theta, samples, 1.0);
  EXPECT_LT((sampled.evaluate(0.123) - exact.evaluate(0.123)).norm(), 1e-6);
  EXPECT_LT((sampled.evaluate(1.123) - exact.evaluate(0.123)).norm(), 1e-6);
  EXPECT_LT((monodromy(sampled) - monodromy(exact)).norm() / monodromy(exact).norm(), 1e-6);
}

TEST(SampledCoefficient, RejectsNonUniformCoverage) {
  std::vector<double> theta{0.0, 0.1, 0.2, 0.3};
  std::vector<MatrixXd> samples(4, MatrixXd::Identity(1, 1));
  EXPECT_THROW(PeriodicCoefficient::sampled(theta, samples, 1.0), FloquetError);
}

TEST(ConnectionMonodromy, ZeroIsTrivial) {
  ComplexPeriodicCoefficient t{1.0, 2, [](double) { return Eigen::MatrixXcd::Zero(2, 2).eval(); }};
  const auto out = connection_monodromy(t);
  EXPECT_LT((out.transport - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-12);
  for (const auto& g : out.gamma) EXPECT_LT(std::abs(g), 1e-12);
}

TEST(ConnectionMonodromy, ScalarPhase) {
  const double c = 1.3, period = 2.0;
  ComplexPeriodicCoefficient t{period, 1, [c](double) {
                                 Eigen::MatrixXcd m(1, 1);
                                 m(0, 0) = {0.0, c};
                                 return m;
                               }};
  const auto out = connection_monodromy(t);
  EXPECT_LT(std::abs(out.transport(0, 0) - std::exp(std::complex<double>(0.0, -c * period))), 1e-9);
  double expected = -c * period / (2 * kPi);
  expected -= std::floor(expected);
  EXPECT_NEAR(out.gamma[0].real(), expected, 1e-9);
  EXPECT_NEAR(out.gamma[0].imag(), 0.0, 1e-9);
}

TEST(ConnectionMonodromy, GaugeTrivial) {
  // P1(theta) = (2 + sin theta) R(theta): a commuting family, so P1' P1^-1 is
  // gauge-trivial in either ordering.
  ComplexPeriodicCoefficient t{2 * kPi, 2, [](double th) {
                                 const double f = 2.0 + std::sin(th);
                                 Eigen::MatrixXcd m(2, 2);
                                 m << std::cos(th) / f, -1.0, 1.0, std::cos(th) / f;
                                 return m;
                               }};
  const auto out = connection_monodromy(t);
  EXPECT_LT((out.transport - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-8);
}

TEST(ConnectionMonodromy, AntiHermitianIsUnitary) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd h0(3, 3), h1(3, 3);
    for (int i = 0; i < 9; ++i) {
      h0(i) = {g(rng), g(rng)};
      h1(i) = {g(rng), g(rng)};
    }
    const Eigen::MatrixXcd a0 = (h0 - h0.adjoint()) / 2.0;
    const Eigen::MatrixXcd a1 = (h1 - h1.adjoint()) / 2.0;
    ComplexPeriodicCoefficient t{1.0, 3, [a0, a1](double th) -> Eigen::MatrixXcd { return a0 + std::cos(2 * kPi * th) * a1; }};
    const auto out = connection_monodromy(t);
    EXPECT_LT((out.transport.adjoint() * out.transport - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-8);
    for (const auto& gamma : out.gamma) {
      EXPECT_NEAR(gamma.imag(), 0.0, 1e-8);
      EXPECT_GE(gamma.real(), 0.0);
      EXPECT_LT(gamma.real(), 1.0);
    }
  }
}

TEST(OrbitFromFloquet, CarriesSpectrumAndTwists) {
  const auto dec = floquet_decompose(Eigen::Vector2d(-0.5, -3.0).asDiagonal().toDenseMatrix(), 2.0);
  const CriticalElement e = orbit_from_floquet("o", dec);
  ASSERT_EQ(e.eigenvalues.size(), 2U);
  EXPECT_NEAR(e.eigenvalues[0].chi.value(), -std::log(2.0) / 2, 1e-12);
  EXPECT_TRUE(e.eigenvalues[0].stable);
  EXPECT_EQ(e.eigenvalues[1].twist, Rational(1, 2));
  EXPECT_EQ(e.orientability, Rational(1, 2));
}

TEST(OrbitFromFloquet, RefusesLeftHalfPlaneComplexMultipliers) {
  const MatrixXd m = 2.0 * (2.5 * rotation_generator()).exp();
  const auto dec = floquet_decompose(m, 1.0);
  EXPECT_THROW(orbit_from_floquet("o", dec), FloquetError);
}
