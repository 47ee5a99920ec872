#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/model.hpp"

namespace ruelle {

inline constexpr double kFloquetTolerance = 1e-10;

/// theta -> A(theta), a real square matrix function with the given period.
struct PeriodicCoefficient {
  double period = 1.0;
  int size = 0;
  std::function<Eigen::MatrixXd(double)> evaluate;

  static PeriodicCoefficient constant(const Eigen::MatrixXd& a, double period);
  /// Uniform samples at theta_k = theta_0 + k*h covering one period (a
  /// duplicate sample at theta_0 + period is dropped). Entries are
  /// interpolated by periodic cubic B-splines.
  static PeriodicCoefficient sampled(const std::vector<double>& theta, const std::vector<Eigen::MatrixXd>& samples,
                                     double period);
};

/// Complex matrix coefficient for connection transport.
struct ComplexPeriodicCoefficient {
  double period = 1.0;
  int size = 0;
  std::function<Eigen::MatrixXcd(double)> evaluate;
};

/// U(theta1, theta0) with dU/dtheta = A(theta) U and U(theta0, theta0) = Id.
/// Throws FloquetError on step-size underflow.
Eigen::MatrixXd integrate_fundamental(const PeriodicCoefficient& coeff, double theta0, double theta1,
                                      double tol = kFloquetTolerance);

/// U(period, 0). Throws FloquetError if det M <= 0.
Eigen::MatrixXd monodromy(const PeriodicCoefficient& coeff, double tol = kFloquetTolerance);

struct FloquetDecomposition {
  double period = 1.0;
  std::vector<std::complex<double>> multipliers;
  /// arg(nu).
  std::vector<double> angles;
  /// log|nu| / period.
  std::vector<double> lyapunov;
  /// Imaginary parts of the eigenvalues of the generator.
  std::vector<double> frequencies;
  std::vector<Rational> twists;
  /// Real matrix with exp(2 * period * generator) = M^2.
  Eigen::MatrixXd generator;
  bool orientable_u = true;
  bool orientable_s = true;
};

/// Throws FloquetError when M is not hyperbolic or not diagonalizable. A
/// negative determinant is accepted (orientable_u != orientable_s); monodromy()
/// never produces one.
FloquetDecomposition floquet_decompose(const Eigen::MatrixXd& m, double period, double tol = 1e-8);

/// P(theta, 0) = U(theta, 0) exp(-theta A).
Eigen::MatrixXd periodic_factor(const PeriodicCoefficient& coeff, const FloquetDecomposition& dec, double theta,
                                double tol = kFloquetTolerance);
Eigen::MatrixXd periodic_factor(const PeriodicCoefficient& coeff, double theta, double tol = kFloquetTolerance);

struct ConnectionMonodromy {
  Eigen::MatrixXcd transport;
  /// Real parts normalized into [0, 1).
  std::vector<std::complex<double>> gamma;
};

/// Parallel transport of sections solving ds/dtheta = -T(theta) s over one
/// period, and gamma_j = log(nu_j) / (2 i pi).
ConnectionMonodromy connection_monodromy(const ComplexPeriodicCoefficient& t, double tol = kFloquetTolerance);

/// A closed-orbit element in float mode carrying the transverse spectrum of the
/// generator. Complex multipliers with negative real part have no model-level
/// representation and raise FloquetError.
CriticalElement orbit_from_floquet(const std::string& name, const FloquetDecomposition& dec);

}  // namespace ruelle
