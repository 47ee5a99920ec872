#include "support/floquet_cases.hpp"

#include <cmath>
#include <numbers>

namespace ruelle::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2d rotation_generator() {
  Eigen::Matrix2d j;
  j << 0, -1, 1, 0;
  return j;
}

}  // namespace

PeriodicCoefficient rotation_dilation(double chi) {
  return PeriodicCoefficient::constant(kPi * rotation_generator() + chi * Eigen::Matrix2d::Identity(), 1.0);
}

PeriodicCoefficient wobbling() {
  PeriodicCoefficient c;
  c.period = 1.0;
  c.size = 2;
  c.evaluate = [](double t) {
    Eigen::MatrixXd a(2, 2);
    const double w = std::cos(2 * kPi * t);
    a << 0.5 + w, 1.0, 0.3, 0.5 - w;
    return a;
  };
  return c;
}

std::vector<PeriodicCoefficient> worked_coefficients() {
  return {PeriodicCoefficient::constant(Eigen::Vector2d(-1, 2).asDiagonal().toDenseMatrix(), 1.0), rotation_dilation(1.0),
          wobbling()};
}

double trace_integral(const PeriodicCoefficient& c, double a, double b) {
  const int n = 2000;
  const double h = (b - a) / n;
  double s = c.evaluate(a).trace() + c.evaluate(b).trace();
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * c.evaluate(a + i * h).trace();
  return s * h / 3.0;
}

}  // namespace ruelle::fixtures
