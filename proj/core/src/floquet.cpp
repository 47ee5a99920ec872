#include "ruelle/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "ruelle/error.hpp"

namespace ruelle {

namespace ode = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

// Adaptive Dormand-Prince from t0 to t1 (either direction).
template <class System>
void drive(System&& sys, State& x, double t0, double t1, double tol) {
  if (t0 == t1) return;
  auto stepper = ode::make_controlled(tol * 1e-2, tol * 1e-2, ode::runge_kutta_dopri5<State>());
  const double span = t1 - t0;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double floor_dt = 1e-13 * std::max(1.0, std::abs(span));
  double t = t0;
  double dt = dir * std::min(std::abs(span), 1e-2);
  std::size_t rejected = 0;
  while (dir * (t1 - t) > 1e-15 * std::abs(span)) {
    if (dir * (t + dt - t1) > 0) dt = t1 - t;
    const double before = t;
    if (stepper.try_step(sys, x, t, dt) == ode::fail) {
      if (std::abs(dt) < floor_dt || ++rejected > 100000) {
        throw FloquetError("step-size underflow at theta = " + std::to_string(before) +
                           "; the coefficient is too rough for tol = " + std::to_string(tol));
      }
    }
  }
}

double wrap(double theta, double origin, double period) {
  double r = std::fmod(theta - origin, period);
  if (r < 0) r += period;
  return origin + r;
}

// Condition number of an eigenvector basis.
template <class Matrix>
double condition(const Matrix& v) {
  Eigen::JacobiSVD<Matrix> svd(v);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / lo;
}

}  // namespace

PeriodicCoefficient PeriodicCoefficient::constant(const Eigen::MatrixXd& a, double period) {
  PeriodicCoefficient c;
  c.period = period;
  c.size = static_cast<int>(a.rows());
  c.evaluate = [a](double) { return a; };
  return c;
}

PeriodicCoefficient PeriodicCoefficient::sampled(const std::vector<double>& theta,
                                                 const std::vector<Eigen::MatrixXd>& samples, double period) {
  if (theta.size() != samples.size() || theta.size() < 4) {
    throw FloquetError("sampled coefficient needs at least 4 samples with matching abscissae");
  }
  if (!(period > 0)) throw FloquetError("period must be positive");
  std::size_t count = theta.size();
  const double h = (theta.back() - theta.front()) / static_cast<double>(count - 1);
  if (std::abs(theta.back() - theta.front() - period) <= 1e-9 * period) --count;  // closing duplicate
  if (std::abs(h * static_cast<double>(count) - period) > 1e-6 * period) {
    throw FloquetError("samples must cover exactly one period on a uniform grid");
  }
  const int m = static_cast<int>(samples.front().rows());
  const double origin = theta.front();
  auto splines = std::make_shared<std::vector<boost::math::interpolators::cardinal_cubic_b_spline<double>>>();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      std::vector<double> data;
      data.reserve(3 * count);
      for (int rep = 0; rep < 3; ++rep) {
        for (std::size_t k = 0; k < count; ++k) data.push_back(samples[k](i, j));
      }
      splines->emplace_back(data.data(), data.size(), origin - period, h);
    }
  }
  PeriodicCoefficient c;
  c.period = period;
  c.size = m;
  c.evaluate = [splines, m, origin, period](double t) {
    const double s = wrap(t, origin, period);
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = (*splines)[static_cast<std::size_t>(i * m + j)](s);
    return a;
  };
  return c;
}

Eigen::MatrixXd integrate_fundamental(const PeriodicCoefficient& coeff, double theta0, double theta1, double tol) {
  if (!(tol > 0)) throw FloquetError("tol must be positive");
  const int m = coeff.size;
  State x(static_cast<std::size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i * m + i)] = 1.0;
  auto sys = [&](const State& u, State& du, double t) {
    const Eigen::MatrixXd a = coeff.evaluate(t);
    Eigen::Map<const Eigen::MatrixXd> U(u.data(), m, m);
    Eigen::Map<Eigen::MatrixXd> dU(du.data(), m, m);
    dU.noalias() = a * U;
  };
  drive(sys, x, theta0, theta1, tol);
  return Eigen::Map<Eigen::MatrixXd>(x.data(), m, m);
}

Eigen::MatrixXd monodromy(const PeriodicCoefficient& coeff, double tol) {
  Eigen::MatrixXd m = integrate_fundamental(coeff, 0.0, coeff.period, tol);
  if (m.size() > 0 && !(m.determinant() > 0)) throw FloquetError("monodromy has non-positive determinant");
  return m;
}

FloquetDecomposition floquet_decompose(const Eigen::MatrixXd& m, double period, double tol) {
  if (!(period > 0)) throw FloquetError("period must be positive");
  FloquetDecomposition dec;
  dec.period = period;
  const int n = static_cast<int>(m.rows());
  dec.generator = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return dec;

  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw FloquetError("eigen-decomposition of the monodromy failed");
  const Eigen::VectorXcd nu = es.eigenvalues();
  const Eigen::MatrixXcd v = es.eigenvectors();
  if (condition(v) > 1.0 / tol) throw FloquetError("monodromy is not diagonalizable within tolerance");

  Eigen::VectorXcd logs(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::abs(nu(j)) - 1.0) < tol) {
      throw FloquetError("non-hyperbolic multiplier of modulus " + std::to_string(std::abs(nu(j))));
    }
    logs(j) = std::log(nu(j) * nu(j)) / (2.0 * period);
  }
  dec.generator = (v * logs.asDiagonal() * v.inverse()).real();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (logs(a).real() != logs(b).real()) return logs(a).real() < logs(b).real();
    return logs(a).imag() < logs(b).imag();
  });
  int neg_stable = 0;
  int neg_unstable = 0;
  for (int j : order) {
    const std::complex<double> z = nu(j);
    const bool real = std::abs(z.imag()) <= tol * std::abs(z);
    dec.multipliers.push_back(real ? std::complex<double>(z.real(), 0.0) : z);
    dec.angles.push_back(real ? (z.real() < 0 ? std::numbers::pi : 0.0) : std::arg(z));
    dec.lyapunov.push_back(std::log(std::abs(z)) / period);
    dec.frequencies.push_back(real ? 0.0 : logs(j).imag());
    const bool flipped = z.real() < 0;
    dec.twists.push_back(flipped ? Rational(1, 2) : Rational(0));
    if (real && flipped) ++(std::abs(z) < 1.0 ? neg_stable : neg_unstable);
  }
  dec.orientable_u = neg_unstable % 2 == 0;
  dec.orientable_s = neg_stable % 2 == 0;
  return dec;
}

Eigen::MatrixXd periodic_factor(const PeriodicCoefficient& coeff, const FloquetDecomposition& dec, double theta,
                                double tol) {
  const Eigen::MatrixXd u = integrate_fundamental(coeff, 0.0, theta, tol);
  const Eigen::MatrixXd back = (-theta * dec.generator).exp();
  return u * back;
}

Eigen::MatrixXd periodic_factor(const PeriodicCoefficient& coeff, double theta, double tol) {
  return periodic_factor(coeff, floquet_decompose(monodromy(coeff, tol), coeff.period), theta, tol);
}

ConnectionMonodromy connection_monodromy(const ComplexPeriodicCoefficient& t, double tol) {
  const int n = t.size;
  // Real and imaginary parts stacked: x = [Re S, Im S].
  State x(static_cast<std::size_t>(2 * n * n), 0.0);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i * n + i)] = 1.0;
  auto sys = [&](const State& u, State& du, double theta) {
    const Eigen::MatrixXcd a = t.evaluate(theta);
    Eigen::Map<const Eigen::MatrixXd> re(u.data(), n, n);
    Eigen::Map<const Eigen::MatrixXd> im(u.data() + n * n, n, n);
    Eigen::Map<Eigen::MatrixXd> dre(du.data(), n, n);
    Eigen::Map<Eigen::MatrixXd> dim(du.data() + n * n, n, n);
    const Eigen::MatrixXd ar = a.real();
    const Eigen::MatrixXd ai = a.imag();
    dre.noalias() = -(ar * re - ai * im);
    dim.noalias() = -(ar * im + ai * re);
  };
  drive(sys, x, 0.0, t.period, tol);

  ConnectionMonodromy out;
  out.transport.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out.transport(i, j) = {x[static_cast<std::size_t>(j * n + i)], x[static_cast<std::size_t>(n * n + j * n + i)]};
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(out.transport);
  if (es.info() != Eigen::Success) throw FloquetError("eigen-decomposition of the connection monodromy failed");
  if (condition(es.eigenvectors()) > 1e8) throw FloquetError("connection monodromy is not diagonalizable");
  for (int j = 0; j < n; ++j) {
    std::complex<double> g = std::log(es.eigenvalues()(j)) / std::complex<double>(0.0, 2.0 * std::numbers::pi);
    double re = g.real() - std::floor(g.real());
    if (re >= 1.0 - 1e-12) re = 0.0;
    if (std::abs(re) < 1e-12) re = 0.0;
    out.gamma.emplace_back(re, g.imag());
  }
  std::sort(out.gamma.begin(), out.gamma.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

CriticalElement orbit_from_floquet(const std::string& name, const FloquetDecomposition& dec) {
  CriticalElement e;
  e.kind = ElementKind::closed_orbit;
  e.name = name;
  e.period = Real(dec.period);
  for (std::size_t j = 0; j < dec.multipliers.size(); ++j) {
    const bool complex = dec.multipliers[j].imag() != 0.0;
    if (complex && dec.twists[j] != 0) {
      throw FloquetError("complex multiplier with negative real part has no model representation");
    }
    EigenDatum d;
    d.chi = Real(dec.lyapunov[j]);
    d.omega = Real(dec.frequencies[j]);
    d.twist = dec.twists[j];
    d.stable = dec.lyapunov[j] < 0;
    e.eigenvalues.push_back(d);
  }
  e.orientability = implied_orientability(e);
  return e;
}

}  // namespace ruelle
