#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace ruelle {

using Complex = std::complex<double>;

/// Complex polynomial in real variables x_0 .. x_{d-1}.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  explicit Polynomial(int dim = 0) : dim_(dim) {}
  static Polynomial constant(int dim, Complex c);
  static Polynomial variable(int dim, int i);
  static Polynomial monomial(const Exponent& e, Complex c = 1.0);

  int dim() const { return dim_; }
  const std::map<Exponent, Complex>& terms() const { return terms_; }
  int degree() const;
  void add_term(const Exponent& e, Complex c);

  Polynomial& operator+=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += b * Complex(-1.0); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, Complex c);

  Polynomial derivative(int i) const;
  /// p(M x).
  Polynomial compose(const Eigen::MatrixXd& m) const;
  /// Sets every variable outside `keep` to zero; keep[j] becomes variable j.
  Polynomial restrict(const std::vector<int>& keep) const;
  Polynomial conjugate() const;
  Complex operator()(const Eigen::VectorXd& x) const;

 private:
  int dim_;
  std::map<Exponent, Complex> terms_;
};

/// p(x) * exp(-x^T Q x) with Q symmetric positive definite.
struct GaussianPoly {
  Eigen::MatrixXd q;
  Polynomial poly;

  GaussianPoly() = default;
  GaussianPoly(Eigen::MatrixXd quadratic, Polynomial p);
  static GaussianPoly isotropic(int dim, double width = 1.0);

  int dim() const { return static_cast<int>(q.rows()); }
  GaussianPoly derivative(int i) const;
  GaussianPoly compose(const Eigen::MatrixXd& m) const;
  GaussianPoly restrict(const std::vector<int>& keep) const;
  GaussianPoly times(const Polynomial& p) const;
  GaussianPoly scaled(Complex c) const;
  GaussianPoly conjugate() const;
  Complex operator()(const Eigen::VectorXd& x) const;

  /// Integral over R^d from Gaussian moments.
  Complex integral() const;
  /// The same integral by tensor Gauss-Hermite quadrature in whitened coordinates.
  Complex integral_quadrature() const;
};

}  // namespace ruelle
