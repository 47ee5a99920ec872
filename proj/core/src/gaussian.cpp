#include "ruelle/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "ruelle/error.hpp"

namespace ruelle {

Polynomial Polynomial::constant(int dim, Complex c) {
  Polynomial p(dim);
  p.add_term(Exponent(static_cast<std::size_t>(dim), 0), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int i) {
  Exponent e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponent& e, Complex c) {
  Polynomial p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int a : e) s += a;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponent& e, Complex c) {
  if (static_cast<int>(e.size()) != dim_) throw StateError("polynomial exponent has the wrong length");
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.dim_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(Polynomial a, Complex c) {
  Polynomial out(a.dim_);
  for (const auto& [e, v] : a.terms_) out.add_term(e, v * c);
  return out;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial out(dim_);
  const auto k = static_cast<std::size_t>(i);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponent d = e;
    --d[k];
    out.add_term(d, c * static_cast<double>(e[k]));
  }
  return out;
}

Polynomial Polynomial::compose(const Eigen::MatrixXd& m) const {
  const int out_dim = static_cast<int>(m.cols());
  std::vector<Polynomial> rows;
  for (int i = 0; i < dim_; ++i) {
    Polynomial r(out_dim);
    for (int j = 0; j < out_dim; ++j) {
      if (m(i, j) != 0.0) r += variable(out_dim, j) * Complex(m(i, j));
    }
    rows.push_back(r);
  }
  std::map<std::pair<int, int>, Polynomial> powers;
  auto power = [&](int i, int a) -> const Polynomial& {
    auto key = std::make_pair(i, a);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Polynomial p = constant(out_dim, 1.0);
    for (int s = 0; s < a; ++s) p = p * rows[static_cast<std::size_t>(i)];
    return powers.emplace(key, p).first->second;
  };
  Polynomial out(out_dim);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(out_dim, c);
    for (int i = 0; i < dim_; ++i) {
      if (e[static_cast<std::size_t>(i)] > 0) term = term * power(i, e[static_cast<std::size_t>(i)]);
    }
    out += term;
  }
  return out;
}

Polynomial Polynomial::restrict(const std::vector<int>& keep) const {
  Polynomial out(static_cast<int>(keep.size()));
  std::vector<bool> kept(static_cast<std::size_t>(dim_), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  for (const auto& [e, c] : terms_) {
    bool vanishes = false;
    for (std::size_t i = 0; i < e.size(); ++i) vanishes = vanishes || (!kept[i] && e[i] > 0);
    if (vanishes) continue;
    Exponent r(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) r[j] = e[static_cast<std::size_t>(keep[j])];
    out.add_term(r, c);
  }
  return out;
}

Polynomial Polynomial::conjugate() const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) out.add_term(e, std::conj(c));
  return out;
}

Complex Polynomial::operator()(const Eigen::VectorXd& x) const {
  Complex s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(x(static_cast<Eigen::Index>(i)), e[i]);
    s += c * m;
  }
  return s;
}

GaussianPoly::GaussianPoly(Eigen::MatrixXd quadratic, Polynomial p) : q(std::move(quadratic)), poly(std::move(p)) {
  if (q.rows() != q.cols() || q.rows() != poly.dim()) throw StateError("Gaussian envelope and polynomial disagree on dimension");
}

GaussianPoly GaussianPoly::isotropic(int dim, double width) {
  if (!(width > 0.0)) throw StateError("envelope width must be positive");
  return {Eigen::MatrixXd::Identity(dim, dim) / (width * width), Polynomial::constant(dim, 1.0)};
}

GaussianPoly GaussianPoly::derivative(int i) const {
  // d/dx_i (p e^{-x'Qx}) = (dp/dx_i - 2 (Qx)_i p) e^{-x'Qx}
  Polynomial lin(dim());
  for (int j = 0; j < dim(); ++j) {
    if (q(i, j) != 0.0) lin += Polynomial::variable(dim(), j) * Complex(-2.0 * q(i, j));
  }
  return {q, poly.derivative(i) + lin * poly};
}

GaussianPoly GaussianPoly::compose(const Eigen::MatrixXd& m) const {
  Eigen::MatrixXd qq = m.transpose() * q * m;
  qq = 0.5 * (qq + qq.transpose());
  return {qq, poly.compose(m)};
}

GaussianPoly GaussianPoly::restrict(const std::vector<int>& keep) const {
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd qq(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) qq(i, j) = q(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  return {qq, poly.restrict(keep)};
}

GaussianPoly GaussianPoly::times(const Polynomial& p) const { return {q, poly * p}; }

GaussianPoly GaussianPoly::scaled(Complex c) const { return {q, poly * c}; }

GaussianPoly GaussianPoly::conjugate() const { return {q, poly.conjugate()}; }

Complex GaussianPoly::operator()(const Eigen::VectorXd& x) const {
  return poly(x) * std::exp(-x.dot(q * x));
}

namespace {

// Returns W with W^T Q W = I, and det W > 0.
Eigen::MatrixXd whitening(const Eigen::MatrixXd& q) {
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  if (llt.info() != Eigen::Success) throw StateError("Gaussian envelope is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  return l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(q.rows(), q.cols()));
}

// Integral of w^a e^{-w^2} over R.
double moment(int a) {
  if (a % 2 != 0) return 0.0;
  return std::tgamma((a + 1) / 2.0);
}

}  // namespace

Complex GaussianPoly::integral() const {
  if (dim() == 0) {
    auto it = poly.terms().find({});
    return it == poly.terms().end() ? Complex(0.0) : it->second;
  }
  const Eigen::MatrixXd w = whitening(q);
  const Polynomial p = poly.compose(w);
  Complex s = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double m = 1.0;
    for (int a : e) m *= moment(a);
    s += c * m;
  }
  return s * w.determinant();
}

Complex GaussianPoly::integral_quadrature() const {
  if (dim() == 0) return integral();
  const int points = poly.degree() / 2 + 2;
  // Golub-Welsch for the weight e^{-w^2}.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  const Eigen::VectorXd nodes = eig.eigenvalues();
  Eigen::VectorXd weights(points);
  for (int k = 0; k < points; ++k) {
    const double v = eig.eigenvectors()(0, k);
    weights(k) = std::sqrt(std::numbers::pi) * v * v;
  }
  const Eigen::MatrixXd w = whitening(q);
  const int d = dim();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Complex s = 0.0;
  Eigen::VectorXd node(d);
  while (true) {
    double weight = 1.0;
    for (int i = 0; i < d; ++i) {
      node(i) = nodes(idx[static_cast<std::size_t>(i)]);
      weight *= weights(idx[static_cast<std::size_t>(i)]);
    }
    s += weight * poly(w * node);
    int i = 0;
    while (i < d && ++idx[static_cast<std::size_t>(i)] == points) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == d) break;
  }
  return s * w.determinant();
}

}  // namespace ruelle
