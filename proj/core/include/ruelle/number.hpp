#pragma once

// Scalar layer shared by every module.
//
// A Real always carries a double approximation. In exact mode it also carries
// an exact value a + b*pi with rational a, b. That field is closed under
// everything the spectral formulas need: sums of Lyapunov exponents, integer
// lattice combinations, and multiples of 2*pi/P when the period P is a
// rational or a rational multiple of pi. Since pi is transcendental, equality
// of two such values is decidable, which is what multiplicity counting needs.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace boost {

// Boost 1.74 rational == int recurses forever under C++20 reversed
// comparison candidates; these exact matches win overload resolution.
inline bool operator==(const rational<std::int64_t>& q, int i) { return q.denominator() == 1 && q.numerator() == i; }
inline bool operator==(int i, const rational<std::int64_t>& q) { return q == i; }

}  // namespace boost

namespace ruelle {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& q);
std::int64_t floor(const Rational& q);
/// Fractional part in [0, 1).
Rational frac(const Rational& q);
/// "p" or "p/q".
std::string to_string(const Rational& q);
/// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25".
std::optional<Rational> parse_rational(std::string_view text);
/// The exact binary value of a double, when it fits in 64-bit numerator and
/// denominator.
std::optional<Rational> exact_rational(double x);

/// Exact value a + b*pi.
struct PiLinear {
  Rational a{0};
  Rational b{0};

  static PiLinear rational(Rational q) { return {q, Rational(0)}; }
  static PiLinear pi_multiple(Rational q) { return {Rational(0), q}; }

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }
  double value() const;
  long double value_ld() const;

  friend bool operator==(const PiLinear&, const PiLinear&) = default;
  friend PiLinear operator+(const PiLinear& x, const PiLinear& y) { return {x.a + y.a, x.b + y.b}; }
  friend PiLinear operator-(const PiLinear& x, const PiLinear& y) { return {x.a - y.a, x.b - y.b}; }
  friend PiLinear operator-(const PiLinear& x) { return {-x.a, -x.b}; }
  friend PiLinear operator*(const Rational& q, const PiLinear& x) { return {q * x.a, q * x.b}; }
};

/// Exact three-way comparison.
int compare(const PiLinear& x, const PiLinear& y);
/// Product, when it stays inside Q + Q*pi.
std::optional<PiLinear> multiply(const PiLinear& x, const PiLinear& y);
/// Quotient, when it stays inside Q + Q*pi.
std::optional<PiLinear> divide(const PiLinear& x, const PiLinear& y);
/// x / y when that quotient is rational.
std::optional<Rational> ratio(const PiLinear& x, const PiLinear& y);
std::string to_string(const PiLinear& x);

/// Relative tolerance used to decide coincidence of inexact values.
inline constexpr double kMergeTolerance = 1e-9;

class Real {
 public:
  /// Exact zero.
  Real() : approx_(0.0), exact_(PiLinear{}) {}
  explicit Real(double v) : approx_(v) {}
  static Real exact(Rational q) { return Real(PiLinear::rational(q)); }
  static Real exact(const PiLinear& x) { return Real(x); }
  static Real from_int(std::int64_t k) { return exact(Rational(k)); }

  double value() const { return approx_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<PiLinear>& exact() const { return exact_; }
  /// The exact value when it is a plain rational.
  std::optional<Rational> rational() const;
  Real inexact() const { return Real(approx_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  friend Real operator+(Real x, const Real& y) { return x += y; }
  friend Real operator-(Real x, const Real& y) { return x -= y; }
  friend Real operator-(const Real& x);
  friend Real operator*(const Real& x, const Real& y);
  friend Real operator/(const Real& x, const Real& y);
  friend Real operator*(const Rational& q, const Real& x);
  friend Real operator*(std::int64_t k, const Real& x) { return Rational(k) * x; }

 private:
  explicit Real(const PiLinear& x) : approx_(x.value()), exact_(x) {}
  Real(double v, std::optional<PiLinear> e) : approx_(v), exact_(std::move(e)) {}

  double approx_;
  std::optional<PiLinear> exact_;
};

/// Ordering: exact when both sides are exact, otherwise on the doubles.
int compare(const Real& x, const Real& y);
/// Equality: exact when both sides are exact, otherwise |x - y| <= tol*(1 + |x|).
bool coincide(const Real& x, const Real& y, double tol = kMergeTolerance);
/// Decides x >= bound (exactly when x is exact, with tolerance otherwise).
bool at_least(const Real& x, double bound, double tol = kMergeTolerance);
/// Decides x <= bound.
bool at_most(const Real& x, double bound, double tol = kMergeTolerance);
/// Decides x == 0.
bool is_zero(const Real& x, double tol = kMergeTolerance);
/// 2*pi / period, exact whenever the period is rational or a rational multiple of pi.
Real two_pi_over(const Real& period);
std::string to_string(const Real& x);

struct ComplexValue {
  Real re;
  Real im;

  std::complex<double> value() const { return {re.value(), im.value()}; }
  bool is_exact() const { return re.is_exact() && im.is_exact(); }
  ComplexValue inexact() const { return {re.inexact(), im.inexact()}; }

  friend ComplexValue operator+(const ComplexValue& x, const ComplexValue& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend ComplexValue operator-(const ComplexValue& x, const ComplexValue& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend ComplexValue operator-(const ComplexValue& x) { return {-x.re, -x.im}; }
  friend ComplexValue operator*(std::int64_t k, const ComplexValue& x) { return {k * x.re, k * x.im}; }
  friend ComplexValue operator*(const Rational& q, const ComplexValue& x) {
    return {q * x.re, q * x.im};
  }
};

/// i * x
inline ComplexValue times_i(const ComplexValue& x) { return {-x.im, x.re}; }
/// r * x for a real scalar r.
ComplexValue scale(const Real& r, const ComplexValue& x);

/// Coincidence of complex values; inexact comparison uses |z1 - z2| <= tol*(1 + |z1|).
bool coincide(const ComplexValue& x, const ComplexValue& y, double tol = kMergeTolerance);
/// Output ordering: real part descending, then imaginary part ascending.
bool output_before(const ComplexValue& x, const ComplexValue& y);

}  // namespace ruelle
