#include "ruelle/number.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ruelle {

namespace {

constexpr long double kPiLd = 3.141592653589793238462643383279502884L;

int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

// Sign of a + b*pi with b != 0, evaluated with enough precision that the
// rationals this library produces cannot fool it.
int sign_mixed(const Rational& a, const Rational& b) {
  const long double v = static_cast<long double>(a.numerator()) / a.denominator() +
                        static_cast<long double>(b.numerator()) / b.denominator() * kPiLd;
  const long double scale = std::fabs(static_cast<long double>(a.numerator()) / a.denominator()) + 1.0L;
  if (std::fabs(v) > 1e-15L * scale) return v > 0 ? 1 : -1;
  using big = boost::multiprecision::cpp_bin_float_100;
  const big w = big(a.numerator()) / big(a.denominator()) +
                big(b.numerator()) / big(b.denominator()) * boost::math::constants::pi<big>();
  return w > 0 ? 1 : -1;
}

}  // namespace

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::int64_t floor(const Rational& q) {
  const std::int64_t n = q.numerator();
  const std::int64_t d = q.denominator();
  std::int64_t f = n / d;
  if ((n % d != 0) && (n < 0)) --f;
  return f;
}

Rational frac(const Rational& q) { return q - Rational(floor(q)); }

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::optional<Rational> parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return std::nullopt;

  auto parse_int = [](std::string_view s) -> std::optional<std::int64_t> {
    if (s.empty()) return std::nullopt;
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      if (v > (std::numeric_limits<std::int64_t>::max() - (c - '0')) / 10) return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return neg ? -v : v;
  };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto p = parse_int(trim(text.substr(0, slash)));
    const auto q = parse_int(trim(text.substr(slash + 1)));
    if (!p || !q || *q == 0) return std::nullopt;
    return Rational(*p, *q);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view fraction = text.substr(dot + 1);
    bool neg = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      neg = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if (fraction.size() > 17) return std::nullopt;
    std::int64_t w = 0;
    if (!whole.empty()) {
      const auto parsed = parse_int(whole);
      if (!parsed || *parsed < 0) return std::nullopt;
      w = *parsed;
    }
    std::int64_t f = 0;
    std::int64_t scale = 1;
    for (char c : fraction) {
      if (c < '0' || c > '9') return std::nullopt;
      f = f * 10 + (c - '0');
      scale *= 10;
    }
    Rational r = Rational(w) + Rational(f, scale);
    return neg ? -r : r;
  }
  if (const auto v = parse_int(text)) return Rational(*v);
  return std::nullopt;
}

std::optional<Rational> exact_rational(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  while (e < 0 && (mant % 2 == 0)) {
    mant /= 2;
    ++e;
  }
  if (e >= 0) {
    if (e > 62) return std::nullopt;
    const long double v = static_cast<long double>(mant) * std::ldexp(1.0L, e);
    if (std::fabs(v) >= 9.2e18L) return std::nullopt;
    return Rational(mant * (std::int64_t{1} << e));
  }
  if (-e > 62) return std::nullopt;
  return Rational(mant, std::int64_t{1} << (-e));
}

double PiLinear::value() const { return static_cast<double>(value_ld()); }

long double PiLinear::value_ld() const {
  return static_cast<long double>(a.numerator()) / a.denominator() +
         static_cast<long double>(b.numerator()) / b.denominator() * kPiLd;
}

int compare(const PiLinear& x, const PiLinear& y) {
  const PiLinear d = x - y;
  if (d.b == 0) return sign_of(d.a);
  return sign_mixed(d.a, d.b);
}

std::optional<PiLinear> multiply(const PiLinear& x, const PiLinear& y) {
  if (x.b != 0 && y.b != 0) return std::nullopt;
  return PiLinear{x.a * y.a, x.a * y.b + x.b * y.a};
}

std::optional<PiLinear> divide(const PiLinear& x, const PiLinear& y) {
  if (y.is_zero()) return std::nullopt;
  if (y.b == 0) return PiLinear{x.a / y.a, x.b / y.a};
  if (auto q = ratio(x, y)) return PiLinear::rational(*q);
  return std::nullopt;
}

std::optional<Rational> ratio(const PiLinear& x, const PiLinear& y) {
  if (y.is_zero()) return std::nullopt;
  if (y.a != 0) {
    const Rational q = x.a / y.a;
    if (x.b == q * y.b) return q;
    return std::nullopt;
  }
  if (x.a != 0) return std::nullopt;
  return x.b / y.b;
}

std::string to_string(const PiLinear& x) {
  if (x.b == 0) return to_string(x.a);
  std::string pi_part = to_string(x.b) + "*pi";
  if (x.a == 0) return pi_part;
  return to_string(x.a) + (x.b > 0 ? "+" : "") + pi_part;
}

std::optional<Rational> Real::rational() const {
  if (exact_ && exact_->is_rational()) return exact_->a;
  return std::nullopt;
}

Real& Real::operator+=(const Real& o) {
  approx_ += o.approx_;
  if (exact_ && o.exact_) {
    exact_ = *exact_ + *o.exact_;
    approx_ = exact_->value();
  } else {
    exact_.reset();
  }
  return *this;
}

Real& Real::operator-=(const Real& o) {
  approx_ -= o.approx_;
  if (exact_ && o.exact_) {
    exact_ = *exact_ - *o.exact_;
    approx_ = exact_->value();
  } else {
    exact_.reset();
  }
  return *this;
}

Real operator-(const Real& x) {
  if (x.exact_) return Real(-*x.exact_);
  return Real(-x.approx_);
}

Real operator*(const Real& x, const Real& y) {
  if (x.exact_ && y.exact_) {
    if (auto p = multiply(*x.exact_, *y.exact_)) return Real(*p);
  }
  return Real(x.approx_ * y.approx_);
}

Real operator/(const Real& x, const Real& y) {
  if (x.exact_ && y.exact_) {
    if (auto p = divide(*x.exact_, *y.exact_)) return Real(*p);
  }
  return Real(x.approx_ / y.approx_);
}

Real operator*(const Rational& q, const Real& x) {
  if (x.exact_) return Real(q * *x.exact_);
  return Real(to_double(q) * x.approx_);
}

int compare(const Real& x, const Real& y) {
  if (x.is_exact() && y.is_exact()) return compare(*x.exact(), *y.exact());
  if (x.value() < y.value()) return -1;
  if (x.value() > y.value()) return 1;
  return 0;
}

bool coincide(const Real& x, const Real& y, double tol) {
  if (x.is_exact() && y.is_exact()) return *x.exact() == *y.exact();
  return std::fabs(x.value() - y.value()) <= tol * (1.0 + std::fabs(x.value()));
}

namespace {

int compare_to_double(const PiLinear& x, double bound) {
  if (auto q = exact_rational(bound)) return compare(x, PiLinear::rational(*q));
  const long double v = x.value_ld();
  return v < bound ? -1 : (v > bound ? 1 : 0);
}

}  // namespace

bool at_least(const Real& x, double bound, double tol) {
  if (x.is_exact()) return compare_to_double(*x.exact(), bound) >= 0;
  return x.value() >= bound - tol * (1.0 + std::fabs(bound));
}

bool at_most(const Real& x, double bound, double tol) {
  if (x.is_exact()) return compare_to_double(*x.exact(), bound) <= 0;
  return x.value() <= bound + tol * (1.0 + std::fabs(bound));
}

bool is_zero(const Real& x, double tol) {
  if (x.is_exact()) return x.exact()->is_zero();
  return std::fabs(x.value()) <= tol;
}

Real two_pi_over(const Real& period) {
  return Real::exact(PiLinear::pi_multiple(Rational(2))) / period;
}

std::string to_string(const Real& x) {
  if (x.is_exact()) return to_string(*x.exact());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x.value());
  return buf;
}

ComplexValue scale(const Real& r, const ComplexValue& x) { return {r * x.re, r * x.im}; }

bool coincide(const ComplexValue& x, const ComplexValue& y, double tol) {
  if (x.is_exact() && y.is_exact()) return *x.re.exact() == *y.re.exact() && *x.im.exact() == *y.im.exact();
  return std::abs(x.value() - y.value()) <= tol * (1.0 + std::abs(x.value()));
}

bool output_before(const ComplexValue& x, const ComplexValue& y) {
  // inexact real parts within the merge tolerance count as a tie, so rounding
  // does not reorder a row of equal real part
  if (!coincide(x.re, y.re)) return compare(x.re, y.re) > 0;
  return compare(x.im, y.im) < 0;
}

}  // namespace ruelle
