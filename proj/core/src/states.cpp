#include "ruelle/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "ruelle/error.hpp"
#include "ruelle/spectrum.hpp"

namespace ruelle {

namespace {

constexpr Complex kI{0.0, 1.0};

int parity(const std::vector<int>& v) {
  int inversions = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) inversions += v[i] > v[j];
  return inversions % 2 == 0 ? 1 : -1;
}

bool on_dirac_side(const Slot& s, DiracSide side) { return s.stable == (side == DiracSide::stable); }

std::string str(std::int64_t v) { return std::to_string(v); }

// Fourier factor of one period starting at theta0: the integral of
// e^{2 i pi nu theta / P}.
Complex theta_factor(const Rational& nu, double period, double theta0, PairMethod method) {
  const double w = 2.0 * std::numbers::pi * to_double(nu) / period;
  if (method == PairMethod::quadrature) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double re = Rule::integrate([w](double th) { return std::cos(w * th); }, theta0, theta0 + period, 15, 1e-14);
    const double im = Rule::integrate([w](double th) { return std::sin(w * th); }, theta0, theta0 + period, 15, 1e-14);
    return {re, im};
  }
  if (nu == 0) return period;
  return (std::exp(kI * w * (theta0 + period)) - std::exp(kI * w * theta0)) / (kI * w);
}

// Dirac derivatives and monomial factors of the state applied to one coefficient, integrated over x.
Complex transverse_pair(const LocalState& state, GaussianPoly g, PairMethod method) {
  const SlotFrame& f = state.chart.frame;
  if (g.dim() != f.dim) throw StateError("test form has dimension " + str(g.dim()) + ", chart has " + str(f.dim));
  int order = 0;
  std::vector<int> keep;
  for (const Slot& s : f.slots) {
    const int a = state.alpha[static_cast<std::size_t>(s.entry)];
    if (!on_dirac_side(s, state.dirac)) {
      keep.push_back(s.coord);
      if (s.plane) keep.push_back(s.coord + 1);
      continue;
    }
    order += a;
    if (!s.plane) {
      for (int r = 0; r < a; ++r) g = g.derivative(s.coord);
      continue;
    }
    const int b = state.alpha[static_cast<std::size_t>(s.partner)];
    order += b;
    for (int r = 0; r < a; ++r) {
      const GaussianPoly dx = g.derivative(s.coord);
      const GaussianPoly dy = g.derivative(s.coord + 1).scaled(-kI);
      g = {dx.q, dx.poly + dy.poly};
    }
    for (int r = 0; r < b; ++r) {
      const GaussianPoly dx = g.derivative(s.coord);
      const GaussianPoly dy = g.derivative(s.coord + 1).scaled(kI);
      g = {dx.q, dx.poly + dy.poly};
    }
  }
  std::sort(keep.begin(), keep.end());
  g = g.restrict(keep);
  const int d = static_cast<int>(keep.size());
  auto local = [&](int coord) {
    return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), coord) - keep.begin());
  };
  Polynomial mono = Polynomial::constant(d, 1.0);
  for (const Slot& s : f.slots) {
    if (on_dirac_side(s, state.dirac)) continue;
    const int a = state.alpha[static_cast<std::size_t>(s.entry)];
    const int c = local(s.coord);
    if (!s.plane) {
      for (int r = 0; r < a; ++r) mono = mono * Polynomial::variable(d, c);
      continue;
    }
    const int b = state.alpha[static_cast<std::size_t>(s.partner)];
    const Polynomial x1 = Polynomial::variable(d, c);
    const Polynomial x2 = Polynomial::variable(d, c + 1);
    const Polynomial z = x1 + x2 * kI;
    const Polynomial zbar = x1 + x2 * (-kI);
    for (int r = 0; r < a; ++r) mono = mono * z;
    for (int r = 0; r < b; ++r) mono = mono * zbar;
  }
  const GaussianPoly integrand = g.times(mono);
  const Complex value = method == PairMethod::closed_form ? integrand.integral() : integrand.integral_quadrature();
  return order % 2 == 0 ? value : -value;
}

Polynomial probe_polynomial(const LocalState& state, std::mt19937_64& rng) {
  const SlotFrame& f = state.chart.frame;
  const int d = f.dim;
  Polynomial p = Polynomial::constant(d, 1.0);
  for (const Slot& s : f.slots) {
    const int a = state.alpha[static_cast<std::size_t>(s.entry)];
    if (!s.plane) {
      for (int r = 0; r < a; ++r) p = p * Polynomial::variable(d, s.coord);
      continue;
    }
    const int b = state.alpha[static_cast<std::size_t>(s.partner)];
    const Polynomial x1 = Polynomial::variable(d, s.coord);
    const Polynomial x2 = Polynomial::variable(d, s.coord + 1);
    const Polynomial z = x1 + x2 * kI;
    const Polynomial zbar = x1 + x2 * (-kI);
    // d_zbar z = 2 and d_z zbar = 2 on the Dirac side; |z|^2 powers on the monomial side.
    const bool dirac = on_dirac_side(s, state.dirac);
    for (int r = 0; r < a; ++r) p = p * (dirac ? z : zbar);
    for (int r = 0; r < b; ++r) p = p * (dirac ? zbar : z);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> coord(0, std::max(0, d - 1));
  for (int term = 0; term < 4 && d > 0; ++term) {
    Polynomial::Exponent e(static_cast<std::size_t>(d), 0);
    const int deg = term % 3;
    for (int r = 0; r < deg; ++r) ++e[static_cast<std::size_t>(coord(rng))];
    const double re = normal(rng);
    const double im = normal(rng);
    p.add_term(e, 0.25 * Complex(re, im));
  }
  return p;
}

void check_word(const GrassmannWord& w, int count) {
  for (int c : w.covectors) {
    if (c < 0 || c >= count) throw StateError("covector " + str(c) + " is outside [0, " + str(count) + ")");
  }
}

}  // namespace

GrassmannWord GrassmannWord::from(std::vector<int> order) {
  GrassmannWord w;
  w.sign = parity(order);
  std::sort(order.begin(), order.end());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) throw StateError("repeated covector in a Grassmann word");
  w.covectors = std::move(order);
  return w;
}

GrassmannWord complement(const GrassmannWord& w, int count) {
  GrassmannWord out;
  for (int c = 0; c < count; ++c) {
    if (!std::binary_search(w.covectors.begin(), w.covectors.end(), c)) out.covectors.push_back(c);
  }
  return out;
}

int wedge_sign(const GrassmannWord& a, const GrassmannWord& b) {
  std::vector<int> joined = a.covectors;
  joined.insert(joined.end(), b.covectors.begin(), b.covectors.end());
  std::vector<int> sorted = joined;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return 0;
  return a.sign * b.sign * parity(joined);
}

std::uint32_t selection_mask(const SlotFrame& frame, const GrassmannWord& w) {
  std::uint32_t mask = 0;
  const int flow_bit = frame.covector_count() - 1;
  for (int c : w.covectors) {
    const int entry = frame.covector_entry[static_cast<std::size_t>(c)];
    mask |= 1U << (entry < 0 ? flow_bit : entry);
  }
  return mask;
}

std::vector<GrassmannWord> words_of_degree(int count, int k) {
  std::vector<GrassmannWord> out;
  if (k < 0 || k > count) return out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back({pick, 1});
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == count - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

Chart make_chart(const CriticalElement& elem, const ConnectionData& connection) {
  const NormalForm nf = normal_form(elem);
  Chart c;
  c.element = elem.name;
  c.orbit = elem.is_orbit();
  c.period = nf.period;
  c.frame = nf.frame;
  c.generator = nf.a;
  c.rank = connection.rank;
  for (const auto& d : elem.eigenvalues) c.entry_rate.push_back(d.value().value());
  for (int entry : c.frame.covector_entry) {
    if (entry < 0) {
      c.covector_rate.emplace_back(0.0);
      c.covector_twist.emplace_back(0);
      continue;
    }
    const EigenDatum& d = elem.eigenvalues[static_cast<std::size_t>(entry)];
    c.covector_rate.push_back(d.value().value());
    c.covector_twist.push_back(d.twist);
  }
  if (c.orbit) {
    for (const auto& g : connection.exponents(elem.name)) c.gamma.push_back(g.value());
  }
  return c;
}

LocalState build_state(const CriticalElement& elem, const ConnectionData& connection, const std::vector<int>& alpha,
                       std::int64_t alpha_n, const GrassmannWord& word, int bundle, int k) {
  if (word.degree() != k) {
    throw StateError("degree mismatch: word has degree " + str(word.degree()) + " but k = " + str(k));
  }
  if (alpha.size() != elem.eigenvalues.size()) {
    throw StateError("alpha has " + str(static_cast<std::int64_t>(alpha.size())) + " entries, " + elem.name + " has " +
                     str(static_cast<std::int64_t>(elem.eigenvalues.size())));
  }
  if (std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; })) throw StateError("alpha must be nonnegative");
  if (!elem.is_orbit() && alpha_n != 0) throw StateError("alpha_n is only defined on closed orbits");
  if (bundle < 0 || bundle >= connection.rank) {
    throw StateError("bundle index " + str(bundle) + " is outside [0, " + str(connection.rank) + ")");
  }
  LocalState s;
  s.chart = make_chart(elem, connection);
  check_word(word, s.chart.frame.covector_count());
  s.alpha = alpha;
  s.alpha_n = alpha_n;
  s.word = word;
  s.bundle = bundle;

  const std::uint32_t mask = selection_mask(s.chart.frame, word);
  ComplexValue delta = -selection_weight(elem, mask);
  std::int64_t reflected = 0;
  if (elem.is_orbit()) {
    const Real step = two_pi_over(elem.period);
    const ComplexValue g = connection.exponents(elem.name)[static_cast<std::size_t>(bundle)];
    delta = delta + ComplexValue{g.im * step, -(g.re * step)};
    Rational twisted_alpha(0);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (!elem.eigenvalues[i].stable) twisted_alpha += elem.eigenvalues[i].twist * alpha[i];
    }
    const Rational doubled = 2 * twisted_alpha;
    if (doubled.denominator() != 1) throw StateError(elem.name + ": twists must be multiples of 1/2");
    reflected = doubled.numerator() - alpha_n;
    Rational phase = Rational(alpha_n) - twisted_alpha;
    for (int c : word.covectors) phase += s.chart.covector_twist[static_cast<std::size_t>(c)];
    s.phase = phase;
  }
  s.eigenvalue = lattice_value(elem, alpha, reflected) + delta;
  return s;
}

Complex word_exponent(const Chart& chart, const GrassmannWord& word) {
  Complex beta = 0.0;
  for (int c : word.covectors) {
    const auto i = static_cast<std::size_t>(c);
    beta += chart.covector_rate[i];
    if (chart.orbit) beta += 2.0 * std::numbers::pi * kI * to_double(chart.covector_twist[i]) / chart.period;
  }
  return beta;
}

Complex local_exponent(const LocalState& state) {
  const Chart& c = state.chart;
  Complex lambda = 0.0;
  for (const Slot& s : c.frame.slots) {
    const Complex mu = c.entry_rate[static_cast<std::size_t>(s.entry)];
    const double a = state.alpha[static_cast<std::size_t>(s.entry)];
    const bool dirac = on_dirac_side(s, state.dirac);
    if (dirac) lambda += s.plane ? 2.0 * mu.real() : mu.real();
    lambda += (dirac ? a : -a) * mu;
    if (s.plane) {
      const Complex nu = c.entry_rate[static_cast<std::size_t>(s.partner)];
      const double b = state.alpha[static_cast<std::size_t>(s.partner)];
      lambda += (dirac ? b : -b) * nu;
    }
  }
  for (int w : state.word.covectors) lambda -= c.covector_rate[static_cast<std::size_t>(w)];
  if (c.orbit) {
    const Complex gamma = c.gamma[static_cast<std::size_t>(state.bundle)];
    lambda -= 2.0 * std::numbers::pi * kI * (to_double(state.phase) + gamma) / c.period;
  }
  return lambda;
}

int monodromy_sign(const LocalState& state) {
  const Chart& c = state.chart;
  if (!c.orbit) return 1;
  int flips = 0;
  for (const Slot& s : c.frame.slots) {
    if (s.twisted) flips += state.alpha[static_cast<std::size_t>(s.entry)];
  }
  for (int w : state.word.covectors) flips += c.covector_twist[static_cast<std::size_t>(w)] != 0 ? 1 : 0;
  const Rational doubled = 2 * state.phase;
  if (doubled.denominator() != 1) throw StateError("phase is not a multiple of 1/2");
  flips += static_cast<int>(doubled.numerator() % 2);
  return flips % 2 == 0 ? 1 : -1;
}

Complex pair(const LocalState& state, const TestForm& psi, PairMethod method, double theta0) {
  const int count = state.chart.frame.covector_count();
  check_word(psi.word, count);
  if (state.word.degree() + psi.word.degree() != count) {
    throw StateError("degree mismatch: " + str(state.word.degree()) + " + " + str(psi.word.degree()) +
                     " != " + str(count));
  }
  if (psi.bundle != state.bundle) return 0.0;
  const int sign = wedge_sign(state.word, psi.word);
  if (sign == 0) return 0.0;
  Complex total = 0.0;
  for (const ThetaMode& m : psi.modes) {
    Complex term = transverse_pair(state, m.coefficient, method);
    if (state.chart.orbit) term *= theta_factor(state.phase + m.frequency, state.chart.period, theta0, method);
    total += term;
  }
  return static_cast<double>(sign) * total;
}

TestForm transport(const Chart& chart, const TestForm& psi, double t) {
  const Eigen::MatrixXd m = (t * chart.generator).exp();
  Complex scale = 0.0;
  for (int c : psi.word.covectors) scale += chart.covector_rate[static_cast<std::size_t>(c)];
  scale = std::exp(t * scale);
  const double step = chart.orbit ? 2.0 * std::numbers::pi / chart.period : 0.0;
  if (chart.orbit) scale *= std::exp(-kI * step * t * chart.gamma[static_cast<std::size_t>(psi.bundle)]);
  TestForm out = psi;
  for (ThetaMode& mode : out.modes) {
    Complex s = scale;
    if (chart.orbit) s *= std::exp(kI * step * to_double(mode.frequency) * t);
    mode.coefficient = mode.coefficient.compose(m).scaled(s);
  }
  return out;
}

Complex pullback_pair(const LocalState& state, const TestForm& psi, double t) {
  return pair(state, transport(state.chart, psi, t));
}

double check_eigen(const LocalState& state, const TestForm& psi, const std::vector<double>& t_grid) {
  if (t_grid.empty()) return 0.0;
  const Complex lambda = state.eigenvalue.value();
  const Complex p0 = pair(state, psi);
  double worst = 0.0;
  for (double t : t_grid) {
    const Complex moved = pullback_pair(state, psi, t);
    worst = std::max(worst, std::abs(moved - std::exp(t * lambda) * p0) / (1.0 + std::abs(p0)));
  }
  return worst;
}

std::vector<double> default_time_grid() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

TestForm probe_form(const LocalState& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = state.chart.frame.dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r(i, j) = normal(rng);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
  if (d > 0) q += 0.2 * r * r.transpose() / d;
  TestForm psi;
  psi.word = complement(state.word, state.chart.frame.covector_count());
  psi.bundle = state.bundle;
  psi.modes.push_back({-state.phase, GaussianPoly(q, probe_polynomial(state, rng))});
  return psi;
}

LocalState dual_state(const LocalState& state) {
  const bool principal = state.alpha_n == 0 && std::all_of(state.alpha.begin(), state.alpha.end(), [](int a) { return a == 0; });
  if (!principal) throw StateError("dual states are only defined for alpha = 0");
  LocalState d = state;
  d.word = complement(state.word, state.chart.frame.covector_count());
  d.dirac = state.dirac == DiracSide::stable ? DiracSide::unstable : DiracSide::stable;
  d.phase = -state.phase;
  const Complex lambda = local_exponent(d);
  d.eigenvalue = {Real(lambda.real()), Real(lambda.imag())};
  return d;
}

double wedge_mass(const LocalState& state, const LocalState& dual, PairMethod method) {
  auto principal = [](const LocalState& s) {
    return s.alpha_n == 0 && std::all_of(s.alpha.begin(), s.alpha.end(), [](int a) { return a == 0; });
  };
  if (!principal(state) || !principal(dual)) throw StateError("wedge mass needs alpha = 0 on both states");
  if (state.chart.element != dual.chart.element) throw StateError("wedge mass needs two states of the same element");
  if (state.dirac == dual.dirac) throw StateError("wedge mass needs opposite Dirac sides");
  const int d = state.chart.frame.dim;
  int spread = 0;
  for (const Slot& s : state.chart.frame.slots) {
    if (!on_dirac_side(s, state.dirac)) spread += s.plane ? 2 : 1;
  }
  TestForm psi;
  psi.word = dual.word;
  psi.bundle = state.bundle;
  const double norm = std::pow(std::numbers::pi, -spread / 2.0);
  psi.modes.push_back({dual.phase, GaussianPoly(Eigen::MatrixXd::Identity(d, d), Polynomial::constant(d, norm))});
  return std::abs(pair(state, psi, method));
}

namespace {

// Covector index of the conjugate partner (dz <-> dz-bar).
int conjugate_covector(const SlotFrame& f, int c) {
  const int slot = f.covector_slot[static_cast<std::size_t>(c)];
  if (slot < 0 || !f.slots[static_cast<std::size_t>(slot)].plane) return c;
  return f.covector_conj[static_cast<std::size_t>(c)] == 0 ? c + 1 : c - 1;
}

GrassmannWord conjugate_word(const SlotFrame& f, const GrassmannWord& w) {
  std::vector<int> mapped;
  for (int c : w.covectors) mapped.push_back(conjugate_covector(f, c));
  GrassmannWord out = GrassmannWord::from(mapped);
  out.sign *= w.sign;
  return out;
}

}  // namespace

LocalState conjugate(const LocalState& state) {
  LocalState c = state;
  for (const Slot& s : state.chart.frame.slots) {
    if (s.plane) std::swap(c.alpha[static_cast<std::size_t>(s.entry)], c.alpha[static_cast<std::size_t>(s.partner)]);
  }
  c.word = conjugate_word(state.chart.frame, state.word);
  c.phase = -state.phase;
  c.eigenvalue = {state.eigenvalue.re, -state.eigenvalue.im};
  for (auto& g : c.chart.gamma) g = std::conj(g);
  return c;
}

TestForm conjugate(const Chart& chart, const TestForm& psi) {
  TestForm c = psi;
  c.word = conjugate_word(chart.frame, psi.word);
  for (ThetaMode& m : c.modes) {
    m.frequency = -m.frequency;
    m.coefficient = m.coefficient.conjugate();
  }
  return c;
}

}  // namespace ruelle
