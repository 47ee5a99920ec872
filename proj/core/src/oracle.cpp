#include "ruelle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ruelle/error.hpp"
#include "ruelle/parallel.hpp"

namespace ruelle {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex period_integral(const Rational& nu, double period) {
  if (nu == 0) return period;
  const double w = 2.0 * std::numbers::pi * to_double(nu) / period;
  return (std::exp(kI * w * period) - 1.0) / (kI * w);
}

bool ordered(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() < b.imag();
}

}  // namespace

Complex pair_forms(const Chart& chart, const TestForm& a, const TestForm& b) {
  if (a.word.degree() + b.word.degree() != chart.frame.covector_count()) {
    throw StateError("degree mismatch: forms of degree " + std::to_string(a.word.degree()) + " and " +
                     std::to_string(b.word.degree()) + " do not fill the chart");
  }
  if (a.bundle != b.bundle) return 0.0;
  const int sign = wedge_sign(a.word, b.word);
  if (sign == 0) return 0.0;
  Complex total = 0.0;
  for (const ThetaMode& ma : a.modes) {
    for (const ThetaMode& mb : b.modes) {
      const GaussianPoly product(ma.coefficient.q + mb.coefficient.q, ma.coefficient.poly * mb.coefficient.poly);
      Complex term = product.integral();
      if (chart.orbit) term *= period_integral(ma.frequency + mb.frequency, chart.period);
      total += term;
    }
  }
  return static_cast<double>(sign) * total;
}

CorrelationSeries correlation_series(const CriticalElement& elem, const ConnectionData& connection, int k,
                                     const TestForm& psi1, const TestForm& psi2, const std::vector<double>& t_grid) {
  const Chart chart = make_chart(elem, connection);
  const int n = chart.frame.covector_count();
  if (psi2.word.degree() != k || psi1.word.degree() != n - k) {
    throw StateError("degree mismatch: expected forms of degree " + std::to_string(n - k) + " and " + std::to_string(k));
  }
  CorrelationSeries s;
  s.t = t_grid;
  s.element = elem.name;
  s.k = k;
  s.values.resize(t_grid.size());
  // integral of psi1 ^ (phi^{-t})^* psi2 = integral of (phi^t)^* psi1 ^ psi2
  parallel_for(t_grid.size(), [&](std::size_t i) { s.values[i] = pair_forms(chart, transport(chart, psi1, t_grid[i]), psi2); });
  return s;
}

CorrelationSeries correlation_series(const LocalState& state, const TestForm& psi, const std::vector<double>& t_grid) {
  CorrelationSeries s;
  s.t = t_grid;
  s.element = state.chart.element;
  s.k = state.word.degree();
  s.values.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { s.values[i] = pullback_pair(state, psi, t_grid[i]); });
  return s;
}

std::vector<double> default_oracle_grid(const CriticalElement& elem) {
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& d : elem.eigenvalues) slowest = std::min(slowest, std::abs(d.chi.value()));
  const double end = std::isfinite(slowest) ? 20.0 / slowest : 20.0;
  constexpr int samples = 512;
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = end * i / (samples - 1);
  return t;
}

PoleEstimate extract_poles(const CorrelationSeries& series, int model_order, double floor) {
  const auto n = static_cast<Eigen::Index>(series.t.size());
  if (series.values.size() != series.t.size()) throw OracleError("series has mismatched time and value counts");
  if (model_order < 1 || 2 * model_order > n) {
    throw OracleError("model order " + std::to_string(model_order) + " needs at least " +
                      std::to_string(2 * std::max(model_order, 1)) + " samples");
  }
  const double dt = series.t[1] - series.t[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const double step = series.t[static_cast<std::size_t>(i)] - series.t[static_cast<std::size_t>(i - 1)];
    if (!(dt > 0.0) || std::abs(step - dt) > 1e-9 * dt) throw OracleError("extract_poles needs a uniform increasing grid");
  }
  const Eigen::Index l = n / 2;
  Eigen::MatrixXcd hankel(n - l, l + 1);
  for (Eigen::Index i = 0; i < n - l; ++i)
    for (Eigen::Index j = 0; j <= l; ++j) hankel(i, j) = series.values[static_cast<std::size_t>(i + j)];
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(hankel, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) throw OracleError("rank collapse: the series is identically zero");
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > floor * sigma(0)) ++rank;
  if (rank < model_order) {
    throw OracleError("rank collapse: " + std::to_string(rank) + " exponentials clear the noise floor, order " +
                      std::to_string(model_order) + " requested");
  }
  // H = U S V^*, so the rows of conj(V) carry the shift structure of H's columns.
  const Eigen::MatrixXcd v = svd.matrixV().leftCols(rank).conjugate();
  const Eigen::MatrixXcd v1 = v.topRows(l);
  const Eigen::MatrixXcd v2 = v.bottomRows(l);
  const Eigen::MatrixXcd shift = v1.completeOrthogonalDecomposition().solve(v2);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(shift);
  std::vector<Complex> s;
  for (Eigen::Index i = 0; i < rank; ++i) s.push_back(std::log(eig.eigenvalues()(i)) / dt);

  Eigen::MatrixXcd basis(n, rank);
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = series.values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rank; ++j) basis(i, j) = std::exp(s[static_cast<std::size_t>(j)] * series.t[static_cast<std::size_t>(i)]);
  }
  const Eigen::VectorXcd a = basis.completeOrthogonalDecomposition().solve(y);

  PoleEstimate est;
  est.rank = rank;
  est.residual = (basis * a - y).norm() / y.norm();
  // Exponentials whose largest sample sits below the noise floor are fitting
  // round-off; they go after every significant pole.
  const double level = floor * y.cwiseAbs().maxCoeff();
  std::vector<bool> significant(static_cast<std::size_t>(rank));
  for (Eigen::Index j = 0; j < rank; ++j) {
    double peak = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) peak = std::max(peak, std::abs(basis(i, j) * a(j)));
    significant[static_cast<std::size_t>(j)] = peak > level;
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(rank));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t z) {
    if (significant[x] != significant[z]) return static_cast<bool>(significant[x]);
    return ordered(s[x], s[z]);
  });
  for (int i = 0; i < model_order; ++i) {
    const std::size_t j = order[static_cast<std::size_t>(i)];
    est.exponents.push_back(s[j]);
    est.amplitudes.push_back(a(static_cast<Eigen::Index>(j)));
  }
  return est;
}

MatchReport match_spectrum(const PoleEstimate& estimate, const std::vector<Resonance>& predicted, double tol,
                           double amplitude_floor) {
  struct Candidate {
    double distance;
    std::size_t pole;
    std::size_t prediction;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < estimate.exponents.size(); ++i) {
    for (std::size_t j = 0; j < predicted.size(); ++j) {
      const double d = std::abs(estimate.exponents[i] - predicted[j].z.value());
      if (d <= tol) candidates.push_back({d, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
  std::vector<bool> pole_used(estimate.exponents.size(), false);
  std::vector<bool> prediction_used(predicted.size(), false);
  MatchReport report;
  for (const Candidate& c : candidates) {
    if (pole_used[c.pole] || prediction_used[c.prediction]) continue;
    pole_used[c.pole] = prediction_used[c.prediction] = true;
    report.matched.push_back({predicted[c.prediction].z.value(), estimate.exponents[c.pole], c.distance,
                              estimate.amplitudes[c.pole]});
  }
  std::sort(report.matched.begin(), report.matched.end(),
            [](const PoleMatch& a, const PoleMatch& b) { return ordered(a.extracted, b.extracted); });
  for (std::size_t i = 0; i < estimate.exponents.size(); ++i) {
    if (pole_used[i]) continue;
    const UnmatchedPole u{estimate.exponents[i], estimate.amplitudes[i]};
    report.unmatched.push_back(u);
    if (std::abs(u.amplitude) > amplitude_floor) report.misses.push_back(u);
  }
  return report;
}

}  // namespace ruelle
