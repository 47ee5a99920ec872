#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ruelle/gaussian.hpp"
#include "ruelle/model.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/states.hpp"

namespace ruelle {

struct CorrelationSeries {
  std::vector<double> t;
  std::vector<Complex> values;
  std::string element;
  int k = 0;
};

/// C(t) = integral of psi1 ^ (phi^{-t})^* psi2 in the chart of the element,
/// evaluated as the pairing of the transported psi1 with psi2 by Gaussian
/// moments. psi1 has degree n - k and psi2 degree k.
CorrelationSeries correlation_series(const CriticalElement& elem, const ConnectionData& connection, int k,
                                     const TestForm& psi1, const TestForm& psi2, const std::vector<double>& t_grid);

/// C(t) = pullback_pair(state, psi, t); exactly a multiple of e^{lambda t}.
CorrelationSeries correlation_series(const LocalState& state, const TestForm& psi, const std::vector<double>& t_grid);

/// 512 uniform samples on [0, 20 / min |chi|].
std::vector<double> default_oracle_grid(const CriticalElement& elem);

/// Integral of a ^ b over the chart.
Complex pair_forms(const Chart& chart, const TestForm& a, const TestForm& b);

struct PoleEstimate {
  /// Descending real part, then ascending imaginary part.
  std::vector<Complex> exponents;
  std::vector<Complex> amplitudes;
  /// Relative l2 misfit of the full-rank fit.
  double residual = 0.0;
  /// Number of exponentials above the noise floor.
  int rank = 0;
};

/// Relative singular-value floor of the pencil.
inline constexpr double kPencilFloor = 1e-14;

/// Matrix-pencil fit C(t) ~ sum a_j e^{s_j t}. Every singular value above
/// floor * sigma_max is kept; the model_order leading exponents are reported,
/// where poles whose largest sample falls below floor * max|C| rank last.
/// Throws OracleError on a non-uniform grid, an order above half the sample
/// count, or when fewer than model_order singular values clear the floor.
PoleEstimate extract_poles(const CorrelationSeries& series, int model_order, double floor = kPencilFloor);

struct PoleMatch {
  Complex predicted;
  Complex extracted;
  double error = 0.0;
  Complex amplitude;
};

struct UnmatchedPole {
  Complex extracted;
  Complex amplitude;
};

struct MatchReport {
  std::vector<PoleMatch> matched;
  std::vector<UnmatchedPole> unmatched;
  /// Unmatched poles whose amplitude exceeds the floor.
  std::vector<UnmatchedPole> misses;

  bool ok() const { return misses.empty(); }
};

/// Greedy nearest matching with cutoff tol.
MatchReport match_spectrum(const PoleEstimate& estimate, const std::vector<Resonance>& predicted, double tol,
                           double amplitude_floor = 1e-8);

}  // namespace ruelle
