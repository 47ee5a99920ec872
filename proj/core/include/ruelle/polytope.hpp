#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/model.hpp"

namespace ruelle {

/// normal . x <= bound
struct Halfspace {
  std::vector<Real> normal;
  Real bound;
};

struct WeylPolytope {
  std::string element;
  int dim = 0;
  std::vector<Halfspace> halfspaces;
};

/// Fixed point: {x >= 0 : -1 <= x.omega <= 1, x.chi+ <= 1} in R^n.
/// Orbit: {(x', x_n) : x' >= 0, -1 <= x'.omega + (2 pi / P) x_n <= 1, x'.chi+ <= 1}.
/// Halfspaces with a zero normal are dropped.
WeylPolytope polytope(const CriticalElement& elem);

enum class VolumeMethod { automatic, exact, montecarlo };

struct VolumeEstimate {
  double value = 0.0;
  /// Zero for the exact engine; three standard errors for Monte Carlo.
  double error = 0.0;
  bool exact = false;
  /// Set when the exact engine ran on rational data.
  std::optional<Rational> rational;
};

inline constexpr std::uint64_t kDefaultSamples = 1000000;

/// Exact engine (dim <= 3): vertex enumeration and simplicial decomposition,
/// in rational arithmetic when every coefficient is rational. Monte Carlo:
/// randomly shifted Sobol points in the bounding box, 16 independent shifts.
/// Throws SpectrumError on an unbounded polytope.
VolumeEstimate polytope_volume(const WeylPolytope& p, VolumeMethod method = VolumeMethod::automatic,
                               std::uint64_t samples = kDefaultSamples, std::uint64_t seed = 20240601);

/// Vertices in double precision (any dimension); throws SpectrumError if unbounded.
std::vector<std::vector<double>> polytope_vertices(const WeylPolytope& p);

}  // namespace ruelle
