#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruelle/number.hpp"

namespace ruelle {

enum class ArithmeticMode { exact, floating };

/// One eigenvalue chi + i*omega of the linearization. Complex eigenvalues are
/// stored as two entries with opposite omega.
struct EigenDatum {
  Real chi;
  Real omega;
  Rational twist{0};
  bool stable = false;

  ComplexValue value() const { return {chi, omega}; }
};

enum class ElementKind { fixed_point, closed_orbit };

struct CriticalElement {
  ElementKind kind = ElementKind::fixed_point;
  std::string name;
  /// Orbits only.
  Real period;
  /// Length n for fixed points, n - 1 (transverse part) for orbits.
  std::vector<EigenDatum> eigenvalues;
  /// 1/2 when W^u is non-orientable (orbits only).
  Rational orientability{0};

  bool is_orbit() const { return kind == ElementKind::closed_orbit; }
  int stable_count() const;
  int unstable_count() const;
};

struct ConnectionData {
  int rank = 1;
  /// Per closed orbit, the N exponents gamma_j, real part normalized into [0, 1).
  std::vector<std::pair<std::string, std::vector<ComplexValue>>> orbit_exponents;

  /// Exponents of an orbit; all zero when the orbit is not listed.
  std::vector<ComplexValue> exponents(const std::string& orbit) const;
  bool unitary() const;
};

/// gamma with real part reduced into [0, 1).
ComplexValue normalize_exponent(const ComplexValue& gamma);

struct FlowModel {
  int dim = 1;
  ConnectionData connection;
  std::vector<CriticalElement> fixed_points;
  std::vector<CriticalElement> orbits;
  /// (lower, upper) pairs.
  std::vector<std::pair<std::string, std::string>> quiver_edges;
  ArithmeticMode mode = ArithmeticMode::floating;

  int rank() const { return connection.rank; }
  /// Fixed points first, then orbits.
  std::vector<const CriticalElement*> elements() const;
  const CriticalElement* find(const std::string& name) const;
  /// True when every number carries an exact value.
  bool all_exact() const;
};

/// The model with every exact value dropped.
FlowModel to_floating(const FlowModel& model);

struct Violation {
  std::string element;
  std::string invariant;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Conditions that do not invalidate the model but restrict some operations.
  std::vector<Violation> warnings;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_model(const FlowModel& model);
/// Throws InvariantError listing every violation.
void require_valid(const FlowModel& model);

struct ElementDims {
  int stable = 0;
  int unstable = 0;
  friend bool operator==(const ElementDims&, const ElementDims&) = default;
};

/// (dim W^s, dim W^u); for orbits both include the flow direction.
ElementDims element_dims(const CriticalElement& elem);

/// Number of negative-multiplier (twist 1/2) slots among stable or unstable entries.
int twisted_count(const CriticalElement& elem, bool stable);

/// Orientability index implied by the unstable twists.
Rational implied_orientability(const CriticalElement& elem);

}  // namespace ruelle
