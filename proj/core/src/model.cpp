#include "ruelle/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ruelle/error.hpp"
#include "ruelle/quiver.hpp"

namespace ruelle {

int CriticalElement::stable_count() const {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(), [](const EigenDatum& d) { return d.stable; }));
}

int CriticalElement::unstable_count() const { return static_cast<int>(eigenvalues.size()) - stable_count(); }

std::vector<ComplexValue> ConnectionData::exponents(const std::string& orbit) const {
  for (const auto& [name, gammas] : orbit_exponents) {
    if (name == orbit) return gammas;
  }
  return std::vector<ComplexValue>(static_cast<std::size_t>(rank));
}

bool ConnectionData::unitary() const {
  for (const auto& entry : orbit_exponents) {
    for (const auto& g : entry.second) {
      if (!is_zero(g.im)) return false;
    }
  }
  return true;
}

ComplexValue normalize_exponent(const ComplexValue& gamma) {
  if (auto q = gamma.re.rational()) return {Real::exact(frac(*q)), gamma.im};
  const double v = gamma.re.value();
  double f = v - std::floor(v);
  if (f >= 1.0) f = 0.0;
  return {Real(f), gamma.im};
}

std::vector<const CriticalElement*> FlowModel::elements() const {
  std::vector<const CriticalElement*> out;
  for (const auto& e : fixed_points) out.push_back(&e);
  for (const auto& e : orbits) out.push_back(&e);
  return out;
}

const CriticalElement* FlowModel::find(const std::string& name) const {
  for (const CriticalElement* e : elements()) {
    if (e->name == name) return e;
  }
  return nullptr;
}

bool FlowModel::all_exact() const {
  for (const CriticalElement* e : elements()) {
    if (e->is_orbit() && !e->period.is_exact()) return false;
    for (const auto& d : e->eigenvalues) {
      if (!d.chi.is_exact() || !d.omega.is_exact()) return false;
    }
  }
  for (const auto& entry : connection.orbit_exponents) {
    for (const auto& g : entry.second) {
      if (!g.is_exact()) return false;
    }
  }
  return true;
}

FlowModel to_floating(const FlowModel& model) {
  FlowModel out = model;
  out.mode = ArithmeticMode::floating;
  auto strip = [](std::vector<CriticalElement>& list) {
    for (auto& e : list) {
      e.period = e.period.inexact();
      for (auto& d : e.eigenvalues) {
        d.chi = d.chi.inexact();
        d.omega = d.omega.inexact();
      }
    }
  };
  strip(out.fixed_points);
  strip(out.orbits);
  for (auto& entry : out.connection.orbit_exponents) {
    for (auto& g : entry.second) g = g.inexact();
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.element << ": " << v.invariant << " (" << v.detail << ")\n";
  return os.str();
}

int twisted_count(const CriticalElement& elem, bool stable) {
  return static_cast<int>(std::count_if(elem.eigenvalues.begin(), elem.eigenvalues.end(), [&](const EigenDatum& d) {
    return d.stable == stable && d.twist != 0;
  }));
}

Rational implied_orientability(const CriticalElement& elem) {
  return twisted_count(elem, false) % 2 == 1 ? Rational(1, 2) : Rational(0);
}

ElementDims element_dims(const CriticalElement& elem) {
  const int s = elem.stable_count();
  const int u = elem.unstable_count();
  if (elem.is_orbit()) return {s + 1, u + 1};
  return {s, u};
}

namespace {

void check_element(const FlowModel& model, const CriticalElement& e, ValidationReport& report) {
  auto fail = [&](const std::string& inv, const std::string& detail) {
    report.violations.push_back({e.name, inv, detail});
  };
  const std::size_t expected = e.is_orbit() ? static_cast<std::size_t>(model.dim - 1) : static_cast<std::size_t>(model.dim);
  if (e.eigenvalues.size() != expected) {
    fail("eigenvalue count", "expected " + std::to_string(expected) + ", got " + std::to_string(e.eigenvalues.size()));
  }
  if (e.is_orbit()) {
    if (!(e.period.value() > 0.0)) fail("period", "period must be positive");
  } else if (e.orientability != 0) {
    fail("orientability", "fixed points carry no orientability index");
  }

  for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
    const EigenDatum& d = e.eigenvalues[i];
    const std::string at = "entry " + std::to_string(i);
    if (d.chi.value() == 0.0) fail("hyperbolicity", at + " has chi = 0");
    else if (d.stable != (d.chi.value() < 0.0)) fail("stability flag", at + " stable flag disagrees with sign of chi");
    if (d.twist != 0 && d.twist != Rational(1, 2)) fail("twist", at + " twist must be 0 or 1/2");
    if (d.twist != 0 && !e.is_orbit()) fail("twist", at + " twist 1/2 is only allowed on closed orbits");
    if (d.twist != 0 && !is_zero(d.omega, 0.0)) fail("twist", at + " complex entries must have twist 0");
  }

  // Conjugate pairing: each entry with omega != 0 needs a partner (chi, -omega).
  std::vector<bool> used(e.eigenvalues.size(), false);
  for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
    const EigenDatum& d = e.eigenvalues[i];
    if (used[i] || is_zero(d.omega, 0.0)) continue;
    bool found = false;
    for (std::size_t j = i + 1; j < e.eigenvalues.size() && !found; ++j) {
      const EigenDatum& p = e.eigenvalues[j];
      if (used[j]) continue;
      if (coincide(p.chi, d.chi) && coincide(p.omega, -d.omega)) {
        used[i] = used[j] = true;
        found = true;
      }
    }
    if (!found) fail("conjugate pairing", "omega = " + to_string(d.omega) + " has no conjugate partner");
  }

  if (e.is_orbit()) {
    if (e.orientability != implied_orientability(e)) {
      fail("orientability", "orientability index must be 1/2 exactly when the number of twisted unstable entries is odd");
    }
    if (twisted_count(e, true) % 2 != twisted_count(e, false) % 2) {
      report.warnings.push_back({e.name, "orientability parity",
                                 "twisted stable and unstable counts differ in parity (det M < 0); "
                                 "the imaginary-axis cross-check and resonant states are unavailable for this orbit"});
    }
  }
}

}  // namespace

ValidationReport validate_model(const FlowModel& model) {
  ValidationReport report;
  if (model.dim < 1) report.violations.push_back({"model", "dimension", "dim must be positive"});
  if (model.connection.rank < 1) report.violations.push_back({"model", "rank", "bundle rank must be positive"});

  std::set<std::string> names;
  for (const CriticalElement* e : model.elements()) {
    if (!names.insert(e->name).second) report.violations.push_back({e->name, "unique names", "duplicate element name"});
    check_element(model, *e, report);
  }
  for (const auto& e : model.fixed_points) {
    if (e.is_orbit()) report.violations.push_back({e.name, "element kind", "closed orbit listed among fixed points"});
  }
  for (const auto& e : model.orbits) {
    if (!e.is_orbit()) report.violations.push_back({e.name, "element kind", "fixed point listed among orbits"});
  }

  for (const auto& [name, gammas] : model.connection.orbit_exponents) {
    const CriticalElement* e = model.find(name);
    if (e == nullptr) {
      report.violations.push_back({name, "connection", "exponents given for an unknown element"});
      continue;
    }
    if (!e->is_orbit()) {
      report.violations.push_back({name, "connection", "fixed points carry no exponents"});
      continue;
    }
    if (static_cast<int>(gammas.size()) != model.connection.rank) {
      report.violations.push_back({name, "connection", "expected " + std::to_string(model.connection.rank) +
                                                           " exponents, got " + std::to_string(gammas.size())});
    }
    for (const auto& g : gammas) {
      if (!at_least(g.re, 0.0, 0.0) || !(g.re.value() < 1.0)) {
        report.violations.push_back({name, "connection", "exponent real parts must be normalized into [0, 1)"});
        break;
      }
    }
  }

  if (model.mode == ArithmeticMode::exact && !model.all_exact()) {
    report.violations.push_back({"model", "exact mode", "exact mode requires every number to carry an exact value"});
  }

  for (auto& v : validate_order(quiver_of(model))) report.violations.push_back(std::move(v));
  return report;
}

void require_valid(const FlowModel& model) {
  const auto report = validate_model(model);
  if (!report.ok()) throw InvariantError(report.summary());
}

}  // namespace ruelle
