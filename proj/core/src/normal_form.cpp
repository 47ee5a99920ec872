#include "ruelle/normal_form.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "ruelle/error.hpp"

namespace ruelle {

SlotFrame slot_frame(const CriticalElement& elem) {
  SlotFrame f;
  f.orbit = elem.is_orbit();
  const auto& eig = elem.eigenvalues;
  std::vector<bool> used(eig.size(), false);
  std::vector<Slot> lines[2];
  std::vector<Slot> planes[2];
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (used[i]) continue;
    const EigenDatum& d = eig[i];
    Slot s;
    s.stable = d.stable;
    s.twisted = d.twist != 0;
    if (d.omega.value() == 0.0) {
      s.entry = static_cast<int>(i);
      lines[d.stable ? 0 : 1].push_back(s);
      used[i] = true;
      continue;
    }
    for (std::size_t j = i + 1; j < eig.size(); ++j) {
      if (!used[j] && coincide(eig[j].chi, d.chi) && coincide(eig[j].omega, -d.omega)) {
        const bool first_positive = d.omega.value() > 0;
        s.plane = true;
        s.entry = static_cast<int>(first_positive ? i : j);
        s.partner = static_cast<int>(first_positive ? j : i);
        used[i] = used[j] = true;
        break;
      }
    }
    if (!s.plane) throw InvariantError(elem.name + ": entry " + std::to_string(i) + " has no conjugate partner");
    planes[d.stable ? 0 : 1].push_back(s);
  }
  int coord = 0;
  for (int side = 0; side < 2; ++side) {
    for (auto* group : {&lines[side], &planes[side]}) {
      for (Slot s : *group) {
        s.coord = coord;
        coord += s.plane ? 2 : 1;
        const int idx = static_cast<int>(f.slots.size());
        f.covector_entry.push_back(s.entry);
        f.covector_conj.push_back(0);
        f.covector_slot.push_back(idx);
        if (s.plane) {
          f.covector_entry.push_back(s.partner);
          f.covector_conj.push_back(1);
          f.covector_slot.push_back(idx);
        }
        f.slots.push_back(s);
      }
    }
  }
  f.dim = coord;
  if (f.orbit) {
    f.covector_entry.push_back(-1);
    f.covector_conj.push_back(0);
    f.covector_slot.push_back(-1);
  }
  return f;
}

NormalForm normal_form(const CriticalElement& elem) {
  NormalForm nf;
  nf.frame = slot_frame(elem);
  const int m = nf.frame.dim;
  nf.a = Eigen::MatrixXd::Zero(m, m);
  std::vector<int> twisted;
  for (const Slot& s : nf.frame.slots) {
    const EigenDatum& d = elem.eigenvalues[static_cast<std::size_t>(s.entry)];
    const int c = s.coord;
    if (s.plane) {
      nf.a(c, c) = d.chi.value();
      nf.a(c, c + 1) = -d.omega.value();
      nf.a(c + 1, c) = d.omega.value();
      nf.a(c + 1, c + 1) = d.chi.value();
    } else {
      nf.a(c, c) = d.chi.value();
      if (s.twisted) twisted.push_back(c);
    }
  }
  if (elem.is_orbit()) {
    nf.period = elem.period.value();
    if (twisted.size() % 2 != 0) {
      throw StateError(elem.name + ": odd number of twisted slots (det M < 0); "
                       "no real periodic normal form is realizable");
    }
    for (std::size_t i = 0; i < twisted.size(); i += 2) nf.rotations.emplace_back(twisted[i], twisted[i + 1]);
  }
  return nf;
}

Eigen::MatrixXd NormalForm::periodic(double theta) const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(frame.dim, frame.dim);
  if (rotations.empty()) return p;
  const double phi = std::numbers::pi * theta / period;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (const auto& [i, j] : rotations) {
    p(i, i) = c;
    p(i, j) = -s;
    p(j, i) = s;
    p(j, j) = c;
  }
  return p;
}

Eigen::MatrixXd NormalForm::coefficient(double theta) const {
  const Eigen::MatrixXd p = periodic(theta);
  Eigen::MatrixXd out = p * a * p.transpose();
  const double rate = rotations.empty() ? 0.0 : std::numbers::pi / period;
  for (const auto& [i, j] : rotations) {
    out(i, j) -= rate;
    out(j, i) += rate;
  }
  return out;
}

Eigen::MatrixXd NormalForm::backward_flow(double theta, double t) const {
  const Eigen::MatrixXd e = (-t * a).exp();
  if (rotations.empty()) return e;
  return periodic(theta - t) * e * periodic(theta).transpose();
}

PeriodicCoefficient NormalForm::periodic_coefficient() const {
  PeriodicCoefficient c;
  c.period = period > 0 ? period : 1.0;
  c.size = frame.dim;
  NormalForm copy = *this;
  c.evaluate = [copy](double theta) { return copy.coefficient(theta); };
  return c;
}

}  // namespace ruelle
