#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/floquet.hpp"
#include "ruelle/model.hpp"

namespace ruelle {

/// One invariant line or plane of the linearization.
struct Slot {
  bool plane = false;
  bool stable = false;
  bool twisted = false;
  /// Eigenvalue entry; for planes the member with omega > 0.
  int entry = -1;
  /// Conjugate member of a plane, -1 for lines.
  int partner = -1;
  /// First chart coordinate (planes use coord and coord + 1, z = x1 + i x2).
  int coord = 0;
};

/// Canonical slot order: stable lines, stable planes, unstable lines,
/// unstable planes. Covector slots follow the same order with dz before dz-bar,
/// and orbits append the d(theta) slot.
struct SlotFrame {
  std::vector<Slot> slots;
  /// Real transverse dimension.
  int dim = 0;
  /// Covector slot -> eigenvalue entry (-1 for d(theta)).
  std::vector<int> covector_entry;
  /// Covector slot -> 0 for dx and dz, 1 for dz-bar.
  std::vector<int> covector_conj;
  /// Covector slot -> slot index (-1 for d(theta)).
  std::vector<int> covector_slot;
  bool orbit = false;

  int covector_count() const { return static_cast<int>(covector_entry.size()); }
};

SlotFrame slot_frame(const CriticalElement& elem);

/// Explicit linear model of the flow near an element: x' = A x for fixed
/// points, and for orbits dx/dtheta = A(theta) x with A(theta) = P' P^-1 + P A P^-1,
/// where P(theta) rotates consecutive pairs of twisted coordinates by
/// pi * theta / period so that P(period) = -1 exactly on twisted slots.
struct NormalForm {
  SlotFrame frame;
  Eigen::MatrixXd a;
  double period = 0.0;
  std::vector<std::pair<int, int>> rotations;

  Eigen::MatrixXd periodic(double theta) const;
  Eigen::MatrixXd coefficient(double theta) const;
  /// x-part of the time -t flow map at angle theta: P(theta - t) e^{-tA} P(theta)^-1.
  Eigen::MatrixXd backward_flow(double theta, double t) const;
  PeriodicCoefficient periodic_coefficient() const;
};

/// Throws StateError when an orbit has an odd number of twisted slots, since
/// no real periodic factor then exists.
NormalForm normal_form(const CriticalElement& elem);

}  // namespace ruelle
