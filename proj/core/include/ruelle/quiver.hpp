#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ruelle/model.hpp"

namespace ruelle {

using Edge = std::pair<std::string, std::string>;

/// Smale causality order: an edge (lower, upper) says W^u(lower) lies in the
/// closure of W^u(upper).
struct Quiver {
  std::vector<std::string> vertices;
  std::vector<int> unstable_dim;
  std::vector<Edge> edges;

  int index(const std::string& name) const;
};

Quiver quiver_of(const FlowModel& model);

/// Empty when the transitive closure is antisymmetric and dim W^u is monotone
/// along every closure edge.
std::vector<Violation> validate_order(const Quiver& q);

/// Strict closure relation: closure[a][b] iff a < b after transitive closure.
std::vector<std::vector<bool>> transitive_closure(const Quiver& q);

/// Transitive reduction, sorted. Throws InvariantError on an invalid quiver.
std::vector<Edge> hasse(const Quiver& q);

/// Members of the subset with no strict upper bound inside it, in vertex order.
std::vector<std::string> maximal_elements(const Quiver& q, const std::vector<std::string>& subset);

}  // namespace ruelle
