#include "ruelle/quiver.hpp"

#include <algorithm>

#include "ruelle/error.hpp"

namespace ruelle {

int Quiver::index(const std::string& name) const {
  const auto it = std::find(vertices.begin(), vertices.end(), name);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

Quiver quiver_of(const FlowModel& model) {
  Quiver q;
  for (const CriticalElement* e : model.elements()) {
    q.vertices.push_back(e->name);
    q.unstable_dim.push_back(element_dims(*e).unstable);
  }
  q.edges = model.quiver_edges;
  return q;
}

namespace {

// Reflexive-free reachability (Warshall), ignoring edges with unknown endpoints.
std::vector<std::vector<bool>> reach(const Quiver& q) {
  const std::size_t n = q.vertices.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (const auto& [lo, hi] : q.edges) {
    const int a = q.index(lo);
    const int b = q.index(hi);
    if (a >= 0 && b >= 0) r[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace

std::vector<Violation> validate_order(const Quiver& q) {
  std::vector<Violation> out;
  for (const auto& [lo, hi] : q.edges) {
    for (const auto& name : {lo, hi}) {
      if (q.index(name) < 0) out.push_back({lo + " <= " + hi, "unknown vertex", "no element named '" + name + "'"});
    }
  }
  const auto r = reach(q);
  const std::size_t n = q.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !r[i][j]) continue;
      const std::string pair = q.vertices[i] + " <= " + q.vertices[j];
      if (i < j && r[j][i]) {
        out.push_back({pair, "antisymmetry", "both orders hold after transitive closure"});
      }
      if (q.unstable_dim[i] > q.unstable_dim[j]) {
        out.push_back({pair, "dimension monotonicity",
                       "dim W^u drops from " + std::to_string(q.unstable_dim[i]) + " to " +
                           std::to_string(q.unstable_dim[j])});
      }
    }
  }
  return out;
}

std::vector<std::vector<bool>> transitive_closure(const Quiver& q) {
  auto r = reach(q);
  for (std::size_t i = 0; i < r.size(); ++i) r[i][i] = false;
  return r;
}

std::vector<Edge> hasse(const Quiver& q) {
  if (const auto v = validate_order(q); !v.empty()) {
    throw InvariantError("quiver is not a valid order: " + v.front().element + " (" + v.front().invariant + ")");
  }
  const auto r = transitive_closure(q);
  const std::size_t n = q.vertices.size();
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!r[i][j]) continue;
      bool covered = false;
      for (std::size_t k = 0; k < n && !covered; ++k) covered = r[i][k] && r[k][j];
      if (!covered) out.emplace_back(q.vertices[i], q.vertices[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> maximal_elements(const Quiver& q, const std::vector<std::string>& subset) {
  if (const auto v = validate_order(q); !v.empty()) {
    throw InvariantError("quiver is not a valid order: " + v.front().element + " (" + v.front().invariant + ")");
  }
  const auto r = transitive_closure(q);
  std::vector<int> members;
  for (const auto& name : subset) {
    const int i = q.index(name);
    if (i < 0) throw InvariantError("unknown vertex '" + name + "'");
    if (std::find(members.begin(), members.end(), i) == members.end()) members.push_back(i);
  }
  std::sort(members.begin(), members.end());
  std::vector<std::string> out;
  for (int i : members) {
    const bool dominated = std::any_of(members.begin(), members.end(), [&](int j) { return j != i && r[i][j]; });
    if (!dominated) out.push_back(q.vertices[i]);
  }
  return out;
}

}  // namespace ruelle
