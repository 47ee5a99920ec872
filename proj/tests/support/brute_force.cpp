#include "support/brute_force.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ruelle::fixtures {

std::string key(const ComplexValue& z) {
  if (!z.is_exact()) throw std::logic_error("brute force comparison needs exact values");
  return to_string(*z.re.exact()) + " | " + to_string(*z.im.exact());
}

namespace {

struct Entry {
  ComplexValue stable_term;
  ComplexValue unstable_term;
  bool stable = false;
  double rate = 0.0;
};

void enumerate(const std::vector<Entry>& entries, std::size_t i, ComplexValue acc, double slack,
               const std::function<void(const ComplexValue&)>& emit) {
  if (acc.re.value() < -slack) return;
  if (i == entries.size()) {
    emit(acc);
    return;
  }
  const Entry& e = entries[i];
  const ComplexValue step = e.stable ? e.stable_term : -e.unstable_term;
  for (int a = 0;; ++a) {
    if (acc.re.value() < -slack) break;
    enumerate(entries, i + 1, acc, slack, emit);
    acc = acc + step;
  }
}

}  // namespace

Multiset brute_force_resonances(const FlowModel& model, int k, double t) {
  Multiset out;
  const Real bound = Real(t);
  for (const CriticalElement* elem : model.elements()) {
    const bool orbit = elem->is_orbit();
    const Real s = orbit ? two_pi_over(elem->period) : Real();
    const int n = model.dim;
    std::vector<Entry> entries;
    Real base;
    for (const auto& d : elem->eigenvalues) {
      Entry e;
      e.stable = d.stable;
      e.rate = std::abs(d.chi.value());
      e.stable_term = {d.chi, d.omega};
      e.unstable_term = {d.chi, d.omega + (orbit ? d.twist * s : Real())};
      if (d.stable) base = base + d.chi;
      entries.push_back(e);
    }
    const std::vector<ComplexValue> gammas =
        orbit ? model.connection.exponents(elem->name) : std::vector<ComplexValue>(static_cast<std::size_t>(model.rank()));

    for (int j = 0; j < model.rank(); ++j) {
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        ComplexValue delta;
        for (int i = 0; i < n; ++i) {
          if (!(mask >> i & 1U)) continue;
          if (orbit && i == n - 1) continue;  // flow direction contributes 0
          const auto& d = elem->eigenvalues[static_cast<std::size_t>(i)];
          delta = delta - ComplexValue{d.chi, d.omega + (orbit ? d.twist * s : Real())};
        }
        if (orbit) {
          const ComplexValue& g = gammas[static_cast<std::size_t>(j)];
          // -2 i pi gamma / P = -i s gamma
          delta = delta - ComplexValue{-(s * g.im), s * g.re};
        }
        const double slack = t + 1e-9;
        enumerate(entries, 0, {base + delta.re, delta.im}, slack, [&](const ComplexValue& z0) {
          if (compare(z0.re, -bound) < 0) return;
          if (!orbit) {
            if (compare(z0.im, bound) <= 0 && compare(z0.im, -bound) >= 0) ++out[key(z0)];
            return;
          }
          const auto reach = static_cast<std::int64_t>(std::ceil((t + std::abs(z0.im.value())) / s.value())) + 1;
          for (std::int64_t m = -reach; m <= reach; ++m) {
            const ComplexValue z{z0.re, z0.im + m * s};
            if (compare(z.im, bound) <= 0 && compare(z.im, -bound) >= 0) ++out[key(z)];
          }
        });
      }
    }
  }
  return out;
}

Multiset as_multiset(const std::vector<Resonance>& list) {
  Multiset out;
  for (const auto& r : list) out[key(r.z)] += r.multiplicity;
  return out;
}

std::string diff(const Multiset& expected, const Multiset& actual) {
  std::ostringstream os;
  for (const auto& [z, m] : expected) {
    auto it = actual.find(z);
    const int got = it == actual.end() ? 0 : it->second;
    if (got != m) os << "  " << z << ": expected " << m << ", got " << got << "\n";
  }
  for (const auto& [z, m] : actual) {
    if (!expected.count(z)) os << "  " << z << ": unexpected multiplicity " << m << "\n";
  }
  return os.str();
}

}  // namespace ruelle::fixtures
