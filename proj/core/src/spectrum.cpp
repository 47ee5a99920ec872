#include "ruelle/spectrum.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "ruelle/error.hpp"
#include "ruelle/polytope.hpp"

namespace ruelle {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int pool_size(const CriticalElement& elem) {
  return static_cast<int>(elem.eigenvalues.size()) + (elem.is_orbit() ? 1 : 0);
}

namespace {

void check_degree(int k, int n) {
  if (k < 0 || k > n) throw SpectrumError("degree k = " + std::to_string(k) + " is outside [0, " + std::to_string(n) + "]");
}

Real step_of(const CriticalElement& elem) { return two_pi_over(elem.period); }

// Lattice coefficient of slot i: chi + i omega when stable, -(chi + i omega + 2 i pi twist / P) when unstable.
ComplexValue lattice_coefficient(const CriticalElement& elem, std::size_t i) {
  const EigenDatum& d = elem.eigenvalues[i];
  if (d.stable) return d.value();
  ComplexValue c = d.value();
  if (elem.is_orbit() && d.twist != 0) c.im += d.twist * step_of(elem);
  return -c;
}

using Leaf = std::function<void(const std::vector<int>&, const Real&, const Real&)>;

// Depth-first search over alpha (without alpha_n) with Re(z) >= -t_re.
void enumerate(const CriticalElement& elem, const ComplexValue& offset, double t_re, const Leaf& leaf) {
  const std::size_t m = elem.eigenvalues.size();
  std::vector<ComplexValue> coeff;
  coeff.reserve(m);
  for (std::size_t i = 0; i < m; ++i) coeff.push_back(lattice_coefficient(elem, i));
  std::vector<int> alpha(m, 0);
  const Real re0 = lattice_base(elem) + offset.re;
  if (!at_least(re0, -t_re)) return;

  std::function<void(std::size_t, const Real&, const Real&)> dfs = [&](std::size_t i, const Real& re, const Real& im) {
    if (i == m) {
      leaf(alpha, re, im);
      return;
    }
    Real r = re;
    Real s = im;
    for (int a = 0;; ++a) {
      alpha[i] = a;
      dfs(i + 1, r, s);
      r += coeff[i].re;
      s += coeff[i].im;
      if (!at_least(r, -t_re)) break;
    }
    alpha[i] = 0;
  };
  dfs(0, re0, offset.im);
}

// Integer range [lo, hi] of alpha_n with |im + alpha_n * step| <= t_im, decided exactly.
std::pair<std::int64_t, std::int64_t> vertical_range(const Real& im, const Real& step, double t_im) {
  if (!std::isfinite(t_im)) throw SpectrumError("closed orbits need a finite imaginary bound");
  const double s = step.value();
  auto lo = static_cast<std::int64_t>(std::ceil((-t_im - im.value()) / s)) - 1;
  auto hi = static_cast<std::int64_t>(std::floor((t_im - im.value()) / s)) + 1;
  auto inside = [&](std::int64_t n) {
    const Real v = im + n * step;
    return at_most(v, t_im) && at_least(v, -t_im);
  };
  while (lo <= hi && !inside(lo)) ++lo;
  while (hi >= lo && !inside(hi)) --hi;
  return {lo, hi};
}

bool im_inside(const Real& im, double t_im) { return at_most(im, t_im) && at_least(im, -t_im); }

struct ExactKey {
  std::array<std::int64_t, 8> v;
  friend bool operator<(const ExactKey& a, const ExactKey& b) { return a.v < b.v; }
};

ExactKey key_of(const ComplexValue& z) {
  const PiLinear& r = *z.re.exact();
  const PiLinear& i = *z.im.exact();
  return {{r.a.numerator(), r.a.denominator(), r.b.numerator(), r.b.denominator(), i.a.numerator(), i.a.denominator(),
           i.b.numerator(), i.b.denominator()}};
}

bool all_exact(const std::vector<Resonance>& raw) {
  return std::all_of(raw.begin(), raw.end(), [](const Resonance& r) { return r.z.is_exact(); });
}

void sort_output(std::vector<Resonance>& out) {
  std::stable_sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) { return output_before(a.z, b.z); });
}

// Merges exact points as they arrive so that only distinct values are stored;
// inexact points are collected and merged at the end.
class Accumulator {
 public:
  explicit Accumulator(Labels labels) : labels_(labels) {}

  template <class Fill>
  void add(const ComplexValue& z, int multiplicity, Fill&& fill) {
    Resonance* dst = nullptr;
    if (z.is_exact()) {
      const auto [it, fresh] = index_.emplace(key_of(z), exact_.size());
      if (fresh) exact_.push_back({z, 0, {}});
      dst = &exact_[it->second];
    } else {
      loose_.push_back({z, 0, {}});
      dst = &loose_.back();
    }
    dst->multiplicity += multiplicity;
    if (labels_ == Labels::all || (labels_ == Labels::first && dst->contributions.empty())) {
      fill(dst->contributions, labels_ == Labels::first);
    }
  }

  std::vector<Resonance> finish() {
    if (loose_.empty()) {
      sort_output(exact_);
      return std::move(exact_);
    }
    for (auto& r : exact_) loose_.push_back(std::move(r));
    std::vector<Resonance> out = merge_resonances(std::move(loose_));
    if (labels_ == Labels::first) {
      for (auto& r : out) r.contributions.resize(std::min<std::size_t>(r.contributions.size(), 1));
    }
    return out;
  }

 private:
  Labels labels_;
  std::map<ExactKey, std::size_t> index_;
  std::vector<Resonance> exact_;
  std::vector<Resonance> loose_;
};

}  // namespace

ComplexValue selection_weight(const CriticalElement& elem, std::uint32_t mask) {
  ComplexValue w;
  for (std::size_t i = 0; i < elem.eigenvalues.size(); ++i) {
    if (!(mask >> i & 1U)) continue;
    const EigenDatum& d = elem.eigenvalues[i];
    w = w + d.value();
    if (elem.is_orbit() && d.twist != 0) w.im += d.twist * step_of(elem);
  }
  return w;
}

std::vector<ShiftDatum> shift_set(const CriticalElement& elem, int k, const ConnectionData& connection) {
  const int pool = pool_size(elem);
  check_degree(k, pool);
  std::vector<ComplexValue> gammas;
  if (elem.is_orbit()) gammas = connection.exponents(elem.name);
  else gammas.assign(static_cast<std::size_t>(connection.rank), ComplexValue{});

  std::vector<ShiftDatum> out;
  for (int j = 0; j < static_cast<int>(gammas.size()); ++j) {
    // -2 i pi gamma / P = (2 pi Im gamma / P) - i (2 pi Re gamma / P)
    ComplexValue bundle;
    if (elem.is_orbit()) {
      const Real s = step_of(elem);
      bundle = {gammas[static_cast<std::size_t>(j)].im * s, -(gammas[static_cast<std::size_t>(j)].re * s)};
    }
    for (std::uint32_t mask = 0; mask < (1U << pool); ++mask) {
      if (std::popcount(mask) != k) continue;
      const ComplexValue delta = bundle - selection_weight(elem, mask);
      auto it = std::find_if(out.begin(), out.end(), [&](const ShiftDatum& s) { return coincide(s.delta, delta); });
      if (it == out.end()) {
        out.push_back({delta, 0, {}});
        it = std::prev(out.end());
      }
      it->witnesses.push_back({j, mask});
      ++it->multiplicity;
    }
  }
  return out;
}

Real lattice_base(const CriticalElement& elem) {
  Real base;
  for (const auto& d : elem.eigenvalues) {
    if (d.stable) base += d.chi;
  }
  return base;
}

ComplexValue lattice_value(const CriticalElement& elem, const std::vector<int>& alpha, std::int64_t alpha_n) {
  ComplexValue z{lattice_base(elem), Real()};
  for (std::size_t i = 0; i < elem.eigenvalues.size() && i < alpha.size(); ++i) {
    z = z + static_cast<std::int64_t>(alpha[i]) * lattice_coefficient(elem, i);
  }
  if (elem.is_orbit()) z.im += alpha_n * step_of(elem);
  return z;
}

void for_each_lattice(const CriticalElement& elem, const ComplexValue& offset, const Box& box,
                      const std::function<void(const std::vector<int>&, std::int64_t, const ComplexValue&)>& visit) {
  if (!elem.is_orbit()) {
    enumerate(elem, offset, box.re, [&](const std::vector<int>& alpha, const Real& re, const Real& im) {
      if (im_inside(im, box.im)) visit(alpha, 0, {re, im});
    });
    return;
  }
  const Real step = step_of(elem);
  enumerate(elem, offset, box.re, [&](const std::vector<int>& alpha, const Real& re, const Real& im) {
    const auto [lo, hi] = vertical_range(im, step, box.im);
    for (std::int64_t n = lo; n <= hi; ++n) visit(alpha, n, {re, im + n * step});
  });
}

std::vector<LatticePoint> scalar_lattice(const CriticalElement& elem, const Box& box) {
  std::vector<LatticePoint> out;
  for_each_lattice(elem, {}, box, [&](const std::vector<int>& alpha, std::int64_t n, const ComplexValue& z) {
    out.push_back({alpha, n, z});
  });
  std::stable_sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return output_before(a.lambda, b.lambda);
  });
  return out;
}

std::vector<Resonance> merge_resonances(std::vector<Resonance> raw) {
  std::vector<Resonance> out;
  if (all_exact(raw)) {
    std::map<ExactKey, std::size_t> index;
    for (auto& r : raw) {
      const auto [it, fresh] = index.emplace(key_of(r.z), out.size());
      if (fresh) {
        out.push_back(std::move(r));
      } else {
        Resonance& dst = out[it->second];
        dst.multiplicity += r.multiplicity;
        for (auto& c : r.contributions) dst.contributions.push_back(std::move(c));
      }
    }
  } else {
    std::stable_sort(raw.begin(), raw.end(), [](const Resonance& a, const Resonance& b) {
      return a.z.re.value() < b.z.re.value();
    });
    std::size_t open = 0;  // first cluster that may still absorb points
    for (auto& r : raw) {
      const double re = r.z.re.value();
      while (open < out.size() &&
             out[open].z.re.value() < re - 2.0 * kMergeTolerance * (1.0 + std::abs(out[open].z.value()))) {
        ++open;
      }
      bool merged = false;
      for (std::size_t c = open; c < out.size() && !merged; ++c) {
        if (coincide(out[c].z, r.z)) {
          out[c].multiplicity += r.multiplicity;
          for (auto& x : r.contributions) out[c].contributions.push_back(std::move(x));
          merged = true;
        }
      }
      if (!merged) out.push_back(std::move(r));
    }
  }
  sort_output(out);
  return out;
}

std::vector<Resonance> resonances(const FlowModel& model, int k, const Box& box, Labels labels) {
  check_degree(k, model.dim);
  Accumulator acc(labels);
  for (const CriticalElement* e : model.elements()) {
    for (const ShiftDatum& sd : shift_set(*e, k, model.connection)) {
      for_each_lattice(*e, sd.delta, box, [&](const std::vector<int>& alpha, std::int64_t n, const ComplexValue& z) {
        acc.add(z, sd.multiplicity, [&](std::vector<Contribution>& list, bool one) {
          for (const auto& w : sd.witnesses) {
            list.push_back({e->name, alpha, n, w});
            if (one) break;
          }
        });
      });
    }
  }
  return acc.finish();
}

std::vector<AxisGenerator> imaginary_axis(const FlowModel& model, int k) {
  check_degree(k, model.dim);
  if (!model.connection.unitary()) {
    throw SpectrumError("the imaginary-axis spectrum requires a unitary connection (all gamma real)");
  }
  std::vector<AxisGenerator> out;
  for (const CriticalElement* e : model.elements()) {
    const ElementDims dims = element_dims(*e);
    if (!e->is_orbit()) {
      if (dims.stable == k) out.push_back({e->name, false, Real(), Real(), model.rank()});
      continue;
    }
    if (dims.stable != k && dims.stable != k + 1) continue;
    const std::size_t first = out.size();
    for (const auto& g : model.connection.exponents(e->name)) {
      const Real phase = Real::exact(e->orientability) + g.re;
      auto it = std::find_if(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                             [&](const AxisGenerator& a) { return coincide(a.phase, phase); });
      if (it != out.end()) ++it->multiplicity;
      else out.push_back({e->name, true, e->period, phase, 1});
    }
  }
  return out;
}

std::vector<Resonance> imaginary_axis_points(const FlowModel& model, int k, double t) {
  std::vector<Resonance> raw;
  for (const AxisGenerator& g : imaginary_axis(model, k)) {
    if (!g.orbit) {
      Resonance r{{}, g.multiplicity, {}};
      r.contributions.push_back({g.element, {}, 0, {}});
      raw.push_back(std::move(r));
      continue;
    }
    // z = -i s (m + phase): Im z = -s*phase + (-m) * s.
    const Real s = two_pi_over(g.period);
    const Real base = -(g.phase * s);
    const auto [lo, hi] = vertical_range(base, s, t);
    for (std::int64_t n = lo; n <= hi; ++n) {
      Resonance r{{Real(), base + n * s}, g.multiplicity, {}};
      r.contributions.push_back({g.element, {}, -n, {}});
      raw.push_back(std::move(r));
    }
  }
  return merge_resonances(std::move(raw));
}

ImaginaryCount count_imaginary(const FlowModel& model, int k, double t) {
  ImaginaryCount c;
  for (const auto& r : imaginary_axis_points(model, k, t)) c.exact += r.multiplicity;
  double periods = 0.0;
  for (const AxisGenerator& g : imaginary_axis(model, k)) {
    if (g.orbit) periods += g.multiplicity * g.period.value();
  }
  c.prediction = t / std::numbers::pi * periods;
  return c;
}

std::vector<Band> band_decomposition(const FlowModel& model, int k, const Box& box) {
  check_degree(k, model.dim);
  std::vector<Band> out;
  for (const CriticalElement* e : model.elements()) {
    const std::size_t first = out.size();
    std::map<ExactKey, std::size_t> exact_index;
    auto add = [&](Band b) {
      if (b.offset.is_exact()) {
        const auto [it, fresh] = exact_index.emplace(key_of(b.offset), out.size());
        if (fresh) out.push_back(std::move(b));
        else out[it->second].multiplicity += b.multiplicity;
        return;
      }
      auto it = std::find_if(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                             [&](const Band& o) { return coincide(o.offset, b.offset); });
      if (it != out.end()) it->multiplicity += b.multiplicity;
      else out.push_back(std::move(b));
    };
    for (const ShiftDatum& sd : shift_set(*e, k, model.connection)) {
      if (!e->is_orbit()) {
        for_each_lattice(*e, sd.delta, box, [&](const std::vector<int>&, std::int64_t, const ComplexValue& z) {
          add({e->name, false, z, Real(), Real(), sd.multiplicity});
        });
        continue;
      }
      const Real step = step_of(*e);
      enumerate(*e, sd.delta, box.re, [&](const std::vector<int>&, const Real& re, const Real& im) {
        // Reduce Im into (-step, 0].
        std::optional<Real> reduced;
        if (im.is_exact() && step.is_exact()) {
          if (auto q = ratio(*im.exact(), *step.exact())) reduced = im - (-floor(-*q)) * step;
        }
        if (!reduced) {
          double r = im.value() - std::ceil(im.value() / step.value()) * step.value();
          if (r <= -step.value()) r += step.value();
          if (r > 0) r -= step.value();
          reduced = Real(r);
        }
        const bool hit = at_least(*reduced, -box.im) || at_most(*reduced + step, box.im);
        if (!hit) return;
        const Real phase = -(*reduced / step);
        add({e->name, true, {re, *reduced}, step, phase, sd.multiplicity});
      });
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Band& a, const Band& b) {
    if (const int c = compare(a.offset.re, b.offset.re); c != 0) return c > 0;
    if (const int c = compare(a.phase, b.phase); c != 0) return c < 0;
    return a.element < b.element;
  });
  return out;
}

std::vector<Resonance> band_points(const std::vector<Band>& bands, const Box& box, ArithmeticMode, Labels labels) {
  Accumulator acc(labels);
  for (const Band& b : bands) {
    if (!at_least(b.offset.re, -box.re)) continue;
    if (!b.orbit) {
      if (!im_inside(b.offset.im, box.im)) continue;
      acc.add(b.offset, b.multiplicity, [&](std::vector<Contribution>& list, bool) { list.push_back({b.element, {}, 0, {}}); });
      continue;
    }
    const auto [lo, hi] = vertical_range(b.offset.im, b.step_im, box.im);
    for (std::int64_t n = lo; n <= hi; ++n) {
      acc.add({b.offset.re, b.offset.im + n * b.step_im}, b.multiplicity,
              [&](std::vector<Contribution>& list, bool) { list.push_back({b.element, {}, n, {}}); });
    }
  }
  return acc.finish();
}

std::int64_t weyl_count(const FlowModel& model, int k, double t) {
  check_degree(k, model.dim);
  const Box box{t, t};
  std::int64_t total = 0;
  for (const CriticalElement* e : model.elements()) {
    for (const ShiftDatum& sd : shift_set(*e, k, model.connection)) {
      if (!e->is_orbit()) {
        enumerate(*e, sd.delta, box.re, [&](const std::vector<int>&, const Real&, const Real& im) {
          if (im_inside(im, box.im)) total += sd.multiplicity;
        });
        continue;
      }
      const Real step = step_of(*e);
      enumerate(*e, sd.delta, box.re, [&](const std::vector<int>&, const Real&, const Real& im) {
        const auto [lo, hi] = vertical_range(im, step, box.im);
        if (hi >= lo) total += (hi - lo + 1) * sd.multiplicity;
      });
    }
  }
  return total;
}

WeylPrediction weyl_prediction(const FlowModel& model, int k, double t, std::uint64_t seed) {
  check_degree(k, model.dim);
  double volume = 0.0;
  double error = 0.0;
  for (const CriticalElement* e : model.elements()) {
    const VolumeEstimate v = polytope_volume(polytope(*e), VolumeMethod::automatic, kDefaultSamples, seed);
    volume += v.value;
    error += v.error;
  }
  const double factor = model.rank() * static_cast<double>(binomial(model.dim, k)) * std::pow(t, model.dim);
  return {factor * volume, factor * error};
}

}  // namespace ruelle
