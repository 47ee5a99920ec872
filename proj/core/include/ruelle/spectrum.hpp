#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ruelle/model.hpp"

namespace ruelle {

/// Search window: Re z >= -re and |Im z| <= im.
struct Box {
  double re = 0.0;
  double im = std::numeric_limits<double>::infinity();
};

/// One (bundle index, selection) pair producing a shift. Bit i of the mask
/// selects eigenvalue entry i; for orbits bit n-1 selects the flow direction.
struct ShiftWitness {
  int bundle = 0;
  std::uint32_t mask = 0;
  friend bool operator==(const ShiftWitness&, const ShiftWitness&) = default;
};

struct ShiftDatum {
  ComplexValue delta;
  int multiplicity = 0;
  std::vector<ShiftWitness> witnesses;
};

/// Size of the selection pool: n for both kinds of element.
int pool_size(const CriticalElement& elem);

/// Sum over the selected pool entries of chi + i*omega (+ 2*i*pi*twist/P on orbits).
ComplexValue selection_weight(const CriticalElement& elem, std::uint32_t mask);

/// The shift multiset for k-forms, merged under the active arithmetic.
std::vector<ShiftDatum> shift_set(const CriticalElement& elem, int k, const ConnectionData& connection);

struct LatticePoint {
  /// One entry per eigenvalue entry of the element.
  std::vector<int> alpha;
  /// Orbits only.
  std::int64_t alpha_n = 0;
  ComplexValue lambda;
};

/// -sum over stable entries of |chi|.
Real lattice_base(const CriticalElement& elem);

/// lambda_alpha for a given index.
ComplexValue lattice_value(const CriticalElement& elem, const std::vector<int>& alpha, std::int64_t alpha_n);

/// All lattice points of one element inside the box. Orbits need a finite im bound.
std::vector<LatticePoint> scalar_lattice(const CriticalElement& elem, const Box& box);

/// Visits every alpha with lambda_alpha + offset inside the box. The callback
/// receives (alpha, alpha_n, z).
void for_each_lattice(const CriticalElement& elem, const ComplexValue& offset, const Box& box,
                      const std::function<void(const std::vector<int>&, std::int64_t, const ComplexValue&)>& visit);

struct Contribution {
  std::string element;
  std::vector<int> alpha;
  std::int64_t alpha_n = 0;
  ShiftWitness witness;
};

struct Resonance {
  ComplexValue z;
  int multiplicity = 0;
  std::vector<Contribution> contributions;
};

/// Which contributions a Resonance records: every one, the first in
/// enumeration order, or none (multiplicities are always complete).
enum class Labels { all, first, none };

/// Sorted by Re descending, then Im ascending.
std::vector<Resonance> resonances(const FlowModel& model, int k, const Box& box, Labels labels = Labels::all);

/// Merges contributions with coinciding z (exact or within kMergeTolerance).
std::vector<Resonance> merge_resonances(std::vector<Resonance> raw);

/// One generator of the imaginary-axis spectrum: the points
/// -2*i*pi*(m + phase) / period for every integer m (orbits), or the single
/// point 0 (fixed points).
struct AxisGenerator {
  std::string element;
  bool orbit = false;
  Real period;
  Real phase;
  int multiplicity = 0;
};

/// Requires a unitary connection; throws SpectrumError otherwise.
std::vector<AxisGenerator> imaginary_axis(const FlowModel& model, int k);

/// Imaginary-axis points with |Im| <= t, merged and sorted like resonances().
std::vector<Resonance> imaginary_axis_points(const FlowModel& model, int k, double t);

struct ImaginaryCount {
  std::int64_t exact = 0;
  double prediction = 0.0;
};

ImaginaryCount count_imaginary(const FlowModel& model, int k, double t);

/// A vertical lattice offset + i*m*step (m in Z) for orbits, or the single
/// point offset for fixed points. For orbits Im(offset) lies in (-step, 0] and
/// phase = -Im(offset)/step, so the points are Re(offset) - i*step*(m + phase).
struct Band {
  std::string element;
  bool orbit = false;
  ComplexValue offset;
  Real step_im;
  Real phase;
  int multiplicity = 0;
};

/// Bands with at least one point inside the box, ordered by Re(offset) descending.
std::vector<Band> band_decomposition(const FlowModel& model, int k, const Box& box);

/// Band points inside the box, with band multiplicities, merged.
std::vector<Resonance> band_points(const std::vector<Band>& bands, const Box& box, ArithmeticMode mode,
                                   Labels labels = Labels::all);

/// Total multiplicity of resonances in box(t, t).
std::int64_t weyl_count(const FlowModel& model, int k, double t);

struct WeylPrediction {
  double value = 0.0;
  double error = 0.0;
};

/// N * C(n, k) * (sum of polytope volumes) * t^n.
WeylPrediction weyl_prediction(const FlowModel& model, int k, double t, std::uint64_t seed = 20240601);

std::int64_t binomial(int n, int k);

}  // namespace ruelle
