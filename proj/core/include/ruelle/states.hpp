#pragma once

// Local resonant-state germs near a critical element, in the chart of the
// linear normal form. A state is
//
//   e^{2 i pi phase theta / P} * D(x) * word (x) e_j
//
// where D is a Dirac derivative in the slots of one side and a monomial in the
// slots of the other. Plane slots use z = x1 + i x2 with the derivative
// conventions d_z = d1 + i d2 and d_zbar = d1 - i d2: the alpha entry of the
// +omega member acts through d_zbar (Dirac side) or z (monomial side), and the
// -omega member through d_z or zbar. The canonical top-degree word of the
// complex covector frame integrates as Lebesgue measure dx (d theta).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ruelle/gaussian.hpp"
#include "ruelle/model.hpp"
#include "ruelle/normal_form.hpp"

namespace ruelle {

/// Covector slots of a SlotFrame in canonical order. The sign records the
/// permutation from the order the word was written in.
struct GrassmannWord {
  std::vector<int> covectors;
  int sign = 1;

  /// Sorts the covectors and tracks the permutation sign; repeats are an error.
  static GrassmannWord from(std::vector<int> order);
  int degree() const { return static_cast<int>(covectors.size()); }
};

/// Every covector of `count` that is not in the word, in canonical order.
GrassmannWord complement(const GrassmannWord& w, int count);
/// Sign of a ^ b relative to the canonical top word; 0 if they overlap.
int wedge_sign(const GrassmannWord& a, const GrassmannWord& b);
/// Selection mask of spectrum::shift_set for the same covectors.
std::uint32_t selection_mask(const SlotFrame& frame, const GrassmannWord& w);
/// All words of degree k over `count` covectors, in lexicographic order.
std::vector<GrassmannWord> words_of_degree(int count, int k);

/// Numerical data of the linear model around one element.
struct Chart {
  std::string element;
  bool orbit = false;
  double period = 0.0;
  SlotFrame frame;
  /// Real generator A of the transverse flow x' = A x.
  Eigen::MatrixXd generator;
  /// Growth rate of each covector under the time-t flow pullback (0 for d theta).
  std::vector<Complex> covector_rate;
  /// chi + i omega of each eigenvalue entry.
  std::vector<Complex> entry_rate;
  /// Twist of each covector (0 for planes and d theta).
  std::vector<Rational> covector_twist;
  /// Connection exponents gamma_j of an orbit; empty for fixed points.
  std::vector<Complex> gamma;
  int rank = 1;
};

/// Throws StateError for an orbit with an odd number of twisted slots.
Chart make_chart(const CriticalElement& elem, const ConnectionData& connection);

enum class DiracSide { stable, unstable };

struct LocalState {
  Chart chart;
  /// One entry per eigenvalue entry of the element.
  std::vector<int> alpha;
  std::int64_t alpha_n = 0;
  GrassmannWord word;
  int bundle = 0;
  ComplexValue eigenvalue;
  DiracSide dirac = DiracSide::stable;
  /// Frequency of the theta prefactor in units of 2 pi / P.
  Rational phase{0};
};

/// Builds the germ for (alpha, alpha_n, word, bundle). The eigenvalue is the
/// spectrum's lattice value at the reflected index 2 twist.alpha_y - alpha_n
/// plus the shift of the matching witness. Throws StateError on a degree
/// mismatch, a malformed alpha, or an unknown bundle.
LocalState build_state(const CriticalElement& elem, const ConnectionData& connection, const std::vector<int>& alpha,
                       std::int64_t alpha_n, const GrassmannWord& word, int bundle, int k);

/// Eigenvalue read off from the chart data alone, independently of the spectrum.
Complex local_exponent(const LocalState& state);

/// Grassmann scaling exponent of a word: rates plus 2 i pi twist / P.
Complex word_exponent(const Chart& chart, const GrassmannWord& word);

/// +1 if the state is single valued around the orbit, -1 if it changes sign.
int monodromy_sign(const LocalState& state);

/// e^{2 i pi frequency theta / P} * coefficient(x).
struct ThetaMode {
  Rational frequency{0};
  GaussianPoly coefficient;
};

struct TestForm {
  GrassmannWord word;
  int bundle = 0;
  /// Fixed points use a single mode; its frequency is ignored.
  std::vector<ThetaMode> modes;
};

enum class PairMethod { closed_form, quadrature };

/// <state, psi> over one period starting at theta0. Throws StateError unless
/// the degrees are complementary.
Complex pair(const LocalState& state, const TestForm& psi, PairMethod method = PairMethod::closed_form,
             double theta0 = 0.0);

/// Pullback of psi by the time-t flow, including the Grassmann rates and the
/// parallel transport e^{-2 i pi gamma_j t / P} of the dual bundle frame.
TestForm transport(const Chart& chart, const TestForm& psi, double t);

/// <state o phi^{-t}, psi>, computed as <state, transport(psi, t)>.
Complex pullback_pair(const LocalState& state, const TestForm& psi, double t);

/// max over the grid of |pullback_pair - e^{t lambda} pair| / (1 + |pair|).
double check_eigen(const LocalState& state, const TestForm& psi, const std::vector<double>& t_grid);

/// Default grid for check_eigen: 0, 0.25, ..., 1.
std::vector<double> default_time_grid();

/// A test form with a non-degenerate pairing: the complementary word, the
/// frequency -phase, and a seeded random polynomial times a random envelope.
TestForm probe_form(const LocalState& state, std::uint64_t seed = 1);

/// Principal-state dual: Dirac and monomial sides swapped, complementary word,
/// opposite phase. Throws StateError when alpha != 0.
LocalState dual_state(const LocalState& state);

/// Mass of state ^ dual, from the pairing of the state with a normalized
/// Gaussian in the dual's Dirac slots carrying the dual's word and phase.
double wedge_mass(const LocalState& state, const LocalState& dual, PairMethod method = PairMethod::closed_form);

/// Complex conjugates (plane members swapped, phases and frequencies negated).
LocalState conjugate(const LocalState& state);
TestForm conjugate(const Chart& chart, const TestForm& psi);

}  // namespace ruelle
