#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ruelle/error.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/states.hpp"
#include "support/models.hpp"

using namespace ruelle;
using namespace ruelle::fixtures;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

TestForm scalar_form(int dim, const GrassmannWord& word, Polynomial p) {
  TestForm psi;
  psi.word = word;
  psi.modes.push_back({Rational(0), GaussianPoly(Eigen::MatrixXd::Identity(dim, dim), std::move(p))});
  return psi;
}

LocalState line_state(int alpha) {
  const FlowModel m = stable_line();
  return build_state(m.fixed_points[0], m.connection, {alpha}, 0, GrassmannWord{}, 0, 0);
}

LocalState saddle_state() {
  const FlowModel m = saddle();
  return build_state(m.fixed_points[0], m.connection, {0, 1}, 0, GrassmannWord{}, 0, 0);
}

std::vector<FlowModel> random_models(std::uint64_t seed, int count, int max_dim = 4) {
  std::mt19937_64 rng(seed);
  RandomModelOptions o;
  o.max_dim = max_dim;
  std::vector<FlowModel> out;
  for (int i = 0; i < count; ++i) out.push_back(random_model(rng, o));
  return out;
}

/// Every state with alpha entries in {0, 1, 2} drawn at random, all words and bundles.
std::vector<LocalState> sample_states(const FlowModel& m, std::mt19937_64& rng, int per_word = 2) {
  std::vector<LocalState> out;
  std::uniform_int_distribution<int> a(0, 2);
  std::uniform_int_distribution<int> n(-1, 1);
  for (const CriticalElement* e : m.elements()) {
    const int count = m.dim;
    for (int k = 0; k <= count; ++k) {
      for (const GrassmannWord& w : words_of_degree(count, k)) {
        for (int j = 0; j < m.rank(); ++j) {
          for (int r = 0; r < per_word; ++r) {
            std::vector<int> alpha(e->eigenvalues.size());
            for (auto& x : alpha) x = a(rng);
            out.push_back(build_state(*e, m.connection, alpha, e->is_orbit() ? n(rng) : 0, w, j, k));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST(GrassmannWord, SortsAndTracksSign) {
  const GrassmannWord w = GrassmannWord::from({2, 0, 1});
  EXPECT_EQ(w.covectors, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(w.sign, 1);
  EXPECT_EQ(GrassmannWord::from({1, 0}).sign, -1);
  EXPECT_THROW(GrassmannWord::from({1, 1}), StateError);
}

TEST(GrassmannWord, ComplementAndWedge) {
  const GrassmannWord a = GrassmannWord::from({1});
  const GrassmannWord b = complement(a, 3);
  EXPECT_EQ(b.covectors, (std::vector<int>{0, 2}));
  EXPECT_EQ(wedge_sign(a, b), -1);
  EXPECT_EQ(wedge_sign(b, a), -1);
  EXPECT_EQ(wedge_sign(a, a), 0);
  EXPECT_EQ(words_of_degree(4, 2).size(), 6U);
}

TEST(BuildState, StableLine) {
  const LocalState s = line_state(0);
  EXPECT_EQ(*s.eigenvalue.re.rational(), Rational(-1));
  EXPECT_NEAR(std::abs(local_exponent(s) - Complex(-1.0)), 0.0, 1e-15);
}

TEST(BuildState, SaddleMonomial) {
  const LocalState s = saddle_state();
  EXPECT_EQ(*s.eigenvalue.re.rational(), Rational(-3));
}

TEST(BuildState, DegreeMismatch) {
  const FlowModel m = saddle();
  EXPECT_THROW(build_state(m.fixed_points[0], m.connection, {0, 0}, 0, GrassmannWord::from({0, 1}), 0, 1), StateError);
  EXPECT_THROW(build_state(m.fixed_points[0], m.connection, {0}, 0, GrassmannWord{}, 0, 0), StateError);
  EXPECT_THROW(build_state(m.fixed_points[0], m.connection, {-1, 0}, 0, GrassmannWord{}, 0, 0), StateError);
  EXPECT_THROW(build_state(m.fixed_points[0], m.connection, {0, 0}, 1, GrassmannWord{}, 0, 0), StateError);
  EXPECT_THROW(build_state(m.fixed_points[0], m.connection, {0, 0}, 0, GrassmannWord{}, 1, 0), StateError);
}

TEST(BuildState, OddTwistOrbitIsRefused) {
  const CriticalElement o = twisted_orbit();
  EXPECT_THROW(build_state(o, ConnectionData{}, {0, 0}, 0, GrassmannWord{}, 0, 0), StateError);
}

TEST(Pair, DiracEvaluation) {
  const LocalState s = line_state(0);
  const TestForm psi = scalar_form(1, GrassmannWord::from({0}), Polynomial::constant(1, 1.0));
  EXPECT_NEAR(std::abs(pair(s, psi) - 1.0), 0.0, 1e-14);
}

TEST(Pair, DiracDerivative) {
  const LocalState s = line_state(1);
  const TestForm psi = scalar_form(1, GrassmannWord::from({0}), Polynomial::variable(1, 0));
  EXPECT_NEAR(std::abs(pair(s, psi) + 1.0), 0.0, 1e-14);
}

TEST(Pair, MonomialMoment) {
  const LocalState s = saddle_state();
  const TestForm psi = scalar_form(2, GrassmannWord::from({0, 1}), Polynomial::variable(2, 1));
  EXPECT_NEAR(std::abs(pair(s, psi) - kSqrtPi / 2), 0.0, 1e-14);
}

TEST(Pair, DegreeMismatchAndBundleMismatch) {
  const LocalState s = line_state(0);
  EXPECT_THROW(pair(s, scalar_form(1, GrassmannWord{}, Polynomial::constant(1, 1.0))), StateError);
  TestForm other = scalar_form(1, GrassmannWord::from({0}), Polynomial::constant(1, 1.0));
  other.bundle = 1;
  EXPECT_EQ(pair(s, other), Complex(0.0));
}

TEST(PullbackPair, Examples) {
  const LocalState s = line_state(0);
  const TestForm psi = scalar_form(1, GrassmannWord::from({0}), Polynomial::constant(1, 1.0));
  EXPECT_NEAR(std::abs(pullback_pair(s, psi, 1.0) - std::exp(-1.0)), 0.0, 1e-14);
  EXPECT_EQ(pullback_pair(s, psi, 0.0), pair(s, psi));
  const LocalState u = saddle_state();
  const TestForm phi = scalar_form(2, GrassmannWord::from({0, 1}), Polynomial::variable(2, 1));
  EXPECT_NEAR(std::abs(pullback_pair(u, phi, 1.0) - std::exp(-3.0) * pair(u, phi)), 0.0, 1e-14);
}

TEST(CheckEigen, ExamplesAreExact) {
  const TestForm psi = scalar_form(1, GrassmannWord::from({0}), Polynomial::constant(1, 1.0));
  EXPECT_LT(check_eigen(line_state(0), psi, default_time_grid()), 1e-12);
  const TestForm d = scalar_form(1, GrassmannWord::from({0}), Polynomial::variable(1, 0));
  EXPECT_LT(check_eigen(line_state(1), d, default_time_grid()), 1e-12);
  const TestForm phi = scalar_form(2, GrassmannWord::from({0, 1}), Polynomial::variable(2, 1));
  EXPECT_LT(check_eigen(saddle_state(), phi, default_time_grid()), 1e-12);
}

TEST(CheckEigen, PerturbedEigenvalueIsCaught) {
  LocalState s = line_state(0);
  s.eigenvalue = {Real(-0.9), Real()};
  const TestForm psi = scalar_form(1, GrassmannWord::from({0}), Polynomial::constant(1, 1.0));
  // residual is normalized by 1 + |pair| = 2
  const double expected = std::abs(std::exp(-1.0) - std::exp(-0.9)) / 2.0;
  EXPECT_NEAR(check_eigen(s, psi, {1.0}), expected, 1e-14);
  EXPECT_NEAR(check_eigen(s, psi, default_time_grid()), expected, 1e-14);
  EXPECT_GT(check_eigen(s, psi, default_time_grid()), 1e-3);
}

TEST(CheckEigen, EmptyGrid) { EXPECT_EQ(check_eigen(line_state(0), TestForm{}, {}), 0.0); }

TEST(DualState, FixedPointMassIsOne) {
  const LocalState s = line_state(0);
  const LocalState d = dual_state(s);
  EXPECT_EQ(d.dirac, DiracSide::unstable);
  EXPECT_EQ(d.word.degree(), 1);
  EXPECT_NEAR(wedge_mass(s, d), 1.0, 1e-12);
  EXPECT_THROW(dual_state(line_state(1)), StateError);
}

TEST(DualState, OrbitMassIsPeriod) {
  const FlowModel m = circle_orbit();
  const LocalState s = build_state(m.orbits[0], m.connection, {0}, 0, GrassmannWord{}, 0, 0);
  const double mass = wedge_mass(s, dual_state(s));
  EXPECT_NEAR(mass, 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(wedge_mass(s, dual_state(s), PairMethod::quadrature), mass, 1e-8);
}

TEST(DualState, MassOnRandomElements) {
  std::mt19937_64 rng(44);
  for (const FlowModel& m : random_models(45, 25)) {
    for (const CriticalElement* e : m.elements()) {
      for (int k = 0; k <= m.dim; ++k) {
        const auto words = words_of_degree(m.dim, k);
        const GrassmannWord& w = words[rng() % words.size()];
        const LocalState s = build_state(*e, m.connection, std::vector<int>(e->eigenvalues.size(), 0), 0, w, 0, k);
        const LocalState d = dual_state(s);
        const double expected = e->is_orbit() ? e->period.value() : 1.0;
        const double closed = wedge_mass(s, d);
        EXPECT_NEAR(closed, expected, 1e-10 * expected);
        EXPECT_NEAR(wedge_mass(s, d, PairMethod::quadrature), closed, 1e-8);
      }
    }
  }
}

TEST(StateInvariants, FrameShiftConsistency) {
  for (const FlowModel& m : random_models(46, 30, 6)) {
    for (const CriticalElement* e : m.elements()) {
      const Chart chart = make_chart(*e, m.connection);
      for (int k = 0; k <= m.dim; ++k) {
        for (const GrassmannWord& w : words_of_degree(chart.frame.covector_count(), k)) {
          const Complex beta = word_exponent(chart, w);
          const Complex expected = selection_weight(*e, selection_mask(chart.frame, w)).value();
          EXPECT_LT(std::abs(beta - expected), 1e-12 * (1 + std::abs(expected)));
        }
      }
    }
  }
}

TEST(StateInvariants, SelectionMasksCoverShiftWitnesses) {
  for (const FlowModel& m : random_models(47, 20)) {
    for (const CriticalElement* e : m.elements()) {
      const SlotFrame f = slot_frame(*e);
      for (int k = 0; k <= m.dim; ++k) {
        std::vector<std::uint32_t> masks;
        for (const GrassmannWord& w : words_of_degree(f.covector_count(), k)) masks.push_back(selection_mask(f, w));
        std::sort(masks.begin(), masks.end());
        EXPECT_EQ(std::adjacent_find(masks.begin(), masks.end()), masks.end());
        for (const auto& d : shift_set(*e, k, m.connection)) {
          for (const auto& wit : d.witnesses) EXPECT_TRUE(std::binary_search(masks.begin(), masks.end(), wit.mask));
        }
      }
    }
  }
}

TEST(StateInvariants, EigenvalueMatchesChartExponent) {
  std::mt19937_64 rng(48);
  for (const FlowModel& m : random_models(49, 15)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      EXPECT_LT(std::abs(s.eigenvalue.value() - local_exponent(s)), 1e-10 * (1 + std::abs(local_exponent(s))));
    }
  }
}

TEST(StateInvariants, EigenvalueIsAResonance) {
  std::mt19937_64 rng(50);
  for (const FlowModel& m : random_models(51, 10)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const Complex z = s.eigenvalue.value();
      const double t = std::max(-z.real(), std::abs(z.imag())) + 0.5;
      const auto list = resonances(m, s.word.degree(), Box{t, t});
      const bool found = std::any_of(list.begin(), list.end(), [&](const Resonance& r) { return coincide(r.z, s.eigenvalue); });
      EXPECT_TRUE(found) << s.chart.element << " z = " << z;
    }
  }
}

TEST(StateInvariants, CheckEigenOnRandomStates) {
  std::mt19937_64 rng(52);
  for (const FlowModel& m : random_models(53, 12, 3)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const TestForm psi = probe_form(s, rng());
      EXPECT_LT(check_eigen(s, psi, default_time_grid()), 1e-8);
    }
  }
}

TEST(StateInvariants, Semigroup) {
  std::mt19937_64 rng(54);
  for (const FlowModel& m : random_models(55, 8, 3)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const TestForm psi = probe_form(s, rng());
      const Complex once = pullback_pair(s, psi, 0.7);
      const Complex twice = pair(s, transport(s.chart, transport(s.chart, psi, 0.3), 0.4));
      EXPECT_LT(std::abs(once - twice), 1e-10 * (1 + std::abs(once)));
    }
  }
}

TEST(StateInvariants, Linearity) {
  std::mt19937_64 rng(56);
  for (const FlowModel& m : random_models(57, 8, 3)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const TestForm a = probe_form(s, rng());
      const TestForm b = probe_form(s, rng());
      const Complex ca(0.3, -1.1), cb(-2.0, 0.5);
      TestForm sum = a;
      sum.modes.clear();
      for (const auto& mode : a.modes) sum.modes.push_back({mode.frequency, mode.coefficient.scaled(ca)});
      for (const auto& mode : b.modes) sum.modes.push_back({mode.frequency, mode.coefficient.scaled(cb)});
      const Complex expected = ca * pair(s, a) + cb * pair(s, b);
      EXPECT_LT(std::abs(pair(s, sum) - expected), 1e-10 * (1 + std::abs(expected)));
    }
  }
}

TEST(StateInvariants, ConjugateSymmetryUpToPlaneSign) {
  std::mt19937_64 rng(58);
  for (const FlowModel& m : random_models(59, 10, 4)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const TestForm psi = probe_form(s, rng());
      int planes = 0;
      for (const Slot& slot : s.chart.frame.slots) planes += slot.plane ? 1 : 0;
      const double sign = planes % 2 == 0 ? 1.0 : -1.0;
      const Complex direct = pair(s, psi);
      const Complex mirrored = pair(conjugate(s), conjugate(s.chart, psi));
      EXPECT_LT(std::abs(mirrored - sign * std::conj(direct)), 1e-10 * (1 + std::abs(direct)));
    }
  }
}

TEST(StateInvariants, MonodromySignFollowsTwistedStableAlpha) {
  std::mt19937_64 rng(60);
  int anti = 0;
  for (const FlowModel& m : random_models(61, 30)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      if (!s.chart.orbit) {
        EXPECT_EQ(monodromy_sign(s), 1);
        continue;
      }
      int twisted_stable = 0;
      for (const Slot& slot : s.chart.frame.slots) {
        if (slot.twisted && slot.stable) twisted_stable += s.alpha[static_cast<std::size_t>(slot.entry)];
      }
      const int expected = twisted_stable % 2 == 0 ? 1 : -1;
      EXPECT_EQ(monodromy_sign(s), expected);
      anti += expected < 0;
    }
  }
  EXPECT_GT(anti, 0);
}

TEST(StateInvariants, PeriodicityOfPairing) {
  std::mt19937_64 rng(62);
  for (const FlowModel& m : random_models(63, 20)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      if (!s.chart.orbit || monodromy_sign(s) != 1) continue;
      TestForm psi = probe_form(s, rng());
      // integer offsets of the total theta frequency keep the integrand single valued
      for (int shift : {-1, 0, 2}) {
        TestForm shifted = psi;
        for (auto& mode : shifted.modes) mode.frequency += shift;
        const Complex base = pair(s, shifted, PairMethod::closed_form, 0.0);
        for (double origin : {0.37, 1.0}) {
          const Complex moved = pair(s, shifted, PairMethod::closed_form, origin * s.chart.period);
          EXPECT_LT(std::abs(moved - base), 1e-10 * (1 + std::abs(base)));
        }
      }
    }
  }
}

TEST(StateInvariants, QuadratureMatchesClosedForm) {
  std::mt19937_64 rng(64);
  for (const FlowModel& m : random_models(65, 6, 3)) {
    for (const LocalState& s : sample_states(m, rng, 1)) {
      const TestForm psi = probe_form(s, rng());
      const Complex a = pair(s, psi);
      const Complex b = pair(s, psi, PairMethod::quadrature);
      EXPECT_LT(std::abs(a - b), 1e-8 * (1 + std::abs(a)));
    }
  }
}
