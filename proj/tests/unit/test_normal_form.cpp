#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "ruelle/error.hpp"
#include "ruelle/floquet.hpp"
#include "ruelle/normal_form.hpp"
#include "support/models.hpp"

using namespace ruelle;
using namespace ruelle::fixtures;

TEST(SlotFrame, CanonicalOrder) {
  std::vector<EigenDatum> eig{line(q(3))};
  plane(eig, q(-1), q(2));
  eig.push_back(line(q(-2)));
  const CriticalElement e = fixed_point("p", eig);
  const SlotFrame f = slot_frame(e);
  ASSERT_EQ(f.slots.size(), 3U);
  // stable line, stable plane, unstable line
  EXPECT_EQ(f.slots[0].entry, 3);
  EXPECT_TRUE(f.slots[1].plane);
  EXPECT_EQ(f.slots[1].entry, 1);
  EXPECT_EQ(f.slots[1].partner, 2);
  EXPECT_EQ(f.slots[2].entry, 0);
  EXPECT_EQ(f.dim, 4);
  EXPECT_EQ(f.covector_entry, (std::vector<int>{3, 1, 2, 0}));
  EXPECT_EQ(f.covector_conj, (std::vector<int>{0, 0, 1, 0}));
}

TEST(SlotFrame, OrbitAppendsTheta) {
  const SlotFrame f = slot_frame(twisted_orbit());
  EXPECT_EQ(f.covector_count(), 3);
  EXPECT_EQ(f.covector_entry.back(), -1);
}

TEST(NormalForm, SaddleGenerator) {
  const NormalForm nf = normal_form(saddle().fixed_points[0]);
  EXPECT_TRUE(nf.a.isApprox(Eigen::Vector2d(-1, 2).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(nf.backward_flow(0.0, 1.0).isApprox(Eigen::Vector2d(std::exp(1.0), std::exp(-2.0)).asDiagonal().toDenseMatrix()));
}

TEST(NormalForm, OddTwistIsRefused) { EXPECT_THROW(normal_form(twisted_orbit()), StateError); }

TEST(NormalForm, TwistedPairFlipsAfterOnePeriod) {
  const CriticalElement o = orbit("o", q(2), {line(q(-1), Rational(1, 2)), line(q(1), Rational(1, 2))});
  const NormalForm nf = normal_form(o);
  EXPECT_TRUE(nf.periodic(2.0).isApprox(-Eigen::MatrixXd::Identity(2, 2), 1e-14));
  EXPECT_TRUE(nf.periodic(4.0).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
}

TEST(NormalForm, CoefficientReproducesFloquetFactorization) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    const FlowModel m = random_model(rng);
    for (const auto& o : m.orbits) {
      if (o.eigenvalues.empty()) continue;
      const NormalForm nf = normal_form(o);
      const auto coeff = nf.periodic_coefficient();
      for (double theta : {0.37 * nf.period, nf.period, 1.5 * nf.period}) {
        const Eigen::MatrixXd u = integrate_fundamental(coeff, 0.0, theta, 1e-11);
        const Eigen::MatrixXd expected = nf.periodic(theta) * (theta * nf.a).exp();
        EXPECT_LT((u - expected).norm() / std::max(1.0, expected.norm()), 1e-8);
        // backward flow is the transport from theta back to theta - t
        const double t = 0.4 * nf.period;
        const Eigen::MatrixXd back = integrate_fundamental(coeff, theta, theta - t, 1e-11);
        EXPECT_LT((back - nf.backward_flow(theta, t)).norm() / std::max(1.0, back.norm()), 1e-8);
      }
      // Lyapunov exponents survive the round trip through the monodromy.
      const auto dec = floquet_decompose(monodromy(coeff, 1e-11), nf.period);
      std::vector<double> expected_chi, got_chi;
      for (const auto& d : o.eigenvalues) expected_chi.push_back(d.chi.value());
      got_chi = dec.lyapunov;
      std::sort(expected_chi.begin(), expected_chi.end());
      std::sort(got_chi.begin(), got_chi.end());
      for (std::size_t i = 0; i < got_chi.size(); ++i) EXPECT_NEAR(got_chi[i], expected_chi[i], 1e-7);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}
