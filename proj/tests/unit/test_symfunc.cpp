#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "anisoflow/symfunc.hpp"
#include "oracles/brute_sigma.hpp"

namespace af = anisoflow;

TEST(SigmaK, SmallExamples) {
  EXPECT_DOUBLE_EQ(af::sigma_k({1.0, 1.0}, 2), 1.0);
  EXPECT_DOUBLE_EQ(af::sigma_k({2.0, 3.0}, 1), 5.0);
  EXPECT_DOUBLE_EQ(af::sigma_k({1.0, 2.0, 3.0}, 2), 11.0);
  EXPECT_DOUBLE_EQ(af::sigma_k({1.0, 2.0, 3.0}, 3), 6.0);
}

TEST(SigmaK, RejectsOutOfRangeOrder) {
  EXPECT_THROW(af::sigma_k({1.0, 2.0}, 0), std::out_of_range);
  EXPECT_THROW(af::sigma_k({1.0, 2.0}, 3), std::out_of_range);
  EXPECT_THROW(af::sigma_k_partials({1.0}, 2), std::out_of_range);
}

TEST(SigmaK, AnyOrderConventions) {
  const af::CurvatureVector kappa{2.0, 5.0};
  EXPECT_EQ(af::sigma_any(kappa, 0), 1.0);
  EXPECT_EQ(af::sigma_any(kappa, 3), 0.0);
  EXPECT_EQ(af::sigma_any(kappa, 2), 10.0);
}

TEST(SigmaK, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = u(rng);
    const af::CurvatureVector kappa{std::span<const double>(v)};
    for (int k = 1; k <= n; ++k) {
      const double expect = oracle::brute_sigma(v, k);
      EXPECT_NEAR(af::sigma_k(kappa, k), expect, 1e-12 * (1.0 + std::abs(expect)));
      const af::CurvatureVector d = af::sigma_k_partials(kappa, k);
      for (int i = 0; i < n; ++i) {
        const double pe = oracle::brute_partial(v, k, i);
        EXPECT_NEAR(d[i], pe, 1e-12 * (1.0 + std::abs(pe)));
      }
    }
  }
}

TEST(SigmaKPartials, Examples) {
  const af::CurvatureVector a = af::sigma_k_partials({1.0, 1.0, 1.0}, 2);
  EXPECT_EQ(a, (af::CurvatureVector{2.0, 2.0, 2.0}));
  const af::CurvatureVector b = af::sigma_k_partials({2.0, 3.0}, 2);
  EXPECT_EQ(b, (af::CurvatureVector{3.0, 2.0}));
  const af::CurvatureVector c = af::sigma_k_partials({-4.0, 0.5, 9.0}, 1);
  EXPECT_EQ(c, (af::CurvatureVector{1.0, 1.0, 1.0}));
}

TEST(Cone, Membership) {
  auto m = af::in_gamma_k_plus({1.0, 1.0, 1.0}, 3);
  EXPECT_TRUE(m.inside);
  EXPECT_DOUBLE_EQ(m.margin, 1.0);
  m = af::in_gamma_k_plus({1.0, 1.0, -0.1}, 2);
  EXPECT_TRUE(m.inside);
  EXPECT_NEAR(m.margin, 0.8, 1e-15);
  m = af::in_gamma_k_plus({1.0, -1.0}, 1);
  EXPECT_FALSE(m.inside);
  EXPECT_EQ(m.margin, 0.0);
}

TEST(Cone, BoundaryFailsSafe) {
  EXPECT_FALSE(af::in_gamma_k_plus({1e-11, 0.0}, 1).inside);
  EXPECT_TRUE(af::in_gamma_k_plus({1e-11, 0.0}, 1, 0.0).inside);
}

TEST(MatrixSigma, Examples) {
  EXPECT_DOUBLE_EQ(af::sigma_k_of_matrix(af::SymmetricMatrix::two(1, 0, 1), 2).value, 1.0);
  EXPECT_DOUBLE_EQ(af::sigma_k_of_matrix(af::SymmetricMatrix::two(2, 0, 3), 1).value, 5.0);
  EXPECT_DOUBLE_EQ(af::sigma_k_of_matrix(af::SymmetricMatrix::two(2, 1, 2), 2).value, 3.0);
  const auto ms = af::sigma_k_of_matrix(af::SymmetricMatrix::two(2, 1, 2), 1);
  EXPECT_NEAR(ms.eigenvalues[0], 3.0, 1e-15);
  EXPECT_NEAR(ms.eigenvalues[1], 1.0, 1e-15);
}

TEST(MatrixSigma, AgreesWithEigenvalues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto w = af::SymmetricMatrix::two(u(rng), u(rng), u(rng));
    const auto ev = w.eigenvalues();
    EXPECT_GE(ev[0], ev[1]);
    for (int k = 1; k <= 2; ++k) {
      const double a = af::sigma_k_of_matrix(w, k).value;
      const double b = af::sigma_k(ev, k);
      EXPECT_NEAR(a, b, 1e-12 * (1.0 + std::abs(w.xx()) + std::abs(w.yy()) + std::abs(w.xy())) *
                            (1.0 + std::abs(w.xx()) + std::abs(w.yy()) + std::abs(w.xy())));
    }
  }
}

TEST(MatrixSigma, RejectsAsymmetricEntries) {
  const double entries[] = {1.0, 0.5, 0.5 + 1e-6, 2.0};
  EXPECT_THROW(af::SymmetricMatrix::from_entries(2, entries), std::invalid_argument);
  const double ok[] = {1.0, 0.5, 0.5, 2.0};
  EXPECT_NO_THROW(af::SymmetricMatrix::from_entries(2, ok));
}

TEST(Binomial, Values) {
  EXPECT_EQ(af::binomial(2, 1), 2.0);
  EXPECT_EQ(af::binomial(3, 2), 3.0);
  EXPECT_EQ(af::binomial(2, 2), 1.0);
}
