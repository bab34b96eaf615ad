#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fcblab/checks.hpp"
#include "fcblab/errors.hpp"
#include "fcblab/polynomial.hpp"
#include "oracles.hpp"

using namespace fcblab;

namespace {

Polynomial maj3() {
  std::vector<double> table(8);
  for (unsigned m = 0; m < 8; ++m) table[m] = oracle::maj3(oracle::point(3, m));
  return fourier_transform(3, table);
}

Polynomial random_integer_polynomial(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::map<Subset, double> coeffs;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int c = coef(rng);
    if (c != 0) coeffs[mask_subset(mask)] = c;
  }
  return Polynomial(n, std::move(coeffs));
}

oracle::Function as_function(const Polynomial& p) {
  return [p](const oracle::Point& x) { return evaluate(p, x); };
}

}  // namespace

TEST(Polynomial, RejectsMalformedKeys) {
  EXPECT_THROW(Polynomial(2, {{Subset{2, 1}, 1.0}}), StructureError);
  EXPECT_THROW(Polynomial(2, {{Subset{1, 1}, 1.0}}), StructureError);
  EXPECT_THROW(Polynomial(2, {{Subset{3}, 1.0}}), IndexError);
  EXPECT_THROW(Polynomial::from_terms(2, {{Subset{1}, 1.0}, {Subset{1}, 2.0}}), StructureError);
}

TEST(Polynomial, DegreeAndHomogeneity) {
  const Polynomial p(3, {{Subset{1, 2}, 1.0}, {Subset{2, 3}, -0.5}});
  EXPECT_EQ(p.degree(), 2);
  EXPECT_TRUE(p.is_homogeneous());
  EXPECT_FALSE(maj3().is_homogeneous());
  EXPECT_EQ(Polynomial(4).degree(), 0);
}

TEST(Polynomial, Maj3MatchesIndependentInterpolation) {
  const auto reference = oracle::fourier(3, oracle::maj3);
  const Polynomial p = maj3();
  ASSERT_EQ(reference.size(), 4u);
  for (const auto& [s, c] : reference) EXPECT_NEAR(p.coeff(s), c, 1e-15);
  EXPECT_NEAR(p.coeff({1}), 0.5, 1e-15);
  EXPECT_NEAR(p.coeff({1, 2, 3}), -0.5, 1e-15);
}

TEST(Polynomial, FourierTransformNeedsFullTable) {
  std::vector<double> short_table(7, 0.0);
  EXPECT_THROW(fourier_transform(3, short_table), IncompleteTableError);
}

TEST(Polynomial, RoundTripOnIntegerCoefficients) {
  std::mt19937_64 rng(11);
  for (int n = 0; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const Polynomial p = random_integer_polynomial(n, rng);
      EXPECT_EQ(fourier_transform(n, truth_table(p)), p);
    }
  }
}

TEST(Polynomial, Parseval) {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 6; ++n) {
    const Polynomial p = random_polynomial(n, n, 0.7, rng);
    double coeff_sq = 0.0;
    for (const auto& [s, c] : p.coeffs()) coeff_sq += c * c;
    double value_sq = 0.0;
    for (double v : truth_table(p)) value_sq += v * v;
    EXPECT_NEAR(coeff_sq, value_sq / (1u << n), 1e-12);
  }
}

TEST(Polynomial, StatisticsAgreeWithBruteForce) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 5;
    const Polynomial p = random_polynomial(n, 3, 0.6, rng);
    const Statistics st = statistics(p);
    EXPECT_NEAR(st.variance, oracle::variance(n, as_function(p)), 1e-12);
    for (int i = 1; i <= n; ++i) EXPECT_NEAR(st.influences[i - 1], oracle::influence(n, as_function(p), i), 1e-12);
  }
}

TEST(Polynomial, Maj3Statistics) {
  const Statistics st = statistics(maj3());
  EXPECT_NEAR(st.variance, 1.0, 1e-15);
  for (double inf : st.influences) EXPECT_NEAR(inf, 0.5, 1e-15);
  EXPECT_EQ(st.argmax_variable, 1);
  EXPECT_NEAR(spectral_l1(maj3()), 2.0, 1e-15);
  EXPECT_NEAR(sup_norm_bruteforce(maj3()), 1.0, 1e-15);
}

TEST(Polynomial, ArgmaxTiesGoToSmallestIndex) {
  const Polynomial p(3, {{Subset{1}, 0.1}, {Subset{2}, 0.5}, {Subset{3}, -0.5}});
  EXPECT_EQ(statistics(p).argmax_variable, 2);
}

TEST(Polynomial, VarianceSplitsOverDegreeParts) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_polynomial(5, 4, 0.5, rng);
    double sum = 0.0;
    for (int s = 1; s <= p.degree(); ++s) sum += variance(degree_part(p, s));
    EXPECT_NEAR(variance(p), sum, 1e-12);
  }
  const Polynomial q(2, {{Subset{1}, 1.0}});
  EXPECT_TRUE(degree_part(q, 2).is_zero());
  EXPECT_EQ(degree_part(q, 1), q);
}

TEST(Polynomial, RestrictionIdentity) {
  std::mt19937_64 rng(15);
  for (int n = 1; n <= 6; ++n) {
    const Polynomial p = random_polynomial(n, n, 0.6, rng);
    for (int i = 1; i <= n; ++i) {
      for (int y : {1, -1}) {
        const Polynomial q = restrict(p, i, y);
        ASSERT_EQ(q.n(), n - 1);
        for (unsigned m = 0; m < (1u << (n - 1)); ++m) {
          const oracle::Point rest = oracle::point(n - 1, m);
          oracle::Point full(rest.begin(), rest.begin() + (i - 1));
          full.push_back(y);
          full.insert(full.end(), rest.begin() + (i - 1), rest.end());
          EXPECT_NEAR(evaluate(q, rest), evaluate(p, full), 1e-12);
        }
      }
    }
  }
  EXPECT_THROW(restrict(Polynomial(2), 3, 1), IndexError);
  EXPECT_THROW(restrict(Polynomial(2), 1, 0), ParameterError);
}

TEST(Polynomial, GreedySimulationExamples) {
  const Polynomial x1(1, {{Subset{1}, 1.0}});
  const GreedyResult r = greedy_simulate(x1, std::vector<int>{-1}, 1);
  EXPECT_EQ(r.estimate, -1.0);
  EXPECT_EQ(r.queried, std::vector<int>{1});
  EXPECT_EQ(greedy_simulate(maj3(), std::vector<int>{1, 1, -1}, 3).estimate, 1.0);
  const Polynomial p(2, {{Subset{}, 0.25}, {Subset{1}, 1.0}});
  EXPECT_EQ(greedy_simulate(p, std::vector<int>{1, 1}, 0).estimate, 0.25);
  EXPECT_THROW(greedy_simulate(p, std::vector<int>{1, 1}, 3), ParameterError);
}

TEST(Polynomial, GreedyTracksOriginalIndices) {
  const Polynomial p(3, {{Subset{3}, 1.0}, {Subset{1}, 0.5}});
  const GreedyResult r = greedy_simulate(p, std::vector<int>{1, 1, -1}, 2);
  EXPECT_EQ(r.queried, (std::vector<int>{3, 1}));
  EXPECT_EQ(r.estimate, -0.5);
  EXPECT_EQ(r.residual_variance, 0.0);
}

TEST(Polynomial, GreedyFullBudgetReproducesEvaluate) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const Polynomial p = random_polynomial(n, n, 0.7, rng);
    for (unsigned m = 0; m < (1u << n); ++m) {
      const oracle::Point y = oracle::point(n, m);
      EXPECT_NEAR(greedy_simulate(p, y, n).estimate, evaluate(p, y), 1e-12);
    }
  }
}
