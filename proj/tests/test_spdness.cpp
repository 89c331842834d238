#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "property.hpp"
#include "spdmix/error.hpp"
#include "spdmix/generators.hpp"
#include "spdmix/spdness.hpp"

using namespace spdmix;

namespace {

SeriesMatrix series(std::initializer_list<std::initializer_list<double>> rows) {
  return SeriesMatrix(Matrix(rows));
}

Matrix brute_covariance(const Matrix& x) {
  const Index n = x.rows();
  const Index t = x.cols();
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      double mi = 0.0;
      double mj = 0.0;
      for (Index k = 0; k < t; ++k) {
        mi += x(i, k);
        mj += x(j, k);
      }
      mi /= static_cast<double>(t);
      mj /= static_cast<double>(t);
      double acc = 0.0;
      for (Index k = 0; k < t; ++k) acc += (x(i, k) - mi) * (x(j, k) - mj);
      c(i, j) = acc / static_cast<double>(t);
    }
  }
  return c;
}

}  // namespace

TEST(SeriesMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(SeriesMatrix(Matrix(0, 3)), DimensionError);
  EXPECT_THROW(SeriesMatrix(Matrix{{1.0, std::nan("")}}), LinalgError);
}

TEST(Covariance, SingleVariableHandExample) {
  const SymmetricMatrix c = covariance(series({{0.0, 2.0}}));
  ASSERT_EQ(c.dim(), 1);
  EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
}

TEST(Covariance, IdenticalRowsAreRankDeficient) {
  const SymmetricMatrix c = covariance(series({{1, 5, 2, 8}, {1, 5, 2, 8}}));
  EXPECT_DOUBLE_EQ(c(0, 1), c(0, 0));
  EXPECT_EQ(oracle::numerical_rank(c.matrix()), 1);
}

TEST(Covariance, ShortSeriesIsNotSpd) {
  const SymmetricMatrix c = covariance(series({{1, 2}, {0, 5}, {3, -1}}));
  EXPECT_LE(oracle::numerical_rank(c.matrix()), 1);
  const SpdnessReport r = spdness_report(c, 2);
  EXPECT_FALSE(r.is_spd);
  EXPECT_LE(r.spdness_pct, 33.4);
  EXPECT_EQ(r.rank_bound, 1);
}

TEST(Covariance, ConstantRowIsNamed) {
  try {
    (void)covariance(series({{1, 2, 3}, {4, 4, 4}}));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
  EXPECT_THROW(covariance(series({{1}, {2}})), DomainError);
}

TEST(Covariance, MatchesBruteForce) {
  Rng rng(1);
  const SeriesMatrix x = gen_synthetic_series(6, 40, 3, 0.5, rng);
  EXPECT_LE(oracle::rel_fro(covariance(x).matrix(), brute_covariance(x.values())), 1e-13);
}

TEST(Covariance, PsdAndRankLaw) {
  prop::for_all(
      "covariance psd and rank", 303, 80,
      [](Rng& rng) {
        const Index n = prop::pick_dim(rng, {2, 5, 12, 30});
        const Index t = 2 + static_cast<Index>(rng.index(static_cast<std::size_t>(2 * n)));
        const Index rank = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
        return gen_synthetic_series(n, t, rank, rng.bernoulli(0.5) ? 0.0 : 0.3, rng);
      },
      [](const SeriesMatrix& x) -> ::testing::AssertionResult {
        const Matrix c = covariance(x).matrix();
        const oracle::Eig e = oracle::jacobi_eig(c);
        if (e.values(0) < -1e-10 * c.trace()) {
          return ::testing::AssertionFailure() << "min eigenvalue " << e.values(0);
        }
        const int bound = static_cast<int>(std::min(x.n_vars(), x.n_steps() - 1));
        const int rank = oracle::numerical_rank(c);
        if (rank > bound) {
          return ::testing::AssertionFailure() << "rank " << rank << " > " << bound;
        }
        return ::testing::AssertionSuccess();
      });
}

TEST(Correlation, PerfectLinearDependence) {
  const SymmetricMatrix r = correlation(series({{1, 2, 3}, {2, 4, 6}}));
  EXPECT_EQ(r(0, 0), 1.0);
  EXPECT_EQ(r(1, 1), 1.0);
  EXPECT_NEAR(r(0, 1), 1.0, 1e-12);
  const SymmetricMatrix anti = correlation(series({{1, 2, 3}, {3, 2, 1}}));
  EXPECT_NEAR(anti(0, 1), -1.0, 1e-12);
}

TEST(Correlation, MatchesDiagonalScaling) {
  Rng rng(2);
  const SeriesMatrix x = gen_synthetic_series(5, 50, 5, 0.2, rng);
  const Matrix cov = brute_covariance(x.values());
  const Vector inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix expected = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  const SymmetricMatrix r = correlation(x);
  EXPECT_LE((r.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(r.matrix().diagonal(), Vector::Ones(5));
}

TEST(Correlation, UnitDiagonalAndBoundedEntries) {
  prop::for_all(
      "correlation bounds", 304, 80,
      [](Rng& rng) {
        const Index n = prop::pick_dim(rng, {2, 6, 20});
        const Index t = 3 + static_cast<Index>(rng.index(60));
        return gen_synthetic_series(n, t, 1 + static_cast<Index>(rng.index(2)), 0.05, rng);
      },
      [](const SeriesMatrix& x) -> ::testing::AssertionResult {
        const Matrix r = correlation(x).matrix();
        if (r.diagonal() != Vector::Ones(r.rows())) {
          return ::testing::AssertionFailure() << "diagonal not exactly 1";
        }
        if (r.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
          return ::testing::AssertionFailure() << "entry outside [-1, 1]";
        }
        const double min_eig = oracle::jacobi_eig(r).values(0);
        return prop::within(-min_eig, 1e-10 * r.trace(), "negative eigenvalue magnitude");
      });
}

TEST(Correlation, ConstantRowRejected) {
  EXPECT_THROW(correlation(series({{1, 2, 3}, {0, 0, 0}})), DomainError);
}

TEST(Clamp, AllOnesPattern) {
  const ClampResult r = clamp_to_spd_counted(SymmetricMatrix::from(Matrix::Ones(2, 2)));
  EXPECT_EQ(r.clamped, 1);
  const oracle::Eig e = oracle::jacobi_eig(r.matrix.matrix());
  EXPECT_NEAR(e.values(0), 1e-6, 1e-15);
  EXPECT_NEAR(e.values(1), 2.0, 1e-14);
}

TEST(Clamp, SpdInputUnchanged) {
  Rng rng(3);
  const SpdMatrix s = gen_random_spd(8, 1e4, rng);
  const ClampResult r = clamp_to_spd_counted(s.symmetric());
  EXPECT_EQ(r.clamped, 0);
  EXPECT_LE((r.matrix.matrix() - s.matrix()).norm(), 1e-12 * s.frobenius());
}

TEST(Clamp, SmallPositiveEigenvaluesKept) {
  const SymmetricMatrix s = SymmetricMatrix::diagonal(Vector{{1e-9, 1.0}});
  const SpdMatrix c = clamp_to_spd(s);
  EXPECT_EQ(c(0, 0), 1e-9);
}

TEST(Clamp, NegativeEigenvaluesReplaced) {
  const SymmetricMatrix s = SymmetricMatrix::diagonal(Vector{{-0.5, 2.0}});
  const ClampResult r = clamp_to_spd_counted(s, 1e-8);
  EXPECT_EQ(r.clamped, 1);
  EXPECT_NEAR(r.matrix(0, 0), 1e-8, 1e-20);
  EXPECT_THROW(clamp_to_spd(s, 0.0), DomainError);
}

TEST(Clamp, ConstructedZeroModes) {
  Rng rng(4);
  const Index n = 9;
  const Matrix o = random_orthogonal(n, rng);
  Vector mu(n);
  for (Index k = 0; k < n; ++k) mu(k) = k < 3 ? 0.0 : 0.5 + static_cast<double>(k);
  const SymmetricMatrix s = SymmetricMatrix::from(Matrix(o * mu.asDiagonal() * o.transpose()));
  const ClampResult r = clamp_to_spd_counted(s);
  EXPECT_EQ(r.clamped, 3);
  const Vector out = oracle::jacobi_eig(r.matrix.matrix()).values;
  for (Index k = 0; k < 3; ++k) EXPECT_NEAR(out(k), 1e-6, 1e-12);
  EXPECT_GT(out(3), 1.0);
}

TEST(Clamp, MinimalChange) {
  prop::for_all(
      "clamp minimality", 305, 60,
      [](Rng& rng) {
        const Index n = prop::pick_dim(rng, {3, 8, 20});
        const Index t = 2 + static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
        return covariance(gen_synthetic_series(n, t, n, 0.1, rng));
      },
      [](const SymmetricMatrix& s) -> ::testing::AssertionResult {
        const ClampResult r = clamp_to_spd_counted(s);
        const double change = (r.matrix.matrix() - s.matrix()).norm();
        const double bound = 1e-6 * std::sqrt(static_cast<double>(r.clamped)) + 1e-10;
        if (r.matrix.min_eigenvalue() <= 0.0) {
          return ::testing::AssertionFailure() << "output not SPD";
        }
        return prop::within(change, bound, "clamp change");
      });
}

TEST(SpdnessReport, IdentityIsFullySpd) {
  const SpdnessReport r = spdness_report(SymmetricMatrix::identity(4), 100);
  EXPECT_EQ(r.positive_count, 4);
  EXPECT_DOUBLE_EQ(r.spdness_pct, 100.0);
  EXPECT_TRUE(r.is_spd);
  EXPECT_EQ(r.rank_bound, 4);
}

TEST(SpdnessReport, UnknownLengthUsesDimension) {
  const SpdnessReport r = spdness_report(SymmetricMatrix::diagonal(Vector{{1.0, 0.0, 1e-7}}));
  EXPECT_EQ(r.rank_bound, 3);
  EXPECT_EQ(r.positive_count, 1);
  EXPECT_NEAR(r.spdness_pct, 100.0 / 3.0, 1e-12);
  EXPECT_FALSE(r.is_spd);
}

TEST(SpdnessReport, ExcessRankIsAnInvariantViolation) {
  EXPECT_THROW(spdness_report(SymmetricMatrix::identity(3), 2), InvariantViolation);
}

TEST(SpdnessReport, ShortSeriesAtLargeDimension) {
  Rng rng(5);
  const SeriesMatrix x = gen_synthetic_series(360, 90, 360, 0.0, rng);
  const SpdnessReport r = spdness_report(correlation(x), 90);
  EXPECT_LE(r.spdness_pct, 100.0 * 89.0 / 360.0 + 1e-9);
  EXPECT_FALSE(r.is_spd);
}

TEST(SpdnessReport, LongSeriesIsUsuallySpd) {
  int full = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::derive(6, static_cast<std::uint64_t>(trial));
    const SeriesMatrix x = gen_synthetic_series(30, 60, 30, 0.1, rng);
    full += spdness_report(correlation(x), 60).is_spd ? 1 : 0;
  }
  EXPECT_GE(full, 19);
}

TEST(SpdnessReport, MeanRisesWithLength) {
  const Index n = 24;
  double short_mean = 0.0;
  double long_mean = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = Rng::derive(7, static_cast<std::uint64_t>(trial));
    const SeriesMatrix x = gen_synthetic_series(n, 2 * n, n, 0.1, rng);
    long_mean += spdness_report(correlation(x), 2 * n).spdness_pct;
    short_mean += spdness_report(correlation(truncate(x, n / 2)), n / 2).spdness_pct;
  }
  EXPECT_GT(long_mean / 50.0, short_mean / 50.0);
}

TEST(Downsample, BlockMeans) {
  const SeriesMatrix d = downsample_by_averaging(series({{1, 3, 5, 7}}), 2);
  EXPECT_EQ(d.values(), (Matrix{{2.0, 6.0}}));
  const SeriesMatrix same = downsample_by_averaging(series({{1, 3, 5, 7}}), 4);
  EXPECT_EQ(same.values(), (Matrix{{1, 3, 5, 7}}));
}

TEST(Downsample, MatchesBruteForce) {
  Rng rng(8);
  const SeriesMatrix x = gen_synthetic_series(4, 60, 2, 1.0, rng);
  for (Index target : {1, 5, 12, 30}) {
    const SeriesMatrix d = downsample_by_averaging(x, target);
    ASSERT_EQ(d.n_steps(), target);
    const Index block = 60 / target;
    for (Index i = 0; i < 4; ++i) {
      for (Index b = 0; b < target; ++b) {
        double acc = 0.0;
        for (Index k = 0; k < block; ++k) acc += x.values()(i, b * block + k);
        EXPECT_NEAR(d.values()(i, b), acc / static_cast<double>(block), 1e-13);
      }
    }
  }
}

TEST(Downsample, RejectsNonDivisor) {
  EXPECT_THROW(downsample_by_averaging(series({{1, 2, 3, 4}}), 3), DomainError);
  EXPECT_THROW(downsample_by_averaging(series({{1, 2, 3, 4}}), 0), DomainError);
}

TEST(Truncate, KeepsLeadingColumns) {
  EXPECT_EQ(truncate(series({{1, 2, 3, 4}}), 2).values(), (Matrix{{1, 2}}));
  EXPECT_EQ(truncate(series({{1, 2, 3, 4}}), 4).values(), (Matrix{{1, 2, 3, 4}}));
  EXPECT_THROW(truncate(series({{1, 2, 3, 4}}), 5), DomainError);
}

TEST(Truncate, CompositionTakesShorterLength) {
  Rng rng(9);
  const SeriesMatrix x = gen_synthetic_series(3, 20, 2, 0.1, rng);
  EXPECT_EQ(truncate(truncate(x, 12), 5).values(), truncate(x, 5).values());
}
