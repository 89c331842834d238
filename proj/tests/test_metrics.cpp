#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "property.hpp"
#include "spdmix/error.hpp"
#include "spdmix/metrics.hpp"

using namespace spdmix;

namespace {

SpdMatrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<Index>(values.size()));
  Index k = 0;
  for (double v : values) d(k++) = v;
  return SpdMatrix::diagonal(d);
}

}  // namespace

TEST(Metric, NamesRoundTrip) {
  for (MetricKind m : kAllMetrics) {
    ASSERT_TRUE(parse_metric(to_string(m)).has_value());
    EXPECT_EQ(*parse_metric(to_string(m)), m);
  }
  EXPECT_FALSE(parse_metric("riemann").has_value());
}

TEST(MixRatio, RejectsOutsideUnitInterval) {
  EXPECT_THROW(MixRatio(-0.1), DomainError);
  EXPECT_THROW(MixRatio(1.5), DomainError);
  EXPECT_THROW(MixRatio(std::nan("")), DomainError);
  EXPECT_DOUBLE_EQ(MixRatio(0.25).complement(), 0.75);
}

TEST(Geodesic, IdenticalEndpointsAreFixed) {
  Rng rng(2);
  const SpdMatrix s = gen_random_spd(5, 50.0, rng);
  for (MetricKind m : kAllMetrics) {
    for (double l : {0.0, 0.3, 1.0}) {
      EXPECT_LE(oracle::rel_fro(geodesic(s, s, MixRatio(l), m).matrix(), s.matrix()), 1e-10)
          << to_string(m) << " lambda=" << l;
    }
  }
}

TEST(Geodesic, CommutingLogEuclidean) {
  const SpdMatrix g = geodesic(diag({1, 4}), diag({4, 1}), MixRatio(0.5), MetricKind::kLogEuclidean);
  EXPECT_LE((g.matrix() - diag({2, 2}).matrix()).norm(), 1e-12);
}

TEST(Geodesic, CommutingEuclidean) {
  const SpdMatrix g = geodesic(diag({1, 4}), diag({4, 1}), MixRatio(0.5), MetricKind::kEuclidean);
  EXPECT_LE((g.matrix() - diag({2.5, 2.5}).matrix()).norm(), 1e-15);
}

TEST(Geodesic, CommutingAffineInvariantIsScalarGeodesic) {
  const SpdMatrix a = diag({1, 9, 0.5});
  const SpdMatrix b = diag({4, 1, 2});
  const double l = 0.3;
  const SpdMatrix g = geodesic(a, b, MixRatio(l), MetricKind::kAffineInvariant);
  for (Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(g(k, k), std::pow(a(k, k), 1 - l) * std::pow(b(k, k), l), 1e-12);
  }
}

TEST(Geodesic, CommutingBuresWasserstein) {
  const SpdMatrix a = diag({1, 9, 0.5});
  const SpdMatrix b = diag({4, 1, 2});
  for (double l : {0.2, 0.5, 0.9}) {
    const SpdMatrix g = geodesic(a, b, MixRatio(l), MetricKind::kBuresWasserstein);
    for (Index k = 0; k < 3; ++k) {
      const double root = (1 - l) * std::sqrt(a(k, k)) + l * std::sqrt(b(k, k));
      EXPECT_NEAR(g(k, k), root * root, 1e-12);
    }
    EXPECT_LE((g.matrix() - Matrix(g.matrix().diagonal().asDiagonal())).norm(), 1e-12);
  }
}

TEST(Geodesic, CommutingCholesky) {
  const SpdMatrix a = diag({1, 9});
  const SpdMatrix b = diag({4, 1});
  const SpdMatrix g = geodesic(a, b, MixRatio(0.5), MetricKind::kCholesky);
  EXPECT_NEAR(g(0, 0), 2.25, 1e-14);
  EXPECT_NEAR(g(1, 1), 4.0, 1e-14);
}

TEST(Geodesic, LogEuclideanMatchesOracle) {
  Rng rng(4);
  for (int k = 0; k < 5; ++k) {
    const SpdMatrix a = gen_random_spd(6, 100.0, rng);
    const SpdMatrix b = gen_random_spd(6, 100.0, rng);
    const double l = rng.uniform();
    const Matrix ref = oracle::expm_taylor((1 - l) * oracle::log_spd(a.matrix()) +
                                           l * oracle::log_spd(b.matrix()));
    EXPECT_LE(oracle::rel_fro(geodesic(a, b, MixRatio(l), MetricKind::kLogEuclidean).matrix(), ref),
              1e-10);
  }
}

TEST(Geodesic, AffineInvariantMatchesOracle) {
  Rng rng(6);
  const SpdMatrix a = gen_random_spd(5, 50.0, rng);
  const SpdMatrix b = gen_random_spd(5, 50.0, rng);
  const double l = 0.37;
  const Matrix half = oracle::sqrt_db(a.matrix());
  const Matrix inv_half = half.inverse();
  const Matrix inner = inv_half * b.matrix() * inv_half;
  const Matrix ref = half * oracle::apply(inner, [&](double x) { return std::pow(x, l); }) * half;
  EXPECT_LE(
      oracle::rel_fro(geodesic(a, b, MixRatio(l), MetricKind::kAffineInvariant).matrix(), ref),
      1e-10);
}

TEST(Geodesic, DimensionMismatch) {
  EXPECT_THROW(geodesic(SpdMatrix::identity(2), SpdMatrix::identity(3), MixRatio(0.5),
                        MetricKind::kLogEuclidean),
               DimensionError);
}

TEST(Geodesic, EndpointProperty) {
  prop::for_all(
      "geodesic endpoints", 11, 60,
      [](Rng& rng) { return prop::spd_pair(rng, {2, 3, 8, 20}); },
      [](const prop::SpdPair& p) -> ::testing::AssertionResult {
        for (MetricKind m : kAllMetrics) {
          const double e0 = oracle::rel_fro(geodesic(p.a, p.b, MixRatio(0.0), m).matrix(), p.a.matrix());
          const double e1 = oracle::rel_fro(geodesic(p.a, p.b, MixRatio(1.0), m).matrix(), p.b.matrix());
          if (e0 > 1e-8 || e1 > 1e-8) {
            return ::testing::AssertionFailure()
                   << to_string(m) << " endpoint errors " << e0 << ", " << e1;
          }
        }
        return ::testing::AssertionSuccess();
      });
}

TEST(Geodesic, ReversalSymmetryProperty) {
  prop::for_all(
      "geodesic reversal", 12, 60,
      [](Rng& rng) { return prop::spd_pair(rng, {2, 3, 8, 20}); },
      [](const prop::SpdPair& p) -> ::testing::AssertionResult {
        for (MetricKind m : kAllMetrics) {
          const Matrix fwd = geodesic(p.a, p.b, MixRatio(p.lambda), m).matrix();
          const Matrix rev = geodesic(p.b, p.a, MixRatio(1.0 - p.lambda), m).matrix();
          const double e = oracle::rel_fro(fwd, rev);
          if (e > 1e-8) return ::testing::AssertionFailure() << to_string(m) << " error " << e;
        }
        return ::testing::AssertionSuccess();
      });
}

TEST(Geodesic, OutputsAreSpdProperty) {
  prop::for_all(
      "geodesic SPD closure", 13, 60,
      [](Rng& rng) { return prop::spd_pair(rng, {2, 8, 20}, 1e4); },
      [](const prop::SpdPair& p) -> ::testing::AssertionResult {
        for (MetricKind m : kAllMetrics) {
          const SpdMatrix g = geodesic(p.a, p.b, MixRatio(p.lambda), m);
          if (!(oracle::jacobi_eig(g.matrix()).values(0) > 0.0)) {
            return ::testing::AssertionFailure() << to_string(m) << " lost definiteness";
          }
        }
        return ::testing::AssertionSuccess();
      });
}

TEST(BuresCrossSqrt, IdentityAndSelf) {
  Rng rng(9);
  const SpdMatrix s = gen_random_spd(6, 30.0, rng);
  EXPECT_LE(oracle::rel_fro(bures_cross_sqrt(SpdMatrix::identity(6), s),
                            oracle::sqrt_db(s.matrix())),
            1e-10);
  EXPECT_LE(oracle::rel_fro(bures_cross_sqrt(s, s), s.matrix()), 1e-10);
}

TEST(BuresCrossSqrt, SquaresBackToProduct) {
  Rng rng(10);
  for (int k = 0; k < 10; ++k) {
    const SpdMatrix a = gen_random_spd(8, 100.0, rng);
    const SpdMatrix b = gen_random_spd(8, 100.0, rng);
    const Matrix c = bures_cross_sqrt(a, b);
    EXPECT_LE(oracle::rel_fro(c * c, a.matrix() * b.matrix()), 1e-7);
  }
}

TEST(BuresCrossSqrt, CountsNearSingularWarnings) {
  Vector d(3);
  d << 1e-12, 1.0, 2.0;
  int warnings = 0;
  bures_cross_sqrt(SpdMatrix::diagonal(d), SpdMatrix::identity(3), &warnings);
  EXPECT_GT(warnings, 0);
  const GeodesicResult r = geodesic_with_diagnostics(SpdMatrix::diagonal(d), SpdMatrix::identity(3),
                                                     MixRatio(0.5), MetricKind::kAffineInvariant);
  EXPECT_GT(r.stability_warnings, 0);
}

TEST(LogEuclideanDistance, Basics) {
  Rng rng(12);
  const SpdMatrix s = gen_random_spd(4, 10.0, rng);
  EXPECT_EQ(log_euclidean_distance(s, s), 0.0);
  EXPECT_NEAR(log_euclidean_distance(SpdMatrix::identity(2),
                                     diag({std::numbers::e, std::numbers::e})),
              std::sqrt(2.0), 1e-14);
  EXPECT_THROW(log_euclidean_distance(SpdMatrix::identity(2), SpdMatrix::identity(3)),
               DimensionError);
}

TEST(LogEuclideanDistance, MetricAxiomsProperty) {
  struct Triple {
    SpdMatrix a, b, c;
  };
  prop::for_all(
      "distance axioms", 14, 60,
      [](Rng& rng) {
        const Index n = prop::pick_dim(rng, {2, 5, 10});
        return Triple{prop::spd(rng, n), prop::spd(rng, n), prop::spd(rng, n)};
      },
      [](const Triple& t) -> ::testing::AssertionResult {
        const double ab = log_euclidean_distance(t.a, t.b);
        const double ba = log_euclidean_distance(t.b, t.a);
        const double bc = log_euclidean_distance(t.b, t.c);
        const double ac = log_euclidean_distance(t.a, t.c);
        const double ref = (oracle::log_spd(t.a.matrix()) - oracle::log_spd(t.b.matrix())).norm();
        if (std::abs(ab - ba) > 1e-12) return ::testing::AssertionFailure() << "asymmetric";
        if (std::abs(ab - ref) > 1e-9 * std::max(1.0, ref)) {
          return ::testing::AssertionFailure() << "oracle mismatch " << ab << " vs " << ref;
        }
        return prop::within(ac - (ab + bc), 1e-9, "triangle excess");
      });
}

TEST(Swelling, ScalarDeterminantsMidpoint) {
  const SpdMatrix a = diag({5.40});
  const SpdMatrix b = diag({6.46});
  const SwellingReport r = swelling_check(a, b, MixRatio(0.5), MetricKind::kLogEuclidean);
  EXPECT_NEAR(std::exp(r.log_det_mix), std::sqrt(5.40 * 6.46), 1e-12);
  EXPECT_NEAR(std::exp(r.log_det_mix), 5.906, 1e-3);
  EXPECT_TRUE(r.within_bounds);
  EXPECT_FALSE(r.exceeds_max);
}

TEST(Swelling, EqualEndpointsAreWithinBounds) {
  Rng rng(15);
  const SpdMatrix s = gen_random_spd(4, 20.0, rng);
  for (MetricKind m : kAllMetrics) {
    const SwellingReport r = swelling_check(s, s, MixRatio(0.4), m);
    EXPECT_TRUE(r.within_bounds) << to_string(m);
    EXPECT_NEAR(r.log_det_mix, r.log_det_i, 1e-10);
  }
}

TEST(Swelling, EuclideanExhibitsInflation) {
  Rng rng(16);
  int exceed = 0;
  for (int k = 0; k < 1000 && exceed == 0; ++k) {
    const SpdMatrix a = gen_random_spd(2, 20.0, rng);
    const SpdMatrix b = SpdMatrix::from_spectrum(random_orthogonal(2, rng),
                                                 eig_sym(a.symmetric()).eigenvalues);
    exceed += swelling_check(a, b, MixRatio(0.5), MetricKind::kEuclidean).exceeds_max ? 1 : 0;
  }
  EXPECT_GE(exceed, 1);
}

TEST(Swelling, DeterminantIdentityProperty) {
  prop::for_all(
      "log det geodesic identity", 17, 80,
      [](Rng& rng) { return prop::spd_pair(rng, {2, 8, 50}, 1e4); },
      [](const prop::SpdPair& p) -> ::testing::AssertionResult {
        for (MetricKind m : {MetricKind::kLogEuclidean, MetricKind::kAffineInvariant}) {
          const SwellingReport r = swelling_check(p.a, p.b, MixRatio(p.lambda), m);
          const double expect = (1 - p.lambda) * r.log_det_i + p.lambda * r.log_det_j;
          if (std::abs(r.log_det_mix - expect) > 1e-8 * (1 + std::abs(expect))) {
            return ::testing::AssertionFailure()
                   << to_string(m) << " log det " << r.log_det_mix << " vs " << expect;
          }
          if (!r.within_bounds) return ::testing::AssertionFailure() << to_string(m) << " swelled";
        }
        const double le = swelling_check(p.a, p.b, MixRatio(p.lambda), MetricKind::kLogEuclidean).log_det_mix;
        const double eu = swelling_check(p.a, p.b, MixRatio(p.lambda), MetricKind::kEuclidean).log_det_mix;
        return prop::within(le - eu, 1e-9, "log det LE - log det Euclidean");
      });
}

TEST(OperatorConcavity, LogOfMeanDominatesMeanOfLogsProperty) {
  prop::for_all(
      "operator concavity of log", 18, 80,
      [](Rng& rng) { return prop::spd_pair(rng, {2, 8, 30}, 1e3); },
      [](const prop::SpdPair& p) {
        const double l = p.lambda;
        const Matrix gap = matrix_log(geodesic(p.a, p.b, MixRatio(l), MetricKind::kEuclidean)).matrix() -
                           ((1 - l) * matrix_log(p.a).matrix() + l * matrix_log(p.b).matrix());
        return prop::within(-oracle::jacobi_eig(gap).values(0), 1e-9, "-min eig of gap");
      });
}
