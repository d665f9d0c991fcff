#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cuntzlab/comparison.hpp"

using namespace cuntzlab;

namespace {

ExactMatrix diag(const std::vector<GaussianRational>& d) {
  ExactMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

GaussianRational determinant(ExactMatrix m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<GaussianRational>> a(n, std::vector<GaussianRational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  GaussianRational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return GaussianRational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = GaussianRational(-1) * det;
    }
    det = det * a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const GaussianRational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  return det;
}

// PSD by brute force: Hermitian and every principal minor >= 0.
bool psd_by_minors(const ExactMatrix& a) {
  if (!a.is_hermitian()) return false;
  const std::size_t n = a.rows();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    ExactMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub.set(i, j, a(idx[i], idx[j]));
    if (sgn(determinant(sub).re) < 0) return false;
  }
  return true;
}

// Smallest (n, M) by direct scan of the window conditions.
std::pair<std::size_t, Integer> scan_certificate(long nu, const Rational& eta, const Rational& lambda) {
  const StageLedger l = generate_stages(Integer(nu), eta * nu, 12);
  for (std::size_t n = 1; n <= 12; ++n) {
    const Integer r = l.r(n);
    if (!(Rational(1) / Rational(r) < eta - lambda)) continue;
    for (Integer M = 1; M <= nu * r; ++M) {
      const Rational f = Rational(M) / Rational(nu * r);
      if (lambda + Rational(1, nu) < f && f < eta + Rational(1, nu)) return {n, M};
    }
  }
  return {0, 0};
}

}  // namespace

TEST(PositiveSemidefinite, AgreesWithPrincipalMinors) {
  std::mt19937_64 rng(1);
  std::size_t positive = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<GaussianRational> e(n * n);
    for (auto& v : e) v = GaussianRational(Rational(static_cast<long>(rng() % 5) - 2), Rational(static_cast<long>(rng() % 3) - 1));
    const ExactMatrix b = ExactMatrix::from_entries(n, n, e);
    // Alternate between Gram matrices (PSD, often singular) and Hermitian parts.
    const ExactMatrix a = t % 2 ? b * b.adjoint() : b + b.adjoint();
    const bool want = psd_by_minors(a);
    EXPECT_EQ(is_positive_semidefinite(a), want) << t;
    positive += want;
  }
  EXPECT_GT(positive, 100u);
  EXPECT_FALSE(is_positive_semidefinite(ExactMatrix{{GaussianRational(0), GaussianRational(1)},
                                                    {GaussianRational(0), GaussianRational(0)}}));
}

TEST(CuntzFiniteDimensional, PreorderAndMonotonicity) {
  const RankVector a = RankVector::make({1, 2}, {3, 4}), b = RankVector::make({2, 2}, {3, 4}),
                   c = RankVector::make({2, 3}, {3, 4});
  EXPECT_TRUE(cuntz_leq_fd(a, a));
  EXPECT_TRUE(cuntz_leq_fd(a, b));
  EXPECT_TRUE(cuntz_leq_fd(b, c));
  EXPECT_TRUE(cuntz_leq_fd(a, c));
  EXPECT_FALSE(cuntz_leq_fd(c, a));
  EXPECT_FALSE(cuntz_leq_fd(RankVector::make({0, 3}, {3, 4}), RankVector::make({3, 2}, {3, 4})));
  EXPECT_TRUE(cuntz_leq_fd(direct_sum(a, a), direct_sum(b, c)));
  EXPECT_THROW(cuntz_leq_fd(a, RankVector::make({1}, {3})), DimensionError);
  EXPECT_THROW(RankVector::make({4}, {3}), DomainError);
}

TEST(CuntzFiniteDimensional, FromMatrices) {
  const ExactMatrix p = diag({1, 0, 0}), q = diag({2, 5, 0});
  EXPECT_EQ(RankVector::of(p), RankVector::make({1}, {3}));
  EXPECT_TRUE(cuntz_leq_fd(RankVector::of(p), RankVector::of(q)));
  EXPECT_FALSE(cuntz_leq_fd(RankVector::of(q), RankVector::of(p)));
  EXPECT_THROW(RankVector::of(diag({1, -1})), DomainError);
}

TEST(DimensionFunction, NormalizedRanks) {
  EXPECT_EQ(d_tau(ExactMatrix::identity(5)), 1);
  EXPECT_EQ(d_tau(bott_projection(SpherePoint::make(0, 0, 1), 2)), Rational(1, 2));
  EXPECT_EQ(d_tau(bott_projection(SpherePoint::make(0, 1, 0), 6)), Rational(1, 6));
  EXPECT_EQ(d_tau(RankVector::make({1, 3}, {2, 4}), {Rational(1, 3), Rational(2, 3)}), Rational(2, 3));
  EXPECT_THROW(d_tau(RankVector::make({1}, {2}), {Rational(1, 2)}), DomainError);
  EXPECT_THROW(d_tau(RankVector::make({1, 1}, {2, 2}), {Rational(3, 2), Rational(-1, 2)}), DomainError);
}

TEST(DimensionFunction, StageProjectionHasTraceOneOverNu) {
  const ConstructionPlan plan = build_construction(build_group("Z2"), Rational(1, 4), 2, 256, 3);
  std::mt19937_64 rng(3);
  const std::vector<StagePoint> targets{random_stage_point(1, plan.s_small(1), rng)};
  MatFunc p(0, 2);
  for (const auto& x : required_points(plan, 0, targets)) p.set(x, bott_projection(x.coords.at(0), 2));
  const ExactMatrix p1 = gamma_step(p, plan, targets).at(targets[0]);
  EXPECT_EQ(d_tau(p1), Rational(1, 2));
}

TEST(PointwiseRank, NecessaryConditionOnly) {
  EXPECT_STREQ(PointwiseRankVerdict::kLabel, "NECESSARY-ONLY");
  MatFunc a(0, 2), b(0, 2);
  const StagePoint x{0, {SpherePoint::make(0, 0, 1)}}, y{0, {SpherePoint::make(0, 0, -1)}};
  a.set(x, bott_projection(x.coords[0], 2));
  a.set(y, ExactMatrix(2, 2));
  b.set(x, ExactMatrix::identity(2));
  b.set(y, bott_projection(y.coords[0], 2));
  PointwiseRankVerdict v = pointwise_rank_necessary(a, b);
  EXPECT_EQ(v.points, 2u);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(pointwise_rank_necessary(b, a).holds);
}

TEST(RcTable, ZTwoQuarterValues) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 4);
  const RcTable t = rc_upper_table(l, irrep_dimensions(build_group("Z2")));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.eta, Rational(1, 4));
  EXPECT_EQ(t.rows[0].bound, Rational(3, 10));
  EXPECT_EQ(t.rows[1].bound, Rational(33, 130));
  EXPECT_EQ(t.rows[2].bound, Rational(4323, 17290));
  EXPECT_EQ(t.rows[0].gap, Rational(1, 20));
  EXPECT_EQ(t.rows[1].gap, Rational(1, 260));
  EXPECT_EQ(t.rows[2].gap, Rational(1, 34580));
  EXPECT_EQ(t.rows[0].dim_x, 6);
  EXPECT_EQ(t.rows[1].fiber, 130);
  EXPECT_TRUE(t.columns_coincide());
  EXPECT_TRUE(t.strictly_decreasing_above_eta());
  EXPECT_EQ(t.first_within(1e-6), std::optional<std::size_t>(4));
}

TEST(RcTable, StageOneClosedForm) {
  // bound(1) = d / (nu (d + nu)) with d = d(1).
  for (const auto& [family, eta] : std::vector<std::pair<const char*, Rational>>{
           {"Z2", Rational(1, 10)}, {"S3", Rational(1, 12)}, {"Q8", Rational(1, 16)}, {"D4", Rational(1, 9)}}) {
    const GroupTable g = build_group(family);
    const long nu = static_cast<long>(g.order());
    const StageLedger l = generate_stages(Integer(nu), eta * nu, 5);
    const RcTable t = rc_upper_table(l, irrep_dimensions(g));
    const Integer d = l.d(1);
    EXPECT_EQ(t.rows[0].bound, Rational(d) / Rational(Integer(nu) * (d + nu))) << family;
    EXPECT_TRUE(t.columns_coincide()) << family;
    EXPECT_TRUE(t.strictly_decreasing_above_eta()) << family;
    for (const auto& row : t.rows) EXPECT_EQ(row.bound, Rational(l.s(row.stage)) / Rational(Integer(nu) * l.r(row.stage)));
  }
}

TEST(RcTable, RejectsMismatchedGroup) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 2);
  EXPECT_THROW(rc_upper_table(l, irrep_dimensions(build_group("S3"))), DimensionError);
}

TEST(Certificate, ZTwoQuarterFifth) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 12);
  const ComparisonCertificate c = find_certificate(l, Rational(1, 4), Rational(1, 5), 10);
  EXPECT_EQ(c.n, 2u);
  EXPECT_EQ(c.r_n, 65);
  EXPECT_EQ(c.M, 92);
  EXPECT_EQ(c.M_max, 97);
  EXPECT_TRUE(c.valid());
  ASSERT_EQ(c.checks.size(), 10u);
  EXPECT_EQ(c.checks[0].m, 3u);
  EXPECT_EQ(c.checks[0].lhs, 12236);
  EXPECT_EQ(c.checks[0].rhs, 12968);
  EXPECT_EQ(c.assumption, kCertificateAssumption);
  const auto [n, M] = scan_certificate(2, Rational(1, 4), Rational(1, 5));
  EXPECT_EQ(n, c.n);
  EXPECT_EQ(M, c.M);
}

TEST(Certificate, ScanOracleAcrossConfigs) {
  struct Case {
    const char* family;
    Rational eta, lambda;
  };
  for (const auto& cs : std::vector<Case>{{"Z2", Rational(1, 4), Rational(0)},
                                          {"Z2", Rational(1, 10), Rational(1, 20)},
                                          {"S3", Rational(1, 12), Rational(1, 13)},
                                          {"Q8", Rational(1, 16), Rational(1, 32)},
                                          {"Z3", Rational(1, 4), Rational(1, 5)}}) {
    const long nu = static_cast<long>(build_group(cs.family).order());
    const std::size_t n0 = minimal_certificate_stage(Integer(nu), cs.eta, cs.lambda);
    const StageLedger l = generate_stages(Integer(nu), cs.eta * nu, n0 + 6);
    const ComparisonCertificate c = find_certificate(l, cs.eta, cs.lambda, 6);
    const auto [n, M] = scan_certificate(nu, cs.eta, cs.lambda);
    EXPECT_EQ(c.n, n) << cs.family;
    EXPECT_EQ(c.M, M) << cs.family;
    EXPECT_TRUE(c.valid()) << cs.family;
    std::vector<Integer> raw;
    for (std::size_t k = 1; k <= l.size(); ++k) raw.push_back(l.d(k));
    EXPECT_TRUE(revalidate_certificate(c, Integer(nu), raw)) << cs.family;
  }
}

TEST(Certificate, LambdaZero) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 6);
  const ComparisonCertificate c = find_certificate(l, Rational(1, 4), Rational(0), 5);
  EXPECT_EQ(c.n, 1u);
  EXPECT_EQ(c.M, 6);
  EXPECT_EQ(c.checks[0].lhs, 78);
  EXPECT_EQ(c.checks[0].rhs, 98);
}

TEST(Certificate, Preconditions) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 12);
  EXPECT_THROW(find_certificate(l, Rational(1, 4), Rational(1, 4), 10), DomainError);
  EXPECT_THROW(find_certificate(l, Rational(1, 4), Rational(1, 3), 10), DomainError);
  EXPECT_THROW(find_certificate(l, Rational(1, 4), Rational(-1, 10), 10), DomainError);
  EXPECT_THROW(find_certificate(l, Rational(1, 4), Rational(1, 5), 0), DomainError);
  EXPECT_THROW(find_certificate(l, Rational(1, 5), Rational(1, 10), 3), DomainError);
  const StageLedger short_l = generate_stages(Integer(2), Rational(1, 2), 5);
  try {
    find_certificate(short_l, Rational(1, 4), Rational(1, 5), 10);
    FAIL() << "expected a short-ledger error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("7 more required"), std::string::npos) << e.what();
  }
}

TEST(Certificate, TamperedCertificateFailsRevalidation) {
  const StageLedger l = generate_stages(Integer(2), Rational(1, 2), 12);
  const ComparisonCertificate c = find_certificate(l, Rational(1, 4), Rational(1, 5), 10);
  std::vector<Integer> raw;
  for (std::size_t k = 1; k <= 12; ++k) raw.push_back(l.d(k));
  EXPECT_TRUE(revalidate_certificate(c, Integer(2), raw));
  ComparisonCertificate bad = c;
  bad.M = 98;
  EXPECT_FALSE(revalidate_certificate(bad, Integer(2), raw));
  bad = c;
  bad.checks[3].lhs += 1;
  EXPECT_FALSE(revalidate_certificate(bad, Integer(2), raw));
  raw[1] += 1;
  EXPECT_FALSE(revalidate_certificate(c, Integer(2), raw));
}

TEST(ScalarApproximation, DiagonalExamples) {
  const ScalarApproximation a = scalar_approximation(diag({1, Rational(19, 20)}));
  EXPECT_NEAR(a.distance, 0.05, 1e-12);
  EXPECT_EQ(a.exact_spread_sq, std::optional<Rational>(Rational(1, 400)));
  EXPECT_NEAR(a.witness_commutator_norm, 0.05, 1e-12);
  const GaussianRational xi(Rational(3, 5), Rational(4, 5));
  const ScalarApproximation s = scalar_approximation(diag({xi, xi, xi}));
  EXPECT_EQ(s.distance, 0.0);
  EXPECT_NEAR(s.xi.real(), 0.6, 1e-15);
  EXPECT_THROW(scalar_approximation(diag({Rational(1, 2)})), DomainError);
  EXPECT_THROW(scalar_approximation(ExactMatrix{{GaussianRational(1), GaussianRational(1)},
                                                {GaussianRational(0), GaussianRational(1)}}),
               DomainError);
}

TEST(ScalarApproximation, UnitarilyConjugatedSpectrum) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  for (int t = 0; t < 20; ++t) {
    const double theta = 0.1 + 0.05 * t;
    Eigen::MatrixXcd g(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) g(i, j) = {N(rng), N(rng)};
    const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
    Eigen::VectorXcd d(3);
    d << 1.0, std::polar(1.0, theta), std::polar(1.0, theta / 2);
    const Eigen::MatrixXcd b = u * d.asDiagonal() * u.adjoint();
    const ScalarApproximation s = scalar_approximation(b);
    // Every eigenvalue is on the circle; the worst distance is between the extremes.
    double want = 0;
    for (const auto& e : s.eigenvalues) want = std::max(want, std::abs(e - s.xi));
    EXPECT_NEAR(s.distance, want, 1e-12);
    EXPECT_GE(s.distance + 1e-9, std::abs(1.0 - std::polar(1.0, theta)) / 2);
    EXPECT_LE(s.distance, std::abs(1.0 - std::polar(1.0, theta)) + 1e-9);
    EXPECT_NEAR(s.witness_commutator_norm, s.spread, 1e-8);
  }
}
