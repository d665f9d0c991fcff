#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <set>
#include <vector>

#include "cuntzlab/crossed_product.hpp"

using namespace cuntzlab;

namespace {

GroupRef group_ref(const char* family) { return std::make_shared<const GroupTable>(build_group(family)); }

// (sum a_g u_g)(sum b_h u_h) = sum a_g z_g b_h z_g* u_{gh}, written out densely.
CrossedElement dense_product(const CrossedElement& x, const CrossedElement& y, const InnerAction& act) {
  const GroupTable& G = *x.group;
  CrossedElement out = CrossedElement::zero(x.group, x.dim());
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t h = 0; h < G.order(); ++h)
      out.coeffs[G.mul(g, h)] += x.coeffs[g] * act.z(g) * y.coeffs[h] * act.z(g).adjoint();
  return out;
}

// Burnside count of orbits of G on index pairs (i, j) for a permutation action.
std::size_t pair_orbits(const InnerAction& act) {
  const std::size_t k = act.dim(), n = act.group()->order();
  std::size_t fixed = 0;
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t f = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (act.z(g)(i, i) == GaussianRational(1)) ++f;
    fixed += f * f;
  }
  return fixed / n;
}

ExactMatrix diag_z4_generator(int power) {
  // z = diag(1, i^power, (-1)^power): a non-permutation representation of Z4.
  const GaussianRational i_pow[4] = {GaussianRational(1), GaussianRational(Rational(0), Rational(1)),
                                     GaussianRational(-1), GaussianRational(Rational(0), Rational(-1))};
  ExactMatrix m(3, 3);
  m.set(0, 0, GaussianRational(1));
  m.set(1, 1, i_pow[power % 4]);
  m.set(2, 2, i_pow[(2 * power) % 4]);
  return m;
}

}  // namespace

TEST(InnerAction, RejectsNonHomomorphisms) {
  const GroupRef z2 = group_ref("Z2");
  const ExactMatrix x{{GaussianRational(0), GaussianRational(1)}, {GaussianRational(1), GaussianRational(0)}};
  EXPECT_NO_THROW(InnerAction(z2, {ExactMatrix::identity(2), x}));
  EXPECT_THROW(InnerAction(z2, {x, x}), DomainError);
  EXPECT_THROW(InnerAction(z2, {ExactMatrix::identity(2), GaussianRational(2) * ExactMatrix::identity(2)}),
               DomainError);
  const GroupRef z3 = group_ref("Z3");
  EXPECT_THROW(InnerAction(z3, {ExactMatrix::identity(2), x, x}), DomainError);
  EXPECT_THROW(InnerAction(z2, {ExactMatrix::identity(2), ExactMatrix::identity(3)}), DimensionError);
}

TEST(CrossedProduct, MultiplicationMatchesDenseFormula) {
  for (const char* family : {"Z2", "Z3", "S3"}) {
    const InnerAction act = InnerAction::regular(group_ref(family));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
      const CrossedElement x = random_crossed_element(act.group(), act.dim(), rng);
      const CrossedElement y = random_crossed_element(act.group(), act.dim(), rng);
      EXPECT_EQ(cp_mul(x, y, act), dense_product(x, y, act)) << family;
    }
  }
}

TEST(CrossedProduct, StarAlgebraIdentities) {
  const InnerAction act = InnerAction::regular(group_ref("S3"));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const CrossedElement x = random_crossed_element(act.group(), act.dim(), rng);
    const CrossedElement y = random_crossed_element(act.group(), act.dim(), rng);
    const CrossedElement z = random_crossed_element(act.group(), act.dim(), rng);
    EXPECT_EQ(cp_mul(cp_mul(x, y, act), z, act), cp_mul(x, cp_mul(y, z, act), act));
    EXPECT_EQ(cp_star(cp_star(x, act), act), x);
    EXPECT_EQ(cp_star(cp_mul(x, y, act), act), cp_mul(cp_star(y, act), cp_star(x, act), act));
    EXPECT_EQ(canonical_trace(cp_mul(x, y, act)), canonical_trace(cp_mul(y, x, act)));
    const GaussianRational pos = canonical_trace(cp_mul(cp_star(x, act), x, act));
    EXPECT_TRUE(pos.is_real());
    EXPECT_GT(pos.re, 0);
  }
}

TEST(CrossedProduct, StarOfMonomial) {
  // (a u_g)* = alpha_{g^-1}(a*) u_{g^-1}
  const InnerAction act = InnerAction::regular(group_ref("S3"));
  const GroupTable& G = *act.group();
  std::mt19937_64 rng(3);
  const CrossedElement r = random_crossed_element(act.group(), act.dim(), rng);
  for (std::size_t g = 0; g < G.order(); ++g) {
    const ExactMatrix& a = r.coeffs[g];
    const CrossedElement x = CrossedElement::monomial(act.group(), act.dim(), g, a);
    const ExactMatrix zi = act.z(G.inv(g));
    const CrossedElement want =
        CrossedElement::monomial(act.group(), act.dim(), G.inv(g), zi * a.adjoint() * zi.adjoint());
    EXPECT_EQ(cp_star(x, act), want);
  }
}

TEST(CrossedProduct, AveragingProjection) {
  for (const auto& [family, k] : std::vector<std::pair<const char*, std::size_t>>{{"Z2", 1}, {"S3", 2}, {"Q8", 1}}) {
    const GroupRef G = group_ref(family);
    std::vector<ExactMatrix> triv(G->order(), ExactMatrix::identity(k));
    const InnerAction act(G, triv);
    const CrossedElement p = averaging_projection(G, k);
    EXPECT_EQ(cp_mul(p, p, act), p) << family;
    EXPECT_EQ(cp_star(p, act), p) << family;
    EXPECT_EQ(canonical_trace(p), GaussianRational(Rational(1, static_cast<unsigned long>(G->order()))));
  }
}

TEST(CrossedProduct, PsiMapIsAUnitalStarHomomorphism) {
  const InnerAction act = InnerAction::regular(group_ref("D4"));
  std::mt19937_64 rng(4);
  const std::size_t k = act.dim();
  EXPECT_EQ(psi_map(CrossedElement::monomial(act.group(), k, 0, ExactMatrix::identity(k)), act),
            ExactMatrix::identity(k));
  for (int t = 0; t < 5; ++t) {
    const CrossedElement x = random_crossed_element(act.group(), k, rng);
    const CrossedElement y = random_crossed_element(act.group(), k, rng);
    EXPECT_EQ(psi_map(cp_mul(x, y, act), act), psi_map(x, act) * psi_map(y, act));
    EXPECT_EQ(psi_map(cp_star(x, act), act), psi_map(x, act).adjoint());
    EXPECT_EQ(psi_map(CrossedElement::monomial(act.group(), k, 0, x.coeffs[1]), act), x.coeffs[1]);
  }
  for (std::size_t g = 0; g < act.group()->order(); ++g)
    EXPECT_EQ(psi_map(CrossedElement::monomial(act.group(), k, g, ExactMatrix::identity(k)), act), act.z(g));
}

TEST(CrossedProduct, MatrixizationIsAFaithfulStarRepresentation) {
  const InnerAction act = InnerAction::regular(group_ref("S3"));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    const CrossedElement x = random_crossed_element(act.group(), act.dim(), rng);
    const CrossedElement y = random_crossed_element(act.group(), act.dim(), rng);
    EXPECT_EQ(matrixize(cp_mul(x, y, act), act), matrixize(x, act) * matrixize(y, act));
    EXPECT_EQ(matrixize(cp_star(x, act), act), matrixize(x, act).adjoint());
    EXPECT_FALSE(matrixize(x, act).is_zero());
    // psi is contractive up to card(G) on the C*-norm.
    EXPECT_LE(operator_norm(psi_map(x, act)), 6.0 * cp_norm(x, act) + 1e-9);
  }
  const CrossedElement one = CrossedElement::monomial(act.group(), 6, 0, ExactMatrix::identity(6));
  EXPECT_EQ(matrixize(one, act), ExactMatrix::identity(36));
  EXPECT_THROW(matrixize(one, act, 35), SizeError);
}

TEST(CrossedProduct, NonPermutationActionStillAssociative) {
  const GroupRef z4 = group_ref("Z4");
  std::vector<ExactMatrix> z;
  for (int p = 0; p < 4; ++p) z.push_back(diag_z4_generator(p));
  const InnerAction act(z4, z);
  std::mt19937_64 rng(6);
  const CrossedElement x = random_crossed_element(z4, 3, rng), y = random_crossed_element(z4, 3, rng),
                       w = random_crossed_element(z4, 3, rng);
  EXPECT_EQ(cp_mul(cp_mul(x, y, act), w, act), cp_mul(x, cp_mul(y, w, act), act));
  EXPECT_EQ(cp_mul(x, y, act), dense_product(x, y, act));
  // Commutant of diag(1, i, -1) is the diagonal.
  EXPECT_EQ(fixed_point_dimension(act), 3u);
  EXPECT_TRUE(crossed_identity_suite(act, 3, 1).passed());
}

TEST(FixedPoints, RegularActionHasDimensionNu) {
  for (const char* family : {"Z2", "Z3", "Z2xZ2", "S3", "D4", "Q8"}) {
    const InnerAction act = InnerAction::regular(group_ref(family));
    EXPECT_EQ(fixed_point_dimension(act), act.group()->order()) << family;
    EXPECT_EQ(fixed_point_dimension(act), pair_orbits(act)) << family;
  }
}

TEST(FixedPoints, StageOneMatchesOrbitCount) {
  const ConstructionPlan plan = build_construction(build_group("Z2"), Rational(1, 4), 1, 256, 1);
  const InnerAction act = InnerAction::stage(plan, 1);
  EXPECT_EQ(act.dim(), 10u);
  EXPECT_EQ(pair_orbits(act), 50u);
  EXPECT_EQ(fixed_point_dimension(act), 50u);
  EXPECT_THROW(fixed_point_dimension(act, 9), SizeError);
}

TEST(FixedPoints, TrivialGroupFixesEverything) {
  const GroupRef s1 = group_ref("S1");
  const InnerAction act(s1, {ExactMatrix::identity(4)});
  EXPECT_EQ(fixed_point_dimension(act), 16u);
}

TEST(CrossedProduct, Dimension) {
  EXPECT_EQ(crossed_product_dimension(build_group("S3"), 4), 96u);
  EXPECT_EQ(crossed_product_dimension(build_group("Z2"), 10), 200u);
}

TEST(CrossedProduct, IdentitySuitePasses) {
  for (const char* family : {"Z2", "Z3", "Z2xZ2", "S3", "Q8"}) {
    const CrossedIdentityReport rep = crossed_identity_suite(InnerAction::regular(group_ref(family)), 5, 7);
    EXPECT_TRUE(rep.passed()) << family;
    EXPECT_LE(rep.norm_ratio_max, static_cast<double>(build_group(family).order()) + 1e-9);
  }
}

TEST(CrossedProduct, MismatchedGroupsAreRejected) {
  const InnerAction act = InnerAction::regular(group_ref("Z2"));
  const CrossedElement x = CrossedElement::zero(group_ref("Z3"), 2);
  EXPECT_THROW(cp_mul(x, x, act), DimensionError);
  const CrossedElement y = CrossedElement::zero(group_ref("Z2"), 3);
  EXPECT_THROW(psi_map(y, act), DimensionError);
}
