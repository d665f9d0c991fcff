#ifndef CUNTZLAB_CROSSED_PRODUCT_HPP
#define CUNTZLAB_CROSSED_PRODUCT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "group.hpp"
#include "linear_system.hpp"
#include "spectral.hpp"
#include "stages.hpp"

namespace cuntzlab {

using GroupRef = std::shared_ptr<const GroupTable>;

/// Action of G on M_k by conjugation with an exact unitary representation.
class InnerAction {
 public:
  /// Validates that z is a unitary homomorphism; throws DomainError if not.
  InnerAction(GroupRef group, std::vector<ExactMatrix> z) : group_(std::move(group)), z_(std::move(z)) {
    if (z_.size() != group_->order())
      throw DomainError("need one implementing unitary per group element");
    const std::size_t k = z_.front().rows();
    for (const auto& m : z_)
      if (m.rows() != k || m.cols() != k) throw DimensionError("implementing unitaries differ in size");
    if (z_[0] != ExactMatrix::identity(k))
      throw DomainError("implementing family is not a homomorphism: z(1) != 1");
    for (std::size_t g = 0; g < z_.size(); ++g) {
      if (!z_[g].is_unitary())
        throw DomainError("implementing matrix for " + group_->label(g) + " is not unitary");
      for (std::size_t h = 0; h < z_.size(); ++h)
        if (z_[g] * z_[h] != z_[group_->mul(g, h)])
          throw DomainError("implementing family is not a homomorphism at (" + group_->label(g) +
                            ", " + group_->label(h) + ")");
    }
    for (const auto& m : z_) {
      zs_.push_back(m.adjoint());
      if (m.is_permutation()) {
        std::vector<std::size_t> im(k);
        for (std::size_t j = 0; j < k; ++j)
          for (std::size_t i = 0; i < k; ++i)
            if (!m.entry_is_zero(i, j)) im[j] = i;
        perms_.push_back(Permutation(std::move(im)));
      }
    }
    if (perms_.size() != z_.size()) perms_.clear();
  }

  /// Conjugation by the left regular representation on M_nu.
  static InnerAction regular(GroupRef group) {
    return InnerAction(group, regular_representation(*group).matrices);
  }

  /// The stage-n action alpha^(n) on the fiber M_{nu r(n)}.
  static InnerAction stage(const ConstructionPlan& plan, std::size_t n) {
    auto group = std::make_shared<const GroupTable>(plan.group);
    std::vector<ExactMatrix> z;
    for (std::size_t g = 0; g < plan.nu(); ++g)
      z.push_back(ExactMatrix::from_permutation(stage_unitary(plan, g, n)));
    return InnerAction(group, std::move(z));
  }

  const GroupRef& group() const noexcept { return group_; }
  std::size_t dim() const { return z_.front().rows(); }
  const ExactMatrix& z(std::size_t g) const { return z_.at(g); }

  ExactMatrix alpha(std::size_t g, const ExactMatrix& a) const {
    if (!perms_.empty()) return a.conjugated_by(perms_[g]);
    return z_[g] * a * zs_[g];
  }

 private:
  GroupRef group_;
  std::vector<ExactMatrix> z_, zs_;
  std::vector<Permutation> perms_;
};

/// Formal sum sum_g a_g u_g with k x k coefficients.
struct CrossedElement {
  GroupRef group;
  std::vector<ExactMatrix> coeffs;  // indexed by group element

  static CrossedElement zero(GroupRef g, std::size_t k) {
    std::vector<ExactMatrix> c(g->order(), ExactMatrix(k, k));
    return {std::move(g), std::move(c)};
  }

  /// a u_g.
  static CrossedElement monomial(GroupRef g, std::size_t k, std::size_t elem, ExactMatrix a) {
    CrossedElement x = zero(std::move(g), k);
    x.coeffs.at(elem) = std::move(a);
    return x;
  }

  std::size_t dim() const { return coeffs.front().rows(); }

  /// Coefficient extraction E_g.
  const ExactMatrix& coefficient(std::size_t g) const { return coeffs.at(g); }

  friend bool operator==(const CrossedElement& x, const CrossedElement& y) {
    return x.coeffs == y.coeffs;
  }
  friend CrossedElement operator+(CrossedElement x, const CrossedElement& y) {
    for (std::size_t g = 0; g < x.coeffs.size(); ++g) x.coeffs[g] += y.coeffs.at(g);
    return x;
  }
  friend CrossedElement operator-(CrossedElement x, const CrossedElement& y) {
    for (std::size_t g = 0; g < x.coeffs.size(); ++g) x.coeffs[g] -= y.coeffs.at(g);
    return x;
  }
};

namespace detail {

inline void require_compatible(const CrossedElement& x, const InnerAction& act) {
  if (x.group->order() != act.group()->order() || !(*x.group == *act.group()))
    throw DimensionError("crossed element and action use different groups");
  if (x.coeffs.size() != x.group->order()) throw DimensionError("coefficient count mismatch");
  for (const auto& c : x.coeffs)
    if (c.rows() != act.dim() || c.cols() != act.dim())
      throw DimensionError("coefficient size does not match the action");
}

}  // namespace detail

/// (a u_g)(b u_h) = a alpha_g(b) u_{gh}, extended bilinearly.
inline CrossedElement cp_mul(const CrossedElement& x, const CrossedElement& y, const InnerAction& act) {
  detail::require_compatible(x, act);
  detail::require_compatible(y, act);
  const GroupTable& G = *x.group;
  CrossedElement out = CrossedElement::zero(x.group, act.dim());
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (x.coeffs[g].is_zero()) continue;
    for (std::size_t h = 0; h < G.order(); ++h) {
      if (y.coeffs[h].is_zero()) continue;
      out.coeffs[G.mul(g, h)] += x.coeffs[g] * act.alpha(g, y.coeffs[h]);
    }
  }
  return out;
}

/// (a u_g)* = alpha_{g^-1}(a*) u_{g^-1}.
inline CrossedElement cp_star(const CrossedElement& x, const InnerAction& act) {
  detail::require_compatible(x, act);
  const GroupTable& G = *x.group;
  CrossedElement out = CrossedElement::zero(x.group, act.dim());
  for (std::size_t g = 0; g < G.order(); ++g)
    out.coeffs[G.inv(g)] = act.alpha(G.inv(g), x.coeffs[g].adjoint());
  return out;
}

/// tau(sum a_g u_g) = tr(a_1) / k.
inline GaussianRational canonical_trace(const CrossedElement& x) {
  GaussianRational t = x.coeffs.at(0).trace();
  const Rational k(static_cast<unsigned long>(x.dim()));
  return {t.re / k, t.im / k};
}

/// (1/card G) sum_g 1 u_g.
inline CrossedElement averaging_projection(GroupRef group, std::size_t k) {
  const Rational c(1, static_cast<unsigned long>(group->order()));
  const ExactMatrix v = GaussianRational(c) * ExactMatrix::identity(k);
  std::vector<ExactMatrix> coeffs(group->order(), v);
  return {std::move(group), std::move(coeffs)};
}

/// sum a_g u_g -> sum a_g z_g. Exactly a unital *-homomorphism when the
/// action is implemented by a true representation.
inline ExactMatrix psi_map(const CrossedElement& x, const InnerAction& act) {
  detail::require_compatible(x, act);
  ExactMatrix out(act.dim(), act.dim());
  for (std::size_t g = 0; g < x.coeffs.size(); ++g)
    if (!x.coeffs[g].is_zero()) out += x.coeffs[g] * act.z(g);
  return out;
}

/// Regular representation on l^2(G) (x) C^k: block (h, g^-1 h) of
/// a u_g is alpha_{h^-1}(a). Faithful, so its norm is the C*-norm.
inline ExactMatrix matrixize(const CrossedElement& x, const InnerAction& act,
                             std::size_t cap = kDefaultMatrixCap) {
  detail::require_compatible(x, act);
  const GroupTable& G = *x.group;
  const std::size_t k = act.dim(), n = G.order();
  if (n * k > cap) throw SizeError(n * k, n * k, cap);
  std::vector<std::vector<std::optional<ExactMatrix>>> blocks(n, std::vector<std::optional<ExactMatrix>>(n));
  for (std::size_t g = 0; g < n; ++g) {
    if (x.coeffs[g].is_zero()) continue;
    for (std::size_t h = 0; h < n; ++h) {
      ExactMatrix b = act.alpha(G.inv(h), x.coeffs[g]);
      auto& slot = blocks[h][G.mul(G.inv(g), h)];
      if (slot) *slot += b;
      else slot = std::move(b);
    }
  }
  std::vector<GaussianRational> flat(n * k * n * k);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t c = 0; c < n; ++c) {
      if (!blocks[h][c]) continue;
      const ExactMatrix& b = *blocks[h][c];
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (!b.entry_is_zero(i, j)) flat[(h * k + i) * n * k + c * k + j] = b(i, j);
    }
  return ExactMatrix::from_entries(n * k, n * k, flat);
}

inline double cp_norm(const CrossedElement& x, const InnerAction& act) {
  return operator_norm(matrixize(x, act));
}

inline constexpr std::size_t kDefaultFixedPointCap = 256;

/// Complex dimension of {a in M_k : z_g a z_g* = a for all g}, by exact
/// sparse elimination of the commutation system z_g a - a z_g = 0.
inline std::size_t fixed_point_dimension(const InnerAction& act,
                                         std::size_t cap = kDefaultFixedPointCap) {
  const std::size_t k = act.dim();
  if (k > cap) throw SizeError(k, k, cap);
  SparseEchelon ech;
  for (std::size_t g = 1; g < act.group()->order(); ++g) {
    const ExactMatrix& z = act.z(g);
    // Column-wise nonzeros of z for the a z term.
    std::vector<std::vector<std::size_t>> col_nz(k), row_nz(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (!z.entry_is_zero(i, j)) {
          row_nz[i].push_back(j);
          col_nz[j].push_back(i);
        }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        std::map<std::size_t, std::pair<Integer, Integer>> acc;
        for (std::size_t l : row_nz[i]) {  // (z a)_ij = sum_l z_il a_lj
          auto& e = acc[l * k + j];
          e.first += z.num_re(i, l);
          e.second += z.num_im(i, l);
        }
        for (std::size_t l : col_nz[j]) {  // (a z)_ij = sum_l a_il z_lj
          auto& e = acc[i * k + l];
          e.first -= z.num_re(l, j);
          e.second -= z.num_im(l, j);
        }
        SparseRow row;
        for (auto& [col, v] : acc)
          if (sgn(v.first) != 0 || sgn(v.second) != 0) row.push_back({col, v.first, v.second});
        if (!row.empty()) ech.insert(std::move(row));
      }
  }
  return k * k - ech.rank();
}

/// card(G) * k^2, the dimension of the crossed product of M_k by G.
inline std::size_t crossed_product_dimension(const GroupTable& g, std::size_t k) {
  return g.order() * k * k;
}

/// Random element with Gaussian-integer coefficients in [-range, range].
inline CrossedElement random_crossed_element(GroupRef group, std::size_t k, std::mt19937_64& rng,
                                             long range = 2) {
  CrossedElement x = CrossedElement::zero(group, k);
  const auto span = static_cast<std::uint64_t>(2 * range + 1);
  for (auto& c : x.coeffs) {
    std::vector<GaussianRational> e(k * k);
    for (auto& v : e)
      v = GaussianRational(Rational(static_cast<long>(rng() % span) - range),
                           Rational(static_cast<long>(rng() % span) - range));
    c = ExactMatrix::from_entries(k, k, e);
  }
  return x;
}

/// Counts of failed exact identities over random samples, for the action
/// `act`. Every count must be zero; norm_ratio_max is floating point.
struct CrossedIdentityReport {
  std::size_t samples = 0;
  std::size_t associativity_failures = 0;   // (xy)z == x(yz)
  std::size_t involution_failures = 0;      // x** == x, (xy)* == y* x*
  std::size_t trace_failures = 0;           // tau(xy) == tau(yx), tau(x* x) real >= 0
  std::size_t psi_failures = 0;             // psi(xy) == psi(x) psi(y), psi(x*) == psi(x)*
  std::size_t norm_bound_failures = 0;      // ||psi(x)|| <= card(G) ||x|| + tol
  double norm_ratio_max = 0.0;              // max ||psi(x)|| / ||x||
  bool unit_ok = true;                      // tau(1) = 1, psi(1) = 1, 1 x = x
  bool averaging_ok = true;                 // p^2 = p = p*
  Rational averaging_trace;                 // tau(p), expected 1/card(G)
  bool psi_on_coefficients_ok = true;       // psi(a u_1) = a, psi(u_g) = z_g

  bool passed() const {
    return associativity_failures == 0 && involution_failures == 0 && trace_failures == 0 &&
           psi_failures == 0 && norm_bound_failures == 0 && unit_ok && averaging_ok &&
           psi_on_coefficients_ok;
  }
};

inline CrossedIdentityReport crossed_identity_suite(const InnerAction& act, std::size_t samples,
                                                    std::uint64_t seed, double norm_tol = 1e-9) {
  const GroupRef& G = act.group();
  const std::size_t k = act.dim(), n = G->order();
  CrossedIdentityReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);

  const CrossedElement one = CrossedElement::monomial(G, k, 0, ExactMatrix::identity(k));
  const CrossedElement p = averaging_projection(G, k);
  const CrossedElement pp = cp_mul(p, p, act);
  rep.averaging_ok = pp == p && cp_star(p, act) == p;
  const GaussianRational tp = canonical_trace(p);
  rep.averaging_trace = tp.re;
  if (!tp.is_real() || tp.re != Rational(1, static_cast<unsigned long>(n))) rep.averaging_ok = false;
  rep.unit_ok = canonical_trace(one) == GaussianRational(1) && psi_map(one, act) == ExactMatrix::identity(k);
  for (std::size_t g = 0; g < n; ++g)
    if (psi_map(CrossedElement::monomial(G, k, g, ExactMatrix::identity(k)), act) != act.z(g))
      rep.psi_on_coefficients_ok = false;

  for (std::size_t t = 0; t < samples; ++t) {
    const CrossedElement x = random_crossed_element(G, k, rng);
    const CrossedElement y = random_crossed_element(G, k, rng);
    const CrossedElement z = random_crossed_element(G, k, rng);
    if (!(cp_mul(one, x, act) == x) || !(cp_mul(x, one, act) == x)) rep.unit_ok = false;
    const CrossedElement xy = cp_mul(x, y, act);
    if (!(cp_mul(xy, z, act) == cp_mul(x, cp_mul(y, z, act), act))) ++rep.associativity_failures;
    const CrossedElement xs = cp_star(x, act), ys = cp_star(y, act);
    if (!(cp_star(xs, act) == x) || !(cp_star(xy, act) == cp_mul(ys, xs, act))) ++rep.involution_failures;
    const GaussianRational txx = canonical_trace(cp_mul(xs, x, act));
    if (!(canonical_trace(xy) == canonical_trace(cp_mul(y, x, act))) || !txx.is_real() || sgn(txx.re) < 0)
      ++rep.trace_failures;
    const ExactMatrix px = psi_map(x, act), py = psi_map(y, act);
    if (psi_map(xy, act) != px * py || psi_map(xs, act) != px.adjoint()) ++rep.psi_failures;
    const CrossedElement a1 = CrossedElement::monomial(G, k, 0, x.coeffs[0]);
    if (psi_map(a1, act) != x.coeffs[0]) rep.psi_on_coefficients_ok = false;
    const double nx = cp_norm(x, act), npx = operator_norm(px);
    if (nx > 0) rep.norm_ratio_max = std::max(rep.norm_ratio_max, npx / nx);
    if (npx > static_cast<double>(n) * nx + norm_tol) ++rep.norm_bound_failures;
  }
  return rep;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_CROSSED_PRODUCT_HPP
