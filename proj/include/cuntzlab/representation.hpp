#ifndef CUNTZLAB_REPRESENTATION_HPP
#define CUNTZLAB_REPRESENTATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "group.hpp"

namespace cuntzlab {

inline constexpr std::size_t kDefaultGroupCap = 64;

/// Exact unitary representation g -> matrices[g].
struct UnitaryRep {
  GroupTable group;
  std::vector<ExactMatrix> matrices;

  std::size_t degree() const { return matrices.empty() ? 0 : matrices.front().rows(); }
  const ExactMatrix& operator()(std::size_t g) const { return matrices.at(g); }

  /// Identity at the identity element, M(g)M(h) = M(gh), each M(g) unitary.
  bool is_valid() const {
    if (matrices.size() != group.order()) return false;
    if (matrices[0] != ExactMatrix::identity(degree())) return false;
    for (std::size_t g = 0; g < group.order(); ++g) {
      if (!matrices[g].is_unitary()) return false;
      for (std::size_t h = 0; h < group.order(); ++h)
        if (matrices[g] * matrices[h] != matrices[group.mul(g, h)]) return false;
    }
    return true;
  }
};

/// Left regular representation: z_g e_h = e_{gh}, i.e. (z_g xi)(h) = xi(g^-1 h).
inline UnitaryRep regular_representation(const GroupTable& g) {
  UnitaryRep rep{g, {}};
  for (std::size_t a = 0; a < g.order(); ++a)
    rep.matrices.push_back(ExactMatrix::from_permutation(g.left_translation(a)));
  return rep;
}

struct GroupInvariants {
  std::size_t conjugacy_class_count = 0;
  std::size_t abelianization_order = 0;
  std::vector<std::size_t> irrep_dims;  // nondecreasing

  /// The three integer constraints tying the dimensions to the group.
  bool consistent_with(std::size_t group_order) const {
    std::size_t sq = 0, ones = 0;
    for (std::size_t t : irrep_dims) {
      sq += t * t;
      ones += t == 1;
    }
    return sq == group_order && ones == abelianization_order &&
           irrep_dims.size() == conjugacy_class_count &&
           std::is_sorted(irrep_dims.begin(), irrep_dims.end());
  }
};

struct IrrepOptions {
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t group_cap = kDefaultGroupCap;
  int max_retries = 8;
};

namespace detail {

// One attempt: cluster eigenvalues of a random Hermitian group-algebra
// element in the regular representation. Returns nullopt if ambiguous.
inline std::optional<std::vector<std::size_t>> irrep_attempt(const GroupTable& g,
                                                             std::mt19937_64& rng,
                                                             double tol) {
  const std::size_t n = g.order();
  std::vector<std::complex<double>> c(n);
  auto unif = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t ai = g.inv(a);
    if (ai < a) continue;
    if (ai == a) {
      c[a] = {unif(), 0.0};
    } else {
      c[a] = {unif(), unif()};
      c[ai] = std::conj(c[a]);
    }
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t x = 0; x < n; ++x)
      h(static_cast<Eigen::Index>(g.mul(a, x)), static_cast<Eigen::Index>(x)) += c[a];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::nullopt;
  const auto& ev = es.eigenvalues();

  // Gaps <= tol join a cluster; gaps in (tol, 1e4*tol) are ambiguous.
  std::vector<std::size_t> mult;
  std::size_t run = 1;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    double gap = ev(i) - ev(i - 1);
    if (gap <= tol) {
      ++run;
    } else if (gap < 1e4 * tol) {
      return std::nullopt;
    } else {
      mult.push_back(run);
      run = 1;
    }
  }
  mult.push_back(run);
  // An irrep of dimension t yields t clusters of multiplicity t.
  std::map<std::size_t, std::size_t> count;
  for (std::size_t m : mult) ++count[m];
  std::vector<std::size_t> dims;
  for (auto [t, k] : count) {
    if (k % t != 0) return std::nullopt;
    dims.insert(dims.end(), k / t, t);
  }
  return dims;
}

}  // namespace detail

/// Irreducible-representation dimensions by eigenvalue-multiplicity
/// clustering, cross-checked against class count and abelianization.
inline GroupInvariants irrep_dimensions(const GroupTable& g, const IrrepOptions& opt = {}) {
  if (g.order() > opt.group_cap)
    throw DomainError("group order " + std::to_string(g.order()) + " exceeds cap " +
                      std::to_string(opt.group_cap));
  const ClassData cd = group_invariants(g);
  GroupInvariants inv{cd.conjugacy_class_count, cd.abelianization_order, {}};
  std::mt19937_64 rng(opt.seed);
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    auto dims = detail::irrep_attempt(g, rng, opt.tol);
    if (!dims) continue;
    inv.irrep_dims = *dims;
    if (inv.consistent_with(g.order())) return inv;
  }
  throw Error("degenerate_sample",
              "degenerate sample: eigenvalue clusters ambiguous after " +
                  std::to_string(opt.max_retries + 1) + " attempts");
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_REPRESENTATION_HPP
