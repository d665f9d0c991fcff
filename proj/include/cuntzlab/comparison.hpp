#ifndef CUNTZLAB_COMPARISON_HPP
#define CUNTZLAB_COMPARISON_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "rational.hpp"
#include "representation.hpp"
#include "sequence.hpp"
#include "spectral.hpp"
#include "stages.hpp"

namespace cuntzlab {

/// Exact positive-semidefiniteness of a Hermitian matrix by symmetric
/// elimination with diagonal pivoting.
inline bool is_positive_semidefinite(const ExactMatrix& a) {
  if (!a.is_hermitian()) return false;
  const std::size_t n = a.rows();
  std::vector<GaussianRational> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;
  while (!live.empty()) {
    std::optional<std::size_t> piv;
    for (std::size_t t = 0; t < live.size(); ++t) {
      const Rational& d = m[live[t] * n + live[t]].re;
      if (sgn(d) < 0) return false;
      if (sgn(d) > 0 && !piv) piv = t;
    }
    if (!piv) {
      // Zero diagonal: a PSD remainder must vanish entirely.
      for (std::size_t i : live)
        for (std::size_t j : live)
          if (!m[i * n + j].is_zero()) return false;
      return true;
    }
    const std::size_t p = live[*piv];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(*piv));
    const Rational pd = m[p * n + p].re;
    for (std::size_t i : live) {
      if (m[i * n + p].is_zero()) continue;
      const GaussianRational f = m[i * n + p] / GaussianRational(pd);
      for (std::size_t j : live) m[i * n + j] = m[i * n + j] - f * m[p * n + j];
    }
  }
  return true;
}

/// Ranks of a positive element of a direct sum of matrix blocks.
struct RankVector {
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> block_sizes;

  static RankVector make(std::vector<std::size_t> ranks, std::vector<std::size_t> sizes) {
    if (ranks.size() != sizes.size()) throw DimensionError("rank vector and block sizes differ in length");
    for (std::size_t j = 0; j < ranks.size(); ++j)
      if (ranks[j] > sizes[j])
        throw DomainError("rank " + std::to_string(ranks[j]) + " exceeds block size " +
                          std::to_string(sizes[j]));
    return {std::move(ranks), std::move(sizes)};
  }

  /// From positive blocks; throws DomainError on a non-positive block.
  static RankVector of(const std::vector<ExactMatrix>& blocks) {
    RankVector v;
    for (const auto& b : blocks) {
      if (!is_positive_semidefinite(b)) throw DomainError("rank vector needs positive blocks");
      v.ranks.push_back(b.rank());
      v.block_sizes.push_back(b.rows());
    }
    return v;
  }

  static RankVector of(const ExactMatrix& a) { return of(std::vector<ExactMatrix>{a}); }

  friend bool operator==(const RankVector&, const RankVector&) = default;
};

inline RankVector direct_sum(const RankVector& a, const RankVector& b) {
  RankVector out = a;
  out.ranks.insert(out.ranks.end(), b.ranks.begin(), b.ranks.end());
  out.block_sizes.insert(out.block_sizes.end(), b.block_sizes.begin(), b.block_sizes.end());
  return out;
}

/// a <~ b in a finite-dimensional algebra: blockwise rank domination.
inline bool cuntz_leq_fd(const RankVector& a, const RankVector& b) {
  if (a.block_sizes != b.block_sizes) throw DimensionError("Cuntz comparison across different block structures");
  for (std::size_t j = 0; j < a.ranks.size(); ++j)
    if (a.ranks[j] > b.ranks[j]) return false;
  return true;
}

/// Weighted normalized rank sum_j w_j rank_j / k_j. Weights are a tracial
/// state: nonnegative, summing to 1.
inline Rational d_tau(const RankVector& a, const std::vector<Rational>& weights) {
  if (weights.size() != a.ranks.size()) throw DimensionError("one weight per block required");
  Rational total = 0, out = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (sgn(weights[j]) < 0) throw DomainError("negative trace weight");
    total += weights[j];
    if (a.block_sizes[j] == 0) continue;
    out += weights[j] * ratio(Integer(static_cast<unsigned long>(a.ranks[j])),
                              Integer(static_cast<unsigned long>(a.block_sizes[j])));
  }
  if (total != 1) throw DomainError("trace weights must sum to 1");
  return out;
}

/// Single block M_k with its unique tracial state.
inline Rational d_tau(const ExactMatrix& a) {
  if (a.rows() == 0) throw DimensionError("empty matrix");
  return d_tau(RankVector::of(a), {Rational(1)});
}

/// Pointwise rank domination of two MatFuncs on their common sample
/// points. A necessary condition for Cuntz subequivalence in C(X, M_k),
/// never a sufficient one.
struct PointwiseRankVerdict {
  static constexpr const char* kLabel = "NECESSARY-ONLY";
  std::size_t points = 0;
  bool holds = true;
};

inline PointwiseRankVerdict pointwise_rank_necessary(const MatFunc& a, const MatFunc& b) {
  if (a.fiber_dim() != b.fiber_dim()) throw DimensionError("MatFuncs have different fiber sizes");
  PointwiseRankVerdict v;
  for (const auto& [x, va] : a.values()) {
    if (!b.defined_at(x)) continue;
    ++v.points;
    if (cuntz_leq_fd(RankVector::of(va), RankVector::of(b.at(x))) == false) v.holds = false;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Radius-of-comparison bound tables

struct RcRow {
  std::size_t stage;
  Integer dim_x;      // 2 s(n)
  Integer fiber;      // nu r(n)
  Rational bound;     // s(n) / (nu r(n))
  Rational cp_bound;  // max_j s(n) / (t_j nu r(n))
  Rational gap;       // bound - eta
};

struct RcTable {
  Rational eta;
  std::size_t nu;
  std::vector<RcRow> rows;

  bool columns_coincide() const {
    for (const auto& r : rows)
      if (r.bound != r.cp_bound) return false;
    return true;
  }
  bool strictly_decreasing_above_eta() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (sgn(rows[i].gap) <= 0) return false;
      if (i > 0 && rows[i].bound >= rows[i - 1].bound) return false;
    }
    return true;
  }
  /// First stage with gap below tol, if any.
  std::optional<std::size_t> first_within(double tol) const {
    for (const auto& r : rows)
      if (r.gap.get_d() < tol) return r.stage;
    return std::nullopt;
  }
};

/// Upper bounds s(n)/(nu r(n)) for the stage algebras and for the crossed
/// products. These bound rc at finite stages with the canonical trace;
/// they are not rc computations.
inline RcTable rc_upper_table(const StageLedger& ledger, const GroupInvariants& inv) {
  std::size_t sum_sq = 0;
  for (std::size_t t : inv.irrep_dims) sum_sq += t * t;
  if (inv.irrep_dims.empty() || Integer(static_cast<unsigned long>(sum_sq)) != ledger.m)
    throw DimensionError("ledger multiplier " + ledger.m.get_str() +
                         " does not match the group (sum of squared irrep dimensions " +
                         std::to_string(sum_sq) + ")");
  RcTable t{ledger.target / ledger.m, sum_sq, {}};
  const std::size_t t_min = *std::min_element(inv.irrep_dims.begin(), inv.irrep_dims.end());
  for (std::size_t n = 1; n <= ledger.size(); ++n) {
    const Integer s = ledger.s(n), r = ledger.r(n), fiber = ledger.m * r;
    RcRow row{n, 2 * s, fiber, ratio(s, fiber), Rational(0), Rational(0)};
    // Maximum over t of s / (t nu r) is attained at the smallest t.
    for (std::size_t tj : inv.irrep_dims) {
      Rational b = ratio(s, fiber * static_cast<unsigned long>(tj));
      if (b > row.cp_bound) row.cp_bound = b;
    }
    if (row.cp_bound != ratio(s, fiber * static_cast<unsigned long>(t_min)))
      throw InconsistencyError("crossed-product bound is not attained at the smallest irrep");
    row.gap = row.bound - t.eta;
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Non-comparison certificate

struct CertificateCheck {
  std::size_t m;
  Integer lhs;  // M r(m) / r(n), the rank of the pushed-forward trivial projection
  Integer rhs;  // r(m) + s(m)
  bool divisible;
  bool holds;   // lhs < rhs
};

struct ComparisonCertificate {
  std::size_t nu;
  Rational eta;
  Rational lambda;
  std::size_t n;
  Integer r_n;
  Integer M;
  Integer M_max;  // largest admissible M at this n
  bool stage_condition;  // 1/r(n) < eta - lambda
  bool window_condition; // lambda + 1/nu < M/(nu r(n)) < eta + 1/nu
  std::vector<CertificateCheck> checks;
  std::string assumption;

  bool valid() const {
    if (!stage_condition || !window_condition || checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.divisible || !c.holds) return false;
    return true;
  }
};

inline const char* kCertificateAssumption =
    "ASSUMED (consumed, not verified): a trivial projection e over X_m with "
    "||x e x* - p_m|| < 1/2 for some x has rank(e) >= r(m) + s(m)";

namespace detail {

/// Admissible M window at stage n: integers strictly between
/// nu r (lambda + 1/nu) and nu r (eta + 1/nu).
inline std::optional<std::pair<Integer, Integer>> certificate_window(const Integer& nu, const Integer& r,
                                                                     const Rational& eta,
                                                                     const Rational& lambda) {
  const Rational lo = Rational(nu * r) * lambda + r;
  const Rational hi = Rational(nu * r) * eta + r;
  Integer first;
  mpz_fdiv_q(first.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  first += 1;
  Integer last;
  mpz_cdiv_q(last.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  last -= 1;
  if (first > last) return std::nullopt;
  return std::make_pair(first, last);
}

inline bool certificate_stage_ok(const Integer& r, const Rational& eta, const Rational& lambda) {
  return ratio(1, r) < eta - lambda;
}

}  // namespace detail

/// Smallest stage n whose ledger data admits a certificate. Generated from
/// scratch, so it does not depend on how long a caller's ledger is.
inline std::size_t minimal_certificate_stage(const Integer& nu, const Rational& eta,
                                             const Rational& lambda) {
  if (sgn(lambda) < 0) throw DomainError("lambda must be >= 0");
  if (lambda >= eta)
    throw DomainError("lambda must be < eta (lambda=" + to_fraction(lambda) + ", eta=" + to_fraction(eta) + ")");
  // r(n) roughly squares per stage, so 1/r(n) < eta - lambda within a
  // handful of stages unless eta - lambda is astronomically small.
  constexpr std::size_t kSearchLimit = 24;
  const Rational target = eta * nu;
  StageLedger probe = generate_stages(nu, target, 1);
  for (std::size_t n = 1; n <= kSearchLimit; ++n) {
    if (n > probe.size()) probe = generate_stages(nu, target, n);
    const Integer r = probe.r(n);
    if (detail::certificate_stage_ok(r, eta, lambda) && detail::certificate_window(nu, r, eta, lambda))
      return n;
  }
  throw DomainError("no certificate stage within " + std::to_string(kSearchLimit) + " stages");
}

/// Smallest stage n and smallest M witnessing failure of lambda-comparison,
/// with the rank inequality checked exactly for m = n+1 .. n+horizon.
inline ComparisonCertificate find_certificate(const StageLedger& ledger, const Rational& eta,
                                              const Rational& lambda, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  if (ledger.target != ledger.m * eta)
    throw DomainError("ledger target " + to_fraction(ledger.target) + " is not nu*eta");
  const Integer& nu = ledger.m;
  const std::size_t n = minimal_certificate_stage(nu, eta, lambda);
  const std::size_t need = n + horizon;
  if (ledger.size() < need)
    throw DomainError("ledger too short: certificate at stage " + std::to_string(n) + " with horizon " +
                      std::to_string(horizon) + " needs " + std::to_string(need) + " stages, ledger has " +
                      std::to_string(ledger.size()) + " (" + std::to_string(need - ledger.size()) +
                      " more required)");

  const Integer r_n = ledger.r(n);
  auto window = *detail::certificate_window(nu, r_n, eta, lambda);
  ComparisonCertificate c;
  c.nu = to_size(nu, "group order");
  c.eta = eta;
  c.lambda = lambda;
  c.n = n;
  c.r_n = r_n;
  c.M = window.first;
  c.M_max = window.second;
  c.stage_condition = detail::certificate_stage_ok(r_n, eta, lambda);
  const Rational frac = ratio(c.M, nu * r_n), inv_nu = ratio(1, nu);
  c.window_condition = lambda + inv_nu < frac && frac < eta + inv_nu;
  for (std::size_t m = n + 1; m <= need; ++m) {
    const Integer r_m = ledger.r(m), s_m = ledger.s(m);
    const Integer prod = c.M * r_m;
    CertificateCheck chk{m, 0, r_m + s_m, mpz_divisible_p(prod.get_mpz_t(), r_n.get_mpz_t()) != 0, false};
    chk.lhs = prod / r_n;
    chk.holds = chk.divisible && chk.lhs < chk.rhs;
    c.checks.push_back(std::move(chk));
  }
  c.assumption = kCertificateAssumption;
  return c;
}

/// Re-checks a certificate from the raw d values alone, rebuilding r and s
/// by direct products.
inline bool revalidate_certificate(const ComparisonCertificate& c, const Integer& m_mult,
                                   const std::vector<Integer>& raw_d) {
  auto r_of = [&](std::size_t k) {
    Integer r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= raw_d.at(i) + m_mult;
    return r;
  };
  auto s_of = [&](std::size_t k) {
    Integer s = 1;
    for (std::size_t i = 0; i < k; ++i) s *= raw_d.at(i);
    return s;
  };
  if (raw_d.size() < c.n || r_of(c.n) != c.r_n) return false;
  const Rational frac = ratio(c.M, m_mult * c.r_n), inv_nu = ratio(1, m_mult);
  if (!(c.lambda + inv_nu < frac && frac < c.eta + inv_nu)) return false;
  if (!(ratio(1, c.r_n) < c.eta - c.lambda)) return false;
  for (const auto& chk : c.checks) {
    if (raw_d.size() < chk.m) return false;
    const Integer rm = r_of(chk.m), sm = s_of(chk.m);
    if ((c.M * rm) % c.r_n != 0) return false;
    const Integer lhs = c.M * rm / c.r_n;
    if (lhs != chk.lhs || rm + sm != chk.rhs || !(lhs < rm + sm)) return false;
  }
  return !c.checks.empty();
}

// ---------------------------------------------------------------------------
// Almost-central scalar approximation

struct ScalarApproximation {
  std::complex<double> xi;
  double distance;                  // max_j |xi_j - xi| = ||b - xi 1||
  std::size_t witness_m, witness_k; // eigenvector indices of the matrix unit
  double spread;                    // |xi_m - xi_k|
  double witness_commutator_norm;   // ||b E - E b|| for E = U E_mk U*
  std::optional<Rational> exact_spread_sq;  // |xi_m - xi_k|^2, diagonal-rational input
  std::vector<std::complex<double>> eigenvalues;
};

inline ScalarApproximation scalar_approximation(const Eigen::MatrixXcd& b, double tol = 1e-9) {
  const Eigen::Index n = b.rows();
  if (n == 0 || b.cols() != n) throw DimensionError("scalar approximation needs a nonempty square matrix");
  const double scale = std::max(1.0, b.norm());
  if ((b * b.adjoint() - b.adjoint() * b).norm() > tol * scale) throw DomainError("matrix is not normal");
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(b);
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& U = schur.matrixU();
  ScalarApproximation out{};
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues.push_back(T(i, i));
    radius = std::max(radius, std::abs(T(i, i)));
  }
  if (std::abs(radius - 1.0) > tol)
    throw DomainError("spectral radius " + std::to_string(radius) + " is not 1 within tolerance");
  std::size_t m = 0;
  for (std::size_t i = 1; i < out.eigenvalues.size(); ++i)
    if (std::abs(std::abs(out.eigenvalues[i]) - 1.0) < std::abs(std::abs(out.eigenvalues[m]) - 1.0)) m = i;
  out.xi = out.eigenvalues[m];
  std::size_t k = m;
  for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
    const double dist = std::abs(out.eigenvalues[j] - out.xi);
    out.distance = std::max(out.distance, dist);
    if (dist > std::abs(out.eigenvalues[k] - out.xi)) k = j;
  }
  out.witness_m = m;
  out.witness_k = k;
  out.spread = std::abs(out.eigenvalues[m] - out.eigenvalues[k]);
  const Eigen::MatrixXcd E = U.col(static_cast<Eigen::Index>(m)) * U.col(static_cast<Eigen::Index>(k)).adjoint();
  out.witness_commutator_norm = operator_norm(Eigen::MatrixXcd(b * E - E * b));
  return out;
}

/// Exact input: normality is checked exactly. Diagonal input also gets the
/// exact squared spread and an exact check that [b, E_mk] = (b_mm - b_kk) E_mk.
inline ScalarApproximation scalar_approximation(const ExactMatrix& b, double tol = 1e-9) {
  if (!b.is_square()) throw DimensionError("scalar approximation needs a square matrix");
  if (b * b.adjoint() != b.adjoint() * b) throw DomainError("matrix is not normal");
  if (!b.is_diagonal()) return scalar_approximation(to_eigen(b), tol);
  // Diagonal: eigenvectors are the standard basis, no decomposition needed.
  const std::size_t n = b.rows();
  if (n == 0) throw DimensionError("scalar approximation needs a nonempty square matrix");
  std::vector<std::complex<double>> ev;
  for (std::size_t i = 0; i < n; ++i) ev.emplace_back(b(i, i).re.get_d(), b(i, i).im.get_d());
  double radius = 0.0;
  for (const auto& z : ev) radius = std::max(radius, std::abs(z));
  if (std::abs(radius - 1.0) > tol)
    throw DomainError("spectral radius " + std::to_string(radius) + " is not 1 within tolerance");
  ScalarApproximation out{};
  out.eigenvalues = ev;
  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(std::abs(ev[i]) - 1.0) < std::abs(std::abs(ev[m]) - 1.0)) m = i;
  std::size_t k = m;
  out.xi = ev[m];
  for (std::size_t j = 0; j < n; ++j) {
    const double dist = std::abs(ev[j] - out.xi);
    out.distance = std::max(out.distance, dist);
    if (dist > std::abs(ev[k] - out.xi)) k = j;
  }
  out.witness_m = m;
  out.witness_k = k;
  const GaussianRational diff = b(m, m) - b(k, k);
  out.exact_spread_sq = diff.norm2();
  out.spread = std::sqrt(out.exact_spread_sq->get_d());
  const ExactMatrix e = ExactMatrix::unit(n, m, k);
  if (b * e - e * b != diff * e) throw InconsistencyError("diagonal commutator identity failed");
  out.witness_commutator_norm = operator_norm(b * e - e * b);
  return out;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_COMPARISON_HPP
