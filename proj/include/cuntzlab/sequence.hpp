#ifndef CUNTZLAB_SEQUENCE_HPP
#define CUNTZLAB_SEQUENCE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace cuntzlab {

/// Smallest positive integer k with 1 - m/(k+m) > q, i.e. k > m q / (1-q).
inline Integer next_d(const Integer& m, const Rational& q) {
  if (sgn(m) <= 0) throw DomainError("next_d needs m > 0");
  if (sgn(q) <= 0 || q >= 1) throw DomainError("next_d needs 0 < q < 1, got " + to_fraction(q));
  Rational x = m * q / (1 - q);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return fl + 1;
}

struct StageRecord {
  std::size_t n;
  Integer d;  // d(n)
  Integer l;  // d(n) + m
  Integer s;  // prod d(k), k <= n
  Integer r;  // prod l(k), k <= n
  Rational u; // s(n) / r(n)
};

/// Exact ledger of the greedy sequence for multiplier m and target in (0,1).
/// stages[i] holds stage n = i + 1; stage 0 (s = r = u = 1) is implicit.
struct StageLedger {
  Integer m;
  Rational target;
  std::vector<StageRecord> stages;

  std::size_t size() const noexcept { return stages.size(); }

  /// Stage n record; n == 0 gives the trivial stage.
  StageRecord at(std::size_t n) const {
    if (n == 0) return {0, 0, 0, 1, 1, Rational(1)};
    if (n > stages.size())
      throw DomainError("ledger has " + std::to_string(stages.size()) + " stages, asked for " +
                        std::to_string(n));
    return stages[n - 1];
  }
  Integer s(std::size_t n) const { return at(n).s; }
  Integer r(std::size_t n) const { return at(n).r; }
  Rational u(std::size_t n) const { return at(n).u; }
  Integer d(std::size_t n) const { return at(n).d; }

  /// target / u(n), the remainder the next factor must stay above.
  Rational remainder(std::size_t n) const { return target / u(n); }
};

inline StageLedger generate_stages(const Integer& m, const Rational& target, std::size_t count) {
  if (sgn(target) <= 0 || target >= 1)
    throw DomainError("target must lie in (0,1), got " + to_fraction(target));
  if (count == 0) throw DomainError("stage count must be >= 1");
  StageLedger ledger{m, target, {}};
  Integer s = 1, r = 1;
  Rational u = 1;
  for (std::size_t n = 1; n <= count; ++n) {
    Integer d = next_d(m, target / u);
    Integer l = d + m;
    s *= d;
    r *= l;
    u = ratio(s, r);
    ledger.stages.push_back({n, d, l, s, r, u});
  }
  return ledger;
}

struct ConvergenceReport {
  std::vector<Rational> gaps;          // u(n) - target
  std::vector<Rational> partial_sums;  // sum_{k<=n} m / (d(k) + m)
  bool d_nondecreasing = true;
  bool u_nonincreasing = true;
  bool gaps_positive = true;
  bool partial_sums_increasing = true;
  // Informational only: -ln(target) + 1.
  double heuristic_sum_bound = 0.0;
  bool partial_sums_within_heuristic = true;
};

inline ConvergenceReport convergence_report(const StageLedger& ledger) {
  if (ledger.size() < 2) throw DomainError("convergence report needs >= 2 stages");
  ConvergenceReport rep;
  rep.heuristic_sum_bound = -std::log(ledger.target.get_d()) + 1.0;
  Rational sum = 0;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const auto& st = ledger.stages[i];
    rep.gaps.push_back(st.u - ledger.target);
    sum += ratio(ledger.m, st.l);
    rep.partial_sums.push_back(sum);
    if (sgn(rep.gaps.back()) <= 0) rep.gaps_positive = false;
    if (sum.get_d() > rep.heuristic_sum_bound) rep.partial_sums_within_heuristic = false;
    if (i > 0) {
      const auto& prev = ledger.stages[i - 1];
      if (st.d < prev.d) rep.d_nondecreasing = false;
      if (st.u > prev.u) rep.u_nonincreasing = false;
      if (rep.partial_sums[i] <= rep.partial_sums[i - 1]) rep.partial_sums_increasing = false;
    }
  }
  return rep;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_SEQUENCE_HPP
