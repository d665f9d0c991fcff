#ifndef CUNTZLAB_LINEAR_SYSTEM_HPP
#define CUNTZLAB_LINEAR_SYSTEM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace cuntzlab {

/// Gaussian integer entry of a sparse row.
struct SparseEntry {
  std::size_t col;
  Integer re;
  Integer im;
};

using SparseRow = std::vector<SparseEntry>;  // sorted by col, no zeros

namespace detail {

inline void remove_content(SparseRow& row) {
  Integer g = 0;
  for (const auto& e : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.re.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.im.get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (auto& e : row) {
    mpz_divexact(e.re.get_mpz_t(), e.re.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(e.im.get_mpz_t(), e.im.get_mpz_t(), g.get_mpz_t());
  }
}

// row <- p * row - a * pivot, where p is pivot's leading entry and a is
// row's entry in the same column. The leading column cancels.
inline SparseRow eliminate(const SparseRow& row, const SparseRow& pivot) {
  const Integer& pr = pivot.front().re;
  const Integer& pi = pivot.front().im;
  const Integer& ar = row.front().re;
  const Integer& ai = row.front().im;
  SparseRow out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 1, j = 1;
  Integer re, im;
  while (i < row.size() || j < pivot.size()) {
    std::size_t ci = i < row.size() ? row[i].col : SIZE_MAX;
    std::size_t cj = j < pivot.size() ? pivot[j].col : SIZE_MAX;
    std::size_t c = std::min(ci, cj);
    re = 0;
    im = 0;
    if (ci == c) {  // + p * x
      const auto& x = row[i++];
      mpz_addmul(re.get_mpz_t(), pr.get_mpz_t(), x.re.get_mpz_t());
      mpz_submul(re.get_mpz_t(), pi.get_mpz_t(), x.im.get_mpz_t());
      mpz_addmul(im.get_mpz_t(), pr.get_mpz_t(), x.im.get_mpz_t());
      mpz_addmul(im.get_mpz_t(), pi.get_mpz_t(), x.re.get_mpz_t());
    }
    if (cj == c) {  // - a * y
      const auto& y = pivot[j++];
      mpz_submul(re.get_mpz_t(), ar.get_mpz_t(), y.re.get_mpz_t());
      mpz_addmul(re.get_mpz_t(), ai.get_mpz_t(), y.im.get_mpz_t());
      mpz_submul(im.get_mpz_t(), ar.get_mpz_t(), y.im.get_mpz_t());
      mpz_submul(im.get_mpz_t(), ai.get_mpz_t(), y.re.get_mpz_t());
    }
    if (sgn(re) != 0 || sgn(im) != 0) out.push_back({c, re, im});
  }
  remove_content(out);
  return out;
}

}  // namespace detail

/// Incremental row-echelon basis over the Gaussian integers. Division-free
/// elimination with content removal; rank over Q(i) equals the number of
/// stored pivots.
class SparseEchelon {
 public:
  /// Reduces `row` against the current pivots; returns true if it was
  /// independent (and is now stored as a pivot).
  bool insert(SparseRow row) {
    std::erase_if(row, [](const SparseEntry& e) {
      return sgn(e.re) == 0 && sgn(e.im) == 0;
    });
    detail::remove_content(row);
    while (!row.empty()) {
      auto it = pivots_.find(row.front().col);
      if (it == pivots_.end()) {
        std::size_t lead = row.front().col;
        pivots_.emplace(lead, std::move(row));
        return true;
      }
      row = detail::eliminate(row, it->second);
    }
    return false;
  }

  std::size_t rank() const noexcept { return pivots_.size(); }

 private:
  std::map<std::size_t, SparseRow> pivots_;
};

}  // namespace cuntzlab

#endif  // CUNTZLAB_LINEAR_SYSTEM_HPP
