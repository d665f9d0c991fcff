#ifndef CUNTZLAB_EXACT_MATRIX_HPP
#define CUNTZLAB_EXACT_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "error.hpp"
#include "linear_system.hpp"
#include "permutation.hpp"
#include "rational.hpp"

namespace cuntzlab {

inline constexpr std::size_t kDefaultMatrixCap = 4096;

/// Dense matrix over Q(i), stored fraction-free: Gaussian-integer
/// numerators over one positive common denominator. The representation is
/// kept normalized (gcd of denominator and all numerator parts is 1), so
/// structural equality is value equality.
class ExactMatrix {
 public:
  ExactMatrix() = default;

  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), re_(rows * cols), im_(rows * cols), den_(1) {}

  ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> init) {
    std::vector<GaussianRational> flat;
    std::size_t r = 0, c = 0;
    for (const auto& row : init) {
      if (r == 0) c = row.size();
      if (row.size() != c) throw DimensionError("ragged initializer");
      flat.insert(flat.end(), row.begin(), row.end());
      ++r;
    }
    *this = from_entries(r, c, flat);
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.re_[i * n + i] = 1;
    return m;
  }

  static ExactMatrix zero(std::size_t rows, std::size_t cols) {
    return ExactMatrix(rows, cols);
  }

  static ExactMatrix from_entries(std::size_t rows, std::size_t cols,
                                  const std::vector<GaussianRational>& entries) {
    if (entries.size() != rows * cols)
      throw DimensionError("entry count does not match shape");
    ExactMatrix m(rows, cols);
    Integer l = 1;
    for (const auto& z : entries) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.re.get_den_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.im.get_den_mpz_t());
    }
    m.den_ = l;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      m.re_[k] = entries[k].re.get_num() * (l / entries[k].re.get_den());
      m.im_[k] = entries[k].im.get_num() * (l / entries[k].im.get_den());
    }
    m.normalize();
    return m;
  }

  static ExactMatrix diagonal(const std::vector<GaussianRational>& d) {
    std::vector<GaussianRational> flat(d.size() * d.size());
    for (std::size_t i = 0; i < d.size(); ++i) flat[i * d.size() + i] = d[i];
    return from_entries(d.size(), d.size(), flat);
  }

  static ExactMatrix from_permutation(const Permutation& p) {
    ExactMatrix m(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m.re_[p(i) * p.size() + i] = 1;
    return m;
  }

  /// Standard matrix unit e_{ij} in M_n.
  static ExactMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
    ExactMatrix m(n, n);
    m.re_[i * n + j] = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const Integer& denominator() const noexcept { return den_; }
  const Integer& num_re(std::size_t i, std::size_t j) const { return re_[i * cols_ + j]; }
  const Integer& num_im(std::size_t i, std::size_t j) const { return im_[i * cols_ + j]; }

  bool entry_is_zero(std::size_t i, std::size_t j) const {
    const std::size_t k = i * cols_ + j;
    return sgn(re_[k]) == 0 && sgn(im_[k]) == 0;
  }

  GaussianRational operator()(std::size_t i, std::size_t j) const {
    const std::size_t k = index(i, j);
    Rational r(re_[k], den_), m(im_[k], den_);
    r.canonicalize();
    m.canonicalize();
    return {r, m};
  }

  void set(std::size_t i, std::size_t j, const GaussianRational& z) {
    const std::size_t k = index(i, j);
    Integer l = den_;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.re.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.im.get_den_mpz_t());
    if (l != den_) rescale(l);
    re_[k] = z.re.get_num() * (l / z.re.get_den());
    im_[k] = z.im.get_num() * (l / z.im.get_den());
    normalize();
  }

  GaussianRational trace() const {
    require_square("trace");
    Integer r = 0, m = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      r += re_[i * cols_ + i];
      m += im_[i * cols_ + i];
    }
    Rational qr(r, den_), qm(m, den_);
    qr.canonicalize();
    qm.canonicalize();
    return {qr, qm};
  }

  ExactMatrix adjoint() const {
    ExactMatrix t(cols_, rows_);
    t.den_ = den_;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        t.re_[j * rows_ + i] = re_[i * cols_ + j];
        t.im_[j * rows_ + i] = -im_[i * cols_ + j];
      }
    return t;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    t.den_ = den_;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        t.re_[j * rows_ + i] = re_[i * cols_ + j];
        t.im_[j * rows_ + i] = im_[i * cols_ + j];
      }
    return t;
  }

  bool is_zero() const {
    for (std::size_t k = 0; k < re_.size(); ++k)
      if (sgn(re_[k]) != 0 || sgn(im_[k]) != 0) return false;
    return true;
  }

  bool is_hermitian() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j) {
        if (re_[i * cols_ + j] != re_[j * cols_ + i]) return false;
        if (im_[i * cols_ + j] != -im_[j * cols_ + i]) return false;
      }
    return true;
  }

  bool is_diagonal() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && !entry_is_zero(i, j)) return false;
    return true;
  }

  /// Exactly one entry equal to 1 in every row and column, zeros elsewhere.
  bool is_permutation() const {
    if (!is_square() || den_ != 1) return false;
    std::vector<int> col_count(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      int row_count = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (entry_is_zero(i, j)) continue;
        if (re_[i * cols_ + j] != 1 || sgn(im_[i * cols_ + j]) != 0) return false;
        ++row_count;
        ++col_count[j];
      }
      if (row_count != 1) return false;
    }
    for (int c : col_count)
      if (c != 1) return false;
    return true;
  }

  bool is_projection() const {
    return is_hermitian() && (*this) * (*this) == *this;
  }

  bool is_unitary() const {
    return is_square() && adjoint() * (*this) == identity(rows_);
  }

  /// Copy of the rows x cols block starting at (r0, c0).
  ExactMatrix block(std::size_t r0, std::size_t c0, std::size_t rows,
                    std::size_t cols) const {
    if (r0 + rows > rows_ || c0 + cols > cols_)
      throw DimensionError("block out of range");
    ExactMatrix b(rows, cols);
    b.den_ = den_;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        b.re_[i * cols + j] = re_[(r0 + i) * cols_ + c0 + j];
        b.im_[i * cols + j] = im_[(r0 + i) * cols_ + c0 + j];
      }
    b.normalize();
    return b;
  }

  /// P A P^T for the permutation matrix P of `p`, as an index relabeling.
  ExactMatrix conjugated_by(const Permutation& p) const {
    require_square("permutation conjugation");
    if (p.size() != rows_) throw DimensionError("permutation size mismatch");
    ExactMatrix b(rows_, cols_);
    b.den_ = den_;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        b.re_[p(i) * cols_ + p(j)] = re_[i * cols_ + j];
        b.im_[p(i) * cols_ + p(j)] = im_[i * cols_ + j];
      }
    return b;
  }

  ExactMatrix& operator+=(const ExactMatrix& o) { return accumulate(o, 1); }
  ExactMatrix& operator-=(const ExactMatrix& o) { return accumulate(o, -1); }

  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator-(ExactMatrix a) {
    for (auto& x : a.re_) x = -x;
    for (auto& x : a.im_) x = -x;
    return a;
  }

  friend ExactMatrix operator*(const GaussianRational& s, const ExactMatrix& a) {
    ExactMatrix out(a.rows_, a.cols_);
    // s = (p + i q) / L with a common L.
    Integer l;
    mpz_lcm(l.get_mpz_t(), s.re.get_den_mpz_t(), s.im.get_den_mpz_t());
    Integer p = s.re.get_num() * (l / s.re.get_den());
    Integer q = s.im.get_num() * (l / s.im.get_den());
    out.den_ = a.den_ * l;
    for (std::size_t k = 0; k < a.re_.size(); ++k) {
      out.re_[k] = p * a.re_[k] - q * a.im_[k];
      out.im_[k] = p * a.im_[k] + q * a.re_[k];
    }
    out.normalize();
    return out;
  }

  /// Product skipping zero entries; block-diagonal and permutation operands
  /// stay cheap.
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("product of " + a.shape() + " and " + b.shape());
    ExactMatrix c(a.rows_, b.cols_);
    const std::size_t n = b.cols_;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Integer* cr = &c.re_[i * n];
      Integer* ci = &c.im_[i * n];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& ar = a.re_[i * a.cols_ + k];
        const Integer& ai = a.im_[i * a.cols_ + k];
        const bool ar0 = sgn(ar) == 0, ai0 = sgn(ai) == 0;
        if (ar0 && ai0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const Integer& br = b.re_[k * n + j];
          const Integer& bi = b.im_[k * n + j];
          const bool br0 = sgn(br) == 0, bi0 = sgn(bi) == 0;
          if (br0 && bi0) continue;
          if (!ar0 && !br0) mpz_addmul(cr[j].get_mpz_t(), ar.get_mpz_t(), br.get_mpz_t());
          if (!ai0 && !bi0) mpz_submul(cr[j].get_mpz_t(), ai.get_mpz_t(), bi.get_mpz_t());
          if (!ar0 && !bi0) mpz_addmul(ci[j].get_mpz_t(), ar.get_mpz_t(), bi.get_mpz_t());
          if (!ai0 && !br0) mpz_addmul(ci[j].get_mpz_t(), ai.get_mpz_t(), br.get_mpz_t());
        }
      }
    }
    c.den_ = a.den_ * b.den_;
    c.normalize();
    return c;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.den_ == b.den_ &&
           a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Sparse Gaussian-integer rows of the numerator matrix.
  SparseRow numerator_row(std::size_t i) const {
    SparseRow row;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!entry_is_zero(i, j)) row.push_back({j, re_[i * cols_ + j], im_[i * cols_ + j]});
    return row;
  }

  /// Rank over Q(i) by division-free elimination.
  std::size_t rank() const {
    SparseEchelon ech;
    for (std::size_t i = 0; i < rows_; ++i) ech.insert(numerator_row(i));
    return ech.rank();
  }

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
    }
    return os << "]";
  }

 private:
  friend ExactMatrix kron(const ExactMatrix&, const ExactMatrix&, std::size_t);
  friend ExactMatrix direct_sum(const std::vector<ExactMatrix>&, std::size_t);

  std::size_t index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw DimensionError("index out of range");
    return i * cols_ + j;
  }

  void require_square(const char* what) const {
    if (!is_square()) throw DimensionError(std::string(what) + " needs a square matrix");
  }

  // Re-express over denominator `l`, a multiple of den_.
  void rescale(const Integer& l) {
    Integer f = l / den_;
    for (auto& x : re_) x *= f;
    for (auto& x : im_) x *= f;
    den_ = l;
  }

  ExactMatrix& accumulate(const ExactMatrix& o, int sign) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("sum of " + shape() + " and " + o.shape());
    Integer l;
    mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), o.den_.get_mpz_t());
    if (l != den_) rescale(l);
    Integer f = l / o.den_;
    for (std::size_t k = 0; k < re_.size(); ++k) {
      if (sign > 0) {
        mpz_addmul(re_[k].get_mpz_t(), o.re_[k].get_mpz_t(), f.get_mpz_t());
        mpz_addmul(im_[k].get_mpz_t(), o.im_[k].get_mpz_t(), f.get_mpz_t());
      } else {
        mpz_submul(re_[k].get_mpz_t(), o.re_[k].get_mpz_t(), f.get_mpz_t());
        mpz_submul(im_[k].get_mpz_t(), o.im_[k].get_mpz_t(), f.get_mpz_t());
      }
    }
    normalize();
    return *this;
  }

  void normalize() {
    if (den_ == 1) return;
    Integer g = den_;
    for (std::size_t k = 0; k < re_.size() && g != 1; ++k) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), re_[k].get_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), im_[k].get_mpz_t());
    }
    if (g == 1) return;
    for (auto& x : re_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    for (auto& x : im_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> re_, im_;
  Integer den_ = 1;
};

/// Standard Kronecker product: entry ((i,k),(j,l)) = a_ij b_kl with the
/// first factor on the outer index.
inline ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b,
                        std::size_t cap = kDefaultMatrixCap) {
  const std::size_t rows = a.rows_ * b.rows_, cols = a.cols_ * b.cols_;
  if (rows > cap || cols > cap) throw SizeError(rows, cols, cap);
  ExactMatrix c(rows, cols);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (a.entry_is_zero(i, j)) continue;
      const Integer& ar = a.re_[i * a.cols_ + j];
      const Integer& ai = a.im_[i * a.cols_ + j];
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l) {
          if (b.entry_is_zero(k, l)) continue;
          const Integer& br = b.re_[k * b.cols_ + l];
          const Integer& bi = b.im_[k * b.cols_ + l];
          const std::size_t idx = (i * b.rows_ + k) * cols + j * b.cols_ + l;
          c.re_[idx] = ar * br - ai * bi;
          c.im_[idx] = ar * bi + ai * br;
        }
    }
  c.den_ = a.den_ * b.den_;
  c.normalize();
  return c;
}

/// Block-diagonal matrix diag(blocks[0], blocks[1], ...).
inline ExactMatrix direct_sum(const std::vector<ExactMatrix>& blocks,
                              std::size_t cap = kDefaultMatrixCap) {
  std::size_t rows = 0, cols = 0;
  Integer l = 1;
  for (const auto& b : blocks) {
    rows += b.rows_;
    cols += b.cols_;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b.den_.get_mpz_t());
  }
  if (rows > cap || cols > cap) throw SizeError(rows, cols, cap);
  ExactMatrix out(rows, cols);
  out.den_ = l;
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    Integer f = l / b.den_;
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const std::size_t src = i * b.cols_ + j;
        if (sgn(b.re_[src]) == 0 && sgn(b.im_[src]) == 0) continue;
        out.re_[(r0 + i) * cols + c0 + j] = b.re_[src] * f;
        out.im_[(r0 + i) * cols + c0 + j] = b.im_[src] * f;
      }
    r0 += b.rows_;
    c0 += b.cols_;
  }
  out.normalize();
  return out;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_EXACT_MATRIX_HPP
