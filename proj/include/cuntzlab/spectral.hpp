#ifndef CUNTZLAB_SPECTRAL_HPP
#define CUNTZLAB_SPECTRAL_HPP

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "rational.hpp"

// Floating point lives here and only here: eigenvalues, norms, and the
// cut-down of non-diagonal matrices. Exact identities never route through
// this header.

namespace cuntzlab {

inline Eigen::MatrixXcd to_eigen(const ExactMatrix& m) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      // Exact division first; the denominator may not fit a double.
      Rational re = ratio(m.num_re(i, j), m.denominator());
      Rational im = ratio(m.num_im(i, j), m.denominator());
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {re.get_d(), im.get_d()};
    }
  return out;
}

/// Operator (spectral) norm: largest singular value.
inline double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

inline double operator_norm(const ExactMatrix& m) { return operator_norm(to_eigen(m)); }

/// t -> max(0, t - eps) on a list of eigenvalues.
inline std::vector<Rational> cut_down(const std::vector<Rational>& eigenvalues, const Rational& eps) {
  if (sgn(eps) < 0) throw DomainError("cut-down needs eps >= 0");
  std::vector<Rational> out;
  out.reserve(eigenvalues.size());
  for (const auto& t : eigenvalues) {
    if (sgn(t) < 0) throw DomainError("cut-down needs a positive element");
    Rational v = t - eps;
    out.push_back(sgn(v) > 0 ? v : Rational(0));
  }
  return out;
}

/// Exact cut-down (a - eps)_+ of a diagonal positive matrix. Non-diagonal
/// input has irrational spectral data in general; use cut_down_approx.
inline ExactMatrix cut_down(const ExactMatrix& a, const Rational& eps) {
  if (!a.is_hermitian()) throw DomainError("cut-down needs a Hermitian matrix");
  if (!a.is_diagonal())
    throw DomainError("exact cut-down is defined for diagonal input; use cut_down_approx");
  std::vector<Rational> d;
  for (std::size_t i = 0; i < a.rows(); ++i) d.push_back(a(i, i).re);
  auto c = cut_down(d, eps);
  return ExactMatrix::diagonal(std::vector<GaussianRational>(c.begin(), c.end()));
}

/// Floating-point cut-down through a Hermitian eigendecomposition.
inline Eigen::MatrixXcd cut_down_approx(const ExactMatrix& a, double eps, double tol = 1e-12) {
  if (!a.is_hermitian()) throw DomainError("cut-down needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -tol) throw DomainError("cut-down needs a positive element");
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(0.0, ev(i) - eps);
  return es.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Number of eigenvalues of magnitude > tol. tol == 0 means exact rank
/// by row reduction.
inline std::size_t approx_rank(const ExactMatrix& a, double tol) {
  if (!a.is_hermitian()) throw DomainError("approx_rank needs a Hermitian matrix");
  if (tol == 0.0) return a.rank();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a), Eigen::EigenvaluesOnly);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    r += std::abs(es.eigenvalues()(i)) > tol;
  return r;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_SPECTRAL_HPP
