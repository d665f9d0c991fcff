#ifndef CUNTZLAB_IDENTIFICATION_HPP
#define CUNTZLAB_IDENTIFICATION_HPP

#include <cstddef>
#include <string>
#include <string_view>

#include "error.hpp"
#include "exact_matrix.hpp"
#include "group.hpp"
#include "permutation.hpp"
#include "representation.hpp"

namespace cuntzlab {

// Tensor-product identifications used by the stage maps. Each one sends
// a (x) [b_jk] to the block matrix [a b_jk]: the SECOND factor carries the
// outer block index. Elements of M_p (x) M_q elsewhere in the library are
// stored in standard Kronecker layout (first factor outer), so applying an
// identification to a stored tensor is a leg swap.

enum class IdentificationKind { theta, phi, psi, sigma };

inline std::string_view to_string(IdentificationKind k) {
  switch (k) {
    case IdentificationKind::theta: return "theta";
    case IdentificationKind::phi: return "phi";
    case IdentificationKind::psi: return "psi";
    case IdentificationKind::sigma: return "sigma";
  }
  return "?";
}

struct Identification {
  IdentificationKind kind;
  std::size_t nu;  // card(G)
  std::size_t n;   // parameter; ignored for theta

  /// Sizes of the two tensor legs.
  std::size_t first_dim() const {
    switch (kind) {
      case IdentificationKind::theta: return nu;
      case IdentificationKind::phi: return nu * nu;
      case IdentificationKind::psi: return nu;
      case IdentificationKind::sigma: return nu;
    }
    return 0;
  }
  std::size_t second_dim() const {
    switch (kind) {
      case IdentificationKind::theta: return nu;
      case IdentificationKind::phi: return n;
      case IdentificationKind::psi: return nu * n;
      case IdentificationKind::sigma: return n;
    }
    return 0;
  }
  std::size_t dim() const { return first_dim() * second_dim(); }

  /// Flat index of basis vector e_i (x) e_j in the target algebra.
  std::size_t index_map(std::size_t i, std::size_t j) const { return j * first_dim() + i; }

  /// Inverse of index_map.
  std::pair<std::size_t, std::size_t> pair_of(std::size_t flat) const {
    return {flat % first_dim(), flat / first_dim()};
  }

  /// The leg swap taking standard layout (i*q + j) to this layout.
  Permutation leg_swap() const {
    const std::size_t p = first_dim(), q = second_dim();
    std::vector<std::size_t> im(p * q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) im[i * q + j] = index_map(i, j);
    return Permutation(std::move(im));
  }

  /// Image of the elementary tensor a (x) b.
  ExactMatrix operator()(const ExactMatrix& a, const ExactMatrix& b,
                         std::size_t cap = kDefaultMatrixCap) const {
    if (a.rows() != first_dim() || a.cols() != first_dim() ||
        b.rows() != second_dim() || b.cols() != second_dim())
      throw DimensionError(std::string(to_string(kind)) + " expects " +
                           std::to_string(first_dim()) + "x" + std::to_string(first_dim()) +
                           " (x) " + std::to_string(second_dim()) + "x" +
                           std::to_string(second_dim()) + ", got " + a.shape() +
                           " (x) " + b.shape());
    return kron(b, a, cap);
  }

  /// Image of a general tensor given in standard Kronecker layout.
  ExactMatrix apply(const ExactMatrix& tensor) const {
    if (tensor.rows() != dim() || tensor.cols() != dim())
      throw DimensionError(std::string(to_string(kind)) + " expects a " +
                           std::to_string(dim()) + "-square tensor, got " + tensor.shape());
    return tensor.conjugated_by(leg_swap());
  }

  Permutation apply(const Permutation& tensor) const {
    const Permutation s = leg_swap();
    return s * tensor * s.inverse();
  }
};

inline Identification theta(std::size_t nu) { return {IdentificationKind::theta, nu, nu}; }
inline Identification phi(std::size_t nu, std::size_t n) { return {IdentificationKind::phi, nu, n}; }
inline Identification psi(std::size_t nu, std::size_t n) { return {IdentificationKind::psi, nu, n}; }
inline Identification sigma(std::size_t nu, std::size_t n) { return {IdentificationKind::sigma, nu, n}; }

/// The intertwiner w of Fell absorption as a permutation of G x G in
/// lexicographic order: e_(g,h) -> e_(g, g^-1 h).
inline Permutation fell_absorption_permutation(const GroupTable& g) {
  const std::size_t nu = g.order();
  std::vector<std::size_t> im(nu * nu);
  for (std::size_t a = 0; a < nu; ++a)
    for (std::size_t h = 0; h < nu; ++h) im[a * nu + h] = a * nu + g.mul(g.inv(a), h);
  return Permutation(std::move(im));
}

/// w with w (z_g (x) z_g) w* = z_g (x) 1 for every g, verified exhaustively
/// by exact matrix products before returning.
inline ExactMatrix fell_absorption_unitary(const GroupTable& g,
                                           std::size_t cap = kDefaultMatrixCap) {
  const std::size_t nu = g.order();
  if (nu * nu > cap) throw SizeError(nu * nu, nu * nu, cap);
  const ExactMatrix w = ExactMatrix::from_permutation(fell_absorption_permutation(g));
  const ExactMatrix ws = w.adjoint();
  const UnitaryRep z = regular_representation(g);
  const ExactMatrix one = ExactMatrix::identity(nu);
  for (std::size_t a = 0; a < nu; ++a) {
    if (w * kron(z(a), z(a), cap) * ws != kron(z(a), one, cap))
      throw InconsistencyError("Fell absorption intertwining fails at element " +
                               g.label(a));
  }
  return w;
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_IDENTIFICATION_HPP
