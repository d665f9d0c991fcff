#ifndef CUNTZLAB_PERMUTATION_HPP
#define CUNTZLAB_PERMUTATION_HPP

#include <cstddef>
#include <numeric>
#include <vector>

#include "error.hpp"

namespace cuntzlab {

/// A bijection of {0, ..., n-1}, stored as its image list. As a matrix it
/// is the 0/1 matrix P with P e_i = e_{image[i]}.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t v : image_) {
      if (v >= image_.size() || seen[v])
        throw DomainError("image list is not a permutation");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> im(n);
    std::iota(im.begin(), im.end(), std::size_t{0});
    return Permutation(std::move(im));
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  Permutation inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
  }

  /// (*this) after `rhs`, matching the matrix product P_this * P_rhs.
  Permutation operator*(const Permutation& rhs) const {
    if (rhs.size() != size()) throw DimensionError("permutation size mismatch");
    std::vector<std::size_t> im(size());
    for (std::size_t i = 0; i < size(); ++i) im[i] = image_[rhs.image_[i]];
    return Permutation(std::move(im));
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (image_[i] != i) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

/// Matrix-level Kronecker product of permutation matrices, standard leg
/// order (first factor on the outer index).
inline Permutation kron(const Permutation& a, const Permutation& b) {
  const std::size_t m = b.size();
  std::vector<std::size_t> im(a.size() * m);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) im[i * m + j] = a(i) * m + b(j);
  return Permutation(std::move(im));
}

}  // namespace cuntzlab

#endif  // CUNTZLAB_PERMUTATION_HPP
