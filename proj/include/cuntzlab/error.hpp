#ifndef CUNTZLAB_ERROR_HPP
#define CUNTZLAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace cuntzlab {

/// Base of every error thrown by the library. `code()` is a stable
/// machine-readable tag used by the CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error("dimension_error", what) {}
};

/// A materialization would exceed the configured matrix cap.
class SizeError : public Error {
 public:
  SizeError(std::size_t rows, std::size_t cols, std::size_t cap)
      : Error("size_error", "requested " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " exceeds cap " +
                                std::to_string(cap)),
        rows_(rows),
        cols_(cols),
        cap_(cap) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t rows_, cols_, cap_;
};

/// An identity that must hold by construction did not. Never expected at
/// runtime; seeing one means a bug.
class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& what)
      : Error("internal_inconsistency", what) {}
};

}  // namespace cuntzlab

#endif  // CUNTZLAB_ERROR_HPP
