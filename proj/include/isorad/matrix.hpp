#pragma once

#include <cstdint>
#include <vector>

#include "isorad/modmath.hpp"

namespace isorad {

/// Dense square matrix over a prime field F_p with p < 2^32.
class Matrix {
 public:
  Matrix(std::size_t dim, u64 modulus);

  static Matrix identity(std::size_t dim, u64 modulus);
  static Matrix scalar(std::size_t dim, u64 modulus, u64 value);
  /// Row-major entries, each reduced mod `modulus`.
  static Matrix from_rows(std::size_t dim, u64 modulus, const std::vector<i64>& entries);

  std::size_t dim() const noexcept { return dim_; }
  u64 modulus() const noexcept { return p_; }

  u64 operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, u64 v) { a_[i * dim_ + j] = static_cast<std::uint32_t>(v % p_); }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(u64 c) const;
  Matrix transpose() const;

  bool is_identity() const;
  bool is_scalar(u64 c) const;

  u64 det() const;
  /// Gaussian-elimination inverse; throws Error when singular.
  Matrix inverse() const;
  /// Coefficients c_0..c_n of det(T*I - M), monic (c_n = 1).
  std::vector<u64> charpoly() const;

  /// Injective integer key for hashing, valid when p^(dim^2) < 2^64.
  u64 code() const;
  static bool code_fits(std::size_t dim, u64 modulus);

  friend bool operator==(const Matrix&, const Matrix&) = default;
  friend bool operator<(const Matrix& a, const Matrix& b) { return a.a_ < b.a_; }

 private:
  void require_compatible(const Matrix& o) const;

  std::size_t dim_;
  u64 p_;
  std::vector<std::uint32_t> a_;
};

/// The standard symplectic form [[0, I_g], [-I_g, 0]].
Matrix standard_form(std::size_t g, u64 modulus);

}  // namespace isorad
