#include "isorad/matrix.hpp"

#include <utility>

namespace isorad {

Matrix::Matrix(std::size_t dim, u64 modulus) : dim_(dim), p_(modulus), a_(dim * dim, 0) {
  if (modulus < 2 || modulus > 0xffffffffULL) throw Error("matrix modulus out of range");
}

Matrix Matrix::identity(std::size_t dim, u64 modulus) { return scalar(dim, modulus, 1); }

Matrix Matrix::scalar(std::size_t dim, u64 modulus, u64 value) {
  Matrix m(dim, modulus);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, value);
  return m;
}

Matrix Matrix::from_rows(std::size_t dim, u64 modulus, const std::vector<i64>& entries) {
  if (entries.size() != dim * dim) throw Error("wrong number of matrix entries");
  Matrix m(dim, modulus);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    m.a_[k] = static_cast<std::uint32_t>(reduce_signed(entries[k], modulus));
  }
  return m;
}

void Matrix::require_compatible(const Matrix& o) const {
  if (dim_ != o.dim_ || p_ != o.p_) throw Error("incompatible matrices");
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_compatible(o);
  Matrix r(dim_, p_);
  const std::size_t n = dim_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p_ < (1u << 16)) {
        u64 s = 0;
        for (std::size_t k = 0; k < n; ++k) s += static_cast<u64>(a_[i * n + k]) * o.a_[k * n + j];
        r.a_[i * n + j] = static_cast<std::uint32_t>(s % p_);
      } else {
        u128 s = 0;
        for (std::size_t k = 0; k < n; ++k) s += static_cast<u64>(a_[i * n + k]) * o.a_[k * n + j];
        r.a_[i * n + j] = static_cast<std::uint32_t>(s % p_);
      }
    }
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_compatible(o);
  Matrix r(dim_, p_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = static_cast<std::uint32_t>(add_mod(a_[k], o.a_[k], p_));
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_compatible(o);
  Matrix r(dim_, p_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = static_cast<std::uint32_t>(sub_mod(a_[k], o.a_[k], p_));
  return r;
}

Matrix Matrix::scaled(u64 c) const {
  Matrix r(dim_, p_);
  c %= p_;
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = static_cast<std::uint32_t>(mul_mod(a_[k], c, p_));
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(dim_, p_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r.a_[j * dim_ + i] = a_[i * dim_ + j];
  return r;
}

bool Matrix::is_scalar(u64 c) const {
  c %= p_;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (a_[i * dim_ + j] != (i == j ? c : 0)) return false;
  return true;
}

bool Matrix::is_identity() const { return is_scalar(1); }

u64 Matrix::det() const {
  std::vector<u64> m(a_.begin(), a_.end());
  const std::size_t n = dim_;
  u64 d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
      d = sub_mod(0, d, p_);
    }
    d = mul_mod(d, m[c * n + c], p_);
    const u64 inv = inv_mod(m[c * n + c], p_);
    for (std::size_t r = c + 1; r < n; ++r) {
      const u64 f = mul_mod(m[r * n + c], inv, p_);
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) m[r * n + j] = sub_mod(m[r * n + j], mul_mod(f, m[c * n + j], p_), p_);
    }
  }
  return d;
}

Matrix Matrix::inverse() const {
  const std::size_t n = dim_;
  std::vector<u64> m(a_.begin(), a_.end());
  Matrix inv = identity(n, p_);
  std::vector<u64> b(inv.a_.begin(), inv.a_.end());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) throw Error("singular matrix");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m[piv * n + j], m[c * n + j]);
        std::swap(b[piv * n + j], b[c * n + j]);
      }
    }
    const u64 s = inv_mod(m[c * n + c], p_);
    for (std::size_t j = 0; j < n; ++j) {
      m[c * n + j] = mul_mod(m[c * n + j], s, p_);
      b[c * n + j] = mul_mod(b[c * n + j], s, p_);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const u64 f = m[r * n + c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[r * n + j] = sub_mod(m[r * n + j], mul_mod(f, m[c * n + j], p_), p_);
        b[r * n + j] = sub_mod(b[r * n + j], mul_mod(f, b[c * n + j], p_), p_);
      }
    }
  }
  for (std::size_t k = 0; k < b.size(); ++k) inv.a_[k] = static_cast<std::uint32_t>(b[k]);
  return inv;
}

std::vector<u64> Matrix::charpoly() const {
  // Reduce to upper Hessenberg form by similarity, then expand by the
  // standard three-term recurrence on leading principal blocks.
  const std::size_t n = dim_;
  std::vector<u64> h(a_.begin(), a_.end());
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return h[i * n + j]; };
  for (std::size_t c = 0; c + 2 <= n; ++c) {
    std::size_t piv = c + 1;
    while (piv < n && at(piv, c) == 0) ++piv;
    if (piv == n) continue;
    if (piv != c + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(piv, j), at(c + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(at(i, piv), at(i, c + 1));
    }
    const u64 inv = inv_mod(at(c + 1, c), p_);
    for (std::size_t r = c + 2; r < n; ++r) {
      const u64 f = mul_mod(at(r, c), inv, p_);
      if (f == 0) continue;
      // Row op R_r -= f R_{c+1}, then column op C_{c+1} += f C_r.
      for (std::size_t j = 0; j < n; ++j) at(r, j) = sub_mod(at(r, j), mul_mod(f, at(c + 1, j), p_), p_);
      for (std::size_t i = 0; i < n; ++i) at(i, c + 1) = add_mod(at(i, c + 1), mul_mod(f, at(i, r), p_), p_);
    }
  }
  // polys[k] = charpoly of leading k x k block, coefficients low to high.
  std::vector<std::vector<u64>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t m = k - 1;
    std::vector<u64> next(k + 1, 0);
    // (T - h_mm) * polys[m]
    for (std::size_t i = 0; i < polys[m].size(); ++i) {
      next[i + 1] = add_mod(next[i + 1], polys[m][i], p_);
      next[i] = sub_mod(next[i], mul_mod(at(m, m), polys[m][i], p_), p_);
    }
    u64 prod = 1;
    for (std::size_t i = m; i-- > 0;) {
      prod = mul_mod(prod, at(i + 1, i), p_);
      const u64 coef = mul_mod(prod, at(i, m), p_);
      if (coef == 0) continue;
      for (std::size_t t = 0; t < polys[i].size(); ++t)
        next[t] = sub_mod(next[t], mul_mod(coef, polys[i][t], p_), p_);
    }
    polys[k] = std::move(next);
  }
  return polys[n];
}

bool Matrix::code_fits(std::size_t dim, u64 modulus) {
  u128 r = 1;
  for (std::size_t k = 0; k < dim * dim; ++k) {
    r *= modulus;
    if (r > ~u64{0}) return false;
  }
  return true;
}

u64 Matrix::code() const {
  u64 c = 0;
  for (std::size_t k = a_.size(); k-- > 0;) c = c * p_ + a_[k];
  return c;
}

Matrix standard_form(std::size_t g, u64 modulus) {
  Matrix j(2 * g, modulus);
  for (std::size_t i = 0; i < g; ++i) {
    j.set(i, g + i, 1);
    j.set(g + i, i, modulus - 1);
  }
  return j;
}

}  // namespace isorad
