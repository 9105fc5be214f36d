#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "sqss/core/errors.hpp"

namespace sqss {

using Amplitude = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;

// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Matrix(std::size_t dim, std::vector<Amplitude> data) : dim_(dim), data_(std::move(data)) {
    if (data_.size() != dim_ * dim_) {
      throw UsageError("Matrix: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                       std::to_string(data_.size()));
    }
  }
  Matrix(std::size_t dim, std::initializer_list<Amplitude> data)
      : Matrix(dim, std::vector<Amplitude>(data)) {}

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  // Control is the first (most significant) qubit.
  static Matrix cnot() {
    return Matrix(4, {1, 0, 0, 0,
                      0, 1, 0, 0,
                      0, 0, 0, 1,
                      0, 0, 1, 0});
  }

  static Matrix hadamard() {
    return Matrix(2, {kInvSqrt2, kInvSqrt2,
                      kInvSqrt2, -kInvSqrt2});
  }

  static Matrix pauli_x() { return Matrix(2, {0, 1, 1, 0}); }

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  Amplitude& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Amplitude& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  const std::vector<Amplitude>& data() const noexcept { return data_; }

  Matrix adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw UsageError("Matrix product: dimension mismatch");
    Matrix out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Amplitude x = a(r, k);
        if (x == Amplitude{}) continue;
        for (std::size_t c = 0; c < a.dim_; ++c) out(r, c) += x * b(k, c);
      }
    return out;
  }

  // max |(U^dagger U - I)_{rc}|
  double unitarity_error() const {
    const Matrix p = adjoint() * (*this);
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) {
        const Amplitude expected = (r == c) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(p(r, c) - expected));
      }
    return worst;
  }

  bool is_unitary(double tol = kUnitarityTolerance) const {
    for (const auto& x : data_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return unitarity_error() <= tol;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Amplitude> data_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim() * b.dim();
  Matrix out(n);
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac)
      for (std::size_t br = 0; br < b.dim(); ++br)
        for (std::size_t bc = 0; bc < b.dim(); ++bc)
          out(ar * b.dim() + br, ac * b.dim() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

}  // namespace sqss
