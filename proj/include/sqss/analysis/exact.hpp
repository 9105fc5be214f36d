#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace sqss {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Exact element a + b*sqrt(2) of Q(sqrt 2). Every amplitude reachable from
// |0>,|1>,|+>,|-> with CNOT, X and Hadamard lives here.
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(Rational a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a, Rational b) : a_(a), b_(b) {}

  static QSqrt2 inv_sqrt2() { return {0, Rational(1, 2)}; }

  const Rational& rational_part() const noexcept { return a_; }
  const Rational& sqrt2_part() const noexcept { return b_; }
  bool is_rational() const noexcept { return b_.numerator() == 0; }
  bool is_zero() const noexcept { return a_.numerator() == 0 && b_.numerator() == 0; }
  double to_double() const { return sqss::to_double(a_) + sqss::to_double(b_) * std::sqrt(2.0); }

  friend QSqrt2 operator+(const QSqrt2& x, const QSqrt2& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend QSqrt2 operator-(const QSqrt2& x, const QSqrt2& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend QSqrt2 operator-(const QSqrt2& x) { return {-x.a_, -x.b_}; }
  friend QSqrt2 operator*(const QSqrt2& x, const QSqrt2& y) {
    return {x.a_ * y.a_ + 2 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
  }
  QSqrt2& operator+=(const QSqrt2& y) { return *this = *this + y; }
  QSqrt2& operator*=(const QSqrt2& y) { return *this = *this * y; }
  friend bool operator==(const QSqrt2&, const QSqrt2&) = default;

 private:
  Rational a_{0};
  Rational b_{0};
};

}  // namespace sqss
