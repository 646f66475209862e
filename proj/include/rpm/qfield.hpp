#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "rpm/rational.hpp"

namespace rpm {

/// Element a + b*q of the cyclotomic field Q(q), q = exp(i*pi/3).
///
/// q is a root of q^2 - q + 1, so products reduce with q^2 -> q - 1 and the
/// inverse of q is 1 - q. Complex conjugation maps q to q^{-1}; the field
/// norm a^2 + ab + b^2 is a positive rational for every nonzero element.
class QField {
 public:
  QField() = default;
  QField(Rational a) : a_(std::move(a)) {}  // NOLINT: implicit lift
  QField(long a) : a_(a) {}                 // NOLINT: implicit lift
  QField(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QField q() { return {Rational(0), Rational(1)}; }
  static QField q_inv() { return {Rational(1), Rational(-1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& q_part() const { return b_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// Image under q -> q^{-1} (complex conjugation).
  QField conj() const { return {a_ + b_, -b_}; }

  Rational norm() const { return a_ * a_ + a_ * b_ + b_ * b_; }

  QField inverse() const {
    if (is_zero()) throw std::domain_error("QField: inverse of zero");
    Rational n = norm();
    QField c = conj();
    return {c.a_ / n, c.b_ / n};
  }

  QField& operator+=(const QField& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  QField& operator-=(const QField& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  QField& operator*=(const QField& o) {
    // (a + bq)(c + dq) = ac - bd + (ad + bc + bd) q
    Rational na = a_ * o.a_ - b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_ + b_ * o.b_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  QField& operator/=(const QField& o) { return *this *= o.inverse(); }

  friend QField operator+(QField x, const QField& y) { return x += y; }
  friend QField operator-(QField x, const QField& y) { return x -= y; }
  friend QField operator*(QField x, const QField& y) { return x *= y; }
  friend QField operator/(QField x, const QField& y) { return x /= y; }
  friend QField operator-(const QField& x) { return {-x.a_, -x.b_}; }

  friend bool operator==(const QField& x, const QField& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const QField& x, const QField& y) { return !(x == y); }

  QField pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    QField r(1), base(*this);
    auto e = static_cast<unsigned long>(n);
    while (e) {
      if (e & 1u) r *= base;
      base *= base;
      e >>= 1u;
    }
    return r;
  }

  std::complex<double> to_complex() const {
    const double s3 = 0.8660254037844386467637231707529362;
    return {a_.get_d() + 0.5 * b_.get_d(), s3 * b_.get_d()};
  }

  /// "a + b*q" with exact fraction strings; pure rationals print as "a".
  std::string to_string() const {
    if (b_ == 0) return to_fraction_string(a_);
    std::string bs = to_fraction_string(b_);
    if (a_ == 0) return bs + "*q";
    if (b_ < 0) return to_fraction_string(a_) + " - " + to_fraction_string(-b_) + "*q";
    return to_fraction_string(a_) + " + " + bs + "*q";
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

}  // namespace rpm
