#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rpm/qfield.hpp"
#include "rpm/rational.hpp"

namespace rpm {

/// Dense univariate polynomial, coefficients in ascending degree order.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading term.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Polynomial monomial(std::size_t degree, T coeff = T(1)) {
    std::vector<T> c(degree + 1, T(0));
    c[degree] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  /// (c0 + c1 x)^n
  static Polynomial linear_power(const T& c0, const T& c1, unsigned n) {
    Polynomial base({c0, c1});
    Polynomial r({T(1)});
    for (unsigned i = 0; i < n; ++i) r *= base;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coefficients() const { return c_; }

  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  template <class U>
  U operator()(const U& x) const {
    U r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + U(*it);
    return r;
  }

  Polynomial derivative(unsigned order = 1) const {
    std::vector<T> c = c_;
    for (unsigned o = 0; o < order; ++o) {
      if (c.empty()) break;
      std::vector<T> d;
      d.reserve(c.size() - 1);
      for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * T(static_cast<long>(k)));
      c = std::move(d);
    }
    return Polynomial(std::move(c));
  }

  /// x -> s*x
  Polynomial scaled_argument(const T& s) const {
    std::vector<T> c = c_;
    T p(1);
    for (auto& v : c) {
      v = v * p;
      p = p * s;
    }
    return Polynomial(std::move(c));
  }

  /// x^deg * p(1/x)
  Polynomial reversed() const { return Polynomial(std::vector<T>(c_.rbegin(), c_.rend())); }

  template <class U>
  Polynomial<U> lifted() const {
    std::vector<U> c;
    c.reserve(c_.size());
    for (const auto& v : c_) c.emplace_back(v);
    return Polynomial<U>(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    if (c_.empty() || o.c_.empty()) {
      c_.clear();
      return *this;
    }
    std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    c_ = std::move(r);
    trim();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& v : c_) v = v * s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division; returns {quotient, remainder}.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw std::domain_error("Polynomial: division by zero polynomial");
    std::vector<T> rem = c_;
    if (rem.size() < d.c_.size()) return {Polynomial(), *this};
    std::vector<T> quo(rem.size() - d.c_.size() + 1, T(0));
    const T lead = d.c_.back();
    for (std::size_t i = quo.size(); i-- > 0;) {
      T f = rem[i + d.c_.size() - 1] / lead;
      quo[i] = f;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[i + j] = rem[i + j] - f * d.c_[j];
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RationalPolynomial = Polynomial<Rational>;
using QFieldPolynomial = Polynomial<QField>;

}  // namespace rpm
