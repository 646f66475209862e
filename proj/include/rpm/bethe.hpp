#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "rpm/error.hpp"
#include "rpm/report.hpp"
#include "rpm/tq_fsz.hpp"

namespace rpm::tq {

using Complex = std::complex<double>;
using LComplex = std::complex<long double>;

inline Complex q_complex() { return std::polar(1.0, std::numbers::pi / 3.0); }
inline LComplex q_lcomplex() { return std::polar(1.0L, std::numbers::pi_v<long double> / 3.0L); }

struct BetheRoots {
  long n = 0;
  std::vector<LComplex> x;  // roots of Q
  std::vector<LComplex> z;  // z_i = u (x_i - q)/(1 - q x_i)
  double bae_residual = 0.0;       // max |lhs/rhs - 1| over the Bethe equations
  double product_residual = 0.0;   // |prod z_i - 1|
  double min_separation = 0.0;     // smallest distance between two roots
};

/// Parlett-Reinsch balancing of a square matrix, in place.
inline void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

inline constexpr mp_bitcnt_t kPolishBits = 256;

/// Newton refinement of a root of an exact rational polynomial in 256-bit
/// floating point; Q has simple roots, so a few steps suffice.
inline LComplex polish_root(const RationalPolynomial& p, Complex start) {
  std::vector<mpf_class> c;
  for (const auto& v : p.coefficients()) c.emplace_back(v, kPolishBits);
  mpf_class re(start.real(), kPolishBits), im(start.imag(), kPolishBits);
  for (int it = 0; it < 12; ++it) {
    // Horner for p and p' together.
    mpf_class pr(0, kPolishBits), pi(0, kPolishBits), dr(0, kPolishBits), di(0, kPolishBits);
    for (auto k = c.size(); k-- > 0;) {
      mpf_class ndr = dr * re - di * im + pr, ndi = dr * im + di * re + pi;
      mpf_class npr = pr * re - pi * im + c[k], npi = pr * im + pi * re;
      dr = ndr;
      di = ndi;
      pr = npr;
      pi = npi;
    }
    const mpf_class den = dr * dr + di * di;
    if (den == 0) break;
    re -= (pr * dr + pi * di) / den;
    im -= (pi * dr - pr * di) / den;
  }
  return {static_cast<long double>(re.get_d()) + static_cast<long double>(mpf_class(re - re.get_d()).get_d()),
          static_cast<long double>(im.get_d()) + static_cast<long double>(mpf_class(im - im.get_d()).get_d())};
}

/// Roots of a real polynomial: balanced companion matrix eigenvalues, each
/// refined by polish_root.
inline std::vector<LComplex> polynomial_roots(const RationalPolynomial& p) {
  const long deg = p.degree();
  if (deg < 1) throw UsageError("polynomial has no roots");
  std::vector<double> c;
  for (const auto& v : p.coefficients()) c.push_back(Rational(v / p.leading()).get_d());
  const auto n = static_cast<Eigen::Index>(deg);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)];
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigensolver failed");
  std::vector<LComplex> roots;
  for (Eigen::Index i = 0; i < n; ++i) roots.push_back(polish_root(p, es.eigenvalues()[i]));
  return roots;
}

inline BetheRoots bethe_roots(const Fsz& f) {
  BetheRoots b;
  b.n = f.n;
  const long L = 2 * f.n;
  const LComplex q = q_lcomplex();
  const LComplex u = std::polar(1.0L, std::numbers::pi_v<long double> / (3.0L * static_cast<long double>(f.n)));
  b.x = polynomial_roots(f.q);
  const auto n = b.x.size();
  const LComplex uL = std::pow(u, static_cast<long double>(L));
  const long double sign = (f.n - 1) % 2 == 0 ? 1.0L : -1.0L;
  LComplex prod_z = 1.0L;
  b.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const LComplex xi = b.x[i];
    const LComplex lhs = uL * std::pow((xi - q) / (1.0L - q * xi), static_cast<long double>(L));
    LComplex rhs = sign;
    for (std::size_t j = 0; j < n; ++j) {
      rhs *= (q * q * b.x[j] - xi) / (q * q * xi - b.x[j]);
      if (j != i) b.min_separation = std::min(b.min_separation, static_cast<double>(std::abs(xi - b.x[j])));
    }
    b.bae_residual = std::max(b.bae_residual, static_cast<double>(std::abs(lhs / rhs - 1.0L)));
    b.z.push_back(u * (xi - q) / (1.0L - q * xi));
    prod_z *= b.z.back();
  }
  b.product_residual = static_cast<double>(std::abs(prod_z - 1.0L));
  return b;
}

/// E = Delta (2N - L/2) - sum_i (u/z_i + z_i/u) with Delta = -1/2, L = 2N.
inline Complex xxz_energy_from_z(const BetheRoots& b) {
  const LComplex u = std::polar(1.0L, std::numbers::pi_v<long double> / (3.0L * static_cast<long double>(b.n)));
  LComplex e = -0.5L * static_cast<long double>(b.n);
  for (const auto& z : b.z) e -= u / z + z / u;
  return Complex(e);
}

/// The x-variable energy as printed:
/// -sum_i [ (q - 1/q)/(1 - x_i) + (1 - q^2)/(q - x_i/q) + (3/2) 2_q ] with 2_q = 1.
/// It does not reproduce the z-form value; reported, not asserted.
inline Complex xxz_energy_printed_form(const BetheRoots& b) {
  const LComplex q = q_lcomplex();
  LComplex e = 0.0L;
  for (const auto& x : b.x) e -= (q - 1.0L / q) / (1.0L - x) + (1.0L - q * q) / (q - x / q) + 1.5L;
  return Complex(e);
}

/// (1-q^2)/(1+q^2) sum_i [1/(1 - q x_i) - q/(q - x_i)] - L.
inline Complex lambda_sum_from_roots(const BetheRoots& b) {
  const LComplex q = q_lcomplex();
  LComplex s = 0.0L;
  for (const auto& x : b.x) s += 1.0L / (1.0L - q * x) - q / (q - x);
  return Complex((1.0L - q * q) / (1.0L + q * q) * s - static_cast<long double>(2 * b.n));
}

inline std::string complex_string(Complex v) {
  return std::to_string(v.real()) + (v.imag() >= 0 ? "+" : "") + std::to_string(v.imag()) + "i";
}

/// Exact Q-form: (1-q^2)/(1+q^2) (q^-1 Q'(q^-1)/Q(q^-1) - q Q'(q)/Q(q)) - L.
inline QField lambda_from_q(const Fsz& f) {
  const QField q = qq(), x = qi(), one(1);
  const QField a = x * eval(f.q, 1, x) / eval(f.q, 0, x);
  const QField b = q * eval(f.q, 1, q) / eval(f.q, 0, q);
  return (one - q * q) / (one + q * q) * (a - b) - QField(2 * f.n);
}

inline constexpr double kBaeTolerance = 1e-8;
inline constexpr double kProductTolerance = 1e-10;
inline constexpr double kEnergyTolerance = 1e-10;

inline Report verify_bethe(const Fsz& f) {
  Report r;
  const BetheRoots b = bethe_roots(f);
  const double L = static_cast<double>(2 * f.n);
  r.check("bae_residual", b.bae_residual < kBaeTolerance, std::to_string(b.bae_residual));
  r.check("product_z", b.product_residual < kProductTolerance, std::to_string(b.product_residual));
  const QField lq = lambda_from_q(f);
  r.check("lambda_q_form_zero", lq.is_zero(), lq.to_string());
  const Complex e = xxz_energy_from_z(b);
  r.check("energy_from_roots", std::abs(e - Complex(-0.75 * L)) < kEnergyTolerance, complex_string(e));
  const Complex ls = lambda_sum_from_roots(b);
  r.check("lambda_sum_from_roots", std::abs(ls) < kEnergyTolerance, std::to_string(std::abs(ls)));
  r.value("bae_residual", std::to_string(b.bae_residual));
  r.value("min_root_separation", std::to_string(b.min_separation));
  r.value("energy_printed_x_form (diagnostic)", complex_string(xxz_energy_printed_form(b)));
  return r;
}

}  // namespace rpm::tq
