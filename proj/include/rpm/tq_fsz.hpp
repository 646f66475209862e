#pragma once

#include <string>
#include <vector>

#include "rpm/error.hpp"
#include "rpm/polynomial.hpp"
#include "rpm/qfield.hpp"
#include "rpm/rational.hpp"
#include "rpm/report.hpp"

namespace rpm::tq {

// Exact FSZ polynomials at the combinatorial point q = exp(i*pi/3), L = 2N.
// The twist enters only through u^N = q and u^{2N} = q^2.

inline void require_n(long n) {
  if (n < 1) throw UsageError("N must be >= 1 (got " + std::to_string(n) + ")");
}

inline QField qq() { return QField::q(); }
inline QField qi() { return QField::q_inv(); }

/// f_Q(x) = N! (2/3-N)_N [ sum_k x^{3k} / ((2/3-k)_N (N-k)! k!)
///                       + sum_k x^{3k+2} / ((-k-2/3)_{N+1} (N-k-1)! k!) ]
inline RationalPolynomial f_q_poly(long n) {
  require_n(n);
  const auto N = static_cast<unsigned>(n);
  std::vector<Rational> c(3 * N + 1);
  const Rational pre = factorial(N) * pochhammer(make_rational(2, 3) - Rational(N), N);
  for (unsigned k = 0; k <= N; ++k)
    c[3 * k] += pre / (pochhammer(make_rational(2, 3) - Rational(k), N) * factorial(N - k) * factorial(k));
  for (unsigned k = 0; k < N; ++k)
    c[3 * k + 2] += pre / (pochhammer(-Rational(k) - make_rational(2, 3), N + 1) * factorial(N - k - 1) * factorial(k));
  return RationalPolynomial(std::move(c));
}

/// f_P(x) = N! (2/3)_N [ sum_k x^{3k} / ((k-N+2/3)_N (N-k)! k!)
///                     + sum_k x^{3k+1} / ((k-N+1/3)_{N+1} (N-k-1)! k!) ]
inline RationalPolynomial f_p_poly(long n) {
  require_n(n);
  const auto N = static_cast<unsigned>(n);
  std::vector<Rational> c(3 * N + 1);
  const Rational pre = factorial(N) * pochhammer(make_rational(2, 3), N);
  for (unsigned k = 0; k <= N; ++k)
    c[3 * k] += pre / (pochhammer(Rational(k) - Rational(N) + make_rational(2, 3), N) * factorial(N - k) * factorial(k));
  for (unsigned k = 0; k < N; ++k)
    c[3 * k + 1] +=
        pre / (pochhammer(Rational(k) - Rational(N) + make_rational(1, 3), N + 1) * factorial(N - k - 1) * factorial(k));
  return RationalPolynomial(std::move(c));
}

/// (1 + x)^{2N}; also T(x) at the combinatorial point.
inline RationalPolynomial t_poly(long n) { return RationalPolynomial::linear_power(1, 1, static_cast<unsigned>(2 * n)); }
/// phi(x) = (1 - x)^{2N}.
inline RationalPolynomial phi_poly(long n) {
  return RationalPolynomial::linear_power(1, -1, static_cast<unsigned>(2 * n));
}

inline RationalPolynomial divide_out_zero(const RationalPolynomial& f, long n, const char* name) {
  auto [quo, rem] = f.divmod(t_poly(n));
  if (!rem.is_zero())
    throw VerificationError(std::string(name) + " does not vanish to order 2N at x = -1 (N=" + std::to_string(n) +
                            ")");
  return quo;
}

inline RationalPolynomial q_poly(long n) { return divide_out_zero(f_q_poly(n), n, "f_Q"); }
inline RationalPolynomial p_poly(long n) { return divide_out_zero(f_p_poly(n), n, "f_P"); }

struct Fsz {
  long n = 0;
  RationalPolynomial fq, fp, q, p;

  explicit Fsz(long n_) : n(n_), fq(f_q_poly(n_)), fp(f_p_poly(n_)), q(divide_out_zero(fq, n_, "f_Q")),
                          p(divide_out_zero(fp, n_, "f_P")) {}
};

inline QField eval(const RationalPolynomial& p, const QField& x) { return p(x); }
inline QField eval(const RationalPolynomial& p, unsigned order, const QField& x) { return p.derivative(order)(x); }

inline std::string exponents_string(const std::vector<long>& e) {
  std::string s;
  for (long k : e) s += (s.empty() ? "" : ",") + std::to_string(k);
  return s;
}

inline std::vector<long> nonzero_exponents(const QFieldPolynomial& p) {
  std::vector<long> out;
  for (std::size_t k = 0; k < p.coefficients().size(); ++k)
    if (!p.coefficients()[k].is_zero()) out.push_back(static_cast<long>(k));
  return out;
}

/// -(1+x)^{2N} Q(x) + q (1 - x/q)^{2N} Q(q^2 x) + q^{-1} (1 - q x)^{2N} Q(x/q^2).
/// Accepts any polynomial so perturbed inputs can be fed in.
inline QFieldPolynomial tq_residual(const RationalPolynomial& q_rational, long n) {
  const auto L = static_cast<unsigned>(2 * n);
  const QFieldPolynomial Q = q_rational.lifted<QField>();
  QFieldPolynomial r = QFieldPolynomial::linear_power(1, 1, L) * Q * QField(-1);
  r += QFieldPolynomial::linear_power(1, -qi(), L) * Q.scaled_argument(qq() * qq()) * qq();
  r += QFieldPolynomial::linear_power(1, -qq(), L) * Q.scaled_argument(qi() * qi()) * qi();
  return r;
}

inline Check verify_tq(const Fsz& f) {
  auto bad = nonzero_exponents(tq_residual(f.q, f.n));
  return {"tq", bad.empty(), bad.empty() ? "" : "nonzero coefficients at exponents " + exponents_string(bad)};
}

/// [s Q(s x) P(x/s) - s^{-1} Q(x/s) P(s x)] / (q - q^{-1}) for s = q (phi) or q^2 (T).
inline QFieldPolynomial wronskian(const RationalPolynomial& qr, const RationalPolynomial& pr, const QField& s) {
  const QFieldPolynomial Q = qr.lifted<QField>(), P = pr.lifted<QField>();
  const QField si = s.inverse();
  QFieldPolynomial w = Q.scaled_argument(s) * P.scaled_argument(si) * s;
  w -= Q.scaled_argument(si) * P.scaled_argument(s) * si;
  return w * (qq() - qi()).inverse();
}

inline Report verify_wronskian(const Fsz& f) {
  Report r;
  auto check_equal = [&](const std::string& name, const QFieldPolynomial& lhs, const RationalPolynomial& rhs) {
    auto bad = nonzero_exponents(lhs - rhs.lifted<QField>());
    r.check(name, bad.empty(), bad.empty() ? "" : "mismatch at exponents " + exponents_string(bad));
  };
  check_equal("wronskian_phi", wronskian(f.q, f.p, qq()), phi_poly(f.n));
  check_equal("wronskian_t", wronskian(f.q, f.p, qq() * qq()), t_poly(f.n));
  // T(q) from the T-Q relation at x = q with the product condition.
  const QField tq_lhs = (QField(1) - qq() * qq()).pow(2 * f.n) * (-qi()).pow(f.n);
  const QField tq_rhs = (QField(1) + qq()).pow(2 * f.n);
  r.check("t_at_q", tq_lhs == tq_rhs, tq_lhs.to_string() + " vs " + tq_rhs.to_string());
  return r;
}

/// Degrees, support classes, normalization and P(x) = x^N Q(1/x)/Q(0).
inline Report verify_structure(const Fsz& f) {
  Report r;
  const long n = f.n;
  auto support_ok = [](const RationalPolynomial& p, long forbidden) {
    for (std::size_t k = 0; k < p.coefficients().size(); ++k)
      if (static_cast<long>(k % 3) == forbidden && p.coefficients()[k] != 0) return false;
    return true;
  };
  r.check("deg_fq", f.fq.degree() == 3 * n && f.fq.leading() == 1);
  r.check("deg_fp", f.fp.degree() == 3 * n);
  r.check("support_fq", support_ok(f.fq, 1), "exponents = 1 mod 3 must vanish");
  r.check("support_fp", support_ok(f.fp, 2), "exponents = 2 mod 3 must vanish");
  r.check("deg_q_monic", f.q.degree() == n && f.q.leading() == 1);
  r.check("deg_p", f.p.degree() == n);
  const Rational q0 = f.q.coeff(0);
  r.check("q0_nonzero", q0 != 0);
  if (q0 != 0) r.check("p_from_q", f.p == f.q.reversed() * (Rational(1) / q0));
  return r;
}

// Boundary values at x = q^{-1} and x = -1.

struct BoundaryEntry {
  std::string name;
  QField direct;
  QField closed_form;
  bool matches() const { return direct == closed_form; }
};

inline std::vector<BoundaryEntry> boundary_values(const Fsz& f) {
  const long n = f.n;
  const auto N = static_cast<unsigned>(n);
  const QField q = qq(), x = qi(), m1(-1);
  const Rational Nr(n);
  const QField two_n_minus_1(2 * n - 1);
  const Rational head = factorial(2 * N - 1) / factorial(N - 1);

  const QField Qx = QField(head * gamma_shift_down(make_rational(1, 3), N)) * (QField(1) - x * x) / (x + 1).pow(2 * n);
  const QField Q1x = QField(Nr) * (q - 1) * (QField(Nr) * (q * 3 - 1) - q + 1) / (two_n_minus_1 * (q - x)) * Qx;
  const QField Q2x = -QField(Nr) * (QField(Nr) * (q * 8 * (n - 1) - 5 * n + 7) + (q - 1) * 4) /
                     (QField(2) * two_n_minus_1 * (QField(1) + x) * (q - x)) * Qx;
  const QField Px = QField(head * gamma_shift_down(make_rational(2, 3), N)) / (x + 1).pow(2 * n - 1);
  const QField P1x = QField(Nr) * ((QField(3 * n - 2) * (QField(1) - x * x)) - QField(2 * (2 * n - 1))) /
                     (two_n_minus_1 * (x + 1)) * Px;
  const QField P2x = QField(Nr) *
                     (QField(Nr * Nr) * (QField(1) - q * 3).pow(2) - QField(Nr) * (q + 1) * (q * 9 - 7) +
                      (q * (q + 2) - 1) * 2) /
                     (QField(2) * two_n_minus_1 * (x + 1).pow(2)) * Px;

  const Rational lead = pow(Rational(3), 2 * n) * factorial(N) / factorial(2 * N);
  const Rational Qm = lead / gamma_shift_down(make_rational(2, 3), N);
  const Rational Qm1 = -make_rational(n * (n + 1), 2 * n + 1) * Qm;
  const Rational Qm2 = make_rational(n * (n - 1) * (3 * n + 4), 6 * (2 * n + 1)) * Qm;
  const Rational Pm = lead / gamma_shift_down(make_rational(1, 3), N);
  const Rational Pm1 = -make_rational(n * n, 2 * n + 1) * Pm;
  const Rational Pm2 = make_rational(n * (n - 1) * (3 * n - 2), 6 * (2 * n + 1)) * Pm;

  return {
      {"Q(q^-1)", eval(f.q, 0, x), Qx},     {"Q'(q^-1)", eval(f.q, 1, x), Q1x}, {"Q''(q^-1)", eval(f.q, 2, x), Q2x},
      {"P(q^-1)", eval(f.p, 0, x), Px},     {"P'(q^-1)", eval(f.p, 1, x), P1x}, {"P''(q^-1)", eval(f.p, 2, x), P2x},
      {"Q(-1)", eval(f.q, 0, m1), Qm},      {"Q'(-1)", eval(f.q, 1, m1), Qm1},  {"Q''(-1)", eval(f.q, 2, m1), Qm2},
      {"P(-1)", eval(f.p, 0, m1), Pm},      {"P'(-1)", eval(f.p, 1, m1), Pm1},  {"P''(-1)", eval(f.p, 2, m1), Pm2},
  };
}

/// Q^{(k)}(-1) = k!/(2N+k)! f_Q^{(2N+k)}(-1), k = 0, 1, 2 (and likewise for P).
inline Report verify_leibniz(const Fsz& f) {
  Report r;
  const auto N2 = static_cast<unsigned>(2 * f.n);
  for (unsigned k = 0; k <= 2; ++k) {
    const Rational lq = f.q.derivative(k)(Rational(-1));
    const Rational rq = factorial(k) / factorial(N2 + k) * f.fq.derivative(N2 + k)(Rational(-1));
    r.check("leibniz_Q" + std::to_string(k), lq == rq);
    const Rational lp = f.p.derivative(k)(Rational(-1));
    const Rational rp = factorial(k) / factorial(N2 + k) * f.fp.derivative(N2 + k)(Rational(-1));
    r.check("leibniz_P" + std::to_string(k), lp == rp);
  }
  return r;
}

/// Translation invariance (prod z_i = 1 with u^N = q): Q(q^{-1})/Q(q) = q (-1/q)^N.
inline Check verify_product_condition(const Fsz& f) {
  const QField ratio = eval(f.q, 0, qi()) / eval(f.q, 0, qq());
  const QField expected = qq() * (-qi()).pow(f.n);
  return {"product_condition", ratio == expected, ratio.to_string() + " vs " + expected.to_string()};
}

inline Report verify_boundary(const Fsz& f) {
  Report r;
  for (const auto& e : boundary_values(f)) {
    r.check("boundary " + e.name, e.matches(),
            e.matches() ? "" : "direct " + e.direct.to_string() + " vs closed form " + e.closed_form.to_string());
    r.value(e.name, e.direct.to_string());
  }
  r.append(verify_leibniz(f));
  const Check pc = verify_product_condition(f);
  r.check(pc.name, pc.passed, pc.detail);
  return r;
}

// Hypergeometric route at x = q^{-1}, where -x^3 = 1.

/// 2F1(-n, a; c; 1) = (c-a)_n / (c)_n.
inline Rational chu_vandermonde(unsigned n, const Rational& a, const Rational& c) {
  return pochhammer(c - a, n) / pochhammer(c, n);
}

/// Terminating series 2F1(-n, a; c; 1) summed term by term.
inline Rational hypergeometric_unit(unsigned n, const Rational& a, const Rational& c) {
  Rational s = 0, t = 1;
  for (unsigned k = 0; k <= n; ++k) {
    s += t;
    t *= (Rational(k) - Rational(n)) * (a + Rational(k)) / ((c + Rational(k)) * Rational(k + 1));
  }
  return s;
}

inline Report hypergeometric_check(const Fsz& f) {
  Report r;
  const auto N = static_cast<unsigned>(f.n);
  const Rational Nr(f.n);
  const QField x = qi();
  r.check("argument_is_one", -(x * x * x) == QField(1));

  auto fq_closed = [&](auto&& F) {
    return QField(Rational(1) / gamma_shift_down(make_rational(2, 3), N)) *
           (QField(F(N, make_rational(1, 3) - Nr, make_rational(1, 3)) / pochhammer(make_rational(2, 3), N)) +
            x * x * QField(Nr / pochhammer(make_rational(-2, 3), N + 1) * F(N - 1, make_rational(2, 3) - Nr, make_rational(5, 3))));
  };
  auto fp_closed = [&](auto&& F) {
    return QField(pochhammer(make_rational(2, 3), N)) *
           (QField(gamma_shift_down(make_rational(2, 3), N) * F(N, make_rational(2, 3) - Nr, make_rational(2, 3))) +
            x * QField(Nr * 3 * gamma_shift_down(make_rational(1, 3), N) * F(N - 1, make_rational(1, 3) - Nr, make_rational(4, 3))));
  };
  const QField fq_direct = eval(f.fq, 0, x), fp_direct = eval(f.fp, 0, x);
  const QField fq_cv = fq_closed(chu_vandermonde), fp_cv = fp_closed(chu_vandermonde);
  const QField fq_series = fq_closed(hypergeometric_unit), fp_series = fp_closed(hypergeometric_unit);
  r.check("fq_chu_vandermonde", fq_direct == fq_cv, fq_direct.to_string() + " vs " + fq_cv.to_string());
  r.check("fp_chu_vandermonde", fp_direct == fp_cv, fp_direct.to_string() + " vs " + fp_cv.to_string());
  r.check("fq_series", fq_direct == fq_series);
  r.check("fp_series", fp_direct == fp_series);
  r.value("f_Q(q^-1)", fq_direct.to_string());
  r.value("f_P(q^-1)", fp_direct.to_string());
  return r;
}

// Recurrences for the sums behind f_Q^{(2N+d)}(-1), d = 0, 1, 2.

/// c_N = 9^N N! prod_{k=1}^N (2/3 - k).
inline Rational c_n(long n) {
  const auto N = static_cast<unsigned>(n);
  return pow(Rational(9), n) * factorial(N) / gamma_shift_down(make_rational(2, 3), N);
}

/// The two partial sums (first, second) with the second already negated.
inline std::pair<Rational, Rational> partial_sums(long n, long d) {
  const auto N = static_cast<unsigned>(n);
  auto sign = [](long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); };
  Rational s1 = 0, s2 = 0;
  for (unsigned k = 0; k <= N; ++k) {
    const long e = 3 * static_cast<long>(k) - 2 * n - d;
    s1 += sign(e) * factorial(3 * k) * inverse_factorial(e) /
          (pochhammer(make_rational(2, 3) - Rational(k), N) * factorial(N - k) * factorial(k));
  }
  for (unsigned k = 0; k < N; ++k) {
    const long e = 3 * static_cast<long>(k) + 2 - 2 * n - d;
    s2 += sign(e) * factorial(3 * k + 2) * inverse_factorial(e) /
          (pochhammer(-Rational(k) - make_rational(2, 3), N + 1) * factorial(N - k - 1) * factorial(k));
  }
  const Rational scale = pow(Rational(9), -n);
  return {s1 * scale, -s2 * scale};
}

struct SequencePair {
  std::vector<Rational> a1, a2;  // index n; entries below the first valid n are unused
};

/// Sequences for identity a (d = 0), b (d = 1) and c (d = 2), n = 1..n_max.
/// Identity c is defined from n = 2 (its normalizer vanishes at n = 1).
inline SequencePair sequences(long d, long n_max) {
  SequencePair s;
  s.a1.assign(static_cast<std::size_t>(n_max + 1), Rational(0));
  s.a2 = s.a1;
  for (long n = (d == 2 ? 2 : 1); n <= n_max; ++n) {
    auto [x1, x2] = partial_sums(n, d);
    Rational norm = 1;
    if (d == 1) norm = -Rational(n * (n + 1));
    if (d == 2) norm = make_rational(n * (n * n - 1) * (3 * n + 4), 6);
    s.a1[static_cast<std::size_t>(n)] = x1 / norm;
    s.a2[static_cast<std::size_t>(n)] = x2 / norm;
  }
  return s;
}

inline Rational recurrence_residual(long d, long n, const std::vector<Rational>& a) {
  const auto i = static_cast<std::size_t>(n);
  switch (d) {
    case 0: return Rational(6 + 4 * n) * a[i] + Rational(-5 * n - 8) * a[i + 1] + Rational(n + 2) * a[i + 2];
    case 1: return Rational(6 + 4 * n) * a[i] + Rational(-5 * n - 9) * a[i + 1] + Rational(n + 3) * a[i + 2];
    default:
      return Rational(2 * (2 * n + 5) * (3 * n + 4)) * a[i] - Rational(5 * (3 * n + 7) * (n + 2)) * a[i + 1] +
             Rational((3 * n + 10) * (n + 3)) * a[i + 2];
  }
}

inline Report recurrence_check(long n_max) {
  if (n_max < 3) throw UsageError("recurrence check needs N_max >= 3");
  Report r;
  const char* tag[3] = {"a", "b", "c"};
  // Stated initial conditions; the c) values sit at n = 2, 3 (first valid index 2).
  const Rational init[3][4] = {{2, 5, 1, 4},
                               {1, make_rational(5, 3), 0, make_rational(2, 3)},
                               {1, make_rational(20, 13), 0, make_rational(7, 13)}};
  for (long d = 0; d <= 2; ++d) {
    const SequencePair s = sequences(d, n_max);
    const long first = d == 2 ? 2 : 1;
    const auto f0 = static_cast<std::size_t>(first);
    const std::string t = tag[d];
    r.check(t + " initial conditions",
            s.a1[f0] == init[d][0] && s.a1[f0 + 1] == init[d][1] && s.a2[f0] == init[d][2] &&
                s.a2[f0 + 1] == init[d][3],
            "a1=" + to_fraction_string(s.a1[f0]) + "," + to_fraction_string(s.a1[f0 + 1]) +
                " a2=" + to_fraction_string(s.a2[f0]) + "," + to_fraction_string(s.a2[f0 + 1]));
    std::string bad;
    for (long n = first; n + 2 <= n_max; ++n) {
      if (recurrence_residual(d, n, s.a1) != 0) bad += " a1@" + std::to_string(n);
      if (recurrence_residual(d, n, s.a2) != 0) bad += " a2@" + std::to_string(n);
    }
    r.check(t + " recurrence", bad.empty(), bad);
    std::string diff_bad, ident_bad;
    for (long n = first; n <= n_max; ++n) {
      const auto i = static_cast<std::size_t>(n);
      if (s.a1[i] - s.a2[i] != 1) diff_bad += " " + std::to_string(n);
      // Direct derivative of f_Q against c_N times the normalizer.
      const auto N2 = static_cast<unsigned>(2 * n + d);
      const Rational direct = f_q_poly(n).derivative(N2)(Rational(-1));
      Rational rhs = c_n(n);
      if (d == 1) rhs *= -Rational(n * (n + 1));
      if (d == 2) rhs *= make_rational(n * (n * n - 1) * (3 * n + 4), 6);
      if (direct != rhs) ident_bad += " " + std::to_string(n);
      if (direct != rhs * (s.a1[i] - s.a2[i])) ident_bad += " sum@" + std::to_string(n);
    }
    r.check(t + " a1 - a2 = 1", diff_bad.empty(), diff_bad);
    r.check(t + " identity", ident_bad.empty(), ident_bad);
  }
  return r;
}

}  // namespace rpm::tq
