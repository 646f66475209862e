#pragma once

#include <map>
#include <string>

#include "rpm/error.hpp"
#include "rpm/report.hpp"
#include "rpm/tq_fsz.hpp"

namespace rpm::tq {

// Parameter derivatives of T at x = q from the two Wronskian relations
//   T(x)   (w - 1/w) = w^2 Q(q^2 x) P(x/q^2) - w^-2 Q(x/q^2) P(q^2 x)
//   phi(x) (w - 1/w) = w   Q(q x)   P(x/q)   - w^-1 Q(x/q)   P(q x)
// with w = u^N. Differentiating in a parameter brings in the unknown
// parameter derivatives of Q and P; they are tracked symbolically and must
// cancel between the T relation at x = q and the phi relation at x = q^-2.

/// known + sum_k coeff_k * unknown_k, unknowns named like "dQ'(q^-1)".
struct LinearForm {
  QField known;
  std::map<std::string, QField> unknown;

  void add_unknown(const std::string& key, const QField& c) {
    auto& v = unknown[key];
    v += c;
    if (v.is_zero()) unknown.erase(key);
  }
  LinearForm& operator+=(const LinearForm& o) {
    known += o.known;
    for (const auto& [k, v] : o.unknown) add_unknown(k, v);
    return *this;
  }
  LinearForm scaled(const QField& s) const {
    LinearForm r;
    r.known = known * s;
    for (const auto& [k, v] : unknown) r.add_unknown(k, v * s);
    return r;
  }
  bool same_unknowns(const LinearForm& o) const { return unknown == o.unknown; }
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
};

inline std::string point_name(const QField& x) {
  if (x == qi()) return "q^-1";
  if (x == QField(-1)) return "-1";
  return x.to_string();
}

/// Labelled polynomial (Q or P) entering a product term.
struct Factor {
  const RationalPolynomial* poly;
  std::string label;
  QField at(unsigned order, const QField& x) const { return eval(*poly, order, x); }
  std::string key(bool x_derivative, const QField& x) const {
    return "d" + label + (x_derivative ? "'" : "") + "(" + point_name(x) + ")";
  }
};

/// One product term c * F(a x) G(b x) of a Wronskian; the parameter
/// derivatives of a, b, c are da, db, dc.
struct ProductTerm {
  Factor first, second;
  QField a, da, b, db, c, dc;
};

/// Parameter derivative of the term at x, optionally after an x-derivative.
inline LinearForm differentiate(const ProductTerm& t, const QField& x, bool x_derivative) {
  const QField X = t.a * x, Y = t.b * x;
  auto F = [&](unsigned k) { return t.first.at(k, X); };
  auto G = [&](unsigned k) { return t.second.at(k, Y); };
  LinearForm r;
  if (!x_derivative) {
    r.known = t.dc * F(0) * G(0) + t.c * (t.da * x * F(1) * G(0) + t.db * x * F(0) * G(1));
    r.add_unknown(t.first.key(false, X), t.c * G(0));
    r.add_unknown(t.second.key(false, Y), t.c * F(0));
    return r;
  }
  r.known = t.dc * (t.a * F(1) * G(0) + t.b * F(0) * G(1)) +
            t.c * (t.da * F(1) * G(0) + t.a * t.da * x * F(2) * G(0) + t.a * F(1) * t.db * x * G(1) +
                   t.db * F(0) * G(1) + t.b * t.da * x * F(1) * G(1) + t.b * F(0) * t.db * x * G(2));
  r.add_unknown(t.first.key(true, X), t.c * t.a * G(0));
  r.add_unknown(t.second.key(false, Y), t.c * t.a * F(1));
  r.add_unknown(t.first.key(false, X), t.c * t.b * G(1));
  r.add_unknown(t.second.key(true, Y), t.c * t.b * F(0));
  return r;
}

/// rho with r1.unknown == rho * r2.unknown, or throws if not proportional.
inline QField elimination_ratio(const LinearForm& r1, const LinearForm& r2) {
  if (r2.unknown.empty()) throw VerificationError("nothing to eliminate");
  const auto& [key, v2] = *r2.unknown.begin();
  auto it = r1.unknown.find(key);
  if (it == r1.unknown.end()) throw VerificationError("unknown " + key + " missing from the first relation");
  const QField rho = it->second / v2;
  if (!r1.same_unknowns(r2.scaled(rho))) throw VerificationError("unknown parameter derivatives do not cancel");
  return rho;
}

struct Wronskians {
  Factor Q, P;
  QField w = qq();

  // Term lists with parameter derivatives filled in by the caller.
  ProductTerm t_first(const QField& da, const QField& db, const QField& dc) const {
    return {Q, P, qq() * qq(), da, qi() * qi(), db, w * w, dc};
  }
  ProductTerm t_second(const QField& da, const QField& db, const QField& dc) const {
    return {Q, P, qi() * qi(), da, qq() * qq(), db, -(w * w).inverse(), dc};
  }
  ProductTerm phi_first(const QField& da, const QField& db, const QField& dc) const {
    return {Q, P, qq(), da, qi(), db, w, dc};
  }
  ProductTerm phi_second(const QField& da, const QField& db, const QField& dc) const {
    return {Q, P, qi(), da, qq(), db, -w.inverse(), dc};
  }
};

/// Everything needed for the two drifts, with the intermediate worksheet
/// quantities kept for reporting.
struct DerivativeWorksheet {
  long n = 0;
  QField T, T1, T2, phi1;  // T(q), T'(q), T''(q), phi'(q^-2)

  // Twist direction (D = w d/dw at fixed q; u d/du = N D).
  LinearForm alpha_t, alpha_phi;  // D of x-derivatives of the two relations
  QField alpha_rho;
  QField DT1;                     // D[T'](q)
  LinearForm uA;                  // u A (unknowns only)
  QField uB;                      // u B
  QField uT1u_elim;              // -N c (T' + phi') + (3/2) u B
  LinearForm uA_phi;              // phi side unknown part, expected -uA
  QField uB_phi;                  // phi side known part, expected uB/2

  // q direction at fixed w.
  LinearForm beta_t, beta_phi, beta_t0, beta_phi0;
  QField beta_rho, beta_rho0;
  QField Tq, Tq_from_identity;    // T_q(q) from the Wronskians and from T(q) = (1-q^2)^{2N}(-1/q)^N
  QField T1q;                     // T'_q(q)
  LinearForm A_T, A_T_swap, A_phi;
  LinearForm A_T_formula;
  QField B_T, B_T_swap, B_phi;
  QField B_T_formula, B_T_swap_formula;
  QField T1q_closed;               // (3/2)(q^2 B_T - q^-2 (B_T)_swap)/(q - q^-1)

  QField lambda0;                 // Lambda_0 at the stochastic point from T
  QField lambda_alpha, lambda_beta;
  QField beta_printed_display;      // literal dLambda/dbeta display (diagnostic)
};

/// B_T with roles of F, G given: 2(q F'(-1)G(q^-1) + q^-2 F''(-1)G(q^-1) + F(-1)G'(q^-1) + q^-1 F(-1)G''(q^-1)).
inline QField b_t_formula(const Factor& F, const Factor& G) {
  const QField m1(-1), x = qi();
  return QField(2) * (qq() * F.at(1, m1) * G.at(0, x) + qi() * qi() * F.at(2, m1) * G.at(0, x) +
                      F.at(0, m1) * G.at(1, x) + qi() * F.at(0, m1) * G.at(2, x));
}

/// A_T with roles of F, G given, chain-rule form:
/// q^2 (dF'(-1) G(q^-1) + F'(-1) dG(q^-1)) + q^-2 (dF(-1) G'(q^-1) + F(-1) dG'(q^-1)).
inline LinearForm a_t_form(const Factor& F, const Factor& G) {
  const QField m1(-1), x = qi(), q2 = qq() * qq(), qm2 = qi() * qi();
  LinearForm r;
  r.add_unknown(F.key(true, m1), q2 * G.at(0, x));
  r.add_unknown(G.key(false, x), q2 * F.at(1, m1));
  r.add_unknown(F.key(false, m1), qm2 * G.at(1, x));
  r.add_unknown(G.key(true, x), qm2 * F.at(0, m1));
  return r;
}

inline DerivativeWorksheet derivative_worksheet(const Fsz& f) {
  DerivativeWorksheet ws;
  ws.n = f.n;
  const long n = f.n, L = 2 * f.n;
  const QField q = qq(), x_t = qq(), x_phi = qi() * qi();
  const QField w = q;
  const QField w_minus = w - w.inverse(), w_plus = w + w.inverse();
  const RationalPolynomial Tp = t_poly(n), Phi = phi_poly(n);
  ws.T = eval(Tp, 0, q);
  ws.T1 = eval(Tp, 1, q);
  ws.T2 = eval(Tp, 2, q);
  ws.phi1 = eval(Phi, 1, x_phi);

  Wronskians W{{&f.q, "Q"}, {&f.p, "P"}, w};
  const QField zero(0);

  // Twist: D w^2 = 2w^2, D(-w^-2) = 2w^-2, D w = w, D(-w^-1) = w^-1.
  ws.alpha_t = differentiate(W.t_first(zero, zero, QField(2) * w * w), x_t, true) +
               differentiate(W.t_second(zero, zero, QField(2) * (w * w).inverse()), x_t, true);
  ws.alpha_phi = differentiate(W.phi_first(zero, zero, w), x_phi, true) +
                 differentiate(W.phi_second(zero, zero, w.inverse()), x_phi, true);
  // D[T'] w_minus + T' w_plus = alpha_t ; phi' w_plus = alpha_phi.
  ws.alpha_rho = elimination_ratio(ws.alpha_t, ws.alpha_phi);
  ws.DT1 = (ws.alpha_t.known - ws.T1 * w_plus - ws.alpha_rho * (ws.alpha_phi.known - ws.phi1 * w_plus)) / w_minus;

  const QField Nq(n), Lq(L);
  const QField c = (q + qi()) / (q - qi());
  ws.uA = ws.alpha_t.scaled(Nq / (q - qi()));
  ws.uA.known = 0;
  const Factor& Q = W.Q;
  const Factor& P = W.P;
  const QField m1(-1), xi = qi();
  ws.uB = Lq *
          (qi() * qi() * Q.at(1, m1) * P.at(0, xi) + Q.at(0, m1) * P.at(1, xi) + q * q * Q.at(1, xi) * P.at(0, m1) +
           Q.at(0, xi) * P.at(1, m1)) /
          (q - qi());
  ws.uA_phi = ws.alpha_phi.scaled(Nq / (q - qi()));
  ws.uA_phi.known = 0;
  ws.uB_phi = ws.alpha_phi.known * Nq / (q - qi());
  ws.uT1u_elim = -Nq * c * (ws.T1 + ws.phi1) + QField(make_rational(3, 2)) * ws.uB;

  // q direction: d(q^2) = 2q, d(q^-2) = -2q^-3, d(q) = 1, d(q^-1) = -q^-2; w fixed.
  const QField d_q2 = QField(2) * q, d_qm2 = QField(-2) * qi().pow(3), d_q = 1, d_qm = -(qi() * qi());
  ws.beta_t = differentiate(W.t_first(d_q2, d_qm2, zero), x_t, true) +
              differentiate(W.t_second(d_qm2, d_q2, zero), x_t, true);
  ws.beta_phi = differentiate(W.phi_first(d_q, d_qm, zero), x_phi, true) +
                differentiate(W.phi_second(d_qm, d_q, zero), x_phi, true);
  // T'_q w_minus = beta_t ; 0 = beta_phi (phi does not depend on q).
  ws.beta_rho = elimination_ratio(ws.beta_t, ws.beta_phi);
  ws.T1q = (ws.beta_t.known - ws.beta_rho * ws.beta_phi.known) / w_minus;

  ws.beta_t0 = differentiate(W.t_first(d_q2, d_qm2, zero), x_t, false) +
               differentiate(W.t_second(d_qm2, d_q2, zero), x_t, false);
  ws.beta_phi0 = differentiate(W.phi_first(d_q, d_qm, zero), x_phi, false) +
                 differentiate(W.phi_second(d_qm, d_q, zero), x_phi, false);
  ws.beta_rho0 = elimination_ratio(ws.beta_t0, ws.beta_phi0);
  ws.Tq = (ws.beta_t0.known - ws.beta_rho0 * ws.beta_phi0.known) / w_minus;
  // d/dq of (1-q^2)^{2N}(-1/q)^N is the total derivative T_q + T'.
  ws.Tq_from_identity = ws.T * (QField(-4 * n) * q / (QField(1) - q * q) - Nq * qi()) - ws.T1;

  // Worksheet pieces of the q derivative, unit weight.
  const LinearForm t_term = differentiate({Q, P, q * q, d_q2, qi() * qi(), d_qm2, 1, 0}, x_t, true);
  const LinearForm t_term_swap = differentiate({P, Q, q * q, d_q2, qi() * qi(), d_qm2, 1, 0}, x_t, true);
  const LinearForm phi_term = differentiate({Q, P, q, d_q, qi(), d_qm, 1, 0}, x_phi, true);
  ws.B_T = t_term.known;
  ws.B_T_swap = t_term_swap.known;
  ws.A_T = t_term;
  ws.A_T.known = 0;
  ws.A_T_swap = t_term_swap;
  ws.A_T_swap.known = 0;
  ws.A_phi = phi_term;
  ws.A_phi.known = 0;
  ws.B_phi = phi_term.known;
  ws.A_T_formula = a_t_form(Q, P);
  ws.B_T_formula = b_t_formula(Q, P);
  ws.B_T_swap_formula = b_t_formula(P, Q);
  ws.T1q_closed = QField(make_rational(3, 2)) * (q * q * ws.B_T_formula - qi() * qi() * ws.B_T_swap_formula) / (q - qi());

  // Lambda_0 = (q(1-q^2) T'(q)/T(q) - L)/(1+q^2).
  const QField one(1), R = ws.T1 / ws.T;
  ws.lambda0 = (q * (one - q * q) * R - Lq) / (one + q * q);

  // Twist: d/dalpha = D / (2(q - q^-1)) at the stochastic point; T(q) does not depend on w.
  ws.lambda_alpha = q * (one - q * q) / (one + q * q) * ws.DT1 / (QField(2) * (q - qi()) * ws.T);

  // Anisotropy: e^-beta = q + q^-1. Because Lambda_0 vanishes here, the
  // derivative of the 1/(1+q^2) prefactor drops out.
  const QField dR = (ws.T2 + ws.T1q) / ws.T - ws.T1 * (ws.T1 + ws.Tq) / (ws.T * ws.T);
  const QField dLdq = ((one - QField(3) * q * q) * R + q * (one - q * q) * dR) / (one + q * q);
  const QField dbdq = -(one - qi() * qi()) / (q + qi());
  ws.lambda_beta = dLdq / dbdq;

  const QField den = (q * q - one) * (q * q + one).pow(2);
  ws.beta_printed_display = QField(2 * L) / den + (q.pow(4) - one) * ws.Tq * ws.T1 / (den * ws.T * ws.T) +
                          ((one - qi() * qi()) * (ws.T2 + ws.T1q) + (one + QField(4) * qi() * qi() - q * q) * ws.T1) /
                              (den * ws.T);
  return ws;
}

inline Rational lambda_alpha_formula(long n) { return make_rational(3 * n, 2 * (4 * n * n - 1)); }
inline Rational lambda_beta_formula(long n) { return make_rational(n * (5 * n * n - 2), 4 * n * n - 1); }

inline Rational require_rational(const QField& v, const char* what) {
  if (!v.is_rational()) throw VerificationError(std::string(what) + " is not rational: " + v.to_string());
  return v.rational_part();
}

inline Rational lambda_alpha(long n) {
  return require_rational(derivative_worksheet(Fsz(n)).lambda_alpha, "lambda_alpha");
}
inline Rational lambda_beta(long n) { return require_rational(derivative_worksheet(Fsz(n)).lambda_beta, "lambda_beta"); }

inline Report verify_worksheet(const DerivativeWorksheet& ws) {
  Report r;
  const QField half(make_rational(1, 2));
  r.check("lambda0_zero", ws.lambda0.is_zero(), ws.lambda0.to_string());
  r.check("twist_elimination_ratio", ws.alpha_rho == QField(-1), ws.alpha_rho.to_string());
  r.check("twist_B", ws.alpha_t.known * QField(ws.n) / (qq() - qi()) == ws.uB);
  r.check("twist_A_phi_is_minus_A", ws.uA_phi.same_unknowns(ws.uA.scaled(QField(-1))));
  r.check("twist_B_phi_is_half_B", ws.uB_phi == ws.uB * half);
  r.check("twist_elimination", QField(ws.n) * ws.DT1 == ws.uT1u_elim,
          (QField(ws.n) * ws.DT1).to_string() + " vs " + ws.uT1u_elim.to_string());
  r.check("q_elimination_ratio", ws.beta_rho == QField(-1), ws.beta_rho.to_string());
  r.check("Tq_consistent", ws.Tq == ws.Tq_from_identity, ws.Tq.to_string() + " vs " + ws.Tq_from_identity.to_string());
  r.check("B_T_formula", ws.B_T == ws.B_T_formula);
  r.check("B_T_swap_formula", ws.B_T_swap == ws.B_T_swap_formula);
  r.check("A_T_formula", ws.A_T.same_unknowns(ws.A_T_formula));
  r.check("A_phi_is_minus_A_T_swap", ws.A_phi.same_unknowns(ws.A_T_swap.scaled(QField(-1))));
  r.check("two_B_phi_is_B_T_swap", QField(2) * ws.B_phi == ws.B_T_swap);
  r.check("T1q_closed_form", ws.T1q == ws.T1q_closed, ws.T1q.to_string() + " vs " + ws.T1q_closed.to_string());
  r.value("T'_q(q)", ws.T1q.to_string());
  r.value("D[T'](q)", ws.DT1.to_string());
  r.value("B_T", ws.B_T.to_string());
  r.value("uB", ws.uB.to_string());
  r.value("dLambda/dbeta printed display (diagnostic)", ws.beta_printed_display.to_string());
  return r;
}

inline Report verify_lambdas(long n) {
  const Fsz f(n);
  const DerivativeWorksheet ws = derivative_worksheet(f);
  Report r = verify_worksheet(ws);
  const Rational la_expected = lambda_alpha_formula(n), lb_expected = lambda_beta_formula(n);
  r.check("lambda_alpha_rational", ws.lambda_alpha.is_rational(), ws.lambda_alpha.to_string());
  r.check("lambda_beta_rational", ws.lambda_beta.is_rational(), ws.lambda_beta.to_string());
  r.check("lambda_alpha", ws.lambda_alpha == QField(la_expected),
          ws.lambda_alpha.to_string() + " vs " + to_fraction_string(la_expected));
  r.check("lambda_beta", ws.lambda_beta == QField(lb_expected),
          ws.lambda_beta.to_string() + " vs " + to_fraction_string(lb_expected));
  r.value("lambda_alpha", ws.lambda_alpha.is_rational() ? to_fraction_string(ws.lambda_alpha.rational_part())
                                                        : ws.lambda_alpha.to_string());
  r.value("lambda_beta", ws.lambda_beta.is_rational() ? to_fraction_string(ws.lambda_beta.rational_part())
                                                      : ws.lambda_beta.to_string());
  return r;
}

}  // namespace rpm::tq
