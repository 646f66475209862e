#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rpm/error.hpp"
#include "rpm/pdp.hpp"
#include "rpm/state_space.hpp"

namespace rpm::scgf {

struct DeformedParams {
  double alpha = 0.0;  // conjugate to N^global
  double beta = 0.0;   // conjugate to N^diamond

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw UsageError("alpha and beta must be finite");
  }
};

struct SCGFResult {
  double lambda = 0.0;
  double residual = 0.0;  // ||M x - lambda x||_inf / ||x||_inf
  long iterations = 0;
  std::optional<double> gap;  // lambda minus the largest real part of the rest of the spectrum
  bool dense = false;
};

inline constexpr double kDefaultTol = 1e-13;
inline constexpr long kMaxIterations = 1'000'000;
inline constexpr std::size_t kDenseBelow = 512;
inline constexpr long kDefaultCap = 12;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// M = sum_i (W_i - I); the move of site i from C to C' carries the weight
/// exp(alpha*dN^global + beta*dN^diamond). Reflections are diagonal and cancel.
inline SparseMatrix build_deformed(const StateSpace& space, const DeformedParams& p) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(space.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t s = 0; s < space.size(); ++s) {
    for (const auto& m : space.moves(s)) {
      if (m.deltas.move_class == MoveClass::Reflection) continue;
      const double w = std::exp(p.alpha * m.deltas.delta_global + p.beta * m.deltas.delta_diamond);
      trip.emplace_back(static_cast<Eigen::Index>(m.target), static_cast<Eigen::Index>(s), w);
      trip.emplace_back(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s), -1.0);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline SparseMatrix build_deformed(long length, const DeformedParams& p, long cap = kDefaultCap) {
  require_length(length);
  if (length > cap)
    throw ResourceError("deformed generator cap exceeded: L=" + std::to_string(length) + " > " + std::to_string(cap));
  return build_deformed(StateSpace(length), p);
}

inline double residual_of(const SparseMatrix& m, const Eigen::VectorXd& x, double lambda) {
  Eigen::VectorXd r = m * x - lambda * x;
  return r.lpNorm<Eigen::Infinity>() / x.lpNorm<Eigen::Infinity>();
}

/// Perron root by power iteration on M + shift*I, shift = 1 - min diagonal.
/// For the deformed generator this is at most L (every state has a peak), and
/// the strictly positive diagonal rules out periodicity. The estimate is
/// sum(Ax)/sum(x) with x > 0; stops when successive estimates differ by less
/// than tol and the eigenpair residual is below kPowerResidual.
inline constexpr double kPowerResidual = 1e-11;

inline SCGFResult power_iteration(const SparseMatrix& m, double tol = kDefaultTol, long max_iter = kMaxIterations) {
  const Eigen::Index n = m.rows();
  double shift = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) shift = std::max(shift, -m.coeff(k, k));
  shift += 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y(n);
  double prev = std::numeric_limits<double>::quiet_NaN();
  SCGFResult r;
  for (long it = 1; it <= max_iter; ++it) {
    y = m * x + shift * x;
    const double est = y.sum() / x.sum() - shift;
    const double res = (y - (est + shift) * x).lpNorm<Eigen::Infinity>() / x.lpNorm<Eigen::Infinity>();
    x = y / y.sum();
    r.iterations = it;
    if (std::abs(est - prev) < tol && res < kPowerResidual) {
      r.lambda = est;
      r.residual = residual_of(m, x, est);
      return r;
    }
    prev = est;
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(max_iter) +
                       " iterations (last estimate " + std::to_string(prev) + ")");
}

/// Dense eigen-decomposition; used for small matrices and to report the gap.
inline SCGFResult dense_largest(const SparseMatrix& m) {
  Eigen::MatrixXd d(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(d, true);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  const auto& ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k)
    if (ev[k].real() > ev[best].real()) best = k;
  SCGFResult r;
  r.dense = true;
  r.lambda = ev[best].real();
  Eigen::VectorXd x = es.eigenvectors().col(best).real();
  r.residual = residual_of(m, x, r.lambda);
  if (ev.size() > 1) {
    double second = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < ev.size(); ++k)
      if (k != best) second = std::max(second, ev[k].real());
    r.gap = r.lambda - second;
  }
  return r;
}

inline SCGFResult largest_eigenvalue(const SparseMatrix& m, double tol = kDefaultTol) {
  SCGFResult r = static_cast<std::size_t>(m.rows()) < kDenseBelow ? dense_largest(m) : power_iteration(m, tol);
  if (!(r.residual < 1e-8)) throw NumericalError("eigenpair residual too large: " + std::to_string(r.residual));
  return r;
}

inline SCGFResult lambda(const StateSpace& space, const DeformedParams& p, double tol = kDefaultTol) {
  return largest_eigenvalue(build_deformed(space, p), tol);
}

struct Derivatives {
  double d_alpha = 0.0;
  double d_beta = 0.0;
};

/// Central differences at the stochastic point, optionally with one
/// Richardson step (4 D(h/2) - D(h)) / 3.
inline Derivatives scgf_derivatives(const StateSpace& space, double h, bool richardson = true) {
  if (!(h > 0.0 && h <= 1e-3)) throw UsageError("step must satisfy 0 < h <= 1e-3");
  auto central = [&](double step, bool in_alpha) {
    DeformedParams plus{in_alpha ? step : 0.0, in_alpha ? 0.0 : step};
    DeformedParams minus{-plus.alpha, -plus.beta};
    return (lambda(space, plus).lambda - lambda(space, minus).lambda) / (2.0 * step);
  };
  auto derivative = [&](bool in_alpha) {
    const double d1 = central(h, in_alpha);
    if (!richardson) return d1;
    return (4.0 * central(h / 2.0, in_alpha) - d1) / 3.0;
  };
  return {derivative(true), derivative(false)};
}

inline Derivatives scgf_derivatives(long length, double h, bool richardson = true, long cap = kDefaultCap) {
  require_length(length);
  if (length > cap)
    throw ResourceError("deformed generator cap exceeded: L=" + std::to_string(length) + " > " + std::to_string(cap));
  return scgf_derivatives(StateSpace(length), h, richardson);
}

/// Midpoint convexity of Lambda on `points` equally spaced samples of
/// [-half_width, half_width] along the alpha line (in_alpha) or the beta line.
/// Returns the largest violation Lambda(mid) - (Lambda(a)+Lambda(b))/2 (<= 0 when convex).
inline double midpoint_convexity_violation(const StateSpace& space, bool in_alpha, int points = 9,
                                           double half_width = 0.5) {
  if (points < 3) throw UsageError("need at least 3 sample points");
  std::vector<double> lam;
  for (int k = 0; k < points; ++k) {
    const double s = -half_width + 2.0 * half_width * k / (points - 1);
    lam.push_back(lambda(space, in_alpha ? DeformedParams{s, 0.0} : DeformedParams{0.0, s}).lambda);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < points; ++a)
    for (int b = a + 2; b < points; b += 2) worst = std::max(worst, lam[(a + b) / 2] - 0.5 * (lam[a] + lam[b]));
  return worst;
}

}  // namespace rpm::scgf
