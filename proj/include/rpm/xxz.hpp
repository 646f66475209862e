#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rpm/error.hpp"
#include "rpm/report.hpp"
#include "rpm/scgf.hpp"
#include "rpm/state_space.hpp"

namespace rpm::xxz {

using Complex = std::complex<double>;
using SpinOperator = Eigen::SparseMatrix<Complex>;
using ComplexVector = Eigen::VectorXcd;

// Spin up is bit 1; site i is bit i. Site indices are 0-based and cyclic.

inline constexpr long kFullSpaceCap = 12;
inline constexpr long kSectorCap = 16;

inline void require_even_length(long length, long cap) {
  if (length < 2 || length % 2 != 0) throw UsageError("L must be even and >= 2, got " + std::to_string(length));
  if (length > cap) throw ResourceError("L=" + std::to_string(length) + " exceeds cap " + std::to_string(cap));
}

inline Complex two_q(Complex q) { return q + 1.0 / q; }

/// kappa = (u^N + u^-N)^2 with N = L/2.
inline Complex kappa(long length, Complex u) {
  const Complex un = std::pow(u, static_cast<double>(length / 2));
  return (un + 1.0 / un) * (un + 1.0 / un);
}

/// e_i on the full 2^L space. On the pair (i, i+1) with states ordered
/// (up down, down up) the block is [[q, u], [1/u, 1/q]]; all else vanishes.
inline SpinOperator tl_generator_matrix(long length, Complex q, Complex u, long i) {
  require_even_length(length, kFullSpaceCap);
  if (i < 0 || i >= length) throw UsageError("generator index out of range");
  const std::uint32_t dim = 1u << length;
  const long j = (i + 1) % length;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::uint32_t s = 0; s < dim; ++s) {
    const bool si = (s >> i) & 1u, sj = (s >> j) & 1u;
    if (si == sj) continue;
    const std::uint32_t t = s ^ (1u << i) ^ (1u << j);
    trip.emplace_back(s, s, si ? q : 1.0 / q);
    // sigma+_i sigma-_{i+1} raises i: coefficient u.
    trip.emplace_back(t, s, si ? 1.0 / u : u);
  }
  SpinOperator m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline double max_abs(const SpinOperator& m) {
  double r = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpinOperator::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

inline SpinOperator identity(long dim) {
  SpinOperator id(dim, dim);
  id.setIdentity();
  return id;
}

struct TLResiduals {
  double tl1 = 0.0;       // e_i^2 - 2_q e_i
  double tl2 = 0.0;       // e_i e_{i+-1} e_i - e_i
  double tl3 = 0.0;       // [e_i, e_j], |i - j| > 1
  double periodic = 0.0;  // J I J - kappa J
  double periodic_dual = 0.0;  // I J I - kappa I
};

inline TLResiduals tl_residuals(long length, Complex q, Complex u) {
  std::vector<SpinOperator> e;
  for (long i = 0; i < length; ++i) e.push_back(tl_generator_matrix(length, q, u, i));
  TLResiduals r;
  const Complex tq = two_q(q);
  for (long i = 0; i < length; ++i) {
    const auto& a = e[static_cast<std::size_t>(i)];
    r.tl1 = std::max(r.tl1, max_abs(SpinOperator(a * a - tq * a)));
    for (long d : {1L, length - 1}) {
      const auto& b = e[static_cast<std::size_t>((i + d) % length)];
      r.tl2 = std::max(r.tl2, max_abs(SpinOperator(a * b * a - a)));
    }
    for (long j = 0; j < length; ++j) {
      const long dist = std::min((i - j + length) % length, (j - i + length) % length);
      if (dist < 2) continue;
      const auto& b = e[static_cast<std::size_t>(j)];
      r.tl3 = std::max(r.tl3, max_abs(SpinOperator(a * b - b * a)));
    }
  }
  SpinOperator jl = identity(1L << length), il = identity(1L << length);
  for (long i = 0; i < length; i += 2) jl = jl * e[static_cast<std::size_t>(i)];
  for (long i = 1; i < length; i += 2) il = il * e[static_cast<std::size_t>(i)];
  const Complex k = kappa(length, u);
  r.periodic = max_abs(SpinOperator(jl * il * jl - k * jl));
  r.periodic_dual = max_abs(SpinOperator(il * jl * il - k * il));
  return r;
}

inline constexpr double kTLTolerance = 1e-12;

inline Report verify_tl(long length, Complex q, Complex u) {
  const TLResiduals t = tl_residuals(length, q, u);
  Report r;
  const std::string tag = "L=" + std::to_string(length) + " ";
  r.check(tag + "e_i^2 = 2_q e_i", t.tl1 < kTLTolerance, std::to_string(t.tl1));
  r.check(tag + "e_i e_(i+-1) e_i = e_i", t.tl2 < kTLTolerance, std::to_string(t.tl2));
  r.check(tag + "distant generators commute", t.tl3 < kTLTolerance, std::to_string(t.tl3));
  r.check(tag + "J I J = kappa J", t.periodic < kTLTolerance, std::to_string(t.periodic));
  r.check(tag + "I J I = kappa I", t.periodic_dual < kTLTolerance, std::to_string(t.periodic_dual));
  return r;
}

struct XXZParams {
  long length = 4;
  double delta = -0.5;
  Complex u{1.0, 0.0};

  void validate() const {
    if (length < 2 || length % 2 != 0) throw UsageError("L must be even and >= 2");
    if (!std::isfinite(delta)) throw UsageError("Delta must be finite");
  }
};

/// Delta = -1/2, u = exp(2 pi i/(3L)).
inline XXZParams combinatorial_point(long length) {
  return {length, -0.5, std::polar(1.0, 2.0 * std::numbers::pi / (3.0 * static_cast<double>(length)))};
}

/// L-bit strings with L/2 bits set, increasing.
inline std::vector<std::uint32_t> sector_basis(long length) {
  std::vector<std::uint32_t> b;
  for (std::uint32_t s = 0; s < (1u << length); ++s)
    if (std::popcount(s) == length / 2) b.push_back(s);
  return b;
}

/// bond_twist(i) is the hopping coefficient of sigma+_i sigma-_{i+1} on bond i.
template <class BondTwist>
SpinOperator build_sector_hamiltonian(long length, double delta, BondTwist bond_twist) {
  const auto basis = sector_basis(length);
  std::vector<Eigen::Triplet<Complex>> trip;
  auto index = [&](std::uint32_t s) {
    return static_cast<int>(std::lower_bound(basis.begin(), basis.end(), s) - basis.begin());
  };
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::uint32_t s = basis[k];
    double diag = 0.0;
    for (long i = 0; i < length; ++i) {
      const long j = (i + 1) % length;
      const bool si = (s >> i) & 1u, sj = (s >> j) & 1u;
      diag -= 0.5 * delta * (si == sj ? 1.0 : -1.0);
      if (si == sj) continue;
      const std::uint32_t t = s ^ (1u << i) ^ (1u << j);
      const Complex w = bond_twist(i);
      trip.emplace_back(index(t), static_cast<int>(k), si ? -1.0 / w : -w);
    }
    trip.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
  }
  SpinOperator h(static_cast<long>(basis.size()), static_cast<long>(basis.size()));
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

/// H = -sum_i [u s+_i s-_{i+1} + u^-1 s-_i s+_{i+1} + (Delta/2) sz_i sz_{i+1}] on S_z = 0.
inline SpinOperator build_xxz(const XXZParams& p) {
  p.validate();
  require_even_length(p.length, kSectorCap);
  return build_sector_hamiltonian(p.length, p.delta, [&](long) { return p.u; });
}

/// Same spectrum, twist moved onto the closing bond: u^L there, 1 elsewhere.
inline SpinOperator build_xxz_boundary_twist(const XXZParams& p) {
  p.validate();
  require_even_length(p.length, kSectorCap);
  const Complex ul = std::pow(p.u, static_cast<double>(p.length));
  return build_sector_hamiltonian(p.length, p.delta,
                                  [&](long i) { return i == p.length - 1 ? ul : Complex(1.0); });
}

inline double hermiticity_defect(const SpinOperator& h) {
  return max_abs(SpinOperator(h - SpinOperator(h.adjoint())));
}

/// Restriction of a full-space operator to the S_z = 0 sector.
inline SpinOperator restrict_to_sector(const SpinOperator& m, long length) {
  const auto basis = sector_basis(length);
  const auto n = static_cast<long>(basis.size());
  SpinOperator p(1L << length, n);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (long k = 0; k < n; ++k) trip.emplace_back(basis[static_cast<std::size_t>(k)], k, 1.0);
  p.setFromTriplets(trip.begin(), trip.end());
  return SpinOperator(SpinOperator(p.transpose()) * m * p);
}

/// max |sum_i (e_i - 1) - (-H - 3L/4)| entrywise on the sector, stochastic point.
inline double generator_hamiltonian_defect(long length) {
  const XXZParams p = combinatorial_point(length);
  const Complex q = std::polar(1.0, std::numbers::pi / 3.0);
  SpinOperator sum(1L << length, 1L << length);
  for (long i = 0; i < length; ++i) sum += tl_generator_matrix(length, q, p.u, i);
  const SpinOperator l = restrict_to_sector(sum, length) - static_cast<double>(length) * identity(sector_basis(length).size());
  const SpinOperator h = build_xxz(p);
  const SpinOperator rhs = -h - 0.75 * static_cast<double>(length) * identity(h.rows());
  return max_abs(SpinOperator(l - rhs));
}

struct LanczosResult {
  double eigenvalue = 0.0;
  double residual = 0.0;
  long restarts = 0;
  long matvecs = 0;
};

inline constexpr double kRitzTolerance = 1e-10;
inline constexpr long kKrylovSize = 80;
inline constexpr long kMaxRestarts = 200;

/// Smallest eigenvalue of a Hermitian operator: Lanczos with full
/// reorthogonalization, restarted from the current Ritz vector.
inline LanczosResult lanczos_smallest(const SpinOperator& h, double tol = kRitzTolerance, unsigned seed = 12345) {
  const long n = h.rows();
  if (n == 0) throw UsageError("empty operator");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexVector start(n);
  for (long k = 0; k < n; ++k) start[k] = Complex(dist(rng), dist(rng));
  start.normalize();
  LanczosResult out;
  const long m = std::min<long>(n, kKrylovSize);
  for (long restart = 0; restart <= kMaxRestarts; ++restart) {
    Eigen::MatrixXcd v(n, m);
    std::vector<double> alpha, beta;
    v.col(0) = start;
    long used = 0;
    for (long j = 0; j < m; ++j) {
      ComplexVector w = h * v.col(j);
      ++out.matvecs;
      alpha.push_back(v.col(j).dot(w).real());
      for (int pass = 0; pass < 2; ++pass)
        w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
      used = j + 1;
      const double b = w.norm();
      if (j + 1 == m || b < 1e-13) break;
      beta.push_back(b);
      v.col(j + 1) = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (long k = 0; k < used; ++k) t(k, k) = alpha[static_cast<std::size_t>(k)];
    for (long k = 0; k + 1 < used; ++k) t(k, k + 1) = t(k + 1, k) = beta[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()[0];
    ComplexVector y = v.leftCols(used) * es.eigenvectors().col(0).cast<Complex>();
    y.normalize();
    const ComplexVector hy = h * y;
    ++out.matvecs;
    out.eigenvalue = theta;
    out.residual = (hy - theta * y).norm();
    out.restarts = restart;
    if (out.residual < tol) return out;
    start = y;
  }
  throw NumericalError("Lanczos did not converge: Ritz residual " + std::to_string(out.residual));
}

inline double ground_energy(const XXZParams& p) { return lanczos_smallest(build_xxz(p)).eigenvalue; }

/// Dense sorted spectrum, for small cross-checks.
inline Eigen::VectorXd dense_spectrum(const SpinOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(h)};
  if (es.info() != Eigen::Success) throw NumericalError("dense Hermitian eigensolver failed");
  return es.eigenvalues();
}

/// (alpha, beta) -> (Delta, u): e^-beta = 2 cos gamma, Delta = -cos gamma;
/// e^alpha = (u^N + u^-N)^2 with u = exp(i theta), theta = arccos(e^{alpha/2}/2)/N.
inline XXZParams bridge_params(long length, double alpha, double beta) {
  if (length < 2 || length % 2 != 0) throw UsageError("L must be even and >= 2");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw UsageError("alpha and beta must be finite");
  const double cg = std::exp(-beta) / 2.0;
  const double ck = std::exp(alpha / 2.0) / 2.0;
  if (cg > 1.0) throw UsageError("beta below -ln 2: anisotropy leaves the unit-circle regime");
  if (ck > 1.0) throw UsageError("alpha above 2 ln 2: twist leaves the unit circle");
  const double theta = std::acos(ck) / static_cast<double>(length / 2);
  return {length, -cg, std::polar(1.0, theta)};
}

/// Lambda = -e^beta E_0 - 3L/4.
inline double lambda_bridge(long length, double alpha, double beta) {
  return -std::exp(beta) * ground_energy(bridge_params(length, alpha, beta)) - 0.75 * static_cast<double>(length);
}

inline constexpr double kGroundTolerance = 1e-10;
inline constexpr double kBridgeTolerance = 1e-8;

inline Report verify_ground_energy(long length) {
  Report r;
  const double e = ground_energy(combinatorial_point(length));
  const double expect = -0.75 * static_cast<double>(length);
  r.check("L=" + std::to_string(length) + " ground energy = -3L/4", std::abs(e - expect) < kGroundTolerance,
          std::to_string(e));
  return r;
}

inline Report verify_bridge(long length, const std::vector<double>& alphas, const std::vector<double>& betas) {
  Report r;
  const StateSpace space(length);
  for (double a : alphas)
    for (double b : betas) {
      const double via_spin = lambda_bridge(length, a, b);
      const double via_pdp = scgf::lambda(space, {a, b}).lambda;
      const double diff = std::abs(via_spin - via_pdp);
      r.check("L=" + std::to_string(length) + " bridge (" + std::to_string(a) + "," + std::to_string(b) + ")",
              diff < kBridgeTolerance, "spin " + std::to_string(via_spin) + " pdp " + std::to_string(via_pdp));
    }
  return r;
}

/// Small-L consistency: Hermiticity, sector relation to the TL generator,
/// Lanczos against the dense spectrum, and bond-twist vs boundary-twist spectra.
inline Report verify_small(long length) {
  Report r;
  const XXZParams p = combinatorial_point(length);
  const SpinOperator h = build_xxz(p);
  const std::string tag = "L=" + std::to_string(length) + " ";
  const double herm = hermiticity_defect(h);
  r.check(tag + "hermitian", herm < 1e-13, std::to_string(herm));
  const double rel = generator_hamiltonian_defect(length);
  r.check(tag + "sum(e_i - 1) = -H - 3L/4", rel < kTLTolerance, std::to_string(rel));
  const Eigen::VectorXd spec = dense_spectrum(h);
  const double lz = lanczos_smallest(h).eigenvalue;
  r.check(tag + "lanczos = dense minimum", std::abs(lz - spec[0]) < kGroundTolerance,
          std::to_string(lz) + " vs " + std::to_string(spec[0]));
  const Eigen::VectorXd spec_b = dense_spectrum(build_xxz_boundary_twist(p));
  const double tw = (spec - spec_b).cwiseAbs().maxCoeff();
  r.check(tag + "bond twist ~ boundary twist", tw < 1e-12, std::to_string(tw));
  return r;
}

}  // namespace rpm::xxz
