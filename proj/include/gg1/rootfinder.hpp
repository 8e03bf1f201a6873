// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Left-half-plane zeroes of F: closed-form seeds from the core term via
         a real rho-system, Newton-refined root ladders, winding-number origin
         search, and the gated-batch closed-form roots.
*/

#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <gg1/errors.hpp>
#include <gg1/exp_poly.hpp>
#include <gg1/transforms.hpp>

namespace gg1 {

/*!
  The core term T(theta) = c exp(alpha theta) theta^{-m} - 1 whose roots seed
  the ladder. The classical sign condition is c alpha^m > 0 (roots at even
  multiples of pi in the angle system); c alpha^m < 0 arises for secondary
  cores split off a mixture and flips the targets to odd multiples.
*/
struct CoreTerm {
  double c = 0.0;
  double alpha = 0.0;  ///< < 0
  int m = 1;

  static CoreTerm make(double c, double alpha, int m);

  double beta() const { return m * std::log(std::abs(alpha)) + std::log(std::abs(c)); }
  bool odd_parity() const;  ///< true when c alpha^m < 0
  cplx eval(cplx theta) const;
  ValueDeriv eval_vd(cplx theta) const;
};

/*!
  Real two-equation system equivalent to sigma(z) = exp(z + beta) - z^m = 0
  restricted to |z| = rho: x(rho) = m ln rho - beta, y = sqrt(rho^2 - x^2),
  omega = arccos(x/rho), and the strictly increasing angle function
  h(rho) = y - m omega on the admissible set {rho : |x(rho)| <= rho}.
*/
struct RhoSystem {
  int m = 1;
  double beta = 0.0;

  // Admissible-set boundary data, precomputed by make():
  double r0 = 0.0;        ///< x(r0) = -r0 (left end, h = -m pi)
  bool monotone = false;  ///< true when x(rho) < rho everywhere (r1, r2 absent)
  bool tangent = false;   ///< boundary case x(m) = m: double root at rho = m
  double r1 = 0.0;        ///< x(r1) = r1 (entering the excluded gap)
  double r2 = 0.0;        ///< x(r2) = r2 (leaving the excluded gap)

  static RhoSystem make(int m, double beta);

  double x(double rho) const { return m * std::log(rho) - beta; }
  double y(double rho) const;
  double h(double rho) const;
  double h_deriv(double rho) const;  ///< (rho^2 - 2 m x + m^2) / (rho y)
  cplx z_at(double rho) const;       ///< x + iy, upper half plane

  /// Solves h(rho) = target on the admissible set (target > -m pi);
  /// bisection to relative width 1e-13 plus three Newton steps.
  double solve_h(double target) const;
};

/// sigma-plane roots with |angle target| < m pi plus the boundary reals:
/// the positive reals r1, r2 (even parity), -r0 when the parity admits it,
/// and conjugate-implied complex entries stored with Im > 0.
/// Multiplicity 2 marks the tangent double root at rho = m.
std::vector<std::pair<cplx, int>> sigma_origin_roots(const RhoSystem& sys,
                                                     bool odd_parity);

/// n-th positive-angle sigma root (even parity: h = 2 n pi, n >= 1;
/// odd parity: h = (2n+1) pi, n >= 0). Upper half plane.
cplx sigma_ladder_root(const RhoSystem& sys, bool odd_parity, long n);

/// Ladder seeds u_n of the core, upper-half theta plane, n in [nFrom, nTo].
std::vector<cplx> core_roots(const CoreTerm& core, long nFrom, long nTo);

/// Near-origin core roots (theta plane, Im >= 0 representatives, with
/// multiplicities; right-half-plane members included for the Erlang map).
std::vector<std::pair<cplx, int>> core_origin_set(const CoreTerm& core);

/*!
  Newton-Raphson refinement: z <- z - f(z)/f'(z) until |f(z)| < eps.
  `Target` is callable as ValueDeriv(cplx). stepsOut (optional) receives the
  number of iterations actually taken.
*/
template <class Target>
cplx newton_refine(Target&& f, cplx z0, double eps, int maxIter,
                   int* stepsOut = nullptr) {
  if (!(eps > 0.0) || maxIter < 1)
    fail(Errc::ParseError, "newton_refine: need eps > 0 and maxIter >= 1");
  cplx z = z0;
  for (int it = 0; it <= maxIter; ++it) {
    const ValueDeriv vd = f(z);
    if (std::abs(vd.value) < eps) {
      if (stepsOut) *stepsOut = it;
      return z;
    }
    if (it == maxIter) break;
    if (std::abs(vd.deriv) < 1e-300)
      fail(Errc::DerivativeVanished, "newton_refine: derivative vanished");
    z -= vd.value / vd.deriv;
  }
  fail(Errc::NoConvergence, "newton_refine: no convergence within iteration cap");
}

/// A root found by search, with its detected multiplicity (1 or 2).
struct OriginRoot {
  cplx z;
  int multiplicity = 1;
};

/*!
  Aligned root sequences: u_n (core seeds), w_n (helper roots), z_n (F roots),
  all upper-half representatives starting at index n1, plus the finite
  near-origin F-root set. Conjugate closure is implicit. Residuals are
  recorded in F units (|F(z_n)|, poles cleared).
*/
struct RootLadder {
  std::vector<OriginRoot> originRoots;
  std::vector<cplx> u, w, z;
  std::vector<int> newtonStepsW, newtonStepsZ;
  std::vector<double> residualF;
  double epsilon = 1e-11;
  long n1 = 1;
  std::size_t branch = 0;  ///< index into the helper's core list

  std::size_t size() const { return z.size(); }
};

/// Axis-aligned search rectangle in the complex plane.
struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
};

/*!
  Winding-number root search: counts zeroes of an analytic target inside the
  rectangle by adaptive boundary phase tracking, isolates them by subdivision,
  polishes with (multiplicity-aware) Newton steps, and reports multiplicities.
  `scale(z)` supplies the evaluation magnitude used for relative residual
  floors. Raises CountMismatch when the phase count and the polished roots
  disagree, NoConvergence when the boundary walk cannot stabilize.
*/
std::vector<OriginRoot> winding_roots(const std::function<ValueDeriv(cplx)>& f,
                                      const std::function<double(cplx)>& scale,
                                      Rect rect, double eps);

/// Ladder core terms of a decomposition: the dominant left group alone when
/// its pole order is minimal among left groups, otherwise the two-factor
/// split (secondary core first-order in the remaining left group).
/// Unsupported beyond two left groups.
std::vector<CoreTerm> extract_cores(const ExponentDecomposition& dec);

/// First ladder seed of a core (upper-half theta plane).
cplx first_seed(const CoreTerm& core);

/*!
  All zeroes of F with Re z < 0 and |z| < searchRadius (upper-half
  representatives; a strip just below the axis is included so real roots are
  caught robustly). searchRadius <= 0 selects the default 1.5 |u_first|.
*/
std::vector<OriginRoot> origin_roots(const QueueModel& model,
                                     double searchRadius = 0.0);

/// Closed-form root pair of the gated batch queue: r_n (Re >= 0) and s_n
/// (Re <= 0), from the stable quadratic-formula branches.
std::pair<cplx, cplx> gated_roots(double lambda, double mu, long n);

struct HelperFunction;

/// Appends `count` new (w, z) pairs to a copy of the ladder: w_{n+1} seeded
/// at w_n + 2 pi i / |alpha| and refined on h, then z_{n+1} seeded at w_{n+1}
/// and refined on f.
RootLadder extend_ladder(const RootLadder& ladder, const QueueModel& model,
                         const HelperFunction& helper, long count);

}  // namespace gg1
