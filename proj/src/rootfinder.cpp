// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Core terms, the real rho-system, sigma-plane root sets, and the
         gated closed-form roots.
*/

#include <gg1/rootfinder.hpp>

#include <algorithm>

namespace gg1 {
namespace {

constexpr double kPi = 3.14159265358979323846;

double bisect(double lo, double hi, const std::function<double(double)>& g) {
  double glo = g(lo);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CoreTerm CoreTerm::make(double c, double alpha, int m) {
  if (c == 0.0 || !(alpha < 0.0) || m < 1)
    fail(Errc::ParseError, "core term: need c != 0, alpha < 0, m >= 1");
  CoreTerm t;
  t.c = c;
  t.alpha = alpha;
  t.m = m;
  if (!std::isfinite(t.beta()))
    fail(Errc::ParseError, "core term: beta not finite");
  return t;
}

bool CoreTerm::odd_parity() const {
  const double sign = (m % 2 == 0) ? c : -c;  // sign of c * alpha^m, alpha < 0
  return sign < 0.0;
}

cplx CoreTerm::eval(cplx theta) const {
  return c * std::exp(alpha * theta) * std::pow(theta, -m) - 1.0;
}

ValueDeriv CoreTerm::eval_vd(cplx theta) const {
  const cplx g = c * std::exp(alpha * theta) * std::pow(theta, -m);
  return ValueDeriv{g - 1.0, g * (alpha - double(m) / theta)};
}

RhoSystem RhoSystem::make(int m, double beta) {
  if (m < 1 || !std::isfinite(beta))
    fail(Errc::ParseError, "rho system: need m >= 1 and finite beta");
  RhoSystem s;
  s.m = m;
  s.beta = beta;

  // r0: m ln(rho) - beta = -rho. Strictly increasing left side + rho.
  auto g0 = [&](double rho) { return s.x(rho) + rho; };
  double lo = 1.0, hi = 1.0;
  while (g0(lo) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) fail(Errc::NoBracket, "rho system: r0 bracket vanished");
  }
  while (g0(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e300) fail(Errc::NoBracket, "rho system: r0 bracket exploded");
  }
  s.r0 = bisect(lo, hi, g0);

  // eta(rho) = rho - x(rho), convex with minimum at rho = m; the sign of
  // eta(m) decides whether an excluded gap (r1, r2) interrupts the set.
  auto eta = [&](double rho) { return rho - s.x(rho); };
  const double eta_min = eta(double(m));
  const double tang_tol = 1e-12 * std::max({1.0, std::abs(beta), double(m)});
  if (std::abs(eta_min) <= tang_tol) {
    s.tangent = true;
    s.r1 = s.r2 = double(m);
  } else if (eta_min > 0.0) {
    s.monotone = true;
  } else {
    double a = double(m);
    while (eta(a) < 0.0) {
      a *= 0.5;
      if (a < 1e-300) fail(Errc::NoBracket, "rho system: r1 bracket vanished");
    }
    s.r1 = bisect(a, double(m), eta);
    double b = double(m);
    double b2 = 2.0 * b;
    while (eta(b2) < 0.0) {
      b2 *= 2.0;
      if (b2 > 1e300) fail(Errc::NoBracket, "rho system: r2 bracket exploded");
    }
    s.r2 = bisect(b, b2, eta);
  }
  return s;
}

double RhoSystem::y(double rho) const {
  const double xv = x(rho);
  return std::sqrt(std::max(0.0, rho * rho - xv * xv));
}

double RhoSystem::h(double rho) const {
  const double xv = x(rho);
  const double ratio = std::clamp(xv / rho, -1.0, 1.0);
  return y(rho) - m * std::acos(ratio);
}

double RhoSystem::h_deriv(double rho) const {
  const double xv = x(rho);
  const double yv = y(rho);
  return (rho * rho - 2.0 * m * xv + double(m) * m) / (rho * yv);
}

cplx RhoSystem::z_at(double rho) const { return cplx{x(rho), y(rho)}; }

double RhoSystem::solve_h(double target) const {
  if (!(target > -double(m) * kPi))
    fail(Errc::NoBracket, "rho system: angle target below the admissible range");
  double lo, hi;
  if (target >= 0.0 && !monotone) {
    // Right component [r2, inf): h rises from 0.
    lo = r2;
    hi = std::max(2.0 * r2, r2 + target + m + 10.0);
    while (h(hi) < target) {
      hi *= 2.0;
      if (hi > 1e300) fail(Errc::NoBracket, "rho system: target bracket exploded");
    }
  } else if (target < 0.0 && !monotone) {
    // Left component [r0, r1]: h rises from -m pi to 0.
    lo = r0;
    hi = r1;
  } else {
    // Single component [r0, inf).
    lo = r0;
    hi = std::max(2.0 * r0, r0 + std::abs(target) + m + 10.0);
    while (h(hi) < target) {
      hi *= 2.0;
      if (hi > 1e300) fail(Errc::NoBracket, "rho system: target bracket exploded");
    }
  }
  double glo = h(lo) - target;
  double a = lo, b = hi;
  while ((b - a) > 1e-13 * std::max(1.0, b)) {
    const double mid = 0.5 * (a + b);
    const double gm = h(mid) - target;
    if ((gm < 0.0) == (glo < 0.0)) {
      a = mid;
      glo = gm;
    } else {
      b = mid;
    }
  }
  double rho = 0.5 * (a + b);
  for (int it = 0; it < 3; ++it) {
    const double step = (h(rho) - target) / h_deriv(rho);
    if (!std::isfinite(step)) break;
    const double next = rho - step;
    if (next <= a || next >= b) break;  // keep the bisection certificate
    rho = next;
  }
  return rho;
}

std::vector<std::pair<cplx, int>> sigma_origin_roots(const RhoSystem& sys,
                                                     bool odd_parity) {
  std::vector<std::pair<cplx, int>> out;
  const int m = sys.m;
  if (!odd_parity) {
    // Angle 0: boundary reals (or the interior complex pair when the
    // admissible set has no gap).
    if (sys.tangent) {
      out.emplace_back(cplx{double(m), 0.0}, 2);
    } else if (sys.monotone) {
      out.emplace_back(sys.z_at(sys.solve_h(0.0)), 1);
    } else {
      out.emplace_back(cplx{sys.r1, 0.0}, 1);
      out.emplace_back(cplx{sys.r2, 0.0}, 1);
    }
    for (int j = 1; 2.0 * j * kPi < m * kPi - 1e-12; ++j)
      out.emplace_back(sys.z_at(sys.solve_h(-2.0 * j * kPi)), 1);
    if (m % 2 == 0) out.emplace_back(cplx{-sys.r0, 0.0}, 1);
  } else {
    for (int j = 0; (2.0 * j + 1.0) * kPi < m * kPi - 1e-12; ++j)
      out.emplace_back(sys.z_at(sys.solve_h(-(2.0 * j + 1.0) * kPi)), 1);
    if (m % 2 == 1) out.emplace_back(cplx{-sys.r0, 0.0}, 1);
  }
  return out;
}

cplx sigma_ladder_root(const RhoSystem& sys, bool odd_parity, long n) {
  if ((odd_parity && n < 0) || (!odd_parity && n < 1))
    fail(Errc::ParseError, "sigma ladder: index below the first rung");
  const double target =
      odd_parity ? (2.0 * n + 1.0) * kPi : 2.0 * n * kPi;
  return sys.z_at(sys.solve_h(target));
}

namespace {

/// sigma-plane -> theta-plane, upper-half representative (alpha < 0 mirrors).
cplx sigma_to_theta(cplx z, double alpha) {
  return cplx{z.real() / alpha, std::abs(z.imag() / alpha)};
}

}  // namespace

std::vector<cplx> core_roots(const CoreTerm& core, long nFrom, long nTo) {
  const bool odd = core.odd_parity();
  if ((odd && nFrom < 0) || (!odd && nFrom < 1))
    fail(Errc::ParseError, "core_roots: nFrom below the first rung");
  const RhoSystem sys = RhoSystem::make(core.m, core.beta());
  std::vector<cplx> out;
  for (long n = nFrom; n <= nTo; ++n)
    out.push_back(sigma_to_theta(sigma_ladder_root(sys, odd, n), core.alpha));
  return out;
}

std::vector<std::pair<cplx, int>> core_origin_set(const CoreTerm& core) {
  const RhoSystem sys = RhoSystem::make(core.m, core.beta());
  std::vector<std::pair<cplx, int>> out;
  for (const auto& [z, mult] : sigma_origin_roots(sys, core.odd_parity()))
    out.emplace_back(sigma_to_theta(z, core.alpha), mult);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.imag() != b.first.imag()) return a.first.imag() < b.first.imag();
    return a.first.real() < b.first.real();
  });
  return out;
}

std::pair<cplx, cplx> gated_roots(double lambda, double mu, long n) {
  if (!(lambda > 0.0) || !(lambda < mu))
    fail(Errc::ParseError, "gated roots: need 0 < lambda < mu");
  if (n < 0) fail(Errc::ParseError, "gated roots: need n >= 0");
  const double a = 0.5 * (lambda - mu);
  const double b = n * kPi;
  const double xn = 0.25 * (mu - lambda) * (mu - lambda) - kPi * kPi * n * n;
  const double yn = (mu + lambda) * n * kPi;
  const double hyp = std::hypot(xn, yn);
  double c, d;
  if (xn >= 0.0) {
    c = std::sqrt(0.5 * (hyp + xn));
    d = (c > 0.0) ? yn / (2.0 * c) : 0.0;
  } else {
    d = std::copysign(std::sqrt(0.5 * (hyp - xn)), yn);
    c = yn / (2.0 * d);
  }
  const cplx r{a + c, b + d};
  const cplx s{a - c, b - d};
  return {r, s};
}

}  // namespace gg1
