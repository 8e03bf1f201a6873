// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gg1/errors.hpp>
#include <gg1/gated.hpp>
#include <gg1/rootfinder.hpp>
#include <gg1/spectral.hpp>

namespace gg1 {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_rates(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(lambda < mu))
    fail(Errc::Unsupported, "gated queue needs 0 < lambda < mu");
}

}  // namespace

cplx gated_H(double lambda, double mu, cplx theta) {
  return theta - lambda * theta / (mu + theta);
}

cplx gated_H_deriv(double lambda, double mu, cplx theta) {
  const cplx s = 1.0 + theta / mu;
  return 1.0 - (lambda / mu) / (s * s);
}

cplx gated_chi(double lambda, double mu, cplx theta, long K) {
  check_rates(lambda, mu);
  if (K < 1) fail(Errc::ParseError, "gated_chi: K must be >= 1");
  const double rho = lambda / mu;
  cplx acc = (1.0 - rho) * std::exp(0.5 * theta);
  for (long n = 1; n <= K; ++n) {
    const cplx r = gated_roots(lambda, mu, n).first;
    acc *= (1.0 - theta / r) * (1.0 - theta / std::conj(r));
  }
  const double a = lambda * lambda + 2.0 * lambda * mu;
  const EulerTail tail = euler_tools(std::sqrt(a), K + 1);
  return acc * std::exp((theta * theta - 2.0 * theta * lambda) *
                        tail.tailInverseSum);
}

double gated_idle(double lambda, double mu, long K) {
  check_rates(lambda, mu);
  if (K < 1) fail(Errc::ParseError, "gated_idle: K must be >= 1");
  const double rho = lambda / mu;
  double acc = (1.0 - rho) * std::exp(0.5 * lambda);
  KahanSum invsq;  // partial zeta(2)
  for (long n = 1; n <= K; ++n) {
    const cplx r = gated_roots(lambda, mu, n).first;
    const double nn = static_cast<double>(n);
    acc *= 4.0 * nn * nn * kPi * kPi / std::norm(r);
    invsq.add(1.0 / (nn * nn));
  }
  const double a = lambda * lambda + 2.0 * lambda * mu;
  acc *= std::exp(-(a / (4.0 * kPi * kPi)) *
                  (kPi * kPi / 6.0 - invsq.value()));
  if (acc < 0.0 || acc > 1.0 + 1e-6)
    fail(Errc::NonProbability, "gated_idle: value escapes [0, 1]");
  return acc;
}

double gated_tail(double lambda, double mu, double t, long N, long K) {
  check_rates(lambda, mu);
  if (!(t >= 0.0)) fail(Errc::ParseError, "gated_tail: t must be >= 0");
  if (N < 1) fail(Errc::ParseError, "gated_tail: N must be >= 1");
  // At t = 0 the sum converges only conditionally; it is still evaluated
  // directly (the published table does the same), with the idle-probability
  // complement available as the sharper route.
  // N counts total terms: the real j = 0 term plus N - 1 conjugate pairs.
  KahanSum total;
  const cplx s0{lambda - mu, 0.0};
  const cplx p0 = -gated_chi(lambda, mu, s0, K) / gated_H_deriv(lambda, mu, s0);
  total.add((p0 * std::exp(s0 * t)).real());
  for (long j = 1; j <= N - 1; ++j) {
    const cplx s = gated_roots(lambda, mu, j).second;
    const cplx p = -gated_chi(lambda, mu, s, K) / gated_H_deriv(lambda, mu, s);
    total.add(2.0 * (p * std::exp(s * t)).real());
  }
  return total.value();
}

double gated_mean(double lambda, double mu, long m, GatedMeanMethod method) {
  check_rates(lambda, mu);
  if (m < 1) fail(Errc::ParseError, "gated_mean: m must be >= 1");
  const double rho = lambda / mu;
  KahanSum mean;
  mean.add(rho / (mu - lambda));
  mean.add(-0.5 * rho);
  if (method == GatedMeanMethod::ViaS) {
    KahanSum invsq;
    for (long n = 1; n <= m; ++n) {
      const cplx s = gated_roots(lambda, mu, n).second;
      mean.add(-2.0 * (1.0 / mu + 1.0 / s).real());
      const double nn = static_cast<double>(n);
      invsq.add(1.0 / (nn * nn));
    }
    mean.add((lambda / (2.0 * kPi * kPi)) *
             (kPi * kPi / 6.0 - invsq.value()));
  } else {
    const double a = lambda * lambda + 2.0 * lambda * mu;
    for (long n = 1; n <= m; ++n) {
      const cplx r = gated_roots(lambda, mu, n).first;
      mean.add(2.0 * r.real() / std::norm(r));
    }
    mean.add(2.0 * lambda * euler_tools(std::sqrt(a), m + 1).tailInverseSum);
  }
  return mean.value();
}

}  // namespace gg1
