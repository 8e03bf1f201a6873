// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Closed forms for the unit-interval gate with Poisson batches of
         exponential jobs: root-driven tails, idle mass, and two telescoped
         mean routes, all with Euler-product tail corrections.
*/

#pragma once

#include <gg1/exp_poly.hpp>

namespace gg1 {

/// H(theta) = theta - lambda theta / (mu + theta); F = e^H - 1.
cplx gated_H(double lambda, double mu, cplx theta);

/// H'(theta) = 1 - (lambda/mu) (1 + theta/mu)^{-2}.
cplx gated_H_deriv(double lambda, double mu, cplx theta);

/// The entire numerator chi(theta): (1 - rho) e^{theta/2} times the first K
/// right-root pair factors times the Euler tail correction
/// exp{(theta^2 - 2 theta lambda) (Omega(sqrt(a)) - partial sum)}, with
/// a = lambda^2 + 2 lambda mu.
cplx gated_chi(double lambda, double mu, cplx theta, long K = 2000);

/// P(W > t). t = 0 is served as one minus the idle mass; t > 0 sums the
/// residue series p_0 e^{s_0 t} + sum 2 Re(p_j e^{s_j t}) over N pairs with
/// p_j = -chi(s_j) / H'(s_j).
double gated_tail(double lambda, double mu, double t, long N = 60,
                  long K = 2000);

/// P(W = 0) from the product form, Euler-corrected after K factors.
double gated_idle(double lambda, double mu, long K = 2000);

enum class GatedMeanMethod { ViaS, ViaR };

/// E[W] to O(m^{-3}) by either telescoped route: ViaS sums
/// -2 Re(1/mu + 1/s_n), ViaR the identical quantity 2 Re(r_n)/|r_n|^2, each
/// with its closed-form tail.
double gated_mean(double lambda, double mu, long m = 1000,
                  GatedMeanMethod method = GatedMeanMethod::ViaR);

}  // namespace gg1
