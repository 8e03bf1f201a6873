// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Interarrival/service distribution specs, their Laplace transforms,
         and the exponent decomposition of F(theta) = B(theta)A(-theta) - 1.
*/

#pragma once

#include <string>
#include <vector>

#include <gg1/exp_poly.hpp>

namespace gg1 {

/// Supported distribution families.
enum class Kind {
  Deterministic,
  Exponential,
  Erlang,
  Uniform,
  PolynomialDensity,
  GatedPoissonBatch,
  Mixture,
};

/*!
  Symbolic description of a nonnegative random variable and its Laplace
  transform E[exp(-theta X)]. Immutable after construction; build through the
  factories, which validate parameters.
*/
struct TransformSpec {
  Kind kind = Kind::Deterministic;

  double d = 0.0;        ///< Deterministic: the point mass.
  double rate = 0.0;     ///< Exponential / Erlang rate; GatedPoissonBatch arrival rate.
  int shape = 0;         ///< Erlang shape.
  double lo = 0.0;       ///< Uniform lower endpoint; PolynomialDensity support start.
  double hi = 0.0;       ///< Uniform upper endpoint; PolynomialDensity support end.
  std::vector<double> coeffs;        ///< PolynomialDensity coefficients (c0 + c1 x + ...).
  std::vector<double> weights;       ///< Mixture weights (sum to 1).
  std::vector<TransformSpec> parts;  ///< Mixture components; GatedPoissonBatch per-customer spec.

  static TransformSpec deterministic(double d);
  static TransformSpec exponential(double rate);
  static TransformSpec erlang(int shape, double rate);
  static TransformSpec uniform(double lo, double hi);
  static TransformSpec polynomial_density(double p0, double p1,
                                          std::vector<double> coeffs);
  static TransformSpec gated_poisson_batch(double arrival_rate,
                                           TransformSpec per_customer);
  static TransformSpec mixture(std::vector<double> weights,
                               std::vector<TransformSpec> parts);

  double mean() const;
  std::string describe() const;
};

/// E[exp(-theta X)] at complex theta, honoring each family's analyticity
/// region. Removable singularities at theta = 0 use a series form.
cplx eval_transform(const TransformSpec& spec, cplx theta);

/// d/dtheta of eval_transform (equals -E[X exp(-theta X)]).
cplx eval_transform_deriv(const TransformSpec& spec, cplx theta);

/*!
  A stable single-server queue: interarrival spec A, service spec B, with
  F(theta) = B(theta) A(-theta) - 1 vanishing at zero by construction.
*/
struct QueueModel {
  TransformSpec interarrival;
  TransformSpec service;
  double rho = 0.0;  ///< E[service] / E[interarrival], < 1.

  static QueueModel make(TransformSpec interarrival, TransformSpec service);
};

/// F(theta) (order 0) or F'(theta) (order 1).
cplx eval_F(const QueueModel& model, cplx theta, int order = 0);

/// One exponential group of the far-field representation of F:
/// exp(alpha*theta) * Phi(theta^{-1}) * theta^{-k} with Phi(x) = sum phi[i] x^i.
struct DecompTerm {
  double alpha = 0.0;
  int k = 0;
  std::vector<double> phi;
};

/*!
  Representation F(theta) = constant + sum_j exp(alpha_j theta) Phi_j(theta^{-1})
  theta^{-k_j}, terms sorted by ascending alpha_j. Exact for bounded-support
  specs; rational factors are expanded as truncated theta^{-1} series whose
  length is chosen to meet the reassembly tolerance.
*/
struct ExponentDecomposition {
  std::vector<DecompTerm> terms;
  double constant = -1.0;
  int jp = -1;  ///< last index with alpha_j <= 0

  double alpha0() const { return terms.front().alpha; }
  cplx eval(cplx theta) const;
};

/// Far-field exponent decomposition of F; Unsupported for models the
/// representation cannot express (batch-gated service, pure point masses,
/// rational rates too large for the series annulus).
ExponentDecomposition decompose_F(const QueueModel& model);

/// Largest theta^{-k} power over terms (used to clear F to an entire function).
int max_pole_order(const ExponentDecomposition& d);

/// F * theta^{kmax} assembled as an entire exponential-polynomial sum.
/// Requires every phi series to be finitely representable (true whenever the
/// decomposition is exact; rational-factor series are truncated upstream).
ExpPolySum cleared_F(const ExponentDecomposition& d);

}  // namespace gg1
