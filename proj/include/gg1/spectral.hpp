// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Spectral expansion of the waiting-time transform: helper functions,
         expansion coefficients (naive and telescoped), tails, idle
         probability, cumulants, moments, and Euler product tools.
*/

#pragma once

#include <array>
#include <vector>

#include <gg1/rootfinder.hpp>
#include <gg1/transforms.hpp>

namespace gg1 {

/// q(theta) = scale * theta^{-monomialDegree} * prod_v (1 - theta/v):
/// the rational prefactor pinning the helper's behavior near the origin.
struct RationalPrefactor {
  std::vector<cplx> numeratorRoots;  ///< near-origin h-roots, Im >= 0 reps
  std::vector<int> multiplicity;     ///< aligned with numeratorRoots (1 or 2)
  int monomialDegree = 0;
  double scale = 0.0;

  cplx eval(cplx theta) const;
  /// sum over roots (conjugates included) of v^{-j}.
  double inverse_power_sum(int j) const;
  /// product over roots (conjugates included) of v.
  double root_product() const;
};

/*!
  The left tail of F plus the constant: H(theta) = constant +
  sum_{alpha_j <= 0} e^{alpha_j theta} Phi_j(1/theta) theta^{-k_j} with each
  Phi_j truncated at degree kappa_p. Carries the core term(s), the rational
  prefactor q, the true pole order mp at zero, and entire cleared stand-ins
  h_num = H theta^{Mraw} and f_num = F theta^{kF} used for Newton refinement.
*/
struct HelperFunction {
  std::vector<DecompTerm> terms;
  double constant = -1.0;
  CoreTerm core;                 ///< primary core (most negative exponent)
  std::vector<CoreTerm> cores;   ///< all ladder branches ({core} unless split)
  RationalPrefactor q;
  int mp = 0;
  int kappa_p = 0;
  long n0 = 1;         ///< first helper-ladder index
  double alpha = 0.0;  ///< |alpha_0|: exponential reach of F's left tail

  ExpPolySum h_num;  ///< H * theta^{Mraw}, entire
  int Mraw = 0;
  ExpPolySum f_num;  ///< F * theta^{kF}, entire
  int kF = 0;
  std::vector<double> h_taylor;       ///< Taylor of h = H theta^{mp} at 0
  std::vector<ExpPolySum> h_num_d;    ///< derivatives of h_num, orders 1..4
  ExpPolySum f_num_d;

  cplx H(cplx theta) const;
  /// H, H', H'', H''', H'''' at theta (Leibniz against theta^{-Mraw}).
  std::array<cplx, 5> H_derivatives(cplx theta) const;
  ValueDeriv h_target(cplx theta) const;
  ValueDeriv f_target(cplx theta) const;
  double h_scale(cplx theta) const;
  double f_scale(cplx theta) const;
};

/// Builds the helper factorization for a model whose F admits the exponent
/// decomposition; Unsupported otherwise (rational interarrival uses the
/// sigma-map path instead, batch-gated service its closed forms).
HelperFunction build_helper(const QueueModel& model);

/*!
  Spectral expansion terms: merged root list (near-origin part first, then
  ladder roots by increasing imaginary part), per-root multiplicities and
  coefficients. Entries with Im z > 0 represent conjugate pairs implicitly.
*/
struct SpectralExpansion {
  double alpha = 0.0;
  std::vector<cplx> z;
  std::vector<int> k;                   ///< multiplicities, <= 2
  std::vector<std::array<cplx, 2>> a;   ///< a[n] = {a_{n,1}, a_{n,2}}
  std::size_t originCount = 0;          ///< leading entries from the origin set
  long K_roots = 0;
  long K_tailproduct = 0;
};

/// Ladder for one core branch: seeds from core_roots, w refined on h_num,
/// z refined on f_num, near-origin F roots attached.
RootLadder build_ladder(const QueueModel& model, const HelperFunction& helper,
                        long count, std::size_t branch = 0);

/// a_n by the bare conjugate-paired product over every stored root
/// (origin set included) up to ladder index n + K. n is the merged index:
/// 0 is the first origin root. RepeatedRoot when multiplicities intrude.
cplx coefficients_naive(const RootLadder& ladder, double alpha, long n, long K);

/// a_n with the helper tail product: bare products are replaced pairwise by
/// w/z ratios and the local factor -w_n (H(z_n) - H(w_n))/(z_n - w_n),
/// evaluated by four Taylor terms of H about w_n when z_n is close.
/// n is the merged index (origin entries use H directly, no cancellation).
cplx coefficients_telescoped(const RootLadder& ladder,
                             const HelperFunction& helper, double alpha,
                             long n, long k);

/// a_{n,1}, a_{n,2} for a root list with multiplicities (bare products plus
/// the first- and second-order correction sums). Roots are Im >= 0
/// representatives; pass the merged list. Supports k_n <= 2.
std::array<cplx, 2> coefficients_repeated(const std::vector<cplx>& roots,
                                          const std::vector<int>& mults,
                                          double alpha, std::size_t n);

/// Full expansion: helper path (telescope_k > 0 sets the tail-product depth)
/// or the sigma-map residue path for rational-interarrival models.
SpectralExpansion build_expansion(const QueueModel& model, long K_roots,
                                  long telescope_k = 200);

/// P(W > t) for t > 0 summed over entries 0..N of the expansion
/// (index 0 plus N conjugate pairs). t = 0 is served by the idle complement.
double tail_probability(const SpectralExpansion& exp, double t, long N);

/// P(W = 0) from the helper product form, truncated at exp.K_tailproduct.
double idle_probability(const SpectralExpansion& exp,
                        const HelperFunction& helper,
                        const RationalPrefactor& r, const RootLadder& ladder);

/// j-th cumulant (j in 1..3) with the root sum split at nSplit; helper == the
/// telescoped correction W, helper == nullptr the plain truncated sum.
double cumulants(const RootLadder& ladder, const HelperFunction* helper,
                 double alpha, int j, long nSplit);

/// (m1, m2, m3) from (k1, k2, k3).
std::array<double, 3> moments_from_cumulants(double k1, double k2, double k3);

/// nu-th moment from the expansion coefficients, entries 0..N.
double moments_spectral(const SpectralExpansion& exp, int nu, long N);

/// Euler closed forms: Omega(b) = sum_{j>=1} (b^2 + 4 pi^2 j^2)^{-1} and the
/// tail sum from j = n on, driving Π_{j>=n}(1 + c/(b^2+4pi^2j^2)) ~
/// exp(c * tailInverseSum) with O(n^{-3}) error.
struct EulerTail {
  double Omega = 0.0;
  double tailInverseSum = 0.0;
  double tail_product(double c) const;
};
EulerTail euler_tools(double b, long n);

/// sum_{j>=1} (b^2 + j^2)^{-1} = (b pi coth(b pi) - 1) / (2 b^2).
double euler_omega(double b);

/*!
  One fully-built analysis: the path taken, the helper and per-branch ladders
  (helper path), the sigma-map data (rational-interarrival path), and the
  expansion ready for tails and moments.
*/
struct Analysis {
  QueueModel model;
  bool erlangPath = false;
  bool expansionReady = false;
  HelperFunction helper;                 // helper path
  std::vector<RootLadder> branchLadders; // aligned with helper.cores
  double d = 0.0, lambda = 0.0;          // sigma-map path
  int mshape = 0;
  std::vector<cplx> rightRoots;          // Re > 0 roots of F (Erlang numerator)
  SpectralExpansion expansion;
  double idleClosed = -1.0;              ///< P(W = 0) when expansionReady
};

/// Builds roots and (where supported) the expansion for any model the
/// spectral machinery covers. Mixture-split models get ladders but no
/// expansion; batch-gated service is served by its own module.
Analysis analyze_model(const QueueModel& model, long K_roots,
                       long telescope_k = 200);

}  // namespace gg1
