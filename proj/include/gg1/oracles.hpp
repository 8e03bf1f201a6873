// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Independent ground truths: exact M/D/1 waiting-time law, a
         finite-queue Markov chain for the gated M/M/1 queue, and a Monte
         Carlo Lindley recursion for arbitrary models.
*/

#pragma once

#include <cstdint>
#include <vector>

#include <gg1/transforms.hpp>

namespace gg1 {

/*!
  Exact M/D/1 tail P(V > t) for Poisson(lambda) arrivals and unit service,
  via the classical finite alternating sum over n <= floor(t). Terms use
  log-factorials once n grows, so the result stays accurate out to large t.
  Requires 0 < lambda < 1.
*/
double takacs_md1_tail(double lambda, double t);

/*!
  Stationary law of the gated M/M/1 queue length observed just before each
  admission instant, from power iteration on the finite-queue transition
  matrix. The workload just before a gate opening is Erlang(N, mu), which
  yields the tail and mean below.
*/
struct GatedMarkov {
  std::vector<double> pi;  ///< stationary queue-length law, size qmax+1
  double mu = 0.0;
  std::size_t iterations = 0;

  /// P(V > t) = sum_n pi[n] P(Erlang(n, mu) > t); at t=0 this is 1 - pi[0].
  double tail(double t) const;
  /// E[V] = E[N]/mu.
  double mean() const;
};

/// Iterates the gate-epoch chain: N' = min(N + A, qmax) - D with A ~
/// Poisson(lambda) and D the unit-interval Poisson(mu) departure count capped
/// at the jobs present. NoStationaryConvergence if the L1 change still
/// exceeds tol after maxIter sweeps.
GatedMarkov gated_markov(double lambda, double mu, std::size_t qmax = 200,
                         double tol = 1e-10, std::size_t maxIter = 10000);

/*!
  Monte Carlo estimate of the stationary waiting time by the Lindley
  recursion W <- max(0, W + Y - X). The first 10% of customers are warmup;
  the rest are split into 32 batches whose means give the standard errors.
  Reproducible for a fixed seed (recorded back into the result).
*/
struct SimulationResult {
  std::uint64_t seed = 0;
  std::size_t customers = 0;      ///< customers kept after warmup
  std::vector<double> grid;       ///< tail evaluation points
  std::vector<double> tail;       ///< P(W > grid[i]) estimates
  std::vector<double> tailErr;    ///< batch-means standard errors
  double mean = 0.0;              ///< E[W] estimate
  double meanErr = 0.0;           ///< standard error of the mean
};

/// Simulates nCustomers waits and evaluates the empirical tail on grid.
/// Every spec kind has a sampler (inverse CDF, composition, or rejection for
/// polynomial densities); gated-batch service draws the total workload a
/// gate admits (a Poisson-sized batch of per-customer draws), so W is the
/// workload just before each gate opening.
SimulationResult lindley_simulate(const QueueModel& model,
                                  std::vector<double> grid,
                                  std::size_t nCustomers,
                                  std::uint64_t seed);

}  // namespace gg1
