// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <gg1/errors.hpp>
#include <gg1/exp_poly.hpp>
#include <gg1/oracles.hpp>
#include <gg1/rng.hpp>

namespace gg1 {
namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

/// Poisson(lambda) pmf over 0..nmax by the stable forward recurrence.
std::vector<double> poisson_pmf(double lambda, std::size_t nmax) {
  std::vector<double> p(nmax + 1, 0.0);
  p[0] = std::exp(-lambda);
  for (std::size_t j = 1; j <= nmax; ++j)
    p[j] = p[j - 1] * lambda / static_cast<double>(j);
  return p;
}

}  // namespace

double takacs_md1_tail(double lambda, double t) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    fail(Errc::ParseError, "takacs_md1_tail: need 0 < lambda < 1");
  if (!(t >= 0.0)) fail(Errc::ParseError, "takacs_md1_tail: need t >= 0");
  const long nmax = static_cast<long>(std::floor(t));
  KahanSum cdf;
  for (long n = 0; n <= nmax; ++n) {
    const double x = lambda * (t - static_cast<double>(n));  // >= 0 here
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    double term;
    if (x == 0.0) {
      term = (n == 0) ? 1.0 : 0.0;
    } else if (n <= 20) {
      double xpow = 1.0;
      double fact = 1.0;
      for (long j = 1; j <= n; ++j) {
        xpow *= x;
        fact *= static_cast<double>(j);
      }
      term = sign * std::exp(x) * xpow / fact;
    } else {
      const double ln = x + static_cast<double>(n) * std::log(x) -
                        std::lgamma(static_cast<double>(n) + 1.0);
      term = sign * std::exp(ln);
    }
    cdf.add(term);
  }
  double tail = 1.0 - (1.0 - lambda) * cdf.value();
  if (tail < 0.0 && tail > -1e-9) tail = 0.0;  // cancellation at large t
  return tail;
}

double GatedMarkov::tail(double t) const {
  if (!(t >= 0.0)) fail(Errc::ParseError, "GatedMarkov::tail: need t >= 0");
  // P(Erlang(n, mu) > t) = P(Poisson(mu t) <= n-1); summing by Poisson index
  // j pairs each pmf value with the queue mass above j.
  std::vector<double> above(pi.size() + 1, 0.0);
  for (std::size_t n = pi.size(); n-- > 0;) above[n] = above[n + 1] + pi[n];
  const double mt = mu * t;
  double q = std::exp(-mt);
  KahanSum acc;
  for (std::size_t j = 0; j + 1 < above.size(); ++j) {
    acc.add(q * above[j + 1]);
    q *= mt / static_cast<double>(j + 1);
  }
  return acc.value();
}

double GatedMarkov::mean() const {
  KahanSum acc;
  for (std::size_t n = 1; n < pi.size(); ++n)
    acc.add(static_cast<double>(n) * pi[n]);
  return acc.value() / mu;
}

GatedMarkov gated_markov(double lambda, double mu, std::size_t qmax,
                         double tol, std::size_t maxIter) {
  if (!(lambda >= 0.0) || !(mu > 0.0))
    fail(Errc::ParseError, "gated_markov: need lambda >= 0 and mu > 0");
  if (qmax < 50) fail(Errc::ParseError, "gated_markov: need qmax >= 50");
  const std::size_t S = qmax + 1;

  const std::vector<double> arr = poisson_pmf(lambda, qmax);
  const std::vector<double> dep = poisson_pmf(mu, qmax);
  // depAtLeast[m] = P(departure draw >= m): the mass lumped onto emptying
  // the queue when m jobs are present.
  std::vector<double> depAtLeast(S + 1, 0.0);
  {
    double prefix = 0.0;
    for (std::size_t m = 0; m <= qmax; ++m) {
      depAtLeast[m] = 1.0 - prefix;
      prefix += dep[m];
    }
    depAtLeast[S] = 1.0 - prefix;
  }

  // T[n][n'] for the epoch map N -> min(N + A, qmax) - D.
  std::vector<double> T(S * S, 0.0);
  for (std::size_t n = 0; n < S; ++n) {
    double* row = &T[n * S];
    double arrPrefix = 0.0;
    for (std::size_t m = n; m <= qmax; ++m) {
      double w = (m < qmax) ? arr[m - n] : 1.0 - arrPrefix;
      if (m < qmax) arrPrefix += arr[m - n];
      if (w <= 0.0) continue;
      row[0] += w * depAtLeast[m];
      for (std::size_t next = 1; next <= m; ++next)
        row[next] += w * dep[m - next];
    }
  }

  std::vector<double> pi(S, 1.0 / static_cast<double>(S));
  std::vector<double> fresh(S, 0.0);
  GatedMarkov result;
  result.mu = mu;
  for (std::size_t it = 1; it <= maxIter; ++it) {
    std::fill(fresh.begin(), fresh.end(), 0.0);
    for (std::size_t n = 0; n < S; ++n) {
      const double w = pi[n];
      if (w == 0.0) continue;
      const double* row = &T[n * S];
      for (std::size_t next = 0; next < S; ++next) fresh[next] += w * row[next];
    }
    double total = 0.0;
    for (double v : fresh) total += v;
    for (double& v : fresh) v /= total;
    double change = 0.0;
    for (std::size_t n = 0; n < S; ++n) change += std::abs(fresh[n] - pi[n]);
    pi.swap(fresh);
    if (change <= tol) {
      result.pi = std::move(pi);
      result.iterations = it;
      return result;
    }
  }
  fail(Errc::NoStationaryConvergence,
       "gated_markov: L1 change above tolerance after max iterations");
}

namespace {

std::size_t sample_poisson(double lambda, Xoshiro256pp& rng) {
  // Knuth's product method; fine for the modest rates used here.
  const double limit = std::exp(-lambda);
  std::size_t k = 0;
  double prod = 1.0;
  for (;;) {
    prod *= rng.uniform01();
    if (prod <= limit) return k;
    ++k;
  }
}

/// Spec tree with rejection bounds precomputed once, so per-draw work stays
/// constant even for polynomial densities.
struct Sampler {
  const TransformSpec* spec = nullptr;
  double bound = 0.0;
  std::vector<Sampler> parts;

  explicit Sampler(const TransformSpec& s) : spec(&s) {
    if (s.kind == Kind::PolynomialDensity) {
      for (int i = 0; i <= 10000; ++i) {
        const double x =
            s.lo + (s.hi - s.lo) * static_cast<double>(i) / 10000.0;
        bound = std::max(bound, poly_eval(s.coeffs, x));
      }
      bound *= 1.001;
    }
    for (const TransformSpec& part : s.parts) parts.emplace_back(part);
  }

  double draw(Xoshiro256pp& rng) const {
    const TransformSpec& s = *spec;
    switch (s.kind) {
      case Kind::Deterministic: return s.d;
      case Kind::Exponential: return -std::log1p(-rng.uniform01()) / s.rate;
      case Kind::Erlang: {
        double acc = 0.0;
        for (int i = 0; i < s.shape; ++i)
          acc += -std::log1p(-rng.uniform01()) / s.rate;
        return acc;
      }
      case Kind::Uniform: return s.lo + (s.hi - s.lo) * rng.uniform01();
      case Kind::PolynomialDensity: {
        for (;;) {
          const double x = s.lo + (s.hi - s.lo) * rng.uniform01();
          if (rng.uniform01() * bound <= poly_eval(s.coeffs, x)) return x;
        }
      }
      case Kind::GatedPoissonBatch: {
        const std::size_t batch = sample_poisson(s.rate, rng);
        double acc = 0.0;
        for (std::size_t i = 0; i < batch; ++i) acc += parts[0].draw(rng);
        return acc;
      }
      case Kind::Mixture: {
        const double u = rng.uniform01();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
          cum += s.weights[i];
          if (u < cum) return parts[i].draw(rng);
        }
        return parts.back().draw(rng);
      }
    }
    fail(Errc::Unsupported, "Sampler::draw: unknown kind");
  }
};

}  // namespace

SimulationResult lindley_simulate(const QueueModel& model,
                                  std::vector<double> grid,
                                  std::size_t nCustomers,
                                  std::uint64_t seed) {
  constexpr std::size_t kBatches = 32;
  if (nCustomers < 10 * kBatches)
    fail(Errc::ParseError, "lindley_simulate: too few customers for batching");

  Xoshiro256pp rng(seed);
  const Sampler service(model.service);
  const Sampler interarrival(model.interarrival);
  const std::size_t warmup = nCustomers / 10;
  const std::size_t kept = nCustomers - warmup;
  const std::size_t batchLen = kept / kBatches;
  const std::size_t used = batchLen * kBatches;

  double w = 0.0;
  for (std::size_t i = 0; i < warmup; ++i) {
    const double y = service.draw(rng);
    const double x = interarrival.draw(rng);
    w = std::max(0.0, w + y - x);
  }

  const std::size_t cols = grid.size() + 1;  // indicators then the wait itself
  std::vector<double> batchMeans(kBatches * cols, 0.0);
  for (std::size_t b = 0; b < kBatches; ++b) {
    std::vector<KahanSum> acc(cols);
    for (std::size_t i = 0; i < batchLen; ++i) {
      const double y = service.draw(rng);
      const double x = interarrival.draw(rng);
      w = std::max(0.0, w + y - x);
      for (std::size_t g = 0; g < grid.size(); ++g)
        if (w > grid[g]) acc[g].add(1.0);
      acc[grid.size()].add(w);
    }
    for (std::size_t c = 0; c < cols; ++c)
      batchMeans[b * cols + c] = acc[c].value() / static_cast<double>(batchLen);
  }

  SimulationResult result;
  result.seed = seed;
  result.customers = used;
  result.grid = std::move(grid);
  result.tail.resize(result.grid.size());
  result.tailErr.resize(result.grid.size());
  const auto summarize = [&](std::size_t c, double& est, double& err) {
    KahanSum m;
    for (std::size_t b = 0; b < kBatches; ++b) m.add(batchMeans[b * cols + c]);
    est = m.value() / static_cast<double>(kBatches);
    KahanSum v;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const double d = batchMeans[b * cols + c] - est;
      v.add(d * d);
    }
    err = std::sqrt(v.value() / static_cast<double>(kBatches - 1)) /
          std::sqrt(static_cast<double>(kBatches));
  };
  for (std::size_t g = 0; g < result.grid.size(); ++g)
    summarize(g, result.tail[g], result.tailErr[g]);
  summarize(result.grid.size(), result.mean, result.meanErr);
  return result;
}

}  // namespace gg1
