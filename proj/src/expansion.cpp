// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <gg1/spectral.hpp>

namespace gg1 {
namespace {

constexpr double kPi = 3.14159265358979323846;

cplx pow_int(cplx z, int p) {
  if (p == 0) return {1.0, 0.0};
  const bool neg = p < 0;
  unsigned long e = neg ? static_cast<unsigned long>(-(long)p)
                        : static_cast<unsigned long>(p);
  cplx acc{1.0, 0.0};
  cplx base = z;
  while (e != 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return neg ? 1.0 / acc : acc;
}

/// Product accumulator with a separate binary exponent so that long bare
/// products can pass through astronomically large intermediate magnitudes.
struct ScaledProduct {
  cplx m{1.0, 0.0};
  long e2 = 0;

  void mul(cplx f) {
    m *= f;
    const double a = std::abs(m);
    if (a > 1e150 || (a > 0.0 && a < 1e-150)) {
      int e = 0;
      std::frexp(a, &e);
      m *= std::ldexp(1.0, -e);
      e2 += e;
    }
  }

  cplx over(const ScaledProduct& den) const {
    cplx r = m / den.m;
    long rem = e2 - den.e2;
    if (rem > 4000 || rem < -4000)
      fail(Errc::NoConvergence, "coefficient product over/underflows");
    while (rem != 0) {
      const int step = static_cast<int>(std::max<long>(-900, std::min<long>(900, rem)));
      r *= std::ldexp(1.0, step);
      rem -= step;
    }
    return r;
  }
};

struct Merged {
  std::vector<cplx> z;
  std::vector<int> k;
  std::size_t originCount = 0;
};

Merged merged_roots(const RootLadder& lad) {
  Merged m;
  for (const OriginRoot& r : lad.originRoots) {
    m.z.push_back(r.z);
    m.k.push_back(r.multiplicity);
  }
  m.originCount = m.z.size();
  for (const cplx& z : lad.z) {
    m.z.push_back(z);
    m.k.push_back(1);
  }
  return m;
}

double factorial(int n) {
  double acc = 1.0;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace

cplx coefficients_naive(const RootLadder& ladder, double alpha, long n,
                        long K) {
  if (K < 0) fail(Errc::ParseError, "coefficients_naive: K must be >= 0");
  const Merged m = merged_roots(ladder);
  if (n < 0 || n >= static_cast<long>(m.z.size()))
    fail(Errc::ParseError, "coefficients_naive: index out of range");
  const cplx x = m.z[static_cast<std::size_t>(n)];
  if (m.k[static_cast<std::size_t>(n)] != 1)
    fail(Errc::RepeatedRoot, "coefficients_naive: root is not simple");

  const long nLadder = n - static_cast<long>(m.originCount);  // < 0: origin
  const long lim = (nLadder >= 0 ? nLadder + 1 : 0) + K;
  if (lim > static_cast<long>(ladder.size()))
    fail(Errc::ParseError, "coefficients_naive: ladder shorter than n + K");

  ScaledProduct den;
  auto mul_factors = [&](std::size_t idx) {
    const cplx zl = m.z[idx];
    if (m.k[idx] != 1)
      fail(Errc::RepeatedRoot, "coefficients_naive: repeated root in product");
    if (static_cast<long>(idx) == n) {
      if (x.imag() != 0.0) den.mul(1.0 - x / std::conj(x));
      return;
    }
    if (std::abs(x - zl) < 1e-9)
      fail(Errc::RepeatedRoot, "coefficients_naive: clustered roots");
    den.mul(1.0 - x / zl);
    if (zl.imag() != 0.0) den.mul(1.0 - x / std::conj(zl));
  };
  for (std::size_t i = 0; i < m.originCount; ++i) mul_factors(i);
  for (long l = 0; l < lim; ++l)
    mul_factors(m.originCount + static_cast<std::size_t>(l));

  ScaledProduct num;
  num.mul(std::exp(0.5 * alpha * x));
  return num.over(den);
}

cplx coefficients_telescoped(const RootLadder& ladder,
                             const HelperFunction& helper, double alpha,
                             long n, long k) {
  (void)alpha;  // cancelled exactly against the helper's exponential factor
  if (k < 0) fail(Errc::ParseError, "coefficients_telescoped: k must be >= 0");
  const Merged m = merged_roots(ladder);
  if (n < 0 || n >= static_cast<long>(m.z.size()))
    fail(Errc::ParseError, "coefficients_telescoped: index out of range");
  const cplx x = m.z[static_cast<std::size_t>(n)];
  if (m.k[static_cast<std::size_t>(n)] != 1)
    fail(Errc::RepeatedRoot, "coefficients_telescoped: root is not simple");

  const long nLadder = n - static_cast<long>(m.originCount);
  const long lim = (nLadder >= 0 ? nLadder + 1 : 0) + k;
  if (lim > static_cast<long>(ladder.size()))
    fail(Errc::ParseError, "coefficients_telescoped: ladder shorter than n + k");

  ScaledProduct num, den;
  num.mul(helper.q.eval(x));

  // Paired w/z ratio factors stay near one, so the product cannot blow up.
  for (long l = 0; l < lim; ++l) {
    if (l == nLadder) continue;
    const cplx w = ladder.w[static_cast<std::size_t>(l)];
    const cplx z = ladder.z[static_cast<std::size_t>(l)];
    const cplx fn = (1.0 - x / w) * (1.0 - x / std::conj(w));
    const cplx fd = (1.0 - x / z) * (1.0 - x / std::conj(z));
    num.mul(fn / fd);
  }

  if (nLadder >= 0) {
    const cplx w = ladder.w[static_cast<std::size_t>(nLadder)];
    num.mul(1.0 - x / std::conj(w));
    const cplx delta = x - w;
    cplx dd;
    if (std::abs(delta) <= 1e-2 * std::max(1.0, std::abs(w))) {
      const std::array<cplx, 5> Hd = helper.H_derivatives(w);
      dd = Hd[1] + delta * (Hd[2] / 2.0 + delta * (Hd[3] / 6.0 + delta * Hd[4] / 24.0));
    } else {
      dd = (helper.H(x) - helper.H(w)) / delta;
    }
    den.mul(-w);
    den.mul(dd);
  } else {
    den.mul(helper.H(x));
  }

  for (std::size_t i = 0; i < m.originCount; ++i) {
    const cplx zo = m.z[i];
    if (static_cast<long>(i) == n) {
      if (x.imag() != 0.0) den.mul(1.0 - x / std::conj(x));
      continue;
    }
    cplx f = 1.0 - x / zo;
    if (zo.imag() != 0.0) f *= 1.0 - x / std::conj(zo);
    den.mul(pow_int(f, m.k[i]));
  }
  if (nLadder >= 0 && x.imag() != 0.0) den.mul(1.0 - x / std::conj(x));

  return num.over(den);
}

std::array<cplx, 2> coefficients_repeated(const std::vector<cplx>& roots,
                                          const std::vector<int>& mults,
                                          double alpha, std::size_t n) {
  if (n >= roots.size() || roots.size() != mults.size())
    fail(Errc::ParseError, "coefficients_repeated: index out of range");
  const cplx x = roots[n];
  const int kn = mults[n];
  if (kn < 1 || kn > 2)
    fail(Errc::Unsupported, "coefficients_repeated: multiplicity above two");

  ScaledProduct den;
  if (x.imag() != 0.0) den.mul(pow_int(1.0 - x / std::conj(x), kn));
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (l == n) continue;
    const cplx zl = roots[l];
    cplx f = 1.0 - x / zl;
    if (zl.imag() != 0.0) f *= 1.0 - x / std::conj(zl);
    den.mul(pow_int(f, mults[l]));
  }
  ScaledProduct num;
  num.mul(std::exp(0.5 * alpha * x));
  const cplx bare = num.over(den);  // e^{alpha x / 2} prod (1 - x/z_l)^{-k_l}

  if (kn == 1) return {bare, cplx{0.0, 0.0}};

  // Multiplicity two: leading coefficient plus the first correction sum.
  KahanSumC y1;
  y1.add(cplx{0.5 * alpha, 0.0});
  if (x.imag() != 0.0) y1.add(static_cast<double>(kn) / (std::conj(x) - x));
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (l == n) continue;
    const cplx zl = roots[l];
    cplx s1 = 1.0 / (zl - x);
    if (zl.imag() != 0.0) s1 += 1.0 / (std::conj(zl) - x);
    y1.add(static_cast<double>(mults[l]) * s1);
  }
  const cplx A2 = x * x * bare;
  const cplx A1 = y1.value() * A2;
  return {-A1 / x, A2 / (x * x)};
}

double tail_probability(const SpectralExpansion& exp, double t, long N) {
  if (!(t > 0.0))
    fail(Errc::ParseError,
         "tail_probability: t must be > 0 (t = 0 is one minus the idle mass)");
  if (N < 1 || N > static_cast<long>(exp.z.size()))
    fail(Errc::ParseError, "tail_probability: N beyond the built expansion");
  // N counts summed entries: the origin entries first, then ladder pairs.
  KahanSum total;
  double leak = 0.0;
  for (long i = 0; i < N; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const cplx z = exp.z[idx];
    cplx amp = exp.a[idx][0];
    if (exp.k[idx] == 2) amp += exp.a[idx][1] * (1.0 - t * z);
    const cplx term = amp * std::exp(z * t);
    if (z.imag() != 0.0) {
      total.add(2.0 * term.real());
    } else {
      total.add(term.real());
      leak = std::max(leak, std::abs(term.imag()));
    }
  }
  if (leak > 1e-7)
    fail(Errc::ImaginaryLeak, "tail_probability: imaginary residual too large");
  return total.value();
}

double idle_probability(const SpectralExpansion& exp,
                        const HelperFunction& helper,
                        const RationalPrefactor& r, const RootLadder& ladder) {
  double p = (helper.mp % 2 == 0 ? -1.0 : 1.0) * r.scale / r.root_product();
  for (std::size_t i = 0; i < exp.originCount; ++i) {
    const cplx z = exp.z[i];
    const double f = z.imag() != 0.0 ? std::norm(z) : z.real();
    for (int q = 0; q < exp.k[i]; ++q) p *= f;
  }
  const std::size_t lim = std::min<std::size_t>(
      ladder.size(), static_cast<std::size_t>(std::max<long>(
                         exp.K_tailproduct, 0)));
  for (std::size_t l = 0; l < lim; ++l)
    p *= std::norm(ladder.z[l]) / std::norm(ladder.w[l]);
  if (p < 0.0 || p > 1.0 + 1e-6)
    fail(Errc::NonProbability, "idle_probability: value escapes [0, 1]");
  return p;
}

double cumulants(const RootLadder& ladder, const HelperFunction* helper,
                 double alpha, int j, long nSplit) {
  if (j < 1 || j > 3)
    fail(Errc::ParseError, "cumulants: order must be 1, 2, or 3");
  if (nSplit < 1) fail(Errc::ParseError, "cumulants: nSplit must be >= 1");
  if (nSplit - 1 > static_cast<long>(ladder.size()))
    fail(Errc::ParseError, "cumulants: ladder shorter than nSplit");

  KahanSum inner;
  for (const OriginRoot& r : ladder.originRoots) {
    const cplx p = pow_int(r.z, -j);
    const double c = r.z.imag() != 0.0 ? 2.0 * p.real() : p.real();
    inner.add(r.multiplicity * c);
  }
  for (long l = 0; l + 1 < nSplit; ++l) {
    const cplx p = pow_int(ladder.z[static_cast<std::size_t>(l)], -j);
    inner.add(2.0 * p.real());
  }

  if (helper != nullptr) {
    if (helper->h_taylor.size() < 4)
      fail(Errc::HelperMismatch, "cumulants: helper Taylor data incomplete");
    const double c0 = helper->h_taylor[0];
    const double b1 = helper->h_taylor[1] / c0;
    const double b2 = helper->h_taylor[2] / c0;
    const double b3 = helper->h_taylor[3] / c0;
    double g = 0.0;  // (log h)^{(j)}(0) / (j-1)!
    if (j == 1) g = b1;
    if (j == 2) g = 2.0 * b2 - b1 * b1;
    if (j == 3) g = (6.0 * b3 - 6.0 * b1 * b2 + 2.0 * b1 * b1 * b1) / 2.0;

    KahanSum w_sum;
    w_sum.add(-g);
    if (j == 1) w_sum.add(-0.5 * alpha);
    w_sum.add(-helper->q.inverse_power_sum(j));
    for (long l = 0; l + 1 < nSplit; ++l) {
      const cplx p = pow_int(ladder.w[static_cast<std::size_t>(l)], -j);
      w_sum.add(-2.0 * p.real());
    }
    inner.add(w_sum.value());
  }

  const double fact_sign = (j == 1) ? -1.0 : (j == 2) ? 1.0 : -2.0;
  double kappa = fact_sign * inner.value();
  if (j == 1) kappa += -0.5 * alpha;
  return kappa;
}

std::array<double, 3> moments_from_cumulants(double k1, double k2, double k3) {
  return {k1, k2 + k1 * k1, k3 + 3.0 * k1 * k2 + k1 * k1 * k1};
}

double moments_spectral(const SpectralExpansion& exp, int nu, long N) {
  if (nu < 1 || nu > 20)
    fail(Errc::ParseError, "moments_spectral: order must be in 1..20");
  if (N < 1 || N > static_cast<long>(exp.z.size()))
    fail(Errc::ParseError, "moments_spectral: N beyond the built expansion");
  const double f1 = factorial(nu);      // (nu + 0)! / 0!
  const double f2 = factorial(nu + 1);  // (nu + 1)! / 1!
  KahanSum total;
  for (long i = 0; i < N; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const cplx zp = pow_int(exp.z[idx], -nu);
    cplx term = exp.a[idx][0] * zp * f1;
    if (exp.k[idx] == 2) term += exp.a[idx][1] * zp * f2;
    total.add(exp.z[idx].imag() != 0.0 ? 2.0 * term.real() : term.real());
  }
  return (nu % 2 == 0 ? 1.0 : -1.0) * total.value();
}

double EulerTail::tail_product(double c) const {
  return std::exp(c * tailInverseSum);
}

EulerTail euler_tools(double b, long n) {
  if (!(b >= 0.0) || n < 1)
    fail(Errc::ParseError, "euler_tools: need b >= 0 and n >= 1");
  EulerTail out;
  if (b < 1e-4) {
    out.Omega = 1.0 / 24.0 - b * b / 1440.0;
  } else {
    out.Omega = (0.5 * b / std::tanh(0.5 * b) - 1.0) / (2.0 * b * b);
  }
  KahanSum partial;
  for (long jj = 1; jj < n; ++jj) {
    const double den = b * b + 4.0 * kPi * kPi * static_cast<double>(jj) *
                                   static_cast<double>(jj);
    partial.add(1.0 / den);
  }
  out.tailInverseSum = out.Omega - partial.value();
  return out;
}

double euler_omega(double b) {
  if (!(b >= 0.0)) fail(Errc::ParseError, "euler_omega: need b >= 0");
  if (b < 1e-4)
    return kPi * kPi / 6.0 - b * b * kPi * kPi * kPi * kPi / 90.0;
  return (b * kPi / std::tanh(b * kPi) - 1.0) / (2.0 * b * b);
}

namespace {

/// Rational-interarrival (Erlang or exponential) service-point models: roots
/// come from the real rho-system after the substitution z = d (lambda -
/// theta); coefficients are exact residues of the rational numerator.
bool sigma_path_eligible(const QueueModel& model) {
  const bool erl = model.interarrival.kind == Kind::Exponential ||
                   model.interarrival.kind == Kind::Erlang;
  return erl && model.service.kind == Kind::Deterministic;
}

void build_sigma_path(Analysis& out, long K_roots) {
  const QueueModel& model = out.model;
  out.erlangPath = true;
  out.d = model.service.d;
  out.lambda = model.interarrival.rate;
  out.mshape =
      model.interarrival.kind == Kind::Erlang ? model.interarrival.shape : 1;
  const double d = out.d, lambda = out.lambda;
  const int m = out.mshape;

  const RhoSystem sys = RhoSystem::make(m, m * std::log(d * lambda) - d * lambda);
  auto target = [&model](cplx z) {
    return ValueDeriv{eval_F(model, z, 0), eval_F(model, z, 1)};
  };
  auto f_scale = [d, lambda, m](cplx z) {
    // The |z| term tracks the phase-noise floor of exp(-dz) at large
    // imaginary parts of z; without it the target is unreachable far out.
    return std::abs(std::exp(-d * z)) *
               std::pow(std::abs(1.0 - z / lambda), -m) +
           1.0 + std::abs(z);
  };
  auto polish = [&](cplx seed, int* steps) {
    const double eps = std::max(1e-300, 200.0 * 2.2204460492503131e-16 *
                                            f_scale(seed));
    return newton_refine(target, seed, eps, 50, steps);
  };

  RootLadder lad;
  lad.n1 = 1;
  for (const auto& [zs, mult] : sigma_origin_roots(sys, false)) {
    const cplx rep{lambda - zs.real() / d, std::abs(zs.imag()) / d};
    if (std::abs(rep) < 1e-9 * std::max(1.0, lambda)) continue;  // theta = 0
    int steps = 0;
    const cplx z = polish(rep, &steps);
    if (z.real() > 0.0) {
      out.rightRoots.push_back(z);
    } else {
      lad.originRoots.push_back({z, mult});
    }
  }
  for (long n = 1; n <= K_roots; ++n) {
    const cplx zs = sigma_ladder_root(sys, false, n);
    const cplx rep{lambda - zs.real() / d, std::abs(zs.imag()) / d};
    int steps = 0;
    const cplx z = polish(rep, &steps);
    lad.u.push_back(rep);
    lad.w.push_back(rep);
    lad.newtonStepsW.push_back(0);
    lad.z.push_back(z);
    lad.newtonStepsZ.push_back(steps);
    lad.residualF.push_back(std::abs(eval_F(model, z, 0)));
  }
  out.branchLadders.push_back(std::move(lad));

  // Exact residues of the rational numerator against F.
  const RootLadder& ladder = out.branchLadders.front();
  auto numerator = [&](cplx theta) {
    cplx acc = (m / lambda - d) * theta * pow_int(1.0 - theta / lambda, -m);
    for (const cplx& u : out.rightRoots) {
      acc *= 1.0 - theta / u;
      if (u.imag() != 0.0) acc *= 1.0 - theta / std::conj(u);
    }
    return acc;
  };
  const Merged mg = merged_roots(ladder);
  SpectralExpansion& exp = out.expansion;
  exp.alpha = d;
  exp.z = mg.z;
  exp.k = mg.k;
  exp.originCount = mg.originCount;
  exp.K_roots = K_roots;
  exp.K_tailproduct = 0;
  exp.a.resize(mg.z.size());
  for (std::size_t i = 0; i < mg.z.size(); ++i) {
    if (mg.k[i] != 1)
      fail(Errc::RepeatedRoot, "sigma path: unexpected repeated root");
    const cplx z = mg.z[i];
    exp.a[i] = {-numerator(z) / (z * eval_F(model, z, 1)), cplx{0.0, 0.0}};
  }
  out.expansionReady = true;

  double uprod = 1.0;
  for (const cplx& u : out.rightRoots)
    uprod *= u.imag() != 0.0 ? std::norm(u) : u.real();
  out.idleClosed = (m - d * lambda) * std::pow(lambda, m - 1) / uprod;
}

}  // namespace

Analysis analyze_model(const QueueModel& model, long K_roots,
                       long telescope_k) {
  if (K_roots < 1)
    fail(Errc::ParseError, "analyze_model: K_roots must be >= 1");
  if (telescope_k < 0)
    fail(Errc::ParseError, "analyze_model: telescope_k must be >= 0");
  if (model.service.kind == Kind::GatedPoissonBatch)
    fail(Errc::Unsupported,
         "analyze_model: batch-gated service has its own closed forms");

  Analysis out;
  out.model = model;
  if (sigma_path_eligible(model)) {
    build_sigma_path(out, K_roots);
    return out;
  }

  out.helper = build_helper(model);
  const std::size_t branches = out.helper.cores.size();
  for (std::size_t b = 0; b < branches; ++b) {
    const long len = b == 0 ? K_roots + telescope_k : K_roots;
    out.branchLadders.push_back(build_ladder(model, out.helper, len, b));
  }
  // With several interleaved ladders the origin scan may pick up another
  // branch's first rungs; drop those.
  for (std::size_t b = 0; b < branches; ++b)
    for (std::size_t o = 0; o < branches; ++o) {
      if (o == b) continue;
      auto& origin = out.branchLadders[b].originRoots;
      const auto& other = out.branchLadders[o].z;
      origin.erase(std::remove_if(origin.begin(), origin.end(),
                                  [&other](const OriginRoot& r) {
                                    for (const cplx& z : other)
                                      if (std::abs(r.z - z) <
                                          1e-6 * std::max(1.0, std::abs(z)))
                                        return true;
                                    return false;
                                  }),
                   origin.end());
    }

  if (branches != 1) return out;  // roots only: no single-ladder expansion

  const RootLadder& ladder = out.branchLadders.front();
  const Merged mg = merged_roots(ladder);
  const std::size_t entries =
      mg.originCount + static_cast<std::size_t>(K_roots);
  bool repeated = false;
  for (int kk : mg.k) repeated = repeated || kk > 1;

  SpectralExpansion& exp = out.expansion;
  exp.alpha = out.helper.alpha;
  exp.originCount = mg.originCount;
  exp.K_roots = K_roots;
  exp.K_tailproduct = static_cast<long>(ladder.size());
  exp.z.assign(mg.z.begin(), mg.z.begin() + entries);
  exp.k.assign(mg.k.begin(), mg.k.begin() + entries);
  exp.a.resize(entries);
  for (std::size_t i = 0; i < entries; ++i) {
    if (repeated) {
      exp.a[i] = coefficients_repeated(mg.z, mg.k, out.helper.alpha, i);
    } else {
      exp.a[i] = {coefficients_telescoped(ladder, out.helper, out.helper.alpha,
                                          static_cast<long>(i), telescope_k),
                  cplx{0.0, 0.0}};
    }
  }
  out.expansionReady = true;
  out.idleClosed = idle_probability(exp, out.helper, out.helper.q, ladder);
  return out;
}

SpectralExpansion build_expansion(const QueueModel& model, long K_roots,
                                  long telescope_k) {
  Analysis a = analyze_model(model, K_roots, telescope_k);
  if (!a.expansionReady)
    fail(Errc::Unsupported,
         "build_expansion: model admits root ladders but no expansion");
  return a.expansion;
}

}  // namespace gg1
