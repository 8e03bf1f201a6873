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

}  // namespace

cplx RationalPrefactor::eval(cplx theta) const {
  cplx acc = scale * pow_int(theta, -monomialDegree);
  for (std::size_t i = 0; i < numeratorRoots.size(); ++i) {
    const cplx v = numeratorRoots[i];
    cplx factor = 1.0 - theta / v;
    if (v.imag() != 0.0) factor *= 1.0 - theta / std::conj(v);
    acc *= pow_int(factor, multiplicity[i]);
  }
  return acc;
}

double RationalPrefactor::inverse_power_sum(int j) const {
  KahanSum acc;
  for (std::size_t i = 0; i < numeratorRoots.size(); ++i) {
    const cplx v = numeratorRoots[i];
    const cplx p = pow_int(v, -j);
    const double contrib = v.imag() != 0.0 ? 2.0 * p.real() : p.real();
    acc.add(multiplicity[i] * contrib);
  }
  return acc.value();
}

double RationalPrefactor::root_product() const {
  double acc = 1.0;
  for (std::size_t i = 0; i < numeratorRoots.size(); ++i) {
    const cplx v = numeratorRoots[i];
    const double f = v.imag() != 0.0 ? std::norm(v) : v.real();
    for (int r = 0; r < multiplicity[i]; ++r) acc *= f;
  }
  return acc;
}

cplx HelperFunction::H(cplx theta) const {
  return h_num.eval(theta) * pow_int(theta, -Mraw);
}

std::array<cplx, 5> HelperFunction::H_derivatives(cplx theta) const {
  // Leibniz against g(theta) = theta^{-Mraw}:
  // g^{(s)} = (-1)^s Mraw (Mraw+1) ... (Mraw+s-1) theta^{-Mraw-s}.
  cplx d[5];
  d[0] = h_num.eval(theta);
  for (int i = 1; i <= 4; ++i) d[i] = h_num_d[i - 1].eval(theta);
  cplx g[5];
  g[0] = pow_int(theta, -Mraw);
  for (int s = 1; s <= 4; ++s)
    g[s] = g[s - 1] * (-static_cast<double>(Mraw + s - 1)) / theta;
  static const int choose[5][5] = {{1, 0, 0, 0, 0},
                                   {1, 1, 0, 0, 0},
                                   {1, 2, 1, 0, 0},
                                   {1, 3, 3, 1, 0},
                                   {1, 4, 6, 4, 1}};
  std::array<cplx, 5> out;
  for (int r = 0; r <= 4; ++r) {
    KahanSumC acc;
    for (int i = 0; i <= r; ++i)
      acc.add(static_cast<double>(choose[r][i]) * d[i] * g[r - i]);
    out[r] = acc.value();
  }
  return out;
}

ValueDeriv HelperFunction::h_target(cplx theta) const {
  return {h_num.eval(theta), h_num_d[0].eval(theta)};
}

ValueDeriv HelperFunction::f_target(cplx theta) const {
  return {f_num.eval(theta), f_num_d.eval(theta)};
}

// The (1 + |theta|) factor in both scales tracks the phase-noise floor of
// the exponential terms: far up the ladder the best reachable residual grows
// with |Im theta|, not just with the term magnitudes.
double HelperFunction::h_scale(cplx theta) const {
  return h_num.magnitude(theta) * (1.0 + std::abs(theta));
}

double HelperFunction::f_scale(cplx theta) const {
  return f_num.magnitude(theta) * (1.0 + std::abs(theta));
}

HelperFunction build_helper(const QueueModel& model) {
  HelperFunction helper;
  const ExponentDecomposition dec = decompose_F(model);
  helper.cores = extract_cores(dec);
  helper.core = helper.cores.front();
  helper.alpha = std::abs(dec.alpha0());
  helper.constant = dec.constant;

  // kappa_p: smallest pole order among the positive-exponent groups; the
  // helper keeps only that many corrections past each left group's leading
  // coefficient (and never more than six in total).
  int kappa = std::numeric_limits<int>::max();
  for (std::size_t j = dec.jp + 1; j < dec.terms.size(); ++j)
    kappa = std::min(kappa, dec.terms[j].k);
  helper.kappa_p = kappa;
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(kappa) + 1, 6);

  for (int j = 0; j <= dec.jp; ++j) {
    DecompTerm t = dec.terms[j];
    if (t.phi.size() > keep) t.phi.resize(keep);
    helper.terms.push_back(std::move(t));
  }

  // Entire stand-in h_num = H * theta^{Mraw}.
  int Mraw = 0;
  for (const DecompTerm& t : helper.terms)
    Mraw = std::max(Mraw, t.k + static_cast<int>(t.phi.size()) - 1);
  helper.Mraw = Mraw;
  for (const DecompTerm& t : helper.terms)
    for (std::size_t i = 0; i < t.phi.size(); ++i)
      helper.h_num.add_term(t.phi[i], t.alpha, Mraw - t.k - static_cast<int>(i));
  helper.h_num.add_term(helper.constant, 0.0, Mraw);
  helper.h_num.normalize();

  helper.h_num_d.reserve(4);
  helper.h_num_d.push_back(helper.h_num.derivative());
  for (int i = 1; i < 4; ++i)
    helper.h_num_d.push_back(helper.h_num_d.back().derivative());

  helper.f_num = cleared_F(dec);
  helper.kF = max_pole_order(dec);
  helper.f_num_d = helper.f_num.derivative();

  // True pole order of H at zero: strip the Taylor zeroes h_num shares with
  // theta^{Mraw}.
  const int t_order = Mraw + 8;
  const std::vector<double> T = helper.h_num.taylor_at0(t_order);
  double t_scale = 0.0;
  for (double c : T) t_scale = std::max(t_scale, std::abs(c));
  int zc = 0;
  while (zc < static_cast<int>(T.size()) &&
         std::abs(T[zc]) <= 1e-12 * t_scale)
    ++zc;
  if (zc > Mraw + 2)
    fail(Errc::HelperMismatch, "helper numerator vanishes at the origin");
  helper.mp = Mraw - zc;
  helper.q.monomialDegree = helper.mp;
  helper.q.scale = T[zc];
  helper.h_taylor.assign(T.begin() + zc,
                         T.begin() + std::min<std::size_t>(zc + 6, T.size()));

  // Near-origin helper roots: search the left strip capped safely below the
  // first ladder rung of every core branch.
  double im_cap = std::numeric_limits<double>::max();
  double min_seed = std::numeric_limits<double>::max();
  for (const CoreTerm& core : helper.cores) {
    const cplx seed = first_seed(core);
    const double spacing = 2.0 * kPi / std::abs(core.alpha);
    im_cap = std::min(im_cap, seed.imag() - 0.45 * spacing);
    min_seed = std::min(min_seed, std::abs(seed));
  }
  im_cap = std::max(im_cap, 0.3 * 2.0 * kPi / std::abs(dec.alpha0()));
  const double radius = 1.5 * min_seed;
  const double eps0 = 1e-3 * 2.0 * kPi / std::abs(dec.alpha0());
  const Rect rect{-radius, -eps0, -0.5, im_cap};
  // Deflate the numerator's own zeroes at the origin; a multiple zero just
  // outside the right edge of the rect can slip through the phase walk with
  // a full turn wrapped away.
  auto target = [&helper, zc](cplx z) {
    const ValueDeriv vd = helper.h_target(z);
    const cplx p = pow_int(z, zc);
    return ValueDeriv{vd.value / p,
                      (vd.deriv - static_cast<double>(zc) * vd.value / z) / p};
  };
  auto scl = [&helper, zc](cplx z) {
    return helper.h_scale(z) / std::pow(std::abs(z), zc);
  };
  std::vector<OriginRoot> raw = winding_roots(target, scl, rect, 1e-11);

  // Canonicalize to upper-half representatives and drop conjugate twins.
  for (OriginRoot& r : raw) {
    if (std::abs(r.z.imag()) < 1e-9 * std::max(1.0, std::abs(r.z)))
      r.z = {r.z.real(), 0.0};
    else if (r.z.imag() < 0.0)
      r.z = std::conj(r.z);
  }
  std::sort(raw.begin(), raw.end(), [](const OriginRoot& a, const OriginRoot& b) {
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.z.real() < b.z.real();
  });
  for (const OriginRoot& r : raw) {
    if (!helper.q.numeratorRoots.empty()) {
      const cplx prev = helper.q.numeratorRoots.back();
      if (std::abs(r.z - prev) < 1e-7 * std::max(1.0, std::abs(prev))) continue;
    }
    helper.q.numeratorRoots.push_back(r.z);
    helper.q.multiplicity.push_back(r.multiplicity);
  }

  int n_v = 0;
  for (std::size_t i = 0; i < helper.q.numeratorRoots.size(); ++i)
    n_v += helper.q.multiplicity[i] *
           (helper.q.numeratorRoots[i].imag() != 0.0 ? 2 : 1);
  const int twice_n0 = n_v - helper.mp + 1;
  if (helper.cores.size() == 1) {
    if (twice_n0 < 2 || twice_n0 % 2 != 0)
      fail(Errc::HelperMismatch,
           "near-origin helper root count is inconsistent with the pole order");
    helper.n0 = twice_n0 / 2;
  } else {
    // The degree relation anchors the single-ladder tail telescoping; with
    // several interleaved ladders the helper serves root seeding only and no
    // consumer reads the anchor.
    helper.n0 = 0;
  }
  return helper;
}

}  // namespace gg1
