// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Winding-number root search and the near-origin root scan of F.
*/

#include <gg1/rootfinder.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>

namespace gg1 {
namespace {

constexpr double kPi = 3.14159265358979323846;

cplx ipow(cplx z, int k) {
  cplx acc{1.0, 0.0};
  for (int i = 0; i < k; ++i) acc *= z;
  return acc;
}

/// Internal signal: a boundary sample landed on (or too close to) a root.
struct OnContourHit {};

struct SearchContext {
  const std::function<ValueDeriv(cplx)>& f;
  const std::function<double(cplx)>& scale;
  double eps;

  double eps_floor(cplx z) const {
    return std::max(eps, 200.0 * DBL_EPSILON * scale(z));
  }
  double contour_floor(cplx z) const {
    return 1e3 * DBL_EPSILON * scale(z);
  }
  cplx value_checked(cplx z) const {
    const cplx v = f(z).value;
    if (std::abs(v) < contour_floor(z)) throw OnContourHit{};
    return v;
  }
};

struct EdgeWalker {
  const SearchContext& ctx;
  double total = 0.0;

  void walk(cplx za, cplx fa, cplx zb, cplx fb, int depth) {
    const double dphi = std::arg(fb / fa);
    if (depth >= 3 && std::abs(dphi) <= 0.5 * kPi + 1e-9) {
      total += dphi;
      return;
    }
    if (depth > 48)
      fail(Errc::NoConvergence, "winding: boundary phase walk cannot stabilize");
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = ctx.value_checked(zm);
    walk(za, fa, zm, fm, depth + 1);
    walk(zm, fm, zb, fb, depth + 1);
  }
};

int count_roots(const SearchContext& ctx, const Rect& r) {
  const cplx c0{r.re_lo, r.im_lo}, c1{r.re_hi, r.im_lo};
  const cplx c2{r.re_hi, r.im_hi}, c3{r.re_lo, r.im_hi};
  const cplx f0 = ctx.value_checked(c0), f1 = ctx.value_checked(c1);
  const cplx f2 = ctx.value_checked(c2), f3 = ctx.value_checked(c3);
  EdgeWalker w{ctx};
  w.walk(c0, f0, c1, f1, 0);
  w.walk(c1, f1, c2, f2, 0);
  w.walk(c2, f2, c3, f3, 0);
  w.walk(c3, f3, c0, f0, 0);
  const double turns = w.total / (2.0 * kPi);
  const long n = std::lround(turns);
  if (std::abs(turns - double(n)) > 0.2)
    fail(Errc::NoConvergence, "winding: non-integer phase count");
  if (n < 0)
    fail(Errc::CountMismatch,
         "winding: negative count (a pole lies inside the search region)");
  return int(n);
}

bool inside(const Rect& r, cplx z) {
  const double mre = 1e-12 * (r.re_hi - r.re_lo);
  const double mim = 1e-12 * (r.im_hi - r.im_lo);
  return z.real() >= r.re_lo - mre && z.real() <= r.re_hi + mre &&
         z.imag() >= r.im_lo - mim && z.imag() <= r.im_hi + mim;
}

/// Newton polish with multiplicity-aware steps z -= mult f / f'.
cplx polish(const SearchContext& ctx, cplx z, int mult, bool* ok) {
  *ok = false;
  for (int it = 0; it < 80; ++it) {
    const ValueDeriv vd = ctx.f(z);
    if (std::abs(vd.value) < ctx.eps_floor(z) * (mult > 1 ? 10.0 : 1.0)) {
      *ok = true;
      return z;
    }
    if (std::abs(vd.deriv) < 1e-300) return z;
    const cplx step = double(mult) * vd.value / vd.deriv;
    z -= step;
    if (mult > 1 && std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
      // Stationary near a repeated root: residual scales like |f''| dz^2.
      *ok = std::abs(ctx.f(z).value) <
            std::max(ctx.eps, 1e5 * DBL_EPSILON * ctx.scale(z));
      return z;
    }
  }
  return z;
}

/// Picks a cut coordinate whose line stays clear of roots.
double pick_cut(const SearchContext& ctx, const Rect& r, bool vertical) {
  const double lo = vertical ? r.re_lo : r.im_lo;
  const double hi = vertical ? r.re_hi : r.im_hi;
  const double other_lo = vertical ? r.im_lo : r.re_lo;
  const double other_hi = vertical ? r.im_hi : r.re_hi;
  const double len = hi - lo;
  for (double shift : {0.0, 0.07, -0.07, 0.16}) {
    const double cut = lo + (0.5 + shift) * len;
    bool clear = true;
    for (int i = 0; i <= 16 && clear; ++i) {
      const double t = other_lo + (other_hi - other_lo) * double(i) / 16.0;
      const cplx z = vertical ? cplx{cut, t} : cplx{t, cut};
      if (std::abs(ctx.f(z).value) < ctx.contour_floor(z)) clear = false;
    }
    if (clear) return cut;
  }
  return lo + 0.5 * len;  // walker will flag it if a root truly sits here
}

void solve_cell(const SearchContext& ctx, const Rect& r, int count, int depth,
                std::vector<OriginRoot>& out) {
  if (count == 0) return;
  if (depth > 60)
    fail(Errc::NoConvergence, "winding: subdivision depth exhausted");
  const cplx center{0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi)};
  const double diag = std::hypot(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
  if (diag < 1e-7 * std::max(1.0, std::abs(center))) {
    if (count > 2)
      fail(Errc::RepeatedRoot, "winding: multiplicity above 2 is unsupported");
    bool ok = false;
    const cplx z = polish(ctx, center, count, &ok);
    if (!ok)
      fail(Errc::NoConvergence, "winding: repeated-root polish failed");
    out.push_back(OriginRoot{z, count});
    return;
  }
  if (count == 1) {
    bool ok = false;
    const cplx z = polish(ctx, center, 1, &ok);
    if (ok && inside(r, z)) {
      out.push_back(OriginRoot{z, 1});
      return;
    }
  }
  const bool vertical = (r.re_hi - r.re_lo) >= (r.im_hi - r.im_lo);
  const double cut = pick_cut(ctx, r, vertical);
  Rect a = r, b = r;
  if (vertical) {
    a.re_hi = cut;
    b.re_lo = cut;
  } else {
    a.im_hi = cut;
    b.im_lo = cut;
  }
  const int ca = count_roots(ctx, a);
  const int cb = count_roots(ctx, b);
  if (ca + cb != count)
    fail(Errc::NoConvergence, "winding: subdivision counts disagree");
  solve_cell(ctx, a, ca, depth + 1, out);
  solve_cell(ctx, b, cb, depth + 1, out);
}

std::vector<OriginRoot> dedupe(std::vector<OriginRoot> roots) {
  std::sort(roots.begin(), roots.end(), [](const OriginRoot& a, const OriginRoot& b) {
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.z.real() < b.z.real();
  });
  std::vector<OriginRoot> out;
  for (const OriginRoot& r : roots) {
    if (!out.empty() &&
        std::abs(r.z - out.back().z) < 1e-7 * std::max(1.0, std::abs(r.z))) {
      out.back().multiplicity = std::max(out.back().multiplicity, r.multiplicity);
      continue;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<OriginRoot> winding_roots(const std::function<ValueDeriv(cplx)>& f,
                                      const std::function<double(cplx)>& scale,
                                      Rect rect, double eps) {
  const SearchContext ctx{f, scale, eps};
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      const int total = count_roots(ctx, rect);
      std::vector<OriginRoot> found;
      solve_cell(ctx, rect, total, 0, found);
      found = dedupe(std::move(found));
      int sum = 0;
      for (const OriginRoot& r : found) sum += r.multiplicity;
      if (sum != total)
        fail(Errc::CountMismatch,
             "winding: phase count and polished roots disagree");
      return found;
    } catch (const OnContourHit&) {
      // A root sits on the boundary: inflate away from the imaginary axis
      // (the right edge is pinned clear of the origin) and rescan.
      const double w = rect.re_hi - rect.re_lo;
      const double h = rect.im_hi - rect.im_lo;
      rect.re_lo -= 0.031 * w;
      rect.im_lo -= 0.017 * h;
      rect.im_hi += 0.031 * h;
    }
  }
  fail(Errc::NoConvergence, "winding: persistent boundary hits");
}

std::vector<CoreTerm> extract_cores(const ExponentDecomposition& dec) {
  if (dec.jp < 0) fail(Errc::Unsupported, "no left exponent terms");
  const auto& left0 = dec.terms[0];
  const double c0 = left0.phi[0];
  const int k0 = left0.k;
  bool dominated = true;
  for (int j = 0; j <= dec.jp; ++j)
    if (dec.terms[j].k < k0) dominated = false;
  if (dominated)
    return {CoreTerm::make(c0, left0.alpha, k0)};
  if (dec.jp != 1)
    fail(Errc::Unsupported,
         "more than two left exponent groups need a core split beyond the "
         "supported two-factor form");
  // Two-factor split: T = T0 T1 + remainder with
  // T0 = (ca/cb) e^{(a1-a2) theta} theta^{-(ka-kb)} + 1 and
  // T1 = cb e^{a2 theta} theta^{-kb} - 1.
  const auto& left1 = dec.terms[1];
  const double cb = left1.phi[0];
  const int kb = left1.k;
  if (k0 - kb < 1 || !(left0.alpha < left1.alpha))
    fail(Errc::Unsupported, "left exponent groups do not admit a core split");
  std::vector<CoreTerm> cores;
  cores.push_back(CoreTerm::make(-c0 / cb, left0.alpha - left1.alpha, k0 - kb));
  cores.push_back(CoreTerm::make(cb, left1.alpha, kb));
  return cores;
}

cplx first_seed(const CoreTerm& core) {
  const long n1 = core.odd_parity() ? 0 : 1;
  return core_roots(core, n1, n1)[0];
}

std::vector<OriginRoot> origin_roots(const QueueModel& model,
                                     double searchRadius) {
  std::function<ValueDeriv(cplx)> target;
  std::function<double(cplx)> scale;
  double spacing = 0.0;
  double default_radius = 0.0;

  bool have_decomp = false;
  int ord0 = 0;
  ExpPolySum f_sum, f_deriv;
  try {
    const ExponentDecomposition dec = decompose_F(model);
    f_sum = cleared_F(dec);
    f_deriv = f_sum.derivative();
    have_decomp = true;
    ord0 = max_pole_order(dec) + 1;
    spacing = 2.0 * kPi / std::abs(dec.alpha0());
    double min_seed = 0.0;
    for (const CoreTerm& core : extract_cores(dec)) {
      const double s = std::abs(first_seed(core));
      if (min_seed == 0.0 || s < min_seed) min_seed = s;
    }
    default_radius = 1.5 * min_seed;
  } catch (const Error&) {
    have_decomp = false;
  }

  if (have_decomp) {
    // Deflate the known zero at theta = 0 (order kmax + 1: the simple zero
    // of the ratio times the cleared denominator power). A multiple zero
    // hugging the scan boundary can slip through the phase walk with a full
    // turn wrapped away; the deflated function is entire and root-free at 0,
    // so nothing sits near the contour's right edge.
    target = [&f_sum, &f_deriv, ord0](cplx z) {
      const cplx p = ipow(z, ord0);
      const cplx v = f_sum.eval(z);
      return ValueDeriv{v / p,
                        (f_deriv.eval(z) - double(ord0) * v / z) / p};
    };
    scale = [&f_sum, ord0](cplx z) {
      return f_sum.magnitude(z) / std::pow(std::abs(z), ord0);
    };
  } else {
    const bool erlang_det =
        (model.interarrival.kind == Kind::Erlang ||
         model.interarrival.kind == Kind::Exponential) &&
        model.service.kind == Kind::Deterministic;
    const bool gated = model.service.kind == Kind::GatedPoissonBatch &&
                       model.interarrival.kind == Kind::Deterministic;
    if (erlang_det) {
      const double d = model.service.d;
      const double lam = model.interarrival.rate;
      const int m = (model.interarrival.kind == Kind::Erlang)
                        ? model.interarrival.shape
                        : 1;
      spacing = 2.0 * kPi / d;
      const RhoSystem sys =
          RhoSystem::make(m, m * std::log(d * lam) - d * lam);
      const cplx zs = sigma_ladder_root(sys, false, 1);
      default_radius =
          1.5 * std::abs(cplx{lam - zs.real() / d, zs.imag() / d});
    } else if (gated && model.service.parts[0].kind == Kind::Exponential) {
      spacing = 2.0 * kPi / model.interarrival.d;
      const cplx s1 =
          gated_roots(model.service.rate, model.service.parts[0].rate, 1).second;
      default_radius = 1.5 * std::abs(s1);
    } else {
      spacing = 2.0 * kPi;
    }
    target = [&model](cplx z) {
      return ValueDeriv{eval_F(model, z, 0), eval_F(model, z, 1)};
    };
    scale = [&model](cplx z) {
      return std::abs(eval_transform(model.service, z)) *
                 std::abs(eval_transform(model.interarrival, -z)) +
             1.0;
    };
  }

  double radius = searchRadius > 0.0 ? searchRadius : default_radius;
  if (!(radius > 0.0))
    fail(Errc::Unsupported,
         "origin search: no default radius for this model; pass one");

  const double eps0 = 1e-3 * spacing;
  for (int attempt = 0;; ++attempt) {
    const Rect rect{-radius, -eps0, -0.5, radius};
    try {
      std::vector<OriginRoot> raw = winding_roots(target, scale, rect, 1e-11);
      std::vector<OriginRoot> canon;
      for (OriginRoot r : raw) {
        if (std::abs(r.z.imag()) < 1e-9 * std::max(1.0, std::abs(r.z)))
          r.z = cplx{r.z.real(), 0.0};
        else if (r.z.imag() < 0.0)
          r.z = std::conj(r.z);
        if (std::abs(r.z) <= radius) canon.push_back(r);
      }
      std::sort(canon.begin(), canon.end(),
                [](const OriginRoot& a, const OriginRoot& b) {
                  if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
                  return a.z.real() < b.z.real();
                });
      std::vector<OriginRoot> out;
      for (const OriginRoot& r : canon) {
        if (!out.empty() &&
            std::abs(r.z - out.back().z) < 1e-7 * std::max(1.0, std::abs(r.z)))
          continue;  // conjugate partner from the sub-axis strip
        out.push_back(r);
      }
      return out;
    } catch (const Error& e) {
      if (e.code() == Errc::CountMismatch && attempt == 0) {
        radius *= 1.07;
        continue;
      }
      throw;
    }
  }
}

}  // namespace gg1
