// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Distribution transforms, queue models, and the far-field exponent
         decomposition of F.
*/

#include <gg1/transforms.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gg1/errors.hpp>

namespace gg1 {
namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) acc = acc * x + c[j];
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t j = 1; j < c.size(); ++j) d.push_back(c[j] * double(j));
  return d;
}

/// All derivative value rows p(u), p'(u), p''(u), ... down to the constant.
std::vector<double> derivative_values(std::vector<double> c, double u) {
  std::vector<double> values;
  while (!c.empty()) {
    values.push_back(poly_eval(c, u));
    c = poly_derivative(c);
  }
  return values;
}

/// integral over [a, b] of sum c[j] x^j dx.
double poly_integral(const std::vector<double>& c, double a, double b) {
  KahanSum s;
  double xa = 1.0, xb = 1.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    xa *= a;
    xb *= b;
    s.add(c[j] * (xb - xa) / double(j + 1));
  }
  return s.value();
}

/// coeffs of x * p(x).
std::vector<double> poly_shift_up(const std::vector<double>& c) {
  std::vector<double> up(c.size() + 1, 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) up[j + 1] = c[j];
  return up;
}

/*!
  integral over [a, b] of p(x) exp(-theta x) dx for a polynomial density
  piece. Exact antiderivative form away from theta = 0; a short moment
  series once |theta| * max(|a|, |b|) drops below 1e-3, where the
  antiderivative form loses digits to cancellation.
*/
cplx laplace_poly(const std::vector<double>& c, double a, double b, cplx theta) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(theta) * scale < 1e-3) {
    // sum_{m<8} (-theta)^m / m! * integral x^m p(x); next term is O(1e-24).
    KahanSumC sum;
    std::vector<double> row = c;
    cplx factor{1.0, 0.0};
    for (int m = 0; m < 8; ++m) {
      sum.add(factor * poly_integral(row, a, b));
      row = poly_shift_up(row);
      factor *= -theta / double(m + 1);
    }
    return sum.value();
  }
  const cplx inv = 1.0 / theta;
  auto endpoint = [&](double u) {
    const std::vector<double> dv = derivative_values(c, u);
    cplx horner{0.0, 0.0};
    for (std::size_t n = dv.size(); n-- > 0;) horner = horner * inv + dv[n];
    return std::exp(-theta * u) * horner * inv;
  };
  return endpoint(a) - endpoint(b);
}

int rational_series_length(double rate) {
  // Truncation so the discarded tail of sum (rate/|theta|)^i stays below
  // 1e-13 on the |theta| >= 5 annulus where reassembly is checked.
  if (rate >= 4.5)
    fail(Errc::Unsupported,
         "rational factor rate too large for the series annulus");
  const double ratio = rate / 5.0;
  int len = int(std::ceil(-30.0 / std::log(ratio)));
  return std::clamp(len, 8, 600);
}

}  // namespace

TransformSpec TransformSpec::deterministic(double d) {
  if (!(d >= 0.0)) fail(Errc::ParseError, "deterministic: need d >= 0");
  TransformSpec s;
  s.kind = Kind::Deterministic;
  s.d = d;
  return s;
}

TransformSpec TransformSpec::exponential(double rate) {
  if (!(rate > 0.0)) fail(Errc::ParseError, "exponential: need rate > 0");
  TransformSpec s;
  s.kind = Kind::Exponential;
  s.rate = rate;
  return s;
}

TransformSpec TransformSpec::erlang(int shape, double rate) {
  if (shape < 1 || !(rate > 0.0))
    fail(Errc::ParseError, "erlang: need shape >= 1 and rate > 0");
  TransformSpec s;
  s.kind = Kind::Erlang;
  s.shape = shape;
  s.rate = rate;
  return s;
}

TransformSpec TransformSpec::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo))
    fail(Errc::ParseError, "uniform: need 0 <= lo < hi");
  TransformSpec s;
  s.kind = Kind::Uniform;
  s.lo = lo;
  s.hi = hi;
  return s;
}

TransformSpec TransformSpec::polynomial_density(double p0, double p1,
                                                std::vector<double> coeffs) {
  if (!(p0 >= 0.0) || !(p1 > p0) || coeffs.empty())
    fail(Errc::ParseError, "polydensity: need 0 <= p0 < p1 and coefficients");
  const double total = poly_integral(coeffs, p0, p1);
  if (std::abs(total - 1.0) > 1e-12)
    fail(Errc::ParseError, "polydensity: density must integrate to 1");
  for (int i = 0; i <= 2000; ++i) {
    const double x = p0 + (p1 - p0) * double(i) / 2000.0;
    if (poly_eval(coeffs, x) < -1e-12)
      fail(Errc::ParseError, "polydensity: density negative on support");
  }
  TransformSpec s;
  s.kind = Kind::PolynomialDensity;
  s.lo = p0;
  s.hi = p1;
  s.coeffs = std::move(coeffs);
  return s;
}

TransformSpec TransformSpec::gated_poisson_batch(double arrival_rate,
                                                 TransformSpec per_customer) {
  if (!(arrival_rate > 0.0))
    fail(Errc::ParseError, "gated batch: need arrival rate > 0");
  TransformSpec s;
  s.kind = Kind::GatedPoissonBatch;
  s.rate = arrival_rate;
  s.parts.push_back(std::move(per_customer));
  return s;
}

TransformSpec TransformSpec::mixture(std::vector<double> weights,
                                     std::vector<TransformSpec> parts) {
  if (weights.empty() || weights.size() != parts.size())
    fail(Errc::ParseError, "mixture: need matching nonempty weights/parts");
  KahanSum total;
  for (double w : weights) {
    if (!(w > 0.0)) fail(Errc::ParseError, "mixture: weights must be positive");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    fail(Errc::ParseError, "mixture: weights must sum to 1");
  TransformSpec s;
  s.kind = Kind::Mixture;
  s.weights = std::move(weights);
  s.parts = std::move(parts);
  return s;
}

double TransformSpec::mean() const {
  switch (kind) {
    case Kind::Deterministic: return d;
    case Kind::Exponential: return 1.0 / rate;
    case Kind::Erlang: return double(shape) / rate;
    case Kind::Uniform: return 0.5 * (lo + hi);
    case Kind::PolynomialDensity:
      return poly_integral(poly_shift_up(coeffs), lo, hi);
    case Kind::GatedPoissonBatch: return rate * parts[0].mean();
    case Kind::Mixture: {
      KahanSum acc;
      for (std::size_t i = 0; i < parts.size(); ++i)
        acc.add(weights[i] * parts[i].mean());
      return acc.value();
    }
  }
  return 0.0;
}

std::string TransformSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Deterministic: os << "deterministic " << d; break;
    case Kind::Exponential: os << "exponential " << rate; break;
    case Kind::Erlang: os << "erlang " << shape << " " << rate; break;
    case Kind::Uniform: os << "uniform " << lo << " " << hi; break;
    case Kind::PolynomialDensity: {
      os << "polydensity " << lo << " " << hi << " :";
      for (double c : coeffs) os << " " << c;
      break;
    }
    case Kind::GatedPoissonBatch:
      os << "gated " << rate << " (" << parts[0].describe() << ")";
      break;
    case Kind::Mixture: {
      os << "mix";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        os << (i ? " | " : " ") << weights[i] << " " << parts[i].describe();
      }
      break;
    }
  }
  return os.str();
}

cplx eval_transform(const TransformSpec& spec, cplx theta) {
  switch (spec.kind) {
    case Kind::Deterministic: return std::exp(-theta * spec.d);
    case Kind::Exponential: {
      if (std::abs(theta + spec.rate) < 1e-12 * spec.rate)
        fail(Errc::PoleEvaluation, "exponential transform pole at -rate");
      return spec.rate / (spec.rate + theta);
    }
    case Kind::Erlang: {
      if (std::abs(theta + spec.rate) < 1e-12 * spec.rate)
        fail(Errc::PoleEvaluation, "erlang transform pole at -rate");
      return std::pow(spec.rate / (spec.rate + theta), spec.shape);
    }
    case Kind::Uniform: {
      const std::vector<double> c{1.0 / (spec.hi - spec.lo)};
      return laplace_poly(c, spec.lo, spec.hi, theta);
    }
    case Kind::PolynomialDensity:
      return laplace_poly(spec.coeffs, spec.lo, spec.hi, theta);
    case Kind::GatedPoissonBatch: {
      cplx r;
      try {
        r = eval_transform(spec.parts[0], theta);
      } catch (const Error& e) {
        if (e.code() == Errc::PoleEvaluation)
          fail(Errc::NonAnalytic,
               "batch transform has an essential singularity at the "
               "per-customer pole");
        throw;
      }
      const cplx z = spec.rate * (r - 1.0);
      if (z.real() > 700.0)
        fail(Errc::NonAnalytic, "batch transform overflow near singularity");
      return std::exp(z);
    }
    case Kind::Mixture: {
      KahanSumC acc;
      for (std::size_t i = 0; i < spec.parts.size(); ++i)
        acc.add(spec.weights[i] * eval_transform(spec.parts[i], theta));
      return acc.value();
    }
  }
  fail(Errc::Unsupported, "unknown transform kind");
}

cplx eval_transform_deriv(const TransformSpec& spec, cplx theta) {
  switch (spec.kind) {
    case Kind::Deterministic: return -spec.d * std::exp(-theta * spec.d);
    case Kind::Exponential: {
      if (std::abs(theta + spec.rate) < 1e-12 * spec.rate)
        fail(Errc::PoleEvaluation, "exponential transform pole at -rate");
      const cplx u = spec.rate / (spec.rate + theta);
      return -u * u / spec.rate;
    }
    case Kind::Erlang: {
      if (std::abs(theta + spec.rate) < 1e-12 * spec.rate)
        fail(Errc::PoleEvaluation, "erlang transform pole at -rate");
      const cplx base = spec.rate / (spec.rate + theta);
      return -double(spec.shape) / spec.rate * std::pow(base, spec.shape + 1);
    }
    case Kind::Uniform: {
      const std::vector<double> xc{0.0, 1.0 / (spec.hi - spec.lo)};
      return -laplace_poly(xc, spec.lo, spec.hi, theta);
    }
    case Kind::PolynomialDensity:
      return -laplace_poly(poly_shift_up(spec.coeffs), spec.lo, spec.hi, theta);
    case Kind::GatedPoissonBatch: {
      const cplx b = eval_transform(spec, theta);
      const cplx rp = eval_transform_deriv(spec.parts[0], theta);
      return b * spec.rate * rp;
    }
    case Kind::Mixture: {
      KahanSumC acc;
      for (std::size_t i = 0; i < spec.parts.size(); ++i)
        acc.add(spec.weights[i] * eval_transform_deriv(spec.parts[i], theta));
      return acc.value();
    }
  }
  fail(Errc::Unsupported, "unknown transform kind");
}

QueueModel QueueModel::make(TransformSpec interarrival, TransformSpec service) {
  const double ex = interarrival.mean();
  if (!(ex > 0.0))
    fail(Errc::Unsupported, "interarrival mean must be positive");
  const double rho = service.mean() / ex;
  if (!(rho < 1.0)) fail(Errc::Unsupported, "unstable queue: rho >= 1");
  QueueModel m;
  m.interarrival = std::move(interarrival);
  m.service = std::move(service);
  m.rho = rho;
  return m;
}

cplx eval_F(const QueueModel& model, cplx theta, int order) {
  const cplx a = eval_transform(model.interarrival, -theta);
  const cplx b = eval_transform(model.service, theta);
  if (order == 0) return b * a - 1.0;
  const cplx ap = eval_transform_deriv(model.interarrival, -theta);
  const cplx bp = eval_transform_deriv(model.service, theta);
  return bp * a - b * ap;
}

namespace {

/// One additive piece exp(a*theta) * sum_i c[i] theta^{-(k+i)}.
struct SeriesTerm {
  double a = 0.0;
  int k = 0;
  std::vector<double> c;
};

/// Far-field series pieces of a transform, optionally evaluated at -theta.
void collect_series(const TransformSpec& spec, bool at_minus, double weight,
                    std::vector<SeriesTerm>& out) {
  auto emit = [&](double a, int k, std::vector<double> c) {
    for (double& x : c) x *= weight;
    if (at_minus) {
      a = -a;
      for (std::size_t i = 0; i < c.size(); ++i)
        if ((k + int(i)) % 2 != 0) c[i] = -c[i];
    }
    out.push_back(SeriesTerm{a, k, std::move(c)});
  };
  switch (spec.kind) {
    case Kind::Deterministic:
      emit(-spec.d, 0, {1.0});
      return;
    case Kind::Uniform: {
      const double w = 1.0 / (spec.hi - spec.lo);
      emit(-spec.lo, 1, {w});
      emit(-spec.hi, 1, {-w});
      return;
    }
    case Kind::PolynomialDensity: {
      std::vector<double> top = derivative_values(spec.coeffs, spec.lo);
      std::vector<double> bot = derivative_values(spec.coeffs, spec.hi);
      for (double& x : bot) x = -x;
      emit(-spec.lo, 1, std::move(top));
      emit(-spec.hi, 1, std::move(bot));
      return;
    }
    case Kind::Exponential: {
      const int len = rational_series_length(spec.rate);
      std::vector<double> c(len);
      double v = spec.rate;
      for (int i = 0; i < len; ++i) {
        c[i] = v;
        v *= -spec.rate;
        if (std::abs(v) > 1e280)
          fail(Errc::Unsupported, "rational factor series overflows");
      }
      emit(0.0, 1, std::move(c));
      return;
    }
    case Kind::Erlang: {
      const int len = rational_series_length(spec.rate);
      std::vector<double> c(len);
      double v = std::pow(spec.rate, spec.shape);
      for (int i = 0; i < len; ++i) {
        c[i] = v;
        // next: v * (-rate) * C(shape+i, i+1) / C(shape+i-1, i)
        v *= -spec.rate * double(spec.shape + i) / double(i + 1);
        if (std::abs(v) > 1e280)
          fail(Errc::Unsupported, "rational factor series overflows");
      }
      emit(0.0, spec.shape, std::move(c));
      return;
    }
    case Kind::Mixture: {
      for (std::size_t i = 0; i < spec.parts.size(); ++i)
        collect_series(spec.parts[i], at_minus, weight * spec.weights[i], out);
      return;
    }
    case Kind::GatedPoissonBatch:
      fail(Errc::Unsupported,
           "batch transform has no exponent decomposition");
  }
}

std::vector<double> convolve(const std::vector<double>& x,
                             const std::vector<double>& y) {
  std::vector<double> z(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) z[i + j] += x[i] * y[j];
  if (z.size() > 600) z.resize(600);
  return z;
}

}  // namespace

cplx ExponentDecomposition::eval(cplx theta) const {
  const cplx inv = 1.0 / theta;
  KahanSumC acc;
  acc.add(cplx{constant, 0.0});
  for (const DecompTerm& t : terms) {
    cplx horner{0.0, 0.0};
    for (std::size_t i = t.phi.size(); i-- > 0;) horner = horner * inv + t.phi[i];
    acc.add(std::exp(t.alpha * theta) * horner * std::pow(inv, t.k));
  }
  return acc.value();
}

ExponentDecomposition decompose_F(const QueueModel& model) {
  std::vector<SeriesTerm> bs, as;
  collect_series(model.service, false, 1.0, bs);
  collect_series(model.interarrival, true, 1.0, as);

  std::vector<SeriesTerm> prod;
  for (const SeriesTerm& b : bs)
    for (const SeriesTerm& a : as)
      prod.push_back(SeriesTerm{b.a + a.a, b.k + a.k, convolve(b.c, a.c)});

  std::sort(prod.begin(), prod.end(), [](const SeriesTerm& x, const SeriesTerm& y) {
    return x.a < y.a;
  });

  ExponentDecomposition dec;
  dec.constant = -1.0;
  std::size_t i = 0;
  while (i < prod.size()) {
    // Merge the run of terms sharing this exponent.
    std::size_t j = i;
    double alpha = prod[i].a;
    int kmin = prod[i].k;
    while (j + 1 < prod.size() &&
           std::abs(prod[j + 1].a - alpha) <= 1e-12 * std::max(1.0, std::abs(alpha))) {
      ++j;
      kmin = std::min(kmin, prod[j].k);
    }
    std::size_t width = 0;
    for (std::size_t t = i; t <= j; ++t)
      width = std::max(width, prod[t].c.size() + std::size_t(prod[t].k - kmin));
    std::vector<double> phi(width, 0.0);
    for (std::size_t t = i; t <= j; ++t)
      for (std::size_t n = 0; n < prod[t].c.size(); ++n)
        phi[n + std::size_t(prod[t].k - kmin)] += prod[t].c[n];
    while (!phi.empty() && std::abs(phi.back()) <= 1e-14) phi.pop_back();
    while (!phi.empty() && std::abs(phi.front()) <= 1e-14) {
      phi.erase(phi.begin());
      ++kmin;
    }
    if (!phi.empty()) {
      if (kmin == 0 && std::abs(alpha) <= 1e-14) {
        // Constant piece folds into the trailing -1.
        dec.constant += phi[0];
        phi.erase(phi.begin());
        ++kmin;
      }
      if (!phi.empty())
        dec.terms.push_back(DecompTerm{alpha, kmin, std::move(phi)});
    }
    i = j + 1;
  }

  if (dec.terms.empty())
    fail(Errc::Unsupported, "decomposition produced no exponent terms");
  if (!(dec.terms.back().alpha > 0.0))
    fail(Errc::Unsupported,
         "no positive-exponent term: interarrival support contributes no "
         "left-plane root ladders");
  if (!(dec.terms.front().alpha < 0.0))
    fail(Errc::Unsupported, "no negative-exponent term");
  bool left_power = false;
  for (const DecompTerm& t : dec.terms)
    if (t.alpha <= 1e-14 && t.k >= 1) left_power = true;
  if (!left_power)
    fail(Errc::Unsupported,
         "point-mass-only left side admits no helper factorization");
  dec.jp = -1;
  for (std::size_t t = 0; t < dec.terms.size(); ++t)
    if (dec.terms[t].alpha <= 1e-14) dec.jp = int(t);
  return dec;
}

int max_pole_order(const ExponentDecomposition& d) {
  int kmax = 0;
  for (const DecompTerm& t : d.terms)
    kmax = std::max(kmax, t.k + int(t.phi.size()) - 1);
  return kmax;
}

ExpPolySum cleared_F(const ExponentDecomposition& d) {
  const int kmax = max_pole_order(d);
  if (kmax > 64)
    fail(Errc::Unsupported, "cleared form would need excessive degree");
  ExpPolySum f;
  f.add_term(d.constant, 0.0, kmax);
  for (const DecompTerm& t : d.terms)
    for (std::size_t i = 0; i < t.phi.size(); ++i)
      f.add_term(t.phi[i], t.alpha, kmax - t.k - int(i));
  f.normalize(0.0);
  return f;
}

}  // namespace gg1
