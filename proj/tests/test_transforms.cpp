// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Tests for transform evaluation, queue-model construction, eval_F,
         and the far-field exponent decomposition.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <gg1/errors.hpp>
#include <gg1/model_io.hpp>
#include <gg1/transforms.hpp>

#include "support.hpp"

using gg1::cplx;
using gg1::Errc;
using gg1::QueueModel;
using gg1::TransformSpec;
using testing::near;
using testing::stock;

namespace {

/// E[e^{-theta X}] for a density f on [lo, hi] via composite Simpson.
cplx simpson_transform(const std::function<double(double)>& density, double lo,
                       double hi, cplx theta) {
  const int panels = 20000;  // even
  const double h = (hi - lo) / panels;
  cplx acc = density(lo) * std::exp(-theta * lo) +
             density(hi) * std::exp(-theta * hi);
  for (int i = 1; i < panels; ++i) {
    const double x = lo + i * h;
    acc += (i % 2 ? 4.0 : 2.0) * density(x) * std::exp(-theta * x);
  }
  return acc * (h / 3.0);
}

std::vector<QueueModel> expansion_models() {
  return {stock("md1"), stock("e2d1"), stock("ud1"), stock("uu1"),
          stock("mix")};
}

}  // namespace

TEST_CASE("transform values at distinguished points") {
  const TransformSpec det1 = TransformSpec::deterministic(1.0);
  CHECK(gg1::eval_transform(det1, cplx(0.0)) == cplx(1.0));
  CHECK(near(gg1::eval_transform(det1, cplx(2.0)), std::exp(-2.0), 1e-15));

  const TransformSpec exp4 = TransformSpec::exponential(4.0);
  CHECK(near(gg1::eval_transform(exp4, cplx(1.0)), 0.8, 1e-15));

  const TransformSpec erl = TransformSpec::erlang(2, 1.0);
  CHECK(near(gg1::eval_transform(erl, cplx(1.0)), 0.25, 1e-15));

  const TransformSpec uni = TransformSpec::uniform(0.0, 6.0);
  CHECK(near(gg1::eval_transform(uni, cplx(0.0)), 1.0, 1e-14));
  // d/dtheta E[e^{-theta X}] at 0 is -E[X].
  CHECK(near(gg1::eval_transform_deriv(uni, cplx(0.0)), -3.0, 1e-12));

  // Density 2 - 2x on [0, 1]: mean 1/3.
  const TransformSpec poly = TransformSpec::polynomial_density(0.0, 1.0, {2.0, -2.0});
  CHECK(near(gg1::eval_transform(poly, cplx(0.0)), 1.0, 1e-14));
  CHECK(near(gg1::eval_transform_deriv(poly, cplx(0.0)), -1.0 / 3.0, 1e-12));
}

TEST_CASE("uniform and polynomial transforms match quadrature") {
  const TransformSpec uni = TransformSpec::uniform(1.0, 2.0);
  const TransformSpec poly = TransformSpec::polynomial_density(0.0, 1.0, {2.0, -2.0});
  const auto uniDensity = [](double) { return 1.0; };
  const auto polyDensity = [](double x) { return 2.0 - 2.0 * x; };

  // 1e-4 and 5e-4 sit near the series/quotient switch of the closed forms.
  const std::vector<cplx> thetas = {cplx(0.3),          cplx(-1.2),
                                    cplx(2.0, 3.0),     cplx(-2.0, 5.0),
                                    cplx(1e-4),         cplx(5e-4, -2e-4)};
  for (const cplx theta : thetas) {
    const cplx u = gg1::eval_transform(uni, theta);
    const cplx uq = simpson_transform(uniDensity, 1.0, 2.0, theta);
    CHECK(std::abs(u - uq) <= 1e-9 * (1.0 + std::abs(uq)));

    const cplx p = gg1::eval_transform(poly, theta);
    const cplx pq = simpson_transform(polyDensity, 0.0, 1.0, theta);
    CHECK(std::abs(p - pq) <= 1e-9 * (1.0 + std::abs(pq)));
  }
}

TEST_CASE("factory validation rejects bad parameters") {
  CHECK_THROWS_AS(TransformSpec::uniform(6.0, 0.0), gg1::Error);
  CHECK_THROWS_AS(TransformSpec::erlang(0, 1.0), gg1::Error);
  CHECK_THROWS_AS(TransformSpec::exponential(0.0), gg1::Error);
  // Integrates to 3/2, not 1.
  CHECK_THROWS_AS(TransformSpec::polynomial_density(0.0, 1.0, {2.0, -1.0}),
                  gg1::Error);
  // Integrates to 1 but is negative near 0.
  CHECK_THROWS_AS(TransformSpec::polynomial_density(0.0, 1.0, {-1.0, 4.0}),
                  gg1::Error);
  CHECK_THROWS_AS(TransformSpec::gated_poisson_batch(
                      0.0, TransformSpec::exponential(4.0)),
                  gg1::Error);
  CHECK_THROWS_AS(
      TransformSpec::mixture({0.5, 0.4}, {TransformSpec::uniform(0.0, 1.0),
                                          TransformSpec::uniform(0.0, 2.0)}),
      gg1::Error);
}

TEST_CASE("queue model stability check") {
  const QueueModel ud1 = QueueModel::make(TransformSpec::uniform(0.0, 6.0),
                                          TransformSpec::deterministic(1.0));
  CHECK(near(ud1.rho, 1.0 / 3.0, 1e-15));

  try {
    QueueModel::make(TransformSpec::deterministic(1.0),
                     TransformSpec::uniform(0.0, 6.0));
    CHECK_MESSAGE(false, "rho = 3 must be rejected");
  } catch (const gg1::Error& e) {
    CHECK(e.code() == Errc::Unsupported);
  }
  // rho = 1 exactly is unstable too.
  CHECK_THROWS_AS(QueueModel::make(TransformSpec::deterministic(1.0),
                                   TransformSpec::deterministic(1.0)),
                  gg1::Error);
}

TEST_CASE("F vanishes at the origin and respects conjugation") {
  std::mt19937 rng(7101);
  std::uniform_real_distribution<double> re(-4.0, -0.2), im(0.1, 30.0);
  for (const QueueModel& m : expansion_models()) {
    CHECK(std::abs(gg1::eval_F(m, cplx(0.0))) <= 1e-13);
    for (int i = 0; i < 100; ++i) {
      const cplx theta(re(rng), im(rng));
      const cplx up = gg1::eval_F(m, theta);
      const cplx down = gg1::eval_F(m, std::conj(theta));
      CHECK(std::abs(down - std::conj(up)) <= 1e-13 * (1.0 + std::abs(up)));
    }
  }
}

TEST_CASE("F derivative matches central differences") {
  std::mt19937 rng(7102);
  std::uniform_real_distribution<double> re(-4.0, -0.2), im(0.1, 20.0);
  for (const QueueModel& m : expansion_models()) {
    for (int i = 0; i < 100; ++i) {
      const cplx theta(re(rng), im(rng));
      const double h = 1e-6 * (1.0 + std::abs(theta));
      const cplx fd =
          (gg1::eval_F(m, theta + h) - gg1::eval_F(m, theta - h)) / (2.0 * h);
      const cplx an = gg1::eval_F(m, theta, 1);
      CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
    }
  }
}

TEST_CASE("F is real and convex on the negative axis with one sign change") {
  struct Range {
    const char* name;
    double lo;
  };
  // Ranges reach past each model's negative real root.
  const Range ranges[] = {
      {"md1", -4.0}, {"e2d1", -5.0}, {"ud1", -5.5}, {"uu1", -4.0}, {"mix", -6.0}};
  for (const Range& r : ranges) {
    const QueueModel m = stock(r.name);
    const int n = 400;
    std::vector<double> vals(n + 1);
    double scale = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double th = r.lo + ((-0.05) - r.lo) * i / n;
      const cplx f = gg1::eval_F(m, cplx(th));
      CHECK(std::abs(f.imag()) <= 1e-12 * (1.0 + std::abs(f.real())));
      vals[i] = f.real();
      scale = std::max(scale, std::abs(vals[i]));
    }
    int signChanges = 0;
    for (int i = 0; i < n; ++i)
      if ((vals[i] > 0.0) != (vals[i + 1] > 0.0)) ++signChanges;
    CHECK(signChanges == 1);
    // F(theta) = E[exp(-theta(Y - X))] - 1, so F'' >= 0 wherever it is finite.
    for (int i = 1; i < n; ++i)
      CHECK(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] >= -1e-7 * scale);
  }
}

TEST_CASE("far-field decomposition reassembles F") {
  std::mt19937 rng(7103);
  std::uniform_real_distribution<double> mag(5.0, 50.0), arg(0.0, M_PI);
  // Only models whose interarrival part supplies positive exponents admit
  // the far-field form; rational interarrival goes through the sigma map.
  for (const char* name : {"ud1", "uu1", "mix"}) {
    const QueueModel m = stock(name);
    const gg1::ExponentDecomposition dec = gg1::decompose_F(m);
    for (int i = 0; i < 50; ++i) {
      const cplx theta = std::polar(mag(rng), arg(rng));
      const cplx direct = gg1::eval_F(m, theta);
      const cplx rebuilt = dec.eval(theta);
      CHECK(std::abs(rebuilt - direct) <= 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("decomposition term structure for the uniform models") {
  const gg1::ExponentDecomposition ud1 = gg1::decompose_F(stock("ud1"));
  REQUIRE(ud1.terms.size() == 2);
  CHECK(near(ud1.constant, -1.0, 1e-15));
  CHECK(near(ud1.terms[0].alpha, -1.0, 1e-12));
  CHECK(near(ud1.terms[1].alpha, 5.0, 1e-12));
  CHECK(ud1.terms[0].k == 1);
  CHECK(ud1.terms[1].k == 1);
  CHECK(ud1.jp == 0);  // exponents sorted, last non-positive one at index 0

  const gg1::ExponentDecomposition uu1 = gg1::decompose_F(stock("uu1"));
  REQUIRE(uu1.terms.size() == 4);
  const double alphas[] = {-2.0, -1.0, 3.0, 4.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(near(uu1.terms[i].alpha, alphas[i], 1e-12));
    CHECK(uu1.terms[i].k == 2);
  }
  CHECK(uu1.jp == 1);
  CHECK(near(uu1.alpha0(), -2.0, 1e-12));  // smallest exponent comes first
}

TEST_CASE("decomposition rejects unsupported transforms") {
  const QueueModel dd1 = QueueModel::make(TransformSpec::deterministic(2.0),
                                          TransformSpec::deterministic(1.0));
  try {
    gg1::decompose_F(dd1);
    CHECK_MESSAGE(false, "deterministic/deterministic must be rejected");
  } catch (const gg1::Error& e) {
    CHECK(e.code() == Errc::Unsupported);
  }

  const QueueModel gated = QueueModel::make(
      TransformSpec::deterministic(1.0),
      TransformSpec::gated_poisson_batch(3.0, TransformSpec::exponential(4.0)));
  CHECK_THROWS_AS(gg1::decompose_F(gated), gg1::Error);
}

TEST_CASE("model text parsing") {
  CHECK(gg1::parse_number("7/8") == 0.875);
  CHECK(near(gg1::parse_number("1/3"), 1.0 / 3.0, 1e-16));
  CHECK(gg1::parse_number("2.5e-1") == 0.25);

  const QueueModel m = gg1::parse_model_text(
      "# comment line\n"
      "interarrival = uniform 0 6\n"
      "service = deterministic 1\n");
  CHECK(near(m.rho, 1.0 / 3.0, 1e-15));

  const QueueModel mix = gg1::parse_model_text(
      "interarrival = deterministic 1/2\n"
      "service = mix 0.5 uniform 0 7/8 | 0.5 polydensity 0 1 : 2 -2\n");
  CHECK(near(mix.rho, (0.5 * (7.0 / 16.0) + 0.5 * (1.0 / 3.0)) / 0.5, 1e-12));

  const char* bad[] = {
      "interarrival = uniform 0\nservice = deterministic 1\n",
      "interarrival = pareto 1 2\nservice = deterministic 1\n",
      "interarrival = uniform 0 6\n",
      "interarrival = uniform 0 six\nservice = deterministic 1\n",
      "interarrival = uniform 0 1/0\nservice = deterministic 1\n",
      "interarrival = uniform 0 6 9\nservice = deterministic 1\n",
  };
  for (const char* text : bad) {
    try {
      gg1::parse_model_text(text);
      CHECK_MESSAGE(false, text);
    } catch (const gg1::Error& e) {
      CHECK(e.code() == Errc::ParseError);
    }
  }

  CHECK_THROWS_AS(gg1::load_model(testing::model_path("missing.model")),
                  gg1::Error);
}
