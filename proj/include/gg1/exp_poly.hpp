// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Finite sums of c * exp(a*theta) * theta^p terms.

  Both the pole-cleared stand-ins used for root finding (f = F * theta^kmax,
  h = H * theta^mp) are entire functions of this shape, so one small type
  carries evaluation, differentiation, and Taylor expansion about zero for
  the whole pipeline.
*/

#pragma once

#include <complex>
#include <vector>

namespace gg1 {

using cplx = std::complex<double>;

/// Compensated (Neumaier) accumulator; keeps long sums deterministic and
/// accurate regardless of term ordering decisions upstream.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Complex compensated accumulator (componentwise Neumaier).
class KahanSumC {
 public:
  void add(const cplx& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

/// One term c * exp(a*theta) * theta^p with p a nonnegative integer.
struct ExpTerm {
  double coef = 0.0;
  double expo = 0.0;
  int pow = 0;
};

/// Finite sum of ExpTerm plus exact evaluation/derivative/Taylor support.
class ExpPolySum {
 public:
  ExpPolySum() = default;
  explicit ExpPolySum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(double coef, double expo, int pow);

  /// Merges terms with equal (expo, pow) and drops negligible coefficients.
  void normalize(double drop_below = 0.0);

  cplx eval(cplx theta) const;

  /// Sum of |term| magnitudes at theta; the natural scale for residuals.
  double magnitude(cplx theta) const;

  /// Exact term-by-term derivative.
  ExpPolySum derivative() const;

  /// Taylor coefficients t[0..order] about zero: sum_j t[j] theta^j + O(^order+1).
  std::vector<double> taylor_at0(int order) const;

 private:
  std::vector<ExpTerm> terms_;
};

/// Value/derivative pair produced by analytic targets handed to Newton.
struct ValueDeriv {
  cplx value;
  cplx deriv;
};

}  // namespace gg1
