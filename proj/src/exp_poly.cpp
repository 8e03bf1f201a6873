// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief ExpPolySum implementation.
*/

#include <gg1/exp_poly.hpp>

#include <algorithm>
#include <cmath>

namespace gg1 {

void ExpPolySum::add_term(double coef, double expo, int pow) {
  terms_.push_back({coef, expo, pow});
}

void ExpPolySum::normalize(double drop_below) {
  std::sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
    if (a.expo != b.expo) return a.expo < b.expo;
    return a.pow < b.pow;
  });
  std::vector<ExpTerm> merged;
  for (const ExpTerm& t : terms_) {
    if (!merged.empty() && merged.back().expo == t.expo &&
        merged.back().pow == t.pow) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [drop_below](const ExpTerm& t) {
    return std::abs(t.coef) <= drop_below;
  });
  terms_ = std::move(merged);
}

cplx ExpPolySum::eval(cplx theta) const {
  KahanSumC acc;
  for (const ExpTerm& t : terms_) {
    cplx v = t.coef * std::exp(t.expo * theta);
    for (int i = 0; i < t.pow; ++i) v *= theta;
    acc.add(v);
  }
  return acc.value();
}

double ExpPolySum::magnitude(cplx theta) const {
  KahanSum acc;
  const double ax = theta.real();
  const double r = std::abs(theta);
  for (const ExpTerm& t : terms_) {
    acc.add(std::abs(t.coef) * std::exp(t.expo * ax) * std::pow(r, t.pow));
  }
  return acc.value();
}

ExpPolySum ExpPolySum::derivative() const {
  ExpPolySum d;
  for (const ExpTerm& t : terms_) {
    if (t.expo != 0.0) d.add_term(t.coef * t.expo, t.expo, t.pow);
    if (t.pow > 0) d.add_term(t.coef * t.pow, t.expo, t.pow - 1);
  }
  d.normalize();
  return d;
}

std::vector<double> ExpPolySum::taylor_at0(int order) const {
  std::vector<double> out(static_cast<size_t>(order) + 1, 0.0);
  for (const ExpTerm& t : terms_) {
    // c * e^{a theta} * theta^p contributes c * a^{j-p}/(j-p)! to theta^j.
    double fact = 1.0;  // a^{j-p}/(j-p)! accumulated incrementally
    for (int j = t.pow; j <= order; ++j) {
      out[static_cast<size_t>(j)] += t.coef * fact;
      fact *= t.expo / static_cast<double>(j - t.pow + 1);
    }
  }
  return out;
}

}  // namespace gg1
