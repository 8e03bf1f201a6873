// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Shared helpers for the test binaries: model lookup and tolerance
         checks.
*/

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <gg1/model_io.hpp>
#include <gg1/transforms.hpp>

#ifndef GG1_MODELS_DIR
#error "tests must be compiled with -DGG1_MODELS_DIR=\"...\""
#endif

namespace testing {

inline std::string model_path(const char* name) {
  return std::string(GG1_MODELS_DIR "/") + name;
}

inline gg1::QueueModel stock(const char* name) {
  return gg1::load_model(model_path(name) + ".model");
}

/// |a - b| <= tol, readable in doctest failure output.
inline bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool near(gg1::cplx a, gg1::cplx b, double tol) {
  return std::abs(a - b) <= tol;
}

/// Relative gap with a floor of 1 so values near zero stay comparable.
inline double rel_gap(gg1::cplx got, gg1::cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing
