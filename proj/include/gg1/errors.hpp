// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Typed error conditions shared by all gg1 components.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace gg1 {

/// Machine-checkable failure categories raised by the library.
enum class Errc {
  PoleEvaluation,           ///< transform evaluated exactly at a pole
  NonAnalytic,              ///< transform evaluated at an essential singularity
  Unsupported,              ///< request outside the implemented model class
  NoBracket,                ///< 1-D root bracket could not be established
  NoConvergence,            ///< iteration failed to reach tolerance
  DerivativeVanished,       ///< Newton step hit |f'| ~ 0
  CountMismatch,            ///< argument-principle count != polished roots
  RepeatedRoot,             ///< coincident roots found where simple ones required
  HelperMismatch,           ///< telescoped coefficient disagrees with direct product
  ImaginaryLeak,            ///< nominally real quantity has a large imaginary part
  NonProbability,           ///< probability-valued result escaped [0, 1]
  NoStationaryConvergence,  ///< Markov power iteration did not settle
  ParseError,               ///< malformed model file or CLI input
};

/// Short stable identifier used in messages and CLI diagnostics.
const char* errc_name(Errc code);

/// Exception carrying an Errc plus a human-readable explanation.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Throws Error(code, what); spelled as a function so call sites stay terse.
[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace gg1
