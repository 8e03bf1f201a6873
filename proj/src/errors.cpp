// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Error-code names.
*/

#include <gg1/errors.hpp>

namespace gg1 {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::PoleEvaluation: return "PoleEvaluation";
    case Errc::NonAnalytic: return "NonAnalytic";
    case Errc::Unsupported: return "Unsupported";
    case Errc::NoBracket: return "NoBracket";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DerivativeVanished: return "DerivativeVanished";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::RepeatedRoot: return "RepeatedRoot";
    case Errc::HelperMismatch: return "HelperMismatch";
    case Errc::ImaginaryLeak: return "ImaginaryLeak";
    case Errc::NonProbability: return "NonProbability";
    case Errc::NoStationaryConvergence: return "NoStationaryConvergence";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace gg1
