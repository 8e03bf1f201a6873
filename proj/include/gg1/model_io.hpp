// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Text format for queue models: `interarrival = ...` / `service = ...`
         lines with rational or decimal literals.
*/

#pragma once

#include <string>
#include <vector>

#include <gg1/transforms.hpp>

namespace gg1 {

/// Parses `3`, `0.25`, or `p/q` rational literals.
double parse_number(const std::string& token);

/// Parses one distribution clause, e.g. `uniform 0 6`,
/// `polydensity 0 1 : 22/15 -6/15 -12/15`,
/// `mix 0.5 uniform 0 7/8 | 0.5 polydensity 0 1 : 2 -2`,
/// `gated 3 exponential 4`.
TransformSpec parse_transform(const std::vector<std::string>& tokens);

/// Parses full model text (two assignment lines, `#` comments allowed).
QueueModel parse_model_text(const std::string& text);

/// Reads and parses a model file.
QueueModel load_model(const std::string& path);

}  // namespace gg1
