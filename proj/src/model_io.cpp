// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief Model file parsing.
*/

#include <gg1/model_io.hpp>

#include <cstddef>
#include <fstream>
#include <sstream>

#include <gg1/errors.hpp>

namespace gg1 {
namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    tokens.push_back(t);
  }
  return tokens;
}

/// Parses one clause starting at tokens[pos]; advances pos past it.
TransformSpec parse_clause(const std::vector<std::string>& tokens,
                           std::size_t& pos);

double number_at(const std::vector<std::string>& tokens, std::size_t& pos) {
  if (pos >= tokens.size())
    fail(Errc::ParseError, "expected a number at end of clause");
  return parse_number(tokens[pos++]);
}

TransformSpec parse_clause(const std::vector<std::string>& tokens,
                           std::size_t& pos) {
  if (pos >= tokens.size()) fail(Errc::ParseError, "empty distribution clause");
  const std::string kind = tokens[pos++];
  if (kind == "deterministic") {
    return TransformSpec::deterministic(number_at(tokens, pos));
  }
  if (kind == "exponential") {
    return TransformSpec::exponential(number_at(tokens, pos));
  }
  if (kind == "erlang") {
    const double shape = number_at(tokens, pos);
    const double rate = number_at(tokens, pos);
    if (shape != double(int(shape)))
      fail(Errc::ParseError, "erlang: shape must be an integer");
    return TransformSpec::erlang(int(shape), rate);
  }
  if (kind == "uniform") {
    const double lo = number_at(tokens, pos);
    const double hi = number_at(tokens, pos);
    return TransformSpec::uniform(lo, hi);
  }
  if (kind == "polydensity") {
    const double p0 = number_at(tokens, pos);
    const double p1 = number_at(tokens, pos);
    if (pos >= tokens.size() || tokens[pos] != ":")
      fail(Errc::ParseError, "polydensity: expected ':' before coefficients");
    ++pos;
    std::vector<double> coeffs;
    while (pos < tokens.size() && tokens[pos] != "|")
      coeffs.push_back(parse_number(tokens[pos++]));
    return TransformSpec::polynomial_density(p0, p1, std::move(coeffs));
  }
  if (kind == "gated") {
    const double lambda = number_at(tokens, pos);
    TransformSpec per = parse_clause(tokens, pos);
    return TransformSpec::gated_poisson_batch(lambda, std::move(per));
  }
  if (kind == "mix") {
    std::vector<double> weights;
    std::vector<TransformSpec> parts;
    while (true) {
      weights.push_back(number_at(tokens, pos));
      parts.push_back(parse_clause(tokens, pos));
      if (pos >= tokens.size()) break;
      if (tokens[pos] != "|")
        fail(Errc::ParseError, "mix: expected '|' between components");
      ++pos;
    }
    return TransformSpec::mixture(std::move(weights), std::move(parts));
  }
  fail(Errc::ParseError, "unknown distribution kind: " + kind);
}

}  // namespace

double parse_number(const std::string& token) {
  const std::size_t slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash));
      const double den = std::stod(token.substr(slash + 1));
      if (den == 0.0) fail(Errc::ParseError, "zero denominator: " + token);
      return num / den;
    }
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
      fail(Errc::ParseError, "bad numeric literal: " + token);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::ParseError, "bad numeric literal: " + token);
  }
}

TransformSpec parse_transform(const std::vector<std::string>& tokens) {
  std::size_t pos = 0;
  TransformSpec spec = parse_clause(tokens, pos);
  if (pos != tokens.size())
    fail(Errc::ParseError, "trailing tokens after distribution clause");
  return spec;
}

QueueModel parse_model_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  bool have_a = false, have_b = false;
  TransformSpec a, b;
  while (std::getline(is, line)) {
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3 || tokens[1] != "=")
      fail(Errc::ParseError, "expected `interarrival = ...` or `service = ...`");
    const std::vector<std::string> rest(tokens.begin() + 2, tokens.end());
    if (tokens[0] == "interarrival") {
      a = parse_transform(rest);
      have_a = true;
    } else if (tokens[0] == "service") {
      b = parse_transform(rest);
      have_b = true;
    } else {
      fail(Errc::ParseError, "unknown model key: " + tokens[0]);
    }
  }
  if (!have_a || !have_b)
    fail(Errc::ParseError, "model needs both interarrival and service lines");
  return QueueModel::make(std::move(a), std::move(b));
}

QueueModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

}  // namespace gg1
