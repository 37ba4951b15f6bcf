#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "riccisol/soliton.hpp"

namespace riccisol {

class SpecFileError : public std::runtime_error {
 public:
  SpecFileError(std::string message, std::size_t line = 0)
      : std::runtime_error(std::move(message)), line_(line) {}
  std::size_t line() const { return line_; }  // 1-based; 0 when not line-specific

 private:
  std::size_t line_;
};

struct LoadedSpec {
  SolitonSpec spec;
  std::optional<Tolerance> tolerance;  // per-file override, when given
};

/// Load a soliton problem statement from text. Two encodings are accepted and
/// auto-detected: a flat key = value document, and a JSON object with the
/// same keys (first non-space character '{').
///
/// Flat format ('#' starts a comment, keys accept an optional qualifier):
///
///   dimension = 2
///   coordinates = x, y          # optional, defaults x1..xn
///   lambda = 1
///   potential = (x^2 + y^2)/2
///   metric 1,1 = 1              # lower triangle, 1-based; missing
///   metric 2,2 = 1              # off-diagonal entries default to 0
///   domain x = -2 .. 2
///   domain y = -2 .. 2
///   samples x = 11              # optional; `samples = k` sets every axis
///   point = 0.5, -0.5           # optional, repeatable; replaces the grid
///   validity = 1                # optional predicate, > 0 means valid
///   tolerance abs = 1e-8        # optional overrides
///   tolerance rel = 1e-8
///
/// Unknown keys are errors; diagnostics carry the line number.
LoadedSpec load_spec_text(std::string_view text);

/// Emit a spec in the flat format; the result loads back to an equivalent
/// problem statement (expressions and floats round-trip exactly).
std::string emit_spec_file(const SolitonSpec& spec);

}  // namespace riccisol
