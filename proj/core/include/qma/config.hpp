#ifndef QMA_CONFIG_HPP
#define QMA_CONFIG_HPP

#include <string>
#include <vector>

#include "qma/equations.hpp"
#include "qma/solver.hpp"

namespace qma {

/// One run of the tool: equation, grid, solver options and file paths.
struct RunConfig {
  Variant equation = Variant::T5;
  std::vector<int> grid; // empty = take from the input field file
  SolveOptions options;
  std::string input_f;
  std::string input_phi;
  std::string out_phi;
  std::string out_trace;
  std::string out_report;
  int verbosity = 0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Parses line-oriented `key = value` text ('#' comments, blank lines ignored,
/// later keys override earlier ones, unknown keys rejected).  Throws ParseError
/// with the line number, ValidationError from validate().
RunConfig parse_config(const std::string& text);

} // namespace qma

#endif
