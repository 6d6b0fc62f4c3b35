#include "qma/config.hpp"

#include <sstream>

#include "qma/errors.hpp"

namespace qma {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line, const std::string& what) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_line(line, "bad number '" + v + "'");
    return x;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    bad_line(line, "bad number '" + v + "'");
  }
}

int to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) bad_line(line, "bad integer '" + v + "'");
    return x;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    bad_line(line, "bad integer '" + v + "'");
  }
}

std::vector<int> to_shape(const std::string& v, int line) {
  std::vector<int> shape;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) shape.push_back(to_int(trim(part), line));
  if (shape.empty()) bad_line(line, "empty grid");
  return shape;
}

} // namespace

void RunConfig::validate() const {
  if (!grid.empty()) {
    const int want = ReducedEquation::make(equation).base_dim();
    if (static_cast<int>(grid.size()) != want)
      throw ValidationError("grid: expected " + std::to_string(want) + " axes for " +
                            to_string(equation) + ", got " + std::to_string(grid.size()));
    for (int n : grid)
      if (n < 8 || n % 2 != 0)
        throw ValidationError("grid: point counts must be even and >= 8");
  }
  if (verbosity < 0) throw ValidationError("verbosity: must be >= 0");
  options.validate();
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string entry = trim(raw);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) bad_line(line, "expected 'key = value'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) bad_line(line, "empty key");
    if (value.empty()) bad_line(line, "empty value for '" + key + "'");

    if (key == "equation") {
      try {
        cfg.equation = variant_from_name(value);
      } catch (const ValidationError& e) {
        bad_line(line, e.what());
      }
    } else if (key == "grid") {
      cfg.grid = to_shape(value, line);
    } else if (key == "newton_tol") {
      cfg.options.newton_tol = to_double(value, line);
    } else if (key == "newton_max_iter") {
      cfg.options.newton_max_iter = to_int(value, line);
    } else if (key == "t_step_init") {
      cfg.options.t_step_init = to_double(value, line);
    } else if (key == "t_step_min") {
      cfg.options.t_step_min = to_double(value, line);
    } else if (key == "damping") {
      cfg.options.damping = to_double(value, line);
    } else if (key == "max_backtracks") {
      cfg.options.max_backtracks = to_int(value, line);
    } else if (key == "krylov_tol") {
      cfg.options.krylov_tol = to_double(value, line);
    } else if (key == "krylov_max_iter") {
      cfg.options.krylov_max_iter = to_int(value, line);
    } else if (key == "f") {
      cfg.input_f = value;
    } else if (key == "phi") {
      cfg.input_phi = value;
    } else if (key == "out_phi") {
      cfg.out_phi = value;
    } else if (key == "out_trace") {
      cfg.out_trace = value;
    } else if (key == "out_report") {
      cfg.out_report = value;
    } else if (key == "verbosity") {
      cfg.verbosity = to_int(value, line);
    } else {
      bad_line(line, "unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

} // namespace qma
