#include "qma/verify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qma/errors.hpp"
#include "qma/spectral.hpp"

namespace qma {

namespace {

ScalarField monge_ampere_expression(const ReducedEquation& eq, const ScalarField& phi) {
  CoefficientFields c = assemble(eq, phi);
  ScalarField q = c.A * c.B;
  for (const auto& ai : c.a) q = q - ai * ai;
  return q;
}

} // namespace

ManufacturedProblem manufacture(const ReducedEquation& eq, const ScalarField& phi_seed) {
  require_finite(phi_seed, "manufacture");
  ScalarField seed = project_mean_zero(phi_seed);

  double scale = 1;
  for (int halving = 0; halving <= 40; ++halving) {
    ScalarField phi = scale * seed;
    ScalarField q = monge_ampere_expression(eq, phi);
    const double margin = q.min_value();
    if (margin > 0) {
      std::vector<double> logs(q.size());
      for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(q[i]);
      return {std::move(phi), ScalarField{q.grid(), std::move(logs)}, eq.variant(),
              margin, scale};
    }
    scale *= 0.5;
  }
  throw DegenerateSeed("manufacture: expression not positive after 40 amplitude halvings");
}

EstimateAudit audit_estimates(const ReducedEquation& eq, const ScalarField& phi,
                              const ScalarField& F) {
  require_same_grid(phi, F, "audit_estimates");
  CoefficientFields c = assemble(eq, phi);

  EstimateAudit audit;
  audit.min_A = std::numeric_limits<double>::infinity();
  audit.min_B = std::numeric_limits<double>::infinity();
  audit.lambda_min = std::numeric_limits<double>::infinity();
  audit.lambda_max = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double A = c.A[p], B = c.B[p], eF = std::exp(F[p]);
    const double disc = std::max(0.0, (A + B) * (A + B) - 4.0 * eF);
    audit.lambda_min = std::min(audit.lambda_min, 0.5 * (A + B - std::sqrt(disc)));
    audit.lambda_max = std::max(audit.lambda_max, 0.5 * (A + B + std::sqrt(disc)));
    audit.min_A = std::min(audit.min_A, A);
    audit.min_B = std::min(audit.min_B, B);
  }

  ScalarField gap = laplacian(phi) + 2.0;
  std::vector<double> twice_root(F.size());
  for (std::size_t i = 0; i < twice_root.size(); ++i)
    twice_root[i] = 2.0 * std::exp(0.5 * F[i]);
  audit.harnack_margin = (gap - ScalarField{F.grid(), std::move(twice_root)}).min_value();

  audit.harnack_ok = audit.harnack_margin >= -1e-6;
  audit.coercive_ok = audit.min_A > 0 && audit.min_B > 0;
  audit.elliptic_ok = audit.lambda_min > 0;
  return audit;
}

double compare_mod_constant(const ScalarField& phi1, const ScalarField& phi2) {
  require_same_grid(phi1, phi2, "compare_mod_constant");
  return project_mean_zero(phi1 - phi2).max_abs();
}

double normalization_check(const ScalarField& F) {
  require_finite(F, "normalization_check");
  return integrate(exp(F) + (-1.0));
}

// ---------------------------------------------------------------------------
// Seed-spec parsing

namespace {

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw ParseError("seed spec: unbalanced ')'");
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (depth != 0) throw ParseError("seed spec: unbalanced '('");
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("seed spec: bad ") + what + " '" + s + "'");
  }
}

std::vector<std::string> parse_args(const std::string& call, const std::string& name) {
  const std::string inner = call.substr(name.size() + 1, call.size() - name.size() - 2);
  std::vector<std::string> args = split_top_level(inner);
  for (auto& a : args) a = trim(a);
  return args;
}

ScalarField trig_term(const PeriodicGrid& grid, double amp, bool use_sin,
                      const std::vector<int>& k) {
  const int d = grid.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> vals(grid.size());
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    double v = amp;
    for (int a = 0; a < d; ++a) {
      if (k[a] == 0) continue;
      const double ph = two_pi * k[a] * grid.coordinate(a, idx[a]);
      v *= use_sin ? std::sin(ph) : std::cos(ph);
    }
    vals[flat] = v;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.shape()[a]) break;
      idx[a] = 0;
    }
  }
  return {grid, std::move(vals)};
}

ScalarField random_term(const PeriodicGrid& grid, int modes, double amplitude,
                        unsigned seed) {
  if (modes <= 0) throw ValidationError("seed spec: random() needs modes > 0");
  if (!(amplitude > 0)) throw ValidationError("seed spec: random() needs amplitude > 0");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(-modes, modes);
  const int d = grid.dim();

  struct Wave {
    std::vector<int> k;
    double c, s;
  };
  std::vector<Wave> waves;
  while (waves.size() < 24) {
    std::vector<int> k(d);
    bool nonzero = false;
    for (int a = 0; a < d; ++a) nonzero |= ((k[a] = pick(rng)) != 0);
    if (!nonzero) continue;
    const double c = unif(rng), s = unif(rng);
    waves.push_back({std::move(k), c, s});
  }

  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<int> idx(d, 0);
  std::vector<double> vals(grid.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    double v = 0;
    for (const Wave& w : waves) {
      double ph = 0;
      for (int a = 0; a < d; ++a) ph += w.k[a] * grid.coordinate(a, idx[a]);
      ph *= two_pi;
      v += w.c * std::cos(ph) + w.s * std::sin(ph);
    }
    vals[flat] = v;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.shape()[a]) break;
      idx[a] = 0;
    }
  }
  ScalarField f{grid, std::move(vals)};
  const double m = f.max_abs();
  return project_mean_zero((amplitude / m) * f);
}

} // namespace

ScalarField seed_from_spec(const PeriodicGrid& grid, const std::string& spec) {
  if (trim(spec).empty()) throw ParseError("seed spec: empty");
  ScalarField f{grid};
  for (const std::string& raw : split_top_level(spec)) {
    const std::string term = trim(raw);
    if (term.starts_with("random(") && term.ends_with(")")) {
      std::vector<std::string> args = parse_args(term, "random");
      if (args.size() != 3) throw ParseError("seed spec: random(modes,amplitude,seed)");
      f = f + random_term(grid, static_cast<int>(parse_number(args[0], "modes")),
                          parse_number(args[1], "amplitude"),
                          static_cast<unsigned>(parse_number(args[2], "seed")));
      continue;
    }
    const auto star = term.find('*');
    if (star == std::string::npos)
      throw ParseError("seed spec: term '" + term + "' is not amp*trig(...) or random(...)");
    const double amp = parse_number(trim(term.substr(0, star)), "amplitude");
    const std::string call = trim(term.substr(star + 1));
    bool use_sin = false;
    std::string name;
    if (call.starts_with("cos(") && call.ends_with(")")) {
      name = "cos";
    } else if (call.starts_with("sin(") && call.ends_with(")")) {
      name = "sin";
      use_sin = true;
    } else {
      throw ParseError("seed spec: expected cos(...) or sin(...), got '" + call + "'");
    }
    std::vector<std::string> args = parse_args(call, name);
    if (static_cast<int>(args.size()) != grid.dim())
      throw ValidationError("seed spec: " + name + "() needs one wavenumber per axis (" +
                            std::to_string(grid.dim()) + ")");
    std::vector<int> k;
    bool nonzero = false;
    for (const auto& a : args) {
      k.push_back(static_cast<int>(parse_number(a, "wavenumber")));
      nonzero |= (k.back() != 0);
    }
    if (!nonzero) throw ValidationError("seed spec: all-zero wavevector");
    f = f + trig_term(grid, amp, use_sin, k);
  }
  return f;
}

} // namespace qma
