// Command-line front end: reduce / manufacture / solve / audit /
// check-normalization.  Exit codes: 0 success, 2 normalization violation,
// 3 continuation stalled, 4 ellipticity loss, 64 usage error, 1 otherwise.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qma/config.hpp"
#include "qma/equations.hpp"
#include "qma/errors.hpp"
#include "qma/field_io.hpp"
#include "qma/lie_hkt.hpp"
#include "qma/solver.hpp"
#include "qma/spectral.hpp"
#include "qma/verify.hpp"

namespace {

using qma::RunConfig;
using qma::ScalarField;
using qma::Variant;

constexpr int kExitOk = 0;
constexpr int kExitNormalization = 2;
constexpr int kExitStalled = 3;
constexpr int kExitEllipticity = 4;
constexpr int kExitUsage = 64;
constexpr int kExitError = 1;

qma::lie::Group group_from_name(const std::string& name) {
  if (name == "n1") return qma::lie::Group::N1;
  if (name == "n2") return qma::lie::Group::N2;
  if (name == "n3") return qma::lie::Group::N3;
  throw qma::ValidationError("unknown group '" + name + "' (want n1|n2|n3)");
}

qma::lie::Invariance invariance_from_name(const std::string& name) {
  if (name == "t4") return qma::lie::Invariance::T4;
  if (name == "t3") return qma::lie::Invariance::T3;
  if (name == "t2") return qma::lie::Invariance::T2;
  if (name == "s1") return qma::lie::Invariance::S1;
  throw qma::ValidationError("unknown invariance '" + name + "' (want t4|t3|t2|s1)");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string grid_to_string(const qma::PeriodicGrid& g) {
  std::string s;
  for (int n : g.shape()) s += (s.empty() ? "" : "x") + std::to_string(n);
  return s;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw qma::ValidationError("cannot open config file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return qma::parse_config(buf.str());
}

std::string trace_csv(const qma::ContinuityTrace& trace) {
  std::string csv =
      "t,newton_iters,residual_sup,lambda_min,harnack_margin,minA,minB,"
      "strong_margin,krylov_iters_total\n";
  for (const qma::TraceRow& row : trace.rows) {
    csv += format_double(row.t) + "," + std::to_string(row.newton_iters) + "," +
           format_double(row.residual_sup) + "," + format_double(row.lambda_min) + "," +
           format_double(row.harnack_margin) + "," + format_double(row.min_A) + "," +
           format_double(row.min_B) + "," + format_double(row.strong_margin) + "," +
           std::to_string(row.krylov_iters_total) + "\n";
  }
  return csv;
}

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

int run_reduce(const std::string& group, const std::string& invariance,
               const std::string& emit) {
  qma::lie::ReducedPolynomial poly =
      qma::lie::reduce_invariant(group_from_name(group), invariance_from_name(invariance));
  if (emit == "latex")
    std::printf("%s\n", poly.to_latex().c_str());
  else
    std::printf("%s\n", poly.to_json(group + "/" + invariance).c_str());
  return kExitOk;
}

int run_manufacture(const std::string& equation, const std::string& grid_spec,
                    const std::string& seed_spec, const std::string& out_phi,
                    const std::string& out_f) {
  const auto& eq = qma::ReducedEquation::make(qma::variant_from_name(equation));
  std::vector<int> shape;
  {
    std::stringstream ss(grid_spec);
    std::string part;
    while (std::getline(ss, part, ',')) shape.push_back(std::stoi(part));
  }
  qma::PeriodicGrid grid(shape);
  qma::ManufacturedProblem mp = qma::manufacture(eq, qma::seed_from_spec(grid, seed_spec));
  qma::atomic_write_field(mp.phi_star, out_phi);
  qma::atomic_write_field(mp.F, out_f);
  std::printf("manufacture %s grid=%s margin=%.6g scale=%.6g normalization=%.3e\n",
              equation.c_str(), grid_to_string(grid).c_str(), mp.positivity_margin,
              mp.amplitude_scale, qma::normalization_check(mp.F));
  return kExitOk;
}

int run_solve(const RunConfig& cfg) {
  const auto& eq = qma::ReducedEquation::make(cfg.equation);
  ScalarField F = qma::load_field(cfg.input_f);
  if (!cfg.grid.empty() && cfg.grid != F.grid().shape())
    throw qma::ValidationError("grid: --grid does not match the shape of " + cfg.input_f);
  qma::SolveResult result = qma::solve(eq, F, cfg.options);
  if (!cfg.out_phi.empty()) qma::atomic_write_field(result.phi, cfg.out_phi);
  if (!cfg.out_trace.empty()) qma::atomic_write_text(trace_csv(result.trace), cfg.out_trace);
  const qma::TraceRow& last = result.trace.rows.back();
  std::printf("solve %s grid=%s converged t=%g steps=%zu residual=%.3e\n",
              qma::to_string(cfg.equation).c_str(), grid_to_string(F.grid()).c_str(),
              last.t, result.trace.rows.size(), last.residual_sup);
  return kExitOk;
}

int run_audit(const std::string& equation, const std::string& phi_path,
              const std::string& f_path, const std::string& out_path) {
  const auto& eq = qma::ReducedEquation::make(qma::variant_from_name(equation));
  ScalarField phi = qma::load_field(phi_path);
  ScalarField F = qma::load_field(f_path);
  qma::EllipticityReport rep = qma::ellipticity_report(eq, phi, F);
  qma::CoefficientFields coeffs = qma::assemble(eq, phi);
  ScalarField gap = qma::laplacian(phi) + 2.0;
  std::vector<double> root(F.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = 2.0 * std::exp(0.5 * F[i]);
  ScalarField harnack_rhs{F.grid(), std::move(root)};

  nlohmann::ordered_json report;
  report["equation"] = equation;
  report["grid"] = F.grid().shape();
  report["lambda_min"] = rep.lambda_min;
  report["min_A"] = rep.min_A;
  report["min_B"] = rep.min_B;
  report["strong_margin"] = finite_or_null(rep.strong_margin);
  report["clamped"] = rep.clamped;
  report["elliptic"] = rep.elliptic;
  report["strong_ok"] = rep.strong_ok;
  report["A"] = {{"min", coeffs.A.min_value()}, {"max", coeffs.A.max_value()}};
  report["B"] = {{"min", coeffs.B.min_value()}, {"max", coeffs.B.max_value()}};
  report["lap_phi_plus_2"] = {{"min", gap.min_value()}, {"max", gap.max_value()}};
  report["two_exp_half_F"] = {{"min", harnack_rhs.min_value()},
                              {"max", harnack_rhs.max_value()}};
  report["harnack_margin"] = (gap - harnack_rhs).min_value();
  qma::atomic_write_text(report.dump(2) + "\n", out_path);
  std::printf("audit %s lambda_min=%.6g strong_margin=%s elliptic=%s\n", equation.c_str(),
              rep.lambda_min,
              std::isfinite(rep.strong_margin) ? format_double(rep.strong_margin).c_str()
                                               : "n/a",
              rep.elliptic ? "yes" : "no");
  return kExitOk;
}

int run_check_normalization(const std::string& f_path) {
  const double defect = qma::normalization_check(qma::load_field(f_path));
  std::printf("check-normalization integral(e^F - 1) = %.12e\n", defect);
  return std::abs(defect) <= 1e-8 ? kExitOk : kExitNormalization;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced quaternionic Monge-Ampere equations: symbolic reduction, "
               "manufactured problems, continuity-method solver and audits"};
  app.require_subcommand(1);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Derive a reduced equation symbolically");
  std::string group, invariance, emit = "latex";
  reduce->add_option("--group", group, "Lie group (n1|n2|n3)")->required();
  reduce->add_option("--invariance", invariance, "fibre invariance (t4|t3|t2|s1)")->required();
  reduce->add_option("--emit", emit, "output format")->check(CLI::IsMember({"latex", "json"}));

  // manufacture
  auto* man = app.add_subcommand("manufacture", "Build a manufactured problem (phi*, F)");
  std::string equation = "t5", grid_spec, seed_spec, out_phi, out_f;
  man->add_option("--equation", equation, "t4|t5|t6|t7")->required();
  man->add_option("--grid", grid_spec, "comma-separated point counts")->required();
  man->add_option("--seed-spec", seed_spec, "seed field spec")->required();
  man->add_option("--out-phi", out_phi, "output field file for phi*")->required();
  man->add_option("--out-f", out_f, "output field file for F")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Continuity-method solve for a datum F");
  std::string sv_equation, sv_f, sv_out, sv_trace, sv_grid, sv_config;
  double sv_tol = -1;
  solve->add_option("--equation", sv_equation, "t4|t5|t6|t7");
  solve->add_option("--f", sv_f, "input field file for F");
  solve->add_option("--out", sv_out, "output field file for phi");
  solve->add_option("--trace", sv_trace, "trace CSV path");
  solve->add_option("--grid", sv_grid, "expected grid (checked against --f)");
  solve->add_option("--tol", sv_tol, "Newton residual tolerance");
  solve->add_option("--config", sv_config, "config file (flags override)");

  // audit
  auto* audit = app.add_subcommand("audit", "Ellipticity and estimate audit of a state");
  std::string au_equation, au_phi, au_f, au_out;
  audit->add_option("--equation", au_equation, "t4|t5|t6|t7")->required();
  audit->add_option("--phi", au_phi, "input field file for phi")->required();
  audit->add_option("--f", au_f, "input field file for F")->required();
  audit->add_option("--out", au_out, "output report JSON")->required();

  // check-normalization
  auto* check = app.add_subcommand("check-normalization", "integral(e^F - 1) of a datum");
  std::string ck_f;
  check->add_option("--f", ck_f, "input field file for F")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*reduce) return run_reduce(group, invariance, emit);
    if (*man) return run_manufacture(equation, grid_spec, seed_spec, out_phi, out_f);
    if (*solve) {
      RunConfig cfg = sv_config.empty() ? RunConfig{} : load_config(sv_config);
      if (!sv_equation.empty()) cfg.equation = qma::variant_from_name(sv_equation);
      if (!sv_f.empty()) cfg.input_f = sv_f;
      if (!sv_out.empty()) cfg.out_phi = sv_out;
      if (!sv_trace.empty()) cfg.out_trace = sv_trace;
      if (sv_tol > 0) cfg.options.newton_tol = sv_tol;
      if (!sv_grid.empty()) {
        cfg.grid.clear();
        std::stringstream ss(sv_grid);
        std::string part;
        while (std::getline(ss, part, ',')) cfg.grid.push_back(std::stoi(part));
      }
      cfg.validate();
      if (cfg.input_f.empty())
        throw qma::ValidationError("solve needs --f (or 'f = ...' in the config)");
      return run_solve(cfg);
    }
    if (*audit) return run_audit(au_equation, au_phi, au_f, au_out);
    if (*check) return run_check_normalization(ck_f);
  } catch (const qma::NormalizationViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNormalization;
  } catch (const qma::ContinuationStalled& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitStalled;
  } catch (const qma::EllipticityLoss& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitEllipticity;
  } catch (const qma::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const qma::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
