#include "qma/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qma/errors.hpp"
#include "qma/spectral.hpp"

namespace qma {

void SolveOptions::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ValidationError(std::string(name) + " must be positive");
  };
  positive(newton_tol, "newton_tol");
  positive(t_step_init, "t_step_init");
  positive(t_step_min, "t_step_min");
  positive(damping, "damping");
  positive(krylov_tol, "krylov_tol");
  if (newton_max_iter <= 0) throw ValidationError("newton_max_iter must be positive");
  if (max_backtracks <= 0) throw ValidationError("max_backtracks must be positive");
  if (krylov_max_iter <= 0) throw ValidationError("krylov_max_iter must be positive");
  if (damping >= 1) throw ValidationError("damping must be < 1");
  if (t_step_min > t_step_init || t_step_init > 1)
    throw ValidationError("need t_step_min <= t_step_init <= 1");
}

ScalarField continuity_f(const ScalarField& F, double t) {
  if (!(t >= 0 && t <= 1)) throw DomainError("continuity_f: t must be in [0, 1]");
  require_finite(F, "continuity_f");
  std::vector<double> out(F.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::log1p(t * std::expm1(F[i]));
  return {F.grid(), std::move(out)};
}

ScalarField linear_solve(const LinearizedOperator& L, const ScalarField& rhs,
                         const SolveOptions& opts, long* iterations) {
  opts.validate();
  const ScalarField b = project_mean_zero(rhs);
  const double nrm_b = norm_l2(b);
  if (iterations) *iterations = 0;
  if (nrm_b == 0) return ScalarField{b.grid()};

  // Right-preconditioned BiCGStab on Ahat = L o Lap^{-1}; u = Lap^{-1} y.
  auto ahat = [&](const ScalarField& v) {
    return project_mean_zero(L.apply(inverse_laplacian_mean_zero(v)));
  };

  ScalarField x{b.grid()};
  ScalarField r = b;
  ScalarField r0 = r;
  ScalarField p{b.grid()}, v{b.grid()};
  double rho = 1, alpha = 1, omega = 1;
  const double breakdown = 1e-300;

  for (int it = 1; it <= opts.krylov_max_iter; ++it) {
    if (iterations) *iterations = it;
    const double rho1 = dot(r0, r);
    if (std::abs(rho1) < breakdown) throw LinearSolveFailure("BiCGStab breakdown (rho)");
    const double beta = (rho1 / rho) * (alpha / omega);
    p = r + beta * (p - omega * v);
    v = ahat(p);
    const double r0v = dot(r0, v);
    if (std::abs(r0v) < breakdown) throw LinearSolveFailure("BiCGStab breakdown (r0.v)");
    alpha = rho1 / r0v;
    ScalarField s = r - alpha * v;
    if (norm_l2(s) <= 0.1 * opts.krylov_tol * nrm_b) {
      x = x + alpha * p;
      rho = rho1;
      r = std::move(s);
    } else {
      ScalarField t = ahat(s);
      const double tt = dot(t, t);
      if (tt < breakdown) throw LinearSolveFailure("BiCGStab breakdown (t.t)");
      omega = dot(t, s) / tt;
      x = x + alpha * p + omega * s;
      r = s - omega * t;
      rho = rho1;
    }
    if (norm_l2(r) <= opts.krylov_tol * nrm_b) {
      ScalarField u = inverse_laplacian_mean_zero(x);
      // guard against recursive-residual drift with the true residual
      if (norm_l2(project_mean_zero(L.apply(u)) - b) <= 2 * opts.krylov_tol * nrm_b)
        return u;
      // recursive residual drifted: restart from the true residual
      r = b - project_mean_zero(L.apply(inverse_laplacian_mean_zero(x)));
      r0 = r;
      p = ScalarField{b.grid()};
      v = ScalarField{b.grid()};
      rho = alpha = omega = 1;
    }
  }
  throw LinearSolveFailure("BiCGStab did not converge in " +
                           std::to_string(opts.krylov_max_iter) + " iterations");
}

NewtonOutcome newton_solve(const ReducedEquation& eq, const ScalarField& F_target,
                           const ScalarField& phi0, const SolveOptions& opts) {
  opts.validate();
  require_same_grid(F_target, phi0, "newton_solve");
  NewtonOutcome out{project_mean_zero(phi0), 0, 0, 0};
  const ScalarField eF = exp(F_target);

  // Newton solves the mean-projected system: the discrete problem fixes phi
  // only up to the compatibility condition on the residual mean, and that mean
  // (an aliasing-level artifact for inconsistent t-stations) is invisible to
  // mean-zero corrections.  On consistent data it vanishes with the solution.
  auto projected_residual = [&](const CoefficientFields& c) {
    ScalarField res = c.A * c.B - eF;
    for (const auto& ai : c.a) res = res - ai * ai;
    return project_mean_zero(res);
  };

  CoefficientFields coeffs = assemble(eq, out.phi);
  ScalarField res = projected_residual(coeffs);
  out.residual_sup = res.max_abs();

  for (int k = 0; k < opts.newton_max_iter; ++k) {
    if (out.residual_sup <= opts.newton_tol) return out;

    // ellipticity certificate at the linearization point
    double lambda_min = std::numeric_limits<double>::infinity();
    for (std::size_t pnt = 0; pnt < out.phi.size(); ++pnt) {
      const double A = coeffs.A[pnt], B = coeffs.B[pnt];
      const double disc = std::max(0.0, (A + B) * (A + B) - 4.0 * eF[pnt]);
      lambda_min = std::min(lambda_min, 0.5 * (A + B - std::sqrt(disc)));
    }
    if (!(lambda_min > 0))
      throw EllipticityLoss("newton_solve: lambda_min = " + std::to_string(lambda_min));

    LinearizedOperator L(eq, coeffs);
    long kry = 0;
    ScalarField step = linear_solve(L, project_mean_zero((-1.0) * res), opts, &kry);
    out.krylov_iters_total += kry;

    double alpha_ls = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      ScalarField trial = project_mean_zero(out.phi + alpha_ls * step);
      CoefficientFields ctrial = assemble(eq, trial);
      ScalarField rtrial = projected_residual(ctrial);
      const double rn = rtrial.max_abs();
      if (rn < out.residual_sup) {
        out.phi = std::move(trial);
        coeffs = std::move(ctrial);
        res = std::move(rtrial);
        out.residual_sup = rn;
        accepted = true;
        break;
      }
      alpha_ls *= opts.damping;
    }
    if (!accepted)
      throw LineSearchFailure("newton_solve: no residual decrease after " +
                              std::to_string(opts.max_backtracks) + " backtracks");
    ++out.iterations;
  }
  if (out.residual_sup > opts.newton_tol)
    throw LineSearchFailure("newton_solve: iteration cap reached at residual " +
                            std::to_string(out.residual_sup));
  return out;
}

namespace {

TraceRow make_row(const ReducedEquation& eq, const ScalarField& phi, const ScalarField& Ft,
                  double t, const NewtonOutcome& nw) {
  EllipticityReport rep = ellipticity_report(eq, phi, Ft);
  ScalarField gap = laplacian(phi) + 2.0;
  std::vector<double> twice_root(Ft.size());
  for (std::size_t i = 0; i < twice_root.size(); ++i)
    twice_root[i] = 2.0 * std::exp(0.5 * Ft[i]);
  ScalarField margin = gap - ScalarField{Ft.grid(), std::move(twice_root)};

  TraceRow row;
  row.t = t;
  row.newton_iters = nw.iterations;
  row.residual_sup = nw.residual_sup;
  row.lambda_min = rep.lambda_min;
  row.harnack_margin = margin.min_value();
  row.min_A = rep.min_A;
  row.min_B = rep.min_B;
  row.strong_margin = rep.strong_margin;
  row.krylov_iters_total = nw.krylov_iters_total;
  return row;
}

} // namespace

SolveResult solve(const ReducedEquation& eq, const ScalarField& F,
                  const SolveOptions& opts) {
  opts.validate();
  if (F.grid().dim() != eq.base_dim())
    throw DimensionMismatch("solve: grid dimension does not match equation");
  const double norm_defect = integrate(exp(F) + (-1.0));
  if (std::abs(norm_defect) > 1e-8)
    throw NormalizationViolation("solve: integral of (e^F - 1) = " +
                                 std::to_string(norm_defect));

  SolveResult result{ScalarField{F.grid()}, false, {}, {}};

  // cheap full-jump probe: if phi = 0 already solves at t = 1, finish in one step
  if (residual(eq, result.phi, F).max_abs() <= opts.newton_tol) {
    NewtonOutcome nw{result.phi, 0, residual(eq, result.phi, F).max_abs(), 0};
    result.trace.rows.push_back(make_row(eq, result.phi, F, 1.0, nw));
    result.converged = true;
    return result;
  }

  double t = 0;
  double step = opts.t_step_init;
  bool saw_ellipticity_loss = false;
  std::string last_failure;

  while (t < 1) {
    const double t_try = std::min(1.0, t + step);
    try {
      NewtonOutcome nw = newton_solve(eq, continuity_f(F, t_try), result.phi, opts);
      result.phi = nw.phi;
      result.trace.rows.push_back(make_row(eq, result.phi, continuity_f(F, t_try), t_try, nw));
      t = t_try;
      if (nw.iterations <= 3) step = std::min(2 * step, 0.25);
      continue;
    } catch (const EllipticityLoss& e) {
      saw_ellipticity_loss = true;
      last_failure = e.what();
    } catch (const LinearSolveFailure& e) {
      last_failure = e.what();
    } catch (const LineSearchFailure& e) {
      last_failure = e.what();
    }
    step *= 0.5;
    if (step < opts.t_step_min) {
      if (saw_ellipticity_loss) throw EllipticityLoss("solve: stalled at t = " +
                                                      std::to_string(t) + ": " + last_failure);
      throw ContinuationStalled("solve: t-step underflow at t = " + std::to_string(t) +
                                ": " + last_failure);
    }
  }
  result.converged = true;
  return result;
}

} // namespace qma
