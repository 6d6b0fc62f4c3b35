#ifndef QMA_SOLVER_HPP
#define QMA_SOLVER_HPP

#include <string>
#include <vector>

#include "qma/equations.hpp"
#include "qma/grid.hpp"

// Continuity-method driver: march t from 0 to 1 along F_t = log(1 - t + t e^F),
// solving each station by a damped Newton iteration on the mean-zero subspace
// with matrix-free, Laplacian-preconditioned BiCGStab linear solves.

namespace qma {

struct SolveOptions {
  double newton_tol = 1e-10;  // residual sup-norm target
  int newton_max_iter = 30;
  double t_step_init = 0.1;
  double t_step_min = 1e-4;
  double damping = 0.5;       // line-search backtracking factor
  int max_backtracks = 20;
  double krylov_tol = 1e-8;   // relative
  int krylov_max_iter = 500;

  void validate() const; // throws ValidationError naming the offending field
};

/// One accepted continuation station.
struct TraceRow {
  double t = 0;
  int newton_iters = 0;
  double residual_sup = 0;
  double lambda_min = 0;
  double harnack_margin = 0; // min over grid of (Lap phi + 2 - 2 e^{F_t/2})
  double min_A = 0;
  double min_B = 0;
  double strong_margin = 0;  // +inf where the variant has no strong condition
  long krylov_iters_total = 0;
};

struct ContinuityTrace {
  std::vector<TraceRow> rows; // t strictly increasing; ends at 1 on success
};

struct SolveResult {
  ScalarField phi; // mean-zero
  bool converged = false;
  ContinuityTrace trace;
  std::string failure_reason;
};

/// F_t = log(1 - t + t e^F); throws DomainError unless 0 <= t <= 1.
ScalarField continuity_f(const ScalarField& F, double t);

/// Mean-zero u with ||L u - rhs||_2 <= krylov_tol * ||rhs||_2 via BiCGStab,
/// preconditioned by the mean-zero inverse spectral Laplacian.  The zero mode
/// of rhs is discarded.  Throws LinearSolveFailure on stagnation/breakdown.
ScalarField linear_solve(const LinearizedOperator& L, const ScalarField& rhs,
                         const SolveOptions& opts, long* iterations = nullptr);

struct NewtonOutcome {
  ScalarField phi; // mean-zero
  int iterations = 0;
  double residual_sup = 0;
  long krylov_iters_total = 0;
};

/// Damped Newton for residual(eq, phi, F_target) = 0 starting at phi0.
/// Throws EllipticityLoss, LinearSolveFailure or LineSearchFailure.
NewtonOutcome newton_solve(const ReducedEquation& eq, const ScalarField& F_target,
                           const ScalarField& phi0, const SolveOptions& opts);

/// Full continuity solve for the target datum F.  Throws NormalizationViolation
/// if |integral(e^F - 1)| > 1e-8, ContinuationStalled on t-step underflow, and
/// propagates EllipticityLoss.
SolveResult solve(const ReducedEquation& eq, const ScalarField& F,
                  const SolveOptions& opts = {});

} // namespace qma

#endif
