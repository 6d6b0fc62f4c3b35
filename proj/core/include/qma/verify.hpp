#ifndef QMA_VERIFY_HPP
#define QMA_VERIFY_HPP

#include <string>

#include "qma/equations.hpp"
#include "qma/grid.hpp"

// Manufactured solutions, normalization checks and a priori estimate audits:
// pick phi first, define F as the log of its Monge-Ampere expression, and the
// pair (phi, F) is an exactly-solved problem with a known answer.

namespace qma {

struct ManufacturedProblem {
  ScalarField phi_star; // mean-zero
  ScalarField F;        // log of the Monge-Ampere expression of phi_star
  Variant variant;
  double positivity_margin = 0; // min over grid of the Monge-Ampere expression
  double amplitude_scale = 1;   // down-scaling applied to the seed (powers of 1/2)
};

/// Builds F = log(A*B - sum a_i^2) from the seed, halving the seed amplitude
/// (at most 40 times) until the expression is positive everywhere.  The seed
/// is projected to mean zero.  Throws DegenerateSeed if positivity is
/// unreachable.
ManufacturedProblem manufacture(const ReducedEquation& eq, const ScalarField& phi_seed);

struct EstimateAudit {
  double harnack_margin = 0; // min over grid of (Lap phi + 2 - 2 e^{F/2})
  double min_A = 0;
  double min_B = 0;
  double lambda_min = 0; // min over grid of lambda_-
  double lambda_max = 0; // max over grid of lambda_+
  bool harnack_ok = false;
  bool coercive_ok = false; // A > 0 and B > 0 everywhere
  bool elliptic_ok = false; // lambda_min > 0
};

/// Pointwise audit of the solution estimates (tolerance 1e-6 on the Harnack
/// margin since numerical solutions satisfy the equation only approximately).
EstimateAudit audit_estimates(const ReducedEquation& eq, const ScalarField& phi,
                              const ScalarField& F);

/// Sup-norm of (phi1 - phi2) minus its mean: distance modulo constants.
double compare_mod_constant(const ScalarField& phi1, const ScalarField& phi2);

/// integral(e^F - 1); must vanish for solvable data.
double normalization_check(const ScalarField& F);

/// Builds a seed field from a comma-separated spec.  Terms:
///   amp*cos(k1,...,kd)   product over axes with k_a != 0 of cos(2 pi k_a x_a)
///   amp*sin(k1,...,kd)   same with sin factors
///   random(modes,amplitude,seed)  reproducible trigonometric field with
///                                 wavevector components in [-modes, modes],
///                                 sup-norm scaled to amplitude, mean zero
/// Throws ParseError on bad syntax, ValidationError on bad numbers.
ScalarField seed_from_spec(const PeriodicGrid& grid, const std::string& spec);

} // namespace qma

#endif
