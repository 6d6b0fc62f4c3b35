#ifndef QMA_EQUATIONS_HPP
#define QMA_EQUATIONS_HPP

#include <string>
#include <vector>

#include "qma/grid.hpp"
#include "qma/spectral.hpp"

// The four reduced Monge-Ampere variants as numerical operators.  Every
// variant has the common shape
//
//   A * B - sum_i a_i^2 = e^F,   A = sum_{r in A-axes} phi_rr + 1,
//                                B = sum_{s in B-axes} phi_ss + 1,
//
// where each a_i is a signed combination of mixed Hessian entries.  T4 is the
// degenerate case with an empty B-block (B = 1, no a_i): the Poisson equation
// Laplacian(phi) + 1 = e^F.

namespace qma {

enum class Variant { T4, T5, T6, T7 };

std::string to_string(Variant v);
Variant variant_from_name(const std::string& name); // "t4".."t7"

/// One signed mixed Hessian entry sign * phi_{rs} inside an a_i.
struct MixedEntry {
  int sign; // +1 or -1
  int r;
  int s;
};

/// Index tables of one variant.  Instances come from make() only; each table
/// is cross-checked once against the exact symbolic reduction.
class ReducedEquation {
 public:
  static const ReducedEquation& make(Variant v);

  Variant variant() const { return variant_; }
  int base_dim() const { return base_dim_; }
  const std::vector<int>& a_axes() const { return a_axes_; }
  const std::vector<int>& b_axes() const { return b_axes_; }
  const std::vector<std::vector<MixedEntry>>& mixed() const { return mixed_; }

 private:
  explicit ReducedEquation(Variant v);

  Variant variant_ = Variant::T4;
  int base_dim_ = 0;
  std::vector<int> a_axes_;
  std::vector<int> b_axes_;
  std::vector<std::vector<MixedEntry>> mixed_;
};

/// Pointwise coefficients of the equation at a state phi.
struct CoefficientFields {
  ScalarField A;
  ScalarField B;
  std::vector<ScalarField> a; // empty for T4
};

/// A, B, a_i via the spectral Hessian of phi.
CoefficientFields assemble(const ReducedEquation& eq, const ScalarField& phi);

/// A*B - sum a_i^2 - e^F; the zero field iff phi solves the discrete equation.
ScalarField residual(const ReducedEquation& eq, const ScalarField& phi,
                     const ScalarField& F);

/// Matrix-free Frechet derivative of the residual in phi at a frozen state:
///   L u = A * (B-block Laplacian of u) + B * (A-block Laplacian of u)
///         - 2 sum_i a_i * (a_i-pattern applied to u).
class LinearizedOperator {
 public:
  LinearizedOperator(const ReducedEquation& eq, CoefficientFields coeffs);

  ScalarField apply(const ScalarField& u) const;
  const ReducedEquation& equation() const { return *eq_; }
  const CoefficientFields& coefficients() const { return coeffs_; }

 private:
  const ReducedEquation* eq_;
  CoefficientFields coeffs_;
  std::vector<HessTerm> a_block_;
  std::vector<HessTerm> b_block_;
  std::vector<std::vector<HessTerm>> patterns_;
};

/// Principal symbol of L at one grid point (row-major d x d, symmetric).
struct SymbolMatrix {
  int dim = 0;
  std::vector<double> entries;
  std::vector<double> eigenvalues; // ascending
  double lambda_min = 0;
  double lambda_max = 0;

  double at(int r, int s) const { return entries[static_cast<std::size_t>(r) * dim + s]; }
};

SymbolMatrix symbol_at(const ReducedEquation& eq, const CoefficientFields& coeffs,
                       std::size_t point);

/// Grid-wide ellipticity scan.  lambda_min is the minimum of
/// (A+B - sqrt((A+B)^2 - 4 e^F))/2 with the square-root argument clamped at 0
/// (clamped flag records whether the clamp fired anywhere).  strong_margin is
/// the variant strong-condition margin (T6/T7); +infinity where no strong
/// condition exists.  Margins are reported, never enforced.
struct EllipticityReport {
  double lambda_min = 0;
  double min_A = 0;
  double min_B = 0;
  double strong_margin = 0;
  bool clamped = false;
  bool elliptic = false;   // lambda_min > 0
  bool strong_ok = false;  // strong_margin > 0
};

EllipticityReport ellipticity_report(const ReducedEquation& eq, const ScalarField& phi,
                                     const ScalarField& F);

} // namespace qma

#endif
