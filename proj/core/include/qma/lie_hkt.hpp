#ifndef QMA_LIE_HKT_HPP
#define QMA_LIE_HKT_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qma/rational.hpp"

// Exact symbolic engine for the nilpotent HKT structures and the invariant
// reductions of the quaternionic Monge-Ampere equation.  Everything here is
// exact rational arithmetic; no floating point.

namespace qma::lie {

enum class Group { N1, N2, N3 };
enum class Invariance { T4, T3, T2, S1 };

std::string to_string(Group g);
std::string to_string(Invariance inv);

// ---------------------------------------------------------------------------
// Lie algebra data

/// Structure constants c_{ij}^k of the 2-step nilpotent algebra:
/// [e_i, e_j] = sum_k brackets[i][j][k] e_k.  Indices are 0-based.
struct StructureConstants {
  Group group;
  std::array<std::array<std::array<Rational, 8>, 8>, 8> brackets{};
};

StructureConstants structure_constants(Group g);

/// Polynomial of degree <= 1 in the 8 group coordinates.
struct LinPoly {
  Rational constant{0};
  std::array<Rational, 8> linear{};

  bool is_constant() const;
  bool is_zero() const;
  friend bool operator==(const LinPoly&, const LinPoly&) = default;
};

/// Left-invariant vector field in the coordinate basis: component k is the
/// coefficient of d/dx^k, a polynomial of degree <= 1.
using VectorField = std::array<LinPoly, 8>;

/// The eight left-invariant frame fields e_1..e_8.
using CoordinateFrame = std::array<VectorField, 8>;

CoordinateFrame build_frame(Group g);

/// Lie bracket of two vector fields with affine coefficients.
VectorField commutator(const VectorField& x, const VectorField& y);

// ---------------------------------------------------------------------------
// Hypercomplex structure

/// Signed permutation matrix: m[r][c] is the coefficient of e_{r+1} in J(e_{c+1}).
using JMatrix = std::array<std::array<int, 8>, 8>;

/// The triple (J_1, J_2, J_3) acting on the frame, completed from
/// J_r(e_1) = e_{r+1}, J_r(e_5) = e_{r+5} by the quaternion relations.
struct HypercomplexAction {
  std::array<JMatrix, 3> J;
};

HypercomplexAction hypercomplex_action();

JMatrix jmul(const JMatrix& a, const JMatrix& b);

// ---------------------------------------------------------------------------
// Exterior algebra over the (1,0)-coframe

/// Generators 0..3 are zeta^1..zeta^4, generators 4..7 their conjugates.
using MultiIndex = std::vector<int>;

/// Formal symbol id of W_{ab} = Z_a Zbar_b(phi), a,b in 0..3: id = 4a + b.
inline int w_symbol(int a, int b) { return 4 * a + b; }

/// Polynomial in the 16 symbols W_{ab} with Gaussian rational coefficients.
/// Monomials are sorted lists of symbol ids (with repetitions).
struct WPoly {
  std::map<std::vector<int>, CRational> terms;

  static WPoly constant(CRational c);
  static WPoly symbol(int id);

  bool is_zero() const;
  WPoly& operator+=(const WPoly& o);
  friend WPoly operator+(WPoly a, const WPoly& b) { return a += b; }
  friend WPoly operator-(const WPoly& a, const WPoly& b);
  friend WPoly operator*(const WPoly& a, const WPoly& b);
  friend bool operator==(const WPoly&, const WPoly&) = default;

  /// Substitutes constants for a subset of the W symbols.
  WPoly substitute(const std::map<int, CRational>& assignment) const;
};

/// Multivector of (p,0)/(0,q)-forms with WPoly coefficients; multi-indices are
/// kept strictly increasing with the sign absorbed into the coefficient.
struct FormExpansion {
  std::map<MultiIndex, WPoly> terms;

  FormExpansion& operator+=(const FormExpansion& o);
  friend FormExpansion operator+(FormExpansion a, const FormExpansion& b) { return a += b; }

  WPoly coefficient(const MultiIndex& idx) const;
  FormExpansion substitute(const std::map<int, CRational>& assignment) const;
};

/// alpha ^ beta with anticommutative generators.
FormExpansion wedge(const FormExpansion& a, const FormExpansion& b);

/// Adds c * zeta^{idx} (idx need not be sorted; the sign of the sorting
/// permutation is applied).
void add_term(FormExpansion& f, MultiIndex idx, WPoly c);

/// Omega = 2(zeta^{12} + zeta^{34}).
FormExpansion hkt_form();

/// del del_{J2} phi as a (2,0)-form with W_{ab} coefficients, derived from
/// del J2 delbar phi and the action of J2 on the coframe.
FormExpansion dd_j2_phi();

/// (Omega + del del_{J2} phi)^2, fully symbolic in the W_{ab}.
FormExpansion expand_hkt_square();

// ---------------------------------------------------------------------------
// Invariant reductions

/// Monomial in the real Hessian symbols phi_{rs}: sorted list of index pairs
/// (r <= s, 0-based), at most two factors.
using HessMonomial = std::vector<std::pair<int, int>>;

/// Exact polynomial in the phi_{rs} representing the reduced equation
/// LHS(phi) = e^F, normalized so that the constant term is 1.
struct ReducedPolynomial {
  int base_dim = 0;
  std::map<HessMonomial, Rational> terms;

  friend bool operator==(const ReducedPolynomial&, const ReducedPolynomial&) = default;

  std::string to_latex() const;
  std::string to_json(const std::string& variant_name) const;
};

/// Reduces the HKT Monge-Ampere expansion for the given group under the given
/// fibre invariance.  Throws UnsupportedCombination for pairs without a
/// torus-bundle reduction here: T4 and T3 work for every group, T2 only for
/// N2, S1 only for N1.
ReducedPolynomial reduce_invariant(Group g, Invariance inv);

} // namespace qma::lie

#endif
