#include "qma/equations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>

#include <Eigen/Dense>

#include "qma/errors.hpp"
#include "qma/lie_hkt.hpp"

namespace qma {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::T4: return "t4";
    case Variant::T5: return "t5";
    case Variant::T6: return "t6";
    case Variant::T7: return "t7";
  }
  throw ValidationError("to_string: bad Variant");
}

Variant variant_from_name(const std::string& name) {
  if (name == "t4") return Variant::T4;
  if (name == "t5") return Variant::T5;
  if (name == "t6") return Variant::T6;
  if (name == "t7") return Variant::T7;
  throw ValidationError("unknown equation variant '" + name + "' (want t4|t5|t6|t7)");
}

namespace {

using lie::HessMonomial;
using lie::ReducedPolynomial;

void accumulate(std::map<HessMonomial, Rational>& terms, HessMonomial m, Rational c) {
  for (auto& [r, s] : m)
    if (r > s) std::swap(r, s);
  std::sort(m.begin(), m.end());
  auto it = terms.find(m);
  if (it == terms.end()) {
    if (!(c == Rational{0})) terms.emplace(std::move(m), c);
    return;
  }
  it->second = it->second + c;
  if (it->second == Rational{0}) terms.erase(it);
}

/// Expands (sum_A phi_rr + 1)(sum_B phi_ss + 1) - sum_i a_i^2 from the tables
/// into the exact polynomial representation used by the symbolic reduction.
ReducedPolynomial table_polynomial(int base_dim, const std::vector<int>& a_axes,
                                   const std::vector<int>& b_axes,
                                   const std::vector<std::vector<MixedEntry>>& mixed) {
  ReducedPolynomial p;
  p.base_dim = base_dim;
  accumulate(p.terms, {}, Rational{1});
  for (int r : a_axes) accumulate(p.terms, {{r, r}}, Rational{1});
  for (int s : b_axes) accumulate(p.terms, {{s, s}}, Rational{1});
  for (int r : a_axes)
    for (int s : b_axes) accumulate(p.terms, {{r, r}, {s, s}}, Rational{1});
  for (const auto& ai : mixed)
    for (const auto& e : ai)
      for (const auto& f : ai)
        accumulate(p.terms, {{e.r, e.s}, {f.r, f.s}}, Rational{-e.sign * f.sign});
  return p;
}

struct VariantSpec {
  int base_dim;
  lie::Group group;
  lie::Invariance invariance;
  std::vector<int> a_axes;
  std::vector<int> b_axes;
  std::vector<std::vector<MixedEntry>> mixed;
};

VariantSpec variant_spec(Variant v) {
  switch (v) {
    case Variant::T4:
      return {4, lie::Group::N1, lie::Invariance::T4, {0, 1, 2, 3}, {}, {}};
    case Variant::T5:
      return {5, lie::Group::N1, lie::Invariance::T3, {0, 1, 2, 3}, {4},
              {{{1, 0, 4}}, {{1, 1, 4}}, {{1, 2, 4}}, {{1, 3, 4}}}};
    case Variant::T6:
      return {6, lie::Group::N2, lie::Invariance::T2, {0, 1, 2, 3}, {4, 5},
              {{{1, 2, 4}, {-1, 1, 5}},
               {{1, 3, 4}, {-1, 0, 5}},
               {{1, 3, 5}, {1, 0, 4}},
               {{1, 2, 5}, {1, 1, 4}}}};
    case Variant::T7:
      return {7, lie::Group::N1, lie::Invariance::S1, {0, 1, 2, 3}, {4, 5, 6},
              {{{1, 3, 4}, {-1, 0, 5}, {-1, 1, 6}},
               {{1, 2, 4}, {1, 0, 6}, {-1, 1, 5}},
               {{1, 2, 5}, {1, 3, 6}, {1, 1, 4}},
               {{1, 3, 5}, {-1, 2, 6}, {1, 0, 4}}}};
  }
  throw ValidationError("variant_spec: bad Variant");
}

} // namespace

ReducedEquation::ReducedEquation(Variant v) {
  VariantSpec spec = variant_spec(v);
  // Cross-check the floating-point index tables against the exact symbolic
  // reduction before the equation is ever used.
  ReducedPolynomial from_tables =
      table_polynomial(spec.base_dim, spec.a_axes, spec.b_axes, spec.mixed);
  ReducedPolynomial from_symbols = lie::reduce_invariant(spec.group, spec.invariance);
  if (!(from_tables == from_symbols))
    throw ValidationError("ReducedEquation tables disagree with the symbolic reduction for " +
                          to_string(v));

  variant_ = v;
  base_dim_ = spec.base_dim;
  a_axes_ = std::move(spec.a_axes);
  b_axes_ = std::move(spec.b_axes);
  mixed_ = std::move(spec.mixed);
}

const ReducedEquation& ReducedEquation::make(Variant v) {
  static std::mutex mu;
  static std::map<Variant, ReducedEquation> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, ReducedEquation(v)).first;
  return it->second;
}

namespace {

void require_dim(const ReducedEquation& eq, const ScalarField& f, const char* what) {
  if (f.grid().dim() != eq.base_dim())
    throw DimensionMismatch(std::string(what) + ": grid dimension " +
                            std::to_string(f.grid().dim()) + " != " +
                            std::to_string(eq.base_dim()) + " for " + to_string(eq.variant()));
}

std::vector<HessTerm> diag_terms(const std::vector<int>& axes) {
  std::vector<HessTerm> t;
  for (int r : axes) t.push_back({1.0, r, r});
  return t;
}

std::vector<HessTerm> mixed_terms(const std::vector<MixedEntry>& entries) {
  std::vector<HessTerm> t;
  for (const auto& e : entries) t.push_back({static_cast<double>(e.sign), e.r, e.s});
  return t;
}

} // namespace

CoefficientFields assemble(const ReducedEquation& eq, const ScalarField& phi) {
  require_dim(eq, phi, "assemble");
  Spectrum spec = forward(phi);
  ScalarField A = hessian_combination(spec, diag_terms(eq.a_axes())) + 1.0;
  ScalarField B = hessian_combination(spec, diag_terms(eq.b_axes())) + 1.0;
  std::vector<ScalarField> a;
  a.reserve(eq.mixed().size());
  for (const auto& entries : eq.mixed())
    a.push_back(hessian_combination(spec, mixed_terms(entries)));
  return {std::move(A), std::move(B), std::move(a)};
}

ScalarField residual(const ReducedEquation& eq, const ScalarField& phi,
                     const ScalarField& F) {
  require_same_grid(phi, F, "residual");
  CoefficientFields c = assemble(eq, phi);
  ScalarField r = c.A * c.B - exp(F);
  for (const ScalarField& ai : c.a) r = r - ai * ai;
  return r;
}

LinearizedOperator::LinearizedOperator(const ReducedEquation& eq, CoefficientFields coeffs)
    : eq_(&eq), coeffs_(std::move(coeffs)) {
  require_dim(eq, coeffs_.A, "LinearizedOperator");
  require_same_grid(coeffs_.A, coeffs_.B, "LinearizedOperator");
  if (coeffs_.a.size() != eq.mixed().size())
    throw DimensionMismatch("LinearizedOperator: wrong number of mixed coefficients");
  a_block_ = diag_terms(eq.a_axes());
  b_block_ = diag_terms(eq.b_axes());
  for (const auto& entries : eq.mixed()) patterns_.push_back(mixed_terms(entries));
}

ScalarField LinearizedOperator::apply(const ScalarField& u) const {
  require_same_grid(u, coeffs_.A, "LinearizedOperator::apply");
  Spectrum spec = forward(u);
  ScalarField Lu = coeffs_.A * hessian_combination(spec, b_block_) +
                   coeffs_.B * hessian_combination(spec, a_block_);
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    Lu = Lu - 2.0 * (coeffs_.a[i] * hessian_combination(spec, patterns_[i]));
  return Lu;
}

SymbolMatrix symbol_at(const ReducedEquation& eq, const CoefficientFields& coeffs,
                       std::size_t point) {
  if (point >= coeffs.A.size())
    throw IndexOutOfRange("symbol_at: point index out of range");
  const int d = eq.base_dim();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
  for (int r : eq.a_axes()) P(r, r) = coeffs.B[point];
  for (int s : eq.b_axes()) P(s, s) = coeffs.A[point];
  for (std::size_t i = 0; i < eq.mixed().size(); ++i)
    for (const auto& e : eq.mixed()[i]) {
      const double v = e.sign * coeffs.a[i][point];
      P(e.r, e.s) -= v;
      P(e.s, e.r) -= v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);

  SymbolMatrix m;
  m.dim = d;
  m.entries.assign(P.data(), P.data() + d * d); // symmetric, order irrelevant
  m.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
  m.lambda_min = m.eigenvalues.front();
  m.lambda_max = m.eigenvalues.back();
  return m;
}

EllipticityReport ellipticity_report(const ReducedEquation& eq, const ScalarField& phi,
                                     const ScalarField& F) {
  require_same_grid(phi, F, "ellipticity_report");
  CoefficientFields c = assemble(eq, phi);
  const Variant v = eq.variant();

  EllipticityReport rep;
  rep.lambda_min = std::numeric_limits<double>::infinity();
  rep.min_A = std::numeric_limits<double>::infinity();
  rep.min_B = std::numeric_limits<double>::infinity();
  rep.strong_margin = std::numeric_limits<double>::infinity();

  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double A = c.A[p], B = c.B[p], eF = std::exp(F[p]);
    double disc = (A + B) * (A + B) - 4.0 * eF;
    if (disc < 0) {
      rep.clamped = true;
      disc = 0;
    }
    rep.lambda_min = std::min(rep.lambda_min, 0.5 * (A + B - std::sqrt(disc)));
    rep.min_A = std::min(rep.min_A, A);
    rep.min_B = std::min(rep.min_B, B);

    if (v == Variant::T6) {
      const double s1 = std::abs(c.a[1][p] * c.a[2][p]) + std::abs(c.a[0][p] * c.a[3][p]);
      rep.strong_margin = std::min(rep.strong_margin, eF - 2.0 * s1);
    } else if (v == Variant::T7) {
      const double s1 = std::abs(c.a[1][p] * c.a[2][p]) + std::abs(c.a[0][p] * c.a[3][p]);
      const double s2 = std::abs(c.a[0][p] * c.a[2][p]) + std::abs(c.a[1][p] * c.a[3][p]);
      const double s3 = std::abs(c.a[0][p] * c.a[1][p]) + std::abs(c.a[2][p] * c.a[3][p]);
      const double c1 = eF * eF - 4.0 * s1 * s1;
      const double c2 = eF * eF * eF - 4.0 * eF * (s1 * s1 + s2 * s2 + s3 * s3) -
                        16.0 * s1 * s2 * s3;
      rep.strong_margin = std::min(rep.strong_margin, std::min(c1, c2));
    }
  }
  rep.elliptic = rep.lambda_min > 0;
  rep.strong_ok = rep.strong_margin > 0;
  return rep;
}

} // namespace qma
