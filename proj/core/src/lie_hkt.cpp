#include "qma/lie_hkt.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "qma/errors.hpp"

namespace qma::lie {

std::string to_string(Group g) {
  switch (g) {
    case Group::N1: return "n1";
    case Group::N2: return "n2";
    case Group::N3: return "n3";
  }
  return "?";
}

std::string to_string(Invariance inv) {
  switch (inv) {
    case Invariance::T4: return "t4";
    case Invariance::T3: return "t3";
    case Invariance::T2: return "t2";
    case Invariance::S1: return "s1";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Structure constants

StructureConstants structure_constants(Group g) {
  StructureConstants sc;
  sc.group = g;
  auto set = [&sc](int i, int j, int k, long long c) {
    // 1-based frame indices in, 0-based storage
    sc.brackets[i - 1][j - 1][k - 1] = Rational(c);
    sc.brackets[j - 1][i - 1][k - 1] = Rational(-c);
  };
  const bool heisenberg_real = (g == Group::N1 || g == Group::N3);
  const bool heisenberg_complex = (g == Group::N2 || g == Group::N3);
  if (heisenberg_real) {
    set(1, 2, 5, 1);
    set(3, 4, 5, -1);
  }
  if (heisenberg_complex) {
    set(1, 3, 6, 1);
    set(2, 4, 6, 1);
    set(1, 4, 7, 1);
    set(2, 3, 7, -1);
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Coordinate frame

bool LinPoly::is_constant() const {
  return std::all_of(linear.begin(), linear.end(),
                     [](const Rational& r) { return r == 0; });
}

bool LinPoly::is_zero() const { return constant == 0 && is_constant(); }

CoordinateFrame build_frame(Group g) {
  // Exponential coordinates of a 2-step nilpotent group:
  //   e_i = d_i - (1/2) sum_{j,k} c_{ij}^k x^j d_k
  // which satisfies [e_i, e_j] = c_{ij}^k d_k = c_{ij}^k e_k since the
  // bracket-generated directions carry constant frame fields.
  const StructureConstants sc = structure_constants(g);
  CoordinateFrame frame{};
  const Rational half(1, 2);
  for (int i = 0; i < 8; ++i) {
    frame[i][i].constant = 1;
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k)
        if (sc.brackets[i][j][k] != 0)
          frame[i][k].linear[j] -= half * sc.brackets[i][j][k];
  }
  return frame;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  // [X,Y]^k = X^j d_j Y^k - Y^j d_j X^k; with affine coefficients the
  // derivatives are constants, so each component stays affine.
  VectorField out{};
  for (int k = 0; k < 8; ++k) {
    for (int j = 0; j < 8; ++j) {
      const Rational dyk = y[k].linear[j];
      if (dyk != 0) {
        out[k].constant += x[j].constant * dyk;
        for (int m = 0; m < 8; ++m) out[k].linear[m] += x[j].linear[m] * dyk;
      }
      const Rational dxk = x[k].linear[j];
      if (dxk != 0) {
        out[k].constant -= y[j].constant * dxk;
        for (int m = 0; m < 8; ++m) out[k].linear[m] -= y[j].linear[m] * dxk;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hypercomplex action

HypercomplexAction hypercomplex_action() {
  // On each quaternionic block {e_1..e_4}, {e_5..e_8} identified with
  // (1, i, j, k), J_r is left multiplication by i, j, k.  This is the unique
  // completion of J_r(e_1) = e_{r+1}, J_r(e_5) = e_{r+5} compatible with
  // J_r^2 = -Id and J_1 J_2 = J_3 = -J_2 J_1 on block-invariant subspaces.
  HypercomplexAction h{};
  // image[r][c] = signed index of J_{r+1}(block basis c), 1-based in-block
  static constexpr int image[3][4] = {
      {2, -1, 4, -3},   // i*(1,i,j,k) = (i,-1,k,-j)
      {3, -4, -1, 2},   // j*(1,i,j,k) = (j,-k,-1,i)
      {4, 3, -2, -1}};  // k*(1,i,j,k) = (k,j,-i,-1)
  for (int r = 0; r < 3; ++r)
    for (int block = 0; block < 8; block += 4)
      for (int c = 0; c < 4; ++c) {
        const int im = image[r][c];
        h.J[r][block + std::abs(im) - 1][block + c] = im > 0 ? 1 : -1;
      }
  return h;
}

JMatrix jmul(const JMatrix& a, const JMatrix& b) {
  JMatrix out{};
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      int acc = 0;
      for (int m = 0; m < 8; ++m) acc += a[r][m] * b[m][c];
      out[r][c] = acc;
    }
  return out;
}

// ---------------------------------------------------------------------------
// WPoly

WPoly WPoly::constant(CRational c) {
  WPoly p;
  if (!c.is_zero()) p.terms[{}] = c;
  return p;
}

WPoly WPoly::symbol(int id) {
  WPoly p;
  p.terms[{id}] = CRational(1);
  return p;
}

bool WPoly::is_zero() const { return terms.empty(); }

WPoly& WPoly::operator+=(const WPoly& o) {
  for (const auto& [mono, c] : o.terms) {
    auto it = terms.find(mono);
    if (it == terms.end()) {
      terms.emplace(mono, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return *this;
}

WPoly operator-(const WPoly& a, const WPoly& b) {
  WPoly out = a;
  for (const auto& [mono, c] : b.terms) {
    auto it = out.terms.find(mono);
    if (it == out.terms.end()) {
      out.terms.emplace(mono, -c);
    } else {
      it->second -= c;
      if (it->second.is_zero()) out.terms.erase(it);
    }
  }
  return out;
}

WPoly operator*(const WPoly& a, const WPoly& b) {
  WPoly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      std::vector<int> mono = ma;
      mono.insert(mono.end(), mb.begin(), mb.end());
      std::sort(mono.begin(), mono.end());
      auto it = out.terms.find(mono);
      if (it == out.terms.end()) {
        out.terms.emplace(std::move(mono), ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second.is_zero()) out.terms.erase(it);
      }
    }
  return out;
}

WPoly WPoly::substitute(const std::map<int, CRational>& assignment) const {
  WPoly out;
  for (const auto& [mono, c] : terms) {
    CRational coeff = c;
    std::vector<int> rest;
    for (int id : mono) {
      auto it = assignment.find(id);
      if (it == assignment.end()) {
        rest.push_back(id);
      } else {
        coeff = coeff * it->second;
      }
    }
    if (coeff.is_zero()) continue;
    WPoly t;
    t.terms[rest] = coeff;
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FormExpansion

FormExpansion& FormExpansion::operator+=(const FormExpansion& o) {
  for (const auto& [idx, p] : o.terms) {
    auto it = terms.find(idx);
    if (it == terms.end()) {
      terms.emplace(idx, p);
    } else {
      it->second += p;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return *this;
}

WPoly FormExpansion::coefficient(const MultiIndex& idx) const {
  auto it = terms.find(idx);
  return it == terms.end() ? WPoly{} : it->second;
}

FormExpansion FormExpansion::substitute(const std::map<int, CRational>& assignment) const {
  FormExpansion out;
  for (const auto& [idx, p] : terms) {
    WPoly q = p.substitute(assignment);
    if (!q.is_zero()) out.terms.emplace(idx, std::move(q));
  }
  return out;
}

namespace {

/// Sorts a multi-index in place; returns the sign of the permutation or 0 if
/// a generator repeats.
int sort_sign(MultiIndex& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

} // namespace

void add_term(FormExpansion& f, MultiIndex idx, WPoly c) {
  const int sign = sort_sign(idx);
  if (sign == 0 || c.is_zero()) return;
  if (sign < 0) c = WPoly::constant(CRational(-1)) * c;
  auto it = f.terms.find(idx);
  if (it == f.terms.end()) {
    f.terms.emplace(std::move(idx), std::move(c));
  } else {
    it->second += c;
    if (it->second.is_zero()) f.terms.erase(it);
  }
}

FormExpansion wedge(const FormExpansion& a, const FormExpansion& b) {
  FormExpansion out;
  for (const auto& [ia, ca] : a.terms)
    for (const auto& [ib, cb] : b.terms) {
      MultiIndex idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      add_term(out, std::move(idx), ca * cb);
    }
  return out;
}

FormExpansion hkt_form() {
  FormExpansion omega;
  add_term(omega, {0, 1}, WPoly::constant(CRational(2)));
  add_term(omega, {2, 3}, WPoly::constant(CRational(2)));
  return omega;
}

FormExpansion dd_j2_phi() {
  // Complex frame Z_a = e_{2a+1} - i e_{2a+2} (0-based a), so that
  // e_{2a+1} = (Z_a + Zbar_a)/2 and e_{2a+2} = i(Z_a - Zbar_a)/2.
  // Compute J2 Z_c in the (Z, Zbar) basis; for this structure the image is
  // purely anti-holomorphic: J2 Z_c = sum_b n_bc Zbar_b.  The dual action on
  // the coframe, alpha -> alpha o J2^{-1}, then gives
  // J2 zetabar^b = - sum_c n_bc zeta^c, and
  //   del J2 delbar phi = sum_{a,b,c} (-n_bc) W_ab zeta^a ^ zeta^c.
  const JMatrix j2 = hypercomplex_action().J[1];
  const CRational I = CRational::i();
  const CRational half(Rational(1, 2));

  std::array<std::array<CRational, 4>, 4> n{};
  for (int c = 0; c < 4; ++c) {
    // J2 Z_c in the e-basis
    std::array<CRational, 8> img{};
    for (int r = 0; r < 8; ++r) {
      if (j2[r][2 * c] != 0) img[r] += CRational(j2[r][2 * c]);
      if (j2[r][2 * c + 1] != 0) img[r] += CRational(-j2[r][2 * c + 1]) * I;
    }
    // Convert to the (Z, Zbar) basis and require the Z part to vanish.
    for (int b = 0; b < 4; ++b) {
      const CRational z_part = (img[2 * b] + I * img[2 * b + 1]) * half;
      const CRational zbar_part = (img[2 * b] - I * img[2 * b + 1]) * half;
      if (!z_part.is_zero())
        throw Error("dd_j2_phi: J2 image of Z is not anti-holomorphic");
      n[b][c] = zbar_part;
    }
  }

  FormExpansion out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        if (n[b][c].is_zero()) continue;
        WPoly coeff = WPoly::constant(-n[b][c]) * WPoly::symbol(w_symbol(a, b));
        add_term(out, {a, c}, std::move(coeff));
      }
  return out;
}

FormExpansion expand_hkt_square() {
  FormExpansion s = hkt_form();
  s += dd_j2_phi();
  return wedge(s, s);
}

// ---------------------------------------------------------------------------
// Invariant reduction

namespace {

struct AxisMap {
  int base_dim;
  // Per group coordinate: nullopt if the direction is a fibre of the
  // invariance (killed on invariant functions), else (sign, base axis).
  std::array<std::optional<std::pair<int, int>>, 8> map;
};

AxisMap axis_map(Group g, Invariance inv) {
  AxisMap am{};
  for (int i = 0; i < 4; ++i) am.map[i] = {{1, i}};
  switch (inv) {
    case Invariance::T4:
      am.base_dim = 4;
      break;
    case Invariance::T3:
      am.base_dim = 5;
      am.map[7] = {{1, 4}};
      break;
    case Invariance::T2:
      if (g != Group::N2)
        throw UnsupportedCombination("T2 reduction is only available for n2");
      am.base_dim = 6;
      am.map[7] = {{1, 4}};
      am.map[4] = {{-1, 5}};
      break;
    case Invariance::S1:
      if (g != Group::N1)
        throw UnsupportedCombination("S1 reduction is only available for n1");
      am.base_dim = 7;
      am.map[5] = {{1, 4}};
      am.map[6] = {{1, 5}};
      am.map[7] = {{1, 6}};
      break;
  }
  return am;
}

using HessPoly = std::map<HessMonomial, CRational>;

void hess_add(HessPoly& p, HessMonomial mono, CRational c) {
  if (c.is_zero()) return;
  std::sort(mono.begin(), mono.end());
  auto it = p.find(mono);
  if (it == p.end()) {
    p.emplace(std::move(mono), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

} // namespace

ReducedPolynomial reduce_invariant(Group g, Invariance inv) {
  const AxisMap am = axis_map(g, inv);
  const CoordinateFrame frame = build_frame(g);
  const CRational I = CRational::i();

  // Effective action of each frame field on invariant functions: a constant
  // combination of base-axis partials.  Along retained coordinates the frame
  // coefficients must be constant; non-constant coefficients may only
  // multiply fibre directions, which act by zero.
  std::array<std::vector<CRational>, 8> eff;
  for (int i = 0; i < 8; ++i) {
    eff[i].assign(am.base_dim, CRational(0));
    for (int j = 0; j < 8; ++j) {
      const LinPoly& c = frame[i][j];
      if (!am.map[j].has_value()) continue;
      if (!c.is_constant())
        throw Error("reduce_invariant: non-constant coefficient on a retained axis");
      const auto [sign, axis] = *am.map[j];
      eff[i][axis] += CRational(Rational(sign) * c.constant);
    }
  }

  // Complex frame Z_a = e_{2a+1} - i e_{2a+2} over the base axes.
  std::array<std::vector<CRational>, 4> z;
  for (int a = 0; a < 4; ++a) {
    z[a].assign(am.base_dim, CRational(0));
    for (int r = 0; r < am.base_dim; ++r)
      z[a][r] = eff[2 * a][r] - I * eff[2 * a + 1][r];
  }

  // W_ab = Z_a Zbar_b(phi) as a polynomial in the phi_{rs}.  The factor 2
  // fixes the potential scale so that the reduced polynomial comes out with
  // unit coefficients on the pure-trace terms.
  std::array<HessPoly, 16> w_sub;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      HessPoly p;
      for (int r = 0; r < am.base_dim; ++r)
        for (int s = 0; s < am.base_dim; ++s) {
          const CRational c = CRational(2) * z[a][r] * z[b][s].conj();
          hess_add(p, {{std::min(r, s), std::max(r, s)}}, c);
        }
      w_sub[w_symbol(a, b)] = std::move(p);
    }

  // Coefficient of zeta^{1234} in (Omega + del del_J2 phi)^2, with the W
  // symbols replaced by their Hessian expressions.
  const WPoly top = expand_hkt_square().coefficient({0, 1, 2, 3});
  HessPoly result;
  for (const auto& [mono, c] : top.terms) {
    HessPoly acc;
    acc[{}] = c;
    for (int id : mono) {
      HessPoly next;
      for (const auto& [m1, c1] : acc)
        for (const auto& [m2, c2] : w_sub[id]) {
          HessMonomial m = m1;
          m.insert(m.end(), m2.begin(), m2.end());
          hess_add(next, std::move(m), c1 * c2);
        }
      acc = std::move(next);
    }
    for (const auto& [m, cc] : acc) hess_add(result, m, cc);
  }

  // Normalize by the phi = 0 value so that LHS(0) = 1.
  auto const_it = result.find(HessMonomial{});
  if (const_it == result.end() || !const_it->second.is_real() ||
      const_it->second.re <= 0)
    throw Error("reduce_invariant: degenerate constant term");
  const Rational scale = const_it->second.re;

  ReducedPolynomial out;
  out.base_dim = am.base_dim;
  for (const auto& [m, c] : result) {
    if (!c.is_real())
      throw Error("reduce_invariant: non-real coefficient in reduced polynomial");
    out.terms[m] = c.re / scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string monomial_latex(const HessMonomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (const auto& [r, c] : m) {
    s += "\\phi_{" + std::to_string(r + 1) + std::to_string(c + 1) + "}";
  }
  return s;
}

} // namespace

std::string ReducedPolynomial::to_latex() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (c == 0) continue;
    const Rational a = c > 0 ? c : -c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (m.empty()) {
      os << qma::to_string(a);
    } else {
      if (a != 1) os << qma::to_string(a);
      os << monomial_latex(m);
    }
  }
  if (first) os << "0";
  os << " = \\mathrm{e}^F";
  return os.str();
}

std::string ReducedPolynomial::to_json(const std::string& variant_name) const {
  std::ostringstream os;
  os << "{\"variant\": \"" << variant_name << "\", \"terms\": [";
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (c == 0) continue;
    if (!first) os << ", ";
    first = false;
    os << "{\"coeff\": \"" << qma::to_string(c) << "\", \"monomial\": [";
    for (size_t i = 0; i < m.size(); ++i) {
      if (i) os << ", ";
      os << "[" << m[i].first + 1 << ", " << m[i].second + 1 << "]";
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

} // namespace qma::lie
