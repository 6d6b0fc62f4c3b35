#include "doctest.h"

#include <map>

#include "qma/errors.hpp"
#include "qma/lie_hkt.hpp"

using namespace qma;
using namespace qma::lie;

namespace {

// --- small exact-polynomial helpers for building expected reductions -------

using HP = std::map<HessMonomial, Rational>;

HP hp_sym(int r, int s) {
  return {{{{std::min(r, s), std::max(r, s)}}, Rational(1)}};
}
HP hp_const(long long c) { return {{{}, Rational(c)}}; }

HP operator+(HP a, const HP& b) {
  for (const auto& [m, c] : b) {
    a[m] += c;
    if (a[m] == 0) a.erase(m);
  }
  return a;
}
HP operator-(HP a, const HP& b) {
  for (const auto& [m, c] : b) {
    a[m] -= c;
    if (a[m] == 0) a.erase(m);
  }
  return a;
}
HP operator*(const HP& a, const HP& b) {
  HP out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      HessMonomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      out[m] += ca * cb;
      if (out[m] == 0) out.erase(m);
    }
  return out;
}

ReducedPolynomial make_rp(int dim, const HP& p) {
  ReducedPolynomial rp;
  rp.base_dim = dim;
  rp.terms = p;
  return rp;
}

// 1-based axis shorthand
HP P(int r, int s) { return hp_sym(r - 1, s - 1); }

HP a_block() { return P(1, 1) + P(2, 2) + P(3, 3) + P(4, 4); }

ReducedPolynomial target_t4() { return make_rp(4, a_block() + hp_const(1)); }

ReducedPolynomial target_t5() {
  HP p = (a_block() + hp_const(1)) * (P(5, 5) + hp_const(1)) -
         P(1, 5) * P(1, 5) - P(2, 5) * P(2, 5) - P(3, 5) * P(3, 5) -
         P(4, 5) * P(4, 5);
  return make_rp(5, p);
}

ReducedPolynomial target_t6() {
  HP a1 = P(3, 5) - P(2, 6);
  HP a2 = P(4, 5) - P(1, 6);
  HP a3 = P(4, 6) + P(1, 5);
  HP a4 = P(3, 6) + P(2, 5);
  HP p = (a_block() + hp_const(1)) * (P(5, 5) + P(6, 6) + hp_const(1)) -
         a1 * a1 - a2 * a2 - a3 * a3 - a4 * a4;
  return make_rp(6, p);
}

ReducedPolynomial target_t7() {
  HP a1 = P(4, 5) - P(1, 6) - P(2, 7);
  HP a2 = P(3, 5) + P(1, 7) - P(2, 6);
  HP a3 = P(3, 6) + P(4, 7) + P(2, 5);
  HP a4 = P(4, 6) - P(3, 7) + P(1, 5);
  HP p = (a_block() + hp_const(1)) *
             (P(5, 5) + P(6, 6) + P(7, 7) + hp_const(1)) -
         a1 * a1 - a2 * a2 - a3 * a3 - a4 * a4;
  return make_rp(7, p);
}

// --- W-polynomial helpers ---------------------------------------------------

WPoly W(int a, int b) { return WPoly::symbol(w_symbol(a - 1, b - 1)); }
WPoly Wc(long long c) { return WPoly::constant(CRational(c)); }

} // namespace

TEST_CASE("structure constants: antisymmetry, centre, nilpotency") {
  for (Group g : {Group::N1, Group::N2, Group::N3}) {
    const auto sc = structure_constants(g);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) {
          CHECK(sc.brackets[i][j][k] == -sc.brackets[j][i][k]);
          // bracket values only in e_5..e_8
          if (k < 4) CHECK(sc.brackets[i][j][k] == 0);
          // centre is abelian
          if (i >= 4 || j >= 4) CHECK(sc.brackets[i][j][k] == 0);
        }
  }
}

TEST_CASE("frame commutators reproduce the bracket lists exactly") {
  for (Group g : {Group::N1, Group::N2, Group::N3}) {
    const auto sc = structure_constants(g);
    const auto frame = build_frame(g);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const VectorField br = commutator(frame[i], frame[j]);
        // [e_i, e_j] must equal sum_k c_{ij}^k e_k as a vector field
        VectorField expect{};
        for (int k = 0; k < 8; ++k)
          if (sc.brackets[i][j][k] != 0)
            for (int m = 0; m < 8; ++m) {
              expect[m].constant += sc.brackets[i][j][k] * frame[k][m].constant;
              for (int t = 0; t < 8; ++t)
                expect[m].linear[t] += sc.brackets[i][j][k] * frame[k][m].linear[t];
            }
        CHECK(br == expect);
      }
  }
}

TEST_CASE("frame: named bracket examples") {
  // N1: [e1,e2] = e5, [e3,e4] = -e5
  {
    const auto f = build_frame(Group::N1);
    auto b12 = commutator(f[0], f[1]);
    CHECK(b12[4].constant == 1);
    auto b34 = commutator(f[2], f[3]);
    CHECK(b34[4].constant == -1);
  }
  // N3: [e1,e4] = e7, [e2,e3] = -e7
  {
    const auto f = build_frame(Group::N3);
    auto b14 = commutator(f[0], f[3]);
    CHECK(b14[6].constant == 1);
    auto b23 = commutator(f[1], f[2]);
    CHECK(b23[6].constant == -1);
    // centre stays abelian
    for (int i = 4; i < 8; ++i)
      for (int j = 4; j < 8; ++j) {
        auto b = commutator(f[i], f[j]);
        for (int m = 0; m < 8; ++m) CHECK(b[m].is_zero());
      }
  }
}

TEST_CASE("frame: central directions carry constant fields") {
  for (Group g : {Group::N1, Group::N2, Group::N3}) {
    const auto f = build_frame(g);
    for (int i = 4; i < 8; ++i)
      for (int m = 0; m < 8; ++m) CHECK(f[i][m].is_constant());
  }
}

TEST_CASE("hypercomplex action: quaternion relations as integer identities") {
  const auto h = hypercomplex_action();
  JMatrix id{};
  for (int i = 0; i < 8; ++i) id[i][i] = 1;
  JMatrix neg_id{};
  for (int i = 0; i < 8; ++i) neg_id[i][i] = -1;

  for (int r = 0; r < 3; ++r) {
    CHECK(jmul(h.J[r], h.J[r]) == neg_id);
    // signed permutation: one +-1 per column
    for (int c = 0; c < 8; ++c) {
      int nnz = 0;
      for (int row = 0; row < 8; ++row)
        if (h.J[r][row][c] != 0) {
          ++nnz;
          CHECK(std::abs(h.J[r][row][c]) == 1);
        }
      CHECK(nnz == 1);
    }
  }
  CHECK(jmul(h.J[0], h.J[1]) == h.J[2]);
  JMatrix j2j1 = jmul(h.J[1], h.J[0]);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) CHECK(j2j1[r][c] == -h.J[2][r][c]);
  // defining values J_r(e_1) = e_{r+1}, J_r(e_5) = e_{r+5}
  for (int r = 0; r < 3; ++r) {
    CHECK(h.J[r][r + 1][0] == 1);
    CHECK(h.J[r][r + 5][4] == 1);
  }
}

TEST_CASE("dd_j2_phi matches the frozen coframe expansion") {
  FormExpansion expect;
  add_term(expect, {0, 1}, W(1, 1) + W(2, 2));
  add_term(expect, {0, 2}, W(3, 2) - W(1, 4));
  add_term(expect, {0, 3}, W(4, 2) + W(1, 3));
  add_term(expect, {1, 2}, Wc(-1) * (W(3, 1) + W(2, 4)));
  add_term(expect, {1, 3}, W(2, 3) - W(4, 1));
  add_term(expect, {2, 3}, W(3, 3) + W(4, 4));
  CHECK(dd_j2_phi().terms == expect.terms);
}

TEST_CASE("wedge anticommutativity on generators") {
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      FormExpansion a, b;
      add_term(a, {i}, Wc(1));
      add_term(b, {j}, Wc(1));
      FormExpansion ab = wedge(a, b);
      FormExpansion ba = wedge(b, a);
      if (i == j) {
        CHECK(ab.terms.empty());
      } else {
        // ab = -ba for odd-degree generators
        FormExpansion neg_ba;
        for (const auto& [idx, c] : ba.terms) neg_ba.terms[idx] = Wc(-1) * c;
        CHECK(ab.terms == neg_ba.terms);
      }
    }
}

TEST_CASE("expand_hkt_square: top coefficient identity") {
  const WPoly top = expand_hkt_square().coefficient({0, 1, 2, 3});
  const WPoly expect =
      Wc(2) * ((W(1, 1) + W(2, 2) + Wc(2)) * (W(3, 3) + W(4, 4) + Wc(2)) -
               (W(3, 2) - W(1, 4)) * (W(2, 3) - W(4, 1)) -
               (W(4, 2) + W(1, 3)) * (W(3, 1) + W(2, 4)));
  CHECK(top == expect);
}

TEST_CASE("expand_hkt_square: substitutions") {
  const WPoly top = expand_hkt_square().coefficient({0, 1, 2, 3});

  // W = 0: Omega^2 = 8 zeta^{1234}
  std::map<int, CRational> zero;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) zero[w_symbol(a, b)] = CRational(0);
  CHECK(top.substitute(zero) == Wc(8));

  // diagonal W: cross terms vanish
  std::map<int, CRational> off_zero;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) off_zero[w_symbol(a, b)] = CRational(0);
  const WPoly diag = top.substitute(off_zero);
  const WPoly expect =
      Wc(2) * (W(1, 1) + W(2, 2) + Wc(2)) * (W(3, 3) + W(4, 4) + Wc(2));
  CHECK(diag == expect);
}

TEST_CASE("expand_hkt_square: conjugation-swap symmetry of the top coefficient") {
  // The swap (1<->3, 2<->4) on both W indices exchanges the two diagonal
  // blocks and pairs up the off-diagonal products.
  const WPoly top = expand_hkt_square().coefficient({0, 1, 2, 3});
  auto sigma = [](int x) { return (x + 2) % 4; };
  WPoly swapped;
  for (const auto& [mono, c] : top.terms) {
    std::vector<int> m;
    for (int id : mono) m.push_back(w_symbol(sigma(id / 4), sigma(id % 4)));
    std::sort(m.begin(), m.end());
    WPoly t;
    t.terms[m] = c;
    swapped += t;
  }
  CHECK(swapped == top);
}

TEST_CASE("reduce_invariant: T4 Poisson form for every group") {
  for (Group g : {Group::N1, Group::N2, Group::N3})
    CHECK(reduce_invariant(g, Invariance::T4) == target_t4());
}

TEST_CASE("reduce_invariant: T3 reduction for every group") {
  for (Group g : {Group::N1, Group::N2, Group::N3})
    CHECK(reduce_invariant(g, Invariance::T3) == target_t5());
}

TEST_CASE("reduce_invariant: T2 reduction on N2") {
  CHECK(reduce_invariant(Group::N2, Invariance::T2) == target_t6());
}

TEST_CASE("reduce_invariant: S1 reduction on N1") {
  CHECK(reduce_invariant(Group::N1, Invariance::S1) == target_t7());
}

TEST_CASE("reduce_invariant: unsupported pairs") {
  CHECK_THROWS_AS(reduce_invariant(Group::N1, Invariance::T2), UnsupportedCombination);
  CHECK_THROWS_AS(reduce_invariant(Group::N3, Invariance::T2), UnsupportedCombination);
  CHECK_THROWS_AS(reduce_invariant(Group::N2, Invariance::S1), UnsupportedCombination);
  CHECK_THROWS_AS(reduce_invariant(Group::N3, Invariance::S1), UnsupportedCombination);
}

TEST_CASE("reduced polynomial serialization") {
  const auto t4 = reduce_invariant(Group::N1, Invariance::T4);
  const std::string json = t4.to_json("t4");
  CHECK(json.find("\"variant\": \"t4\"") != std::string::npos);
  CHECK(json.find("\"monomial\": [[1, 1]]") != std::string::npos);
  CHECK(json.find("\"coeff\": \"1\"") != std::string::npos);
  const std::string latex = t4.to_latex();
  CHECK(latex.find("\\phi_{11}") != std::string::npos);
  CHECK(latex.find("= \\mathrm{e}^F") != std::string::npos);
}
