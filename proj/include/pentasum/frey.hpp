#pragma once

// The twenty Frey-Hellegouarch curves attached to the two ternary
// equations of each case, either exactly over Q (integral long
// Weierstrass models) or reduced mod ell.  Also: standard Weierstrass
// invariants, the closed-form discriminants, the constant Serre levels
// obtained after level lowering, and traces of Frobenius by point
// counting.
//
// The parameter w always stands for z1^(2n), so curves can be built
// exactly (given z1 and n) or over F_ell (given only a residue w);
// quartic z1-terms enter as w^2.  E-family curves descend from the
// first source identity of their case, F-family curves from the second.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pentasum/equation.hpp"
#include "pentasum/fp.hpp"

namespace pentasum {

enum class Family { E, F };

struct CurveLabel {
  Family family = Family::E;
  Case cse = Case::I;
  int index = 1;  // 1..3 for Cases I-II, 1..2 for Cases III-IV

  bool operator==(const CurveLabel&) const = default;
};

inline int max_index(Case c) {
  return (c == Case::I || c == Case::II) ? 3 : 2;
}

inline std::vector<CurveLabel> all_labels() {
  std::vector<CurveLabel> out;
  for (Case c : {Case::I, Case::II, Case::III, Case::IV})
    for (int k = 1; k <= max_index(c); ++k)
      for (Family fam : {Family::E, Family::F})
        out.push_back({fam, c, k});
  return out;
}

inline std::string to_string(const CurveLabel& L) {
  std::string s(L.family == Family::E ? "E" : "F");
  s += "_";
  s += to_string(L.cse);
  s += "_";
  s += std::to_string(L.index);
  return s;
}

inline std::optional<CurveLabel> label_from_string(const std::string& s) {
  // Accepts "E_I_1" style names.
  if (s.size() < 5 || (s[0] != 'E' && s[0] != 'F') || s[1] != '_')
    return std::nullopt;
  auto second = s.find('_', 2);
  if (second == std::string::npos || second + 1 >= s.size())
    return std::nullopt;
  auto cse = case_from_string(s.substr(2, second - 2));
  if (!cse) return std::nullopt;
  const std::string idx = s.substr(second + 1);
  if (idx != "1" && idx != "2" && idx != "3") return std::nullopt;
  CurveLabel L{s[0] == 'E' ? Family::E : Family::F, *cse, idx[0] - '0'};
  if (L.index > max_index(L.cse)) return std::nullopt;
  return L;
}

// Which curve index serves each valuation-gap subcase.
inline int curve_index(Case c, Subcase s) {
  if (c == Case::I || c == Case::II) {
    switch (s) {
      case Subcase::delta2plus: return 1;
      case Subcase::delta0: return 2;
      case Subcase::delta1: return 3;
    }
  } else {
    switch (s) {
      case Subcase::delta2plus: return 1;
      case Subcase::delta1: return 2;
      case Subcase::delta0: break;
    }
  }
  throw error("curve_index: invalid case/subcase combination");
}

inline std::pair<CurveLabel, CurveLabel> labels_for(Case c, Subcase s) {
  int k = curve_index(c, s);
  return {CurveLabel{Family::E, c, k}, CurveLabel{Family::F, c, k}};
}

// Check (da, db) against the subcase constraint of the label's row.
inline void require_subcase(const CurveLabel& L, unsigned long da,
                            unsigned long db) {
  bool ok = true;
  if (L.cse == Case::I || L.cse == Case::II) {
    if (L.index == 1) ok = da >= 2;
    if (L.index == 2) ok = da == 0;
    if (L.index == 3) ok = da == 1;
  } else {
    if (L.index == 1) ok = da >= 2;
    if (L.index == 2) ok = da == 1;
  }
  if (L.cse == Case::II || L.cse == Case::IV) ok = ok && db >= 1;
  if (!ok)
    throw error("build_curve: (delta_a, delta_b) violate the subcase of " +
                to_string(L));
}

struct FreyCurveModel {
  CurveLabel label;
  Int a1, a2, a3, a4, a6;  // long Weierstrass coefficients, all integral
  Int w;                   // the z1^(2n) stand-in used to build the model
  unsigned long delta_a = 0, delta_b = 0;
};

// Exact construction from the table recipes.  Rows with a1 = 1 carry a
// quarter-integer a2 in the table; integrality is guaranteed by the
// parity of genuine parameters (w an odd square) and is checked here.
inline FreyCurveModel build_curve(const CurveLabel& L, const Int& w,
                                  unsigned long da, unsigned long db) {
  require_subcase(L, da, db);
  FreyCurveModel m;
  m.label = L;
  m.w = w;
  m.delta_a = da;
  m.delta_b = db;
  m.a1 = 0;
  m.a3 = 0;
  m.a6 = 0;

  auto quarter = [&](const Int& numerator) {
    if (numerator % 4 != 0)
      throw error("build_curve: non-integral a2 for " + to_string(L) +
                  " (parameters violate the row's parity conditions)");
    return numerator / 4;
  };

  const bool isE = L.family == Family::E;
  switch (L.cse) {
    case Case::I:
      if (isE) {
        // a2 differs only in the 2-power: 2^{2da} with da = 2+, 0, 1.
        m.a2 = 20 * (w + pow25(2 * da, 2 * db));
        m.a4 = 70 * sqr(w);
      } else if (L.index == 1) {
        m.a1 = 1;
        m.a2 = quarter(-(3 * w + pow25(2 * da + 1, 2 * db + 1) + 1));
        m.a4 = 7 * pow25(4 * da - 5, 4 * db + 1);
      } else if (L.index == 2) {
        m.a2 = 6 * w + 4 * pow5(2 * db + 1);
        m.a4 = 14 * pow5(4 * db + 1);
      } else {
        m.a2 = -(3 * w + 8 * pow5(2 * db + 1));
        m.a4 = 56 * pow5(4 * db + 1);
      }
      break;

    case Case::II:
      if (isE) {
        m.a2 = 4 * (pow5(2 * db) * w + pow2(2 * da));
        m.a4 = 14 * pow5(4 * db - 1) * sqr(w);
      } else if (L.index == 1) {
        m.a1 = 1;
        m.a2 = quarter(-(3 * pow5(2 * db) * w + 5 * pow2(2 * da + 1) + 1));
        m.a4 = 35 * pow2(4 * da - 5);
      } else if (L.index == 2) {
        m.a2 = 10 * (3 * pow5(2 * db - 1) * w + 2);
        m.a4 = 70;
      } else {
        m.a2 = -(3 * pow5(2 * db) * w + 40);
        m.a4 = 280;
      }
      break;

    case Case::III:
      if (isE && L.index == 1) {
        m.a1 = 1;
        m.a2 = quarter(5 * (pow2(2 * da) * w + pow5(2 * db)) - 1);
        m.a4 = 35 * pow2(4 * da - 7) * sqr(w);
      } else if (isE) {
        m.a2 = 5 * (4 * w + pow5(2 * db));
        m.a4 = 70 * sqr(w);
      } else {
        // F_III rows share one shape; only the 2-power inside a2 differs.
        if (L.index == 1)
          m.a2 = 4 * (3 * pow2(2 * da - 1) * w + pow5(2 * db + 1));
        else
          m.a2 = 4 * (6 * w + pow5(2 * db + 1));
        m.a4 = 14 * pow5(4 * db + 1);
      }
      break;

    case Case::IV:
      if (isE && L.index == 1) {
        m.a1 = 1;
        m.a2 = pow25(2 * da - 2, 2 * db) * w;
        m.a4 = 7 * pow25(4 * da - 7, 4 * db - 1) * sqr(w);
      } else if (isE) {
        m.a2 = 4 * pow5(2 * db) * w + 1;
        m.a4 = 14 * pow5(4 * db - 1) * sqr(w);
      } else {
        if (L.index == 1)
          m.a2 = 20 * (3 * pow25(2 * da - 1, 2 * db - 1) * w + 1);
        else
          m.a2 = 20 * (6 * pow5(2 * db - 1) * w + 1);
        m.a4 = 70;
      }
      break;
  }
  return m;
}

// Mod-ell construction.  A and B are the residues of 2^{delta_a} and
// 5^{delta_b}; every exponent in the tables is an integer combination
// of them, so no lift of the deltas is needed.  Returns (a1,...,a6).
inline std::array<uint64_t, 5> build_curve_mod(const CurveLabel& L,
                                               const Fp& F, uint64_t w,
                                               uint64_t A, uint64_t B) {
  const uint64_t ell = F.ell();
  if (ell == 2 || ell == 3 || ell == 5 || ell == 7)
    throw error("build_curve_mod: ell must avoid {2,3,5,7}");
  if (A == 0 || B == 0) throw error("build_curve_mod: A, B must be units");

  const uint64_t A2 = F.mul(A, A), A4 = F.mul(A2, A2);
  const uint64_t B2 = F.mul(B, B), B4 = F.mul(B2, B2);
  const uint64_t w2 = F.mul(w, w);
  const uint64_t inv2 = F.inv(2), inv4 = F.mul(inv2, inv2);
  const uint64_t inv5 = F.inv(5 % ell);
  auto red = [&](uint64_t v) { return v % ell; };

  uint64_t a1 = 0, a2 = 0, a4 = 0;
  const bool isE = L.family == Family::E;
  switch (L.cse) {
    case Case::I:
      if (isE) {
        a2 = F.mul(red(20), F.add(w, F.mul(A2, B2)));
        a4 = F.mul(red(70), w2);
      } else if (L.index == 1) {
        a1 = 1;
        uint64_t num = F.add(F.add(F.mul(3, w), F.mul(red(10), F.mul(A2, B2))), 1);
        a2 = F.neg(F.mul(num, inv4));
        a4 = F.mul(F.mul(red(7), F.mul(A4, F.mul(inv2, F.mul(inv4, inv4)))),
                   F.mul(B4, red(5)));  // 7 * 2^{4da-5} * 5^{4db+1}
      } else if (L.index == 2) {
        a2 = F.add(F.mul(6, w), F.mul(red(20), B2));
        a4 = F.mul(red(70), B4);
      } else {
        a2 = F.neg(F.add(F.mul(3, w), F.mul(red(40), B2)));
        a4 = F.mul(red(280), B4);
      }
      break;

    case Case::II:
      if (isE) {
        uint64_t two_pow = L.index == 1 ? A2 : (L.index == 2 ? 1 : red(4));
        a2 = F.mul(4, F.add(F.mul(B2, w), two_pow));
        a4 = F.mul(F.mul(red(14), F.mul(B4, inv5)), w2);
      } else if (L.index == 1) {
        a1 = 1;
        uint64_t num =
            F.add(F.add(F.mul(3, F.mul(B2, w)), F.mul(red(10), A2)), 1);
        a2 = F.neg(F.mul(num, inv4));
        a4 = F.mul(red(35), F.mul(A4, F.mul(inv2, F.mul(inv4, inv4))));
      } else if (L.index == 2) {
        a2 = F.add(F.mul(red(30), F.mul(F.mul(B2, inv5), w)), red(20));
        a4 = red(70);
      } else {
        a2 = F.neg(F.add(F.mul(3, F.mul(B2, w)), red(40)));
        a4 = red(280);
      }
      break;

    case Case::III:
      if (isE && L.index == 1) {
        a1 = 1;
        uint64_t num =
            F.sub(F.mul(5, F.add(F.mul(A2, w), B2)), 1);
        a2 = F.mul(num, inv4);
        const uint64_t inv128 = F.mul(inv4, F.mul(inv4, F.mul(inv4, inv2)));
        a4 = F.mul(F.mul(red(35), F.mul(A4, inv128)), w2);  // 35*2^{4da-7}*w^2
      } else if (isE) {
        a2 = F.mul(5, F.add(F.mul(4, w), B2));
        a4 = F.mul(red(70), w2);
      } else {
        uint64_t two_term = L.index == 1 ? F.mul(A2, inv2) : red(2);
        a2 = F.mul(4, F.add(F.mul(3, F.mul(two_term, w)), F.mul(5, B2)));
        a4 = F.mul(red(70), B4);  // 14 * 5^{4db+1}
      }
      break;

    case Case::IV:
      if (isE && L.index == 1) {
        a1 = 1;
        a2 = F.mul(F.mul(A2, inv4), F.mul(B2, w));
        const uint64_t inv128 = F.mul(inv4, F.mul(inv4, F.mul(inv4, inv2)));
        a4 = F.mul(F.mul(red(7), F.mul(A4, inv128)),
                   F.mul(F.mul(B4, inv5), w2));
      } else if (isE) {
        a2 = F.add(F.mul(4, F.mul(B2, w)), 1);
        a4 = F.mul(F.mul(red(14), F.mul(B4, inv5)), w2);
      } else {
        uint64_t prod = L.index == 1 ? F.mul(F.mul(A2, inv2), F.mul(B2, inv5))
                                     : F.mul(2, F.mul(B2, inv5));
        a2 = F.mul(red(20), F.add(F.mul(3, F.mul(prod, w)), 1));
        a4 = red(70);
      }
      break;
  }
  return {a1, a2, 0, a4, 0};
}

struct WeierstrassInvariants {
  Int b2, b4, b6, b8, c4, c6, disc;
};

inline WeierstrassInvariants invariants_of_coeffs(const Int& a1, const Int& a2,
                                                  const Int& a3, const Int& a4,
                                                  const Int& a6) {
  WeierstrassInvariants inv;
  inv.b2 = sqr(a1) + 4 * a2;
  inv.b4 = 2 * a4 + a1 * a3;
  inv.b6 = sqr(a3) + 4 * a6;
  inv.b8 = sqr(a1) * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * sqr(a3) - sqr(a4);
  inv.c4 = sqr(inv.b2) - 24 * inv.b4;
  inv.c6 = -pow_ui(inv.b2, 3) + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
  inv.disc = -sqr(inv.b2) * inv.b8 - 8 * pow_ui(inv.b4, 3) -
             27 * sqr(inv.b6) + 9 * inv.b2 * inv.b4 * inv.b6;
  if (1728 * inv.disc != pow_ui(inv.c4, 3) - sqr(inv.c6))
    throw error("invariants_of: internal identity 1728*disc = c4^3 - c6^2 failed");
  return inv;
}

inline WeierstrassInvariants invariants_of(const FreyCurveModel& m) {
  return invariants_of_coeffs(m.a1, m.a2, m.a3, m.a4, m.a6);
}

// Closed-form discriminants of the twenty models, as functions of z1, z2, n and
// the valuation gaps.  n is treated as a formal exponent (n = 1 turns the
// z2^n factor into the raw value, which is how the conformance tests
// substitute a forced cofactor).
inline Int table6_discriminant(const CurveLabel& L, const Int& z1,
                               const Int& z2, unsigned long n,
                               unsigned long da, unsigned long db) {
  require_subcase(L, da, db);
  const Int En = pow_ui(z2 * pow_ui(z1, 8), n);  // (z2 z1^8)^n
  const Int Fn = pow_ui(z2, n);                  // z2^n
  const bool isE = L.family == Family::E;
  const Int seven2 = 49;

  switch (L.cse) {
    case Case::I:
      if (isE) return pow2(9) * pow5(3) * seven2 * En;
      if (L.index == 1)
        return pow2(8 * da - 10) * 3 * pow5(8 * db + 2) * seven2 * Fn;
      if (L.index == 2) return pow2(8) * 3 * pow5(8 * db + 2) * seven2 * Fn;
      return pow2(10) * 3 * pow5(8 * db + 2) * seven2 * Fn;
    case Case::II:
      if (isE) return pow2(9) * pow5(8 * db - 2) * seven2 * En;
      if (L.index == 1) return pow2(8 * da - 10) * 3 * pow5(3) * seven2 * Fn;
      if (L.index == 2) return pow2(8) * 3 * pow5(3) * seven2 * Fn;
      return pow2(10) * 3 * pow5(3) * seven2 * Fn;
    case Case::III:
      if (isE)
        return (L.index == 1 ? pow2(8 * da - 14) : pow2(6)) * pow5(3) *
               seven2 * En;
      return pow2(9) * 3 * pow5(8 * db + 2) * seven2 * Fn;
    case Case::IV:
      if (isE)
        return (L.index == 1 ? pow2(8 * da - 14) : pow2(6)) *
               pow5(8 * db - 2) * seven2 * En;
      return pow2(9) * 3 * pow5(3) * seven2 * Fn;
  }
  throw error("table6_discriminant: bad label");
}

// Constant levels after level lowering (independent of z1, z2, n).
inline long serre_level(const CurveLabel& L) {
  const bool isE = L.family == Family::E;
  switch (L.cse) {
    case Case::I:
      if (isE) return 44800;  // 2^8 5^2 7
      return L.index == 1 ? 210 : (L.index == 2 ? 13440 : 840);
    case Case::II:
      if (isE) return 8960;  // 2^8 5 7
      return L.index == 1 ? 1050 : (L.index == 2 ? 67200 : 4200);
    case Case::III:
      if (isE) return L.index == 1 ? 350 : 5600;
      return 26880;
    case Case::IV:
      if (isE) return L.index == 1 ? 70 : 1120;
      return 134400;
  }
  throw error("serre_level: bad label");
}

inline std::vector<long> all_serre_levels() {
  std::vector<long> out;
  for (const CurveLabel& L : all_labels()) {
    long N = serre_level(L);
    if (std::find(out.begin(), out.end(), N) == out.end()) out.push_back(N);
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class ReductionType { good, multiplicative };

struct ReducedCurve {
  uint64_t ell = 0;
  uint64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  ReductionType type = ReductionType::good;
};

// Reduction classification from mod-ell coefficients.  The table models
// have potentially bad reduction away from {2,3,5,7} only at primes
// dividing z1 z2; there the reduction is multiplicative (disc = 0 but
// c4 a unit); additive reduction cannot occur for ell >= 11 and is
// reported as corruption.
inline ReducedCurve classify_reduced(const Fp& F,
                                     const std::array<uint64_t, 5>& a) {
  ReducedCurve rc;
  rc.ell = F.ell();
  rc.a1 = a[0];
  rc.a2 = a[1];
  rc.a3 = a[2];
  rc.a4 = a[3];
  rc.a6 = a[4];
  uint64_t b2 = F.add(F.mul(a[0], a[0]), F.mul(4, a[1]));
  uint64_t b4 = F.add(F.mul(2, a[3]), F.mul(a[0], a[2]));
  uint64_t b6 = F.add(F.mul(a[2], a[2]), F.mul(4, a[4]));
  uint64_t b8 = F.sub(
      F.add(F.add(F.mul(F.mul(a[0], a[0]), a[4]), F.mul(4, F.mul(a[1], a[4]))),
            F.mul(a[1], F.mul(a[2], a[2]))),
      F.add(F.mul(a[0], F.mul(a[2], a[3])), F.mul(a[3], a[3])));
  uint64_t c4 = F.sub(F.mul(b2, b2), F.mul(24 % F.ell(), b4));
  uint64_t disc =
      F.sub(F.add(F.mul(9 % F.ell(), F.mul(b2, F.mul(b4, b6))),
                  F.neg(F.mul(F.mul(b2, b2), b8))),
            F.add(F.mul(8, F.mul(b4, F.mul(b4, b4))),
                  F.mul(27 % F.ell(), F.mul(b6, b6))));
  if (disc != 0) {
    rc.type = ReductionType::good;
  } else if (c4 != 0) {
    rc.type = ReductionType::multiplicative;
  } else {
    throw error("classify_reduced: additive reduction at ell >= 11 "
                "(corrupted parameters)");
  }
  return rc;
}

inline ReducedCurve reduce_mod(const FreyCurveModel& m, uint64_t ell) {
  if (ell < 11 || !is_prime(Int(static_cast<unsigned long>(ell))))
    throw error("reduce_mod: ell must be a prime >= 11");
  Fp F(ell);
  std::array<uint64_t, 5> a = {F.reduce(m.a1), F.reduce(m.a2), F.reduce(m.a3),
                               F.reduce(m.a4), F.reduce(m.a6)};
  return classify_reduced(F, a);
}

// a_ell = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6): the substitution
// (x, y) -> (x, 2y + a1 x + a3) turns the long model into a square
// condition, valid for odd ell.
inline long trace_of_frobenius(const Fp& F, const ReducedCurve& rc) {
  if (rc.type != ReductionType::good)
    throw error("trace_of_frobenius: curve has bad reduction at ell");
  if (F.ell() != rc.ell) throw error("trace_of_frobenius: field mismatch");
  uint64_t b2 = F.add(F.mul(rc.a1, rc.a1), F.mul(4, rc.a2));
  uint64_t b4 = F.add(F.mul(2, rc.a4), F.mul(rc.a1, rc.a3));
  uint64_t b6 = F.add(F.mul(rc.a3, rc.a3), F.mul(4, rc.a6));
  long sum = 0;
  for (uint64_t x = 0; x < F.ell(); ++x) {
    uint64_t g = F.add(F.mul(F.add(F.mul(F.add(F.mul(4, x), b2), x),
                                   F.mul(2, b4)),
                             x),
                       b6);  // ((4x + b2)x + 2b4)x + b6
    sum += F.chi(g);
  }
  return -sum;
}

inline long trace_of_frobenius(const ReducedCurve& rc) {
  Fp F(rc.ell);
  return trace_of_frobenius(F, rc);
}

}  // namespace pentasum
