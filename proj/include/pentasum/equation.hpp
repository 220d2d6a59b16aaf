#pragma once

// Model of the quintic three-term equation
//
//     (x - d)^5 + x^5 + (x + d)^5 = z^n,    d = 2^a 5^b,
//
// its factored form x * P = z^n with P = 3x^4 + 20 d^2 x^2 + 10 d^4,
// the decomposition of a candidate solution into coprime n-th powers
// (z1, z2), the classification into Cases I-IV by comparing the
// 2- and 5-adic valuations of x against (a, b), and the two ternary
// (n, n, 2) equations  A*aterm^n + B*bterm^n = C*cterm^2  attached to
// each case.

#include <optional>
#include <string>
#include <utility>

#include "pentasum/arith.hpp"

namespace pentasum {

enum class Case { I, II, III, IV };

// The analysis splits each case on the size of the relevant valuation
// gap: a - alpha for Cases I/II, alpha - a for Cases III/IV.
enum class Subcase { delta0, delta1, delta2plus };

inline const char* to_string(Case c) {
  switch (c) {
    case Case::I: return "I";
    case Case::II: return "II";
    case Case::III: return "III";
    case Case::IV: return "IV";
  }
  return "?";
}

inline const char* to_string(Subcase s) {
  switch (s) {
    case Subcase::delta0: return "delta0";
    case Subcase::delta1: return "delta1";
    case Subcase::delta2plus: return "delta2plus";
  }
  return "?";
}

inline std::optional<Case> case_from_string(const std::string& s) {
  if (s == "I") return Case::I;
  if (s == "II") return Case::II;
  if (s == "III") return Case::III;
  if (s == "IV") return Case::IV;
  return std::nullopt;
}

struct EquationParams {
  unsigned long a = 0;  // exponent of 2 in d
  unsigned long b = 0;  // exponent of 5 in d

  Int d() const { return pow25(a, b); }
};

struct CandidateSolution {
  Int x;
  Int z;
  unsigned long n = 0;  // prime exponent >= 2
  EquationParams params;
};

struct Decomposition {
  unsigned long alpha = 0;  // v2(x)
  unsigned long beta = 0;   // v5(x)
  Int x1;                   // x / (2^alpha 5^beta), coprime to 10
  unsigned long u = 0;      // v2(z)
  unsigned long v = 0;      // v5(z)
  Int Z;                    // z / (2^u 5^v), coprime to 10
  Int z1;                   // x1 = z1^n
  Int z2;                   // P1 = z2^n
  unsigned long n = 0;
  EquationParams params;
  Case cse = Case::I;
  Subcase subcase = Subcase::delta0;
  unsigned long delta_a = 0;  // |a - alpha|
  unsigned long delta_b = 0;  // |b - beta|
};

struct FermatInstance {
  Int A, aterm, B, bterm, C, cterm;
  Case cse = Case::I;
  int identity_index = 1;  // 1 or 2: which of the two source identities

  // A*aterm^n + B*bterm^n == C*cterm^2, exactly.
  bool holds(unsigned long n) const {
    return A * pow_ui(aterm, n) + B * pow_ui(bterm, n) == C * sqr(cterm);
  }
};

inline Int lhs(const Int& x, const Int& d) {
  return pow_ui(x - d, 5) + pow_ui(x, 5) + pow_ui(x + d, 5);
}

inline Int P_of(const Int& x, const Int& d) {
  Int x2 = sqr(x), d2 = sqr(d);
  return 3 * sqr(x2) + 20 * d2 * x2 + 10 * sqr(d2);
}

// Both rewritings of the quartic cofactor:
//   10 (x^2 + d^2)^2 - 7 x^4   = P,
//   (3 x^2 + 10 d^2)^2 - 70 d^4 = 3 P.
inline bool verify_identities(const Int& x, const Int& d) {
  Int x2 = sqr(x), d2 = sqr(d);
  Int P = P_of(x, d);
  bool first = 10 * sqr(x2 + d2) - 7 * sqr(x2) == P;
  bool second = sqr(3 * x2 + 10 * d2) - 70 * sqr(d2) == 3 * P;
  return first && second && lhs(x, d) == x * P;
}

inline Case classify_case(unsigned long a, unsigned long b,
                          unsigned long alpha, unsigned long beta) {
  bool two_small = a >= alpha;   // v2(x) does not exceed the 2-part of d
  bool five_small = b >= beta;   // v5(x) does not exceed the 5-part of d
  if (two_small && five_small) return Case::I;
  if (two_small) return Case::II;
  if (five_small) return Case::III;
  return Case::IV;
}

inline Subcase subcase_of(Case c, unsigned long a, unsigned long alpha) {
  unsigned long gap =
      (c == Case::I || c == Case::II) ? a - alpha : alpha - a;
  if ((c == Case::III || c == Case::IV) && gap == 0)
    throw error("subcase_of: Cases III/IV require v2(x) > a");
  if (gap == 0) return Subcase::delta0;
  if (gap == 1) return Subcase::delta1;
  return Subcase::delta2plus;
}

// Map arbitrary-sign solutions onto the positive branch (x > 0, z > 0);
// legitimate because (x, z) -> (-x, -z) preserves the equation for odd n,
// and for even n the left side is positive only when x is.
inline CandidateSolution normalize(const CandidateSolution& sol) {
  if (sol.x == 0 || sol.z == 0) throw error("normalize: xz must be nonzero");
  if (sol.n < 2) throw error("normalize: exponent must be >= 2");
  CandidateSolution out = sol;
  if (sol.n % 2 == 0) {
    if (sol.x < 0)
      throw error("normalize: no even-exponent solution has x < 0");
    if (sol.z < 0) out.z = -sol.z;
    return out;
  }
  if (sol.x < 0) {
    out.x = -sol.x;
    out.z = -sol.z;
  }
  if (out.z < 0)
    throw error("normalize: sign of z inconsistent with sign of x");
  return out;
}

inline Decomposition decompose(const CandidateSolution& input) {
  CandidateSolution sol = normalize(input);
  const Int d = sol.params.d();
  if (lhs(sol.x, d) != pow_ui(sol.z, sol.n))
    throw error("decompose: input does not satisfy the equation");

  Decomposition dec;
  dec.n = sol.n;
  dec.params = sol.params;
  dec.alpha = valuation(sol.x, 2);
  dec.beta = valuation(sol.x, 5);
  dec.x1 = sol.x / pow25(dec.alpha, dec.beta);
  dec.u = valuation(sol.z, 2);
  dec.v = valuation(sol.z, 5);
  dec.Z = sol.z / pow25(dec.u, dec.v);

  const Int P = P_of(sol.x, d);
  unsigned long v2P = valuation(P, 2), v5P = valuation(P, 5);
  const Int P1 = P / pow25(v2P, v5P);
  if (dec.alpha + v2P != dec.n * dec.u || dec.beta + v5P != dec.n * dec.v)
    throw error("decompose: valuation balance fails (corrupted input)");

  auto z1 = exact_nth_root(dec.x1, dec.n);
  if (!z1) throw error("decompose: x1 is not a perfect n-th power");
  auto z2 = exact_nth_root(P1, dec.n);
  if (!z2) throw error("decompose: P1 is not a perfect n-th power");
  dec.z1 = *z1;
  dec.z2 = *z2;

  if (gcd(dec.z1, dec.z2) != 1 || gcd(dec.z1 * dec.z2, Int(10)) != 1)
    throw error("decompose: z1, z2 violate coprimality (corrupted input)");
  if (dec.z1 * dec.z2 % 7 == 0)
    throw error("decompose: 7 | z1 z2 (corrupted input)");
  if (dec.Z != dec.z1 * dec.z2)
    throw error("decompose: Z != z1 z2 (corrupted input)");

  const unsigned long a = sol.params.a, b = sol.params.b;
  dec.cse = classify_case(a, b, dec.alpha, dec.beta);
  dec.subcase = subcase_of(dec.cse, a, dec.alpha);
  dec.delta_a = a >= dec.alpha ? a - dec.alpha : dec.alpha - a;
  dec.delta_b = b >= dec.beta ? b - dec.beta : dec.beta - b;
  return dec;
}

// Rebuild the solution a Decomposition came from.
inline CandidateSolution reconstruct(const Decomposition& dec) {
  CandidateSolution sol;
  sol.n = dec.n;
  sol.params = dec.params;
  sol.x = pow25(dec.alpha, dec.beta) * pow_ui(dec.z1, dec.n);
  sol.z = pow25(dec.u, dec.v) * dec.z1 * dec.z2;
  return sol;
}

// cterm of the ternary equation for the given case and identity, as a
// function of z1^(2n) and the valuation gaps.  Shared by fermat_instances
// and the exhaustive residue check below.  Returned positive (it is
// squared wherever it is used).
inline Int cterm_of(Case c, int identity_index, const Int& z1_2n,
                    unsigned long da, unsigned long db) {
  const bool first = identity_index == 1;
  switch (c) {
    case Case::I:
      if (first) return z1_2n + pow25(2 * da, 2 * db);
      return 3 * z1_2n + pow25(2 * da + 1, 2 * db + 1);
    case Case::II:
      if (db == 0) throw error("cterm_of: Case II needs db >= 1");
      if (first) return pow5(2 * db) * z1_2n + pow2(2 * da);
      return 3 * pow5(2 * db - 1) * z1_2n + pow2(2 * da + 1);
    case Case::III:
      if (da == 0) throw error("cterm_of: Case III needs da >= 1");
      if (first) return pow2(2 * da) * z1_2n + pow5(2 * db);
      return 3 * pow2(2 * da - 1) * z1_2n + pow5(2 * db + 1);
    case Case::IV:
      if (da == 0 || db == 0) throw error("cterm_of: Case IV needs da, db >= 1");
      if (first) return pow25(2 * da, 2 * db) * z1_2n + 1;
      return 3 * pow25(2 * da - 1, 2 * db - 1) * z1_2n + 1;
  }
  throw error("cterm_of: bad case");
}

inline std::pair<FermatInstance, FermatInstance> fermat_instances(
    const Decomposition& dec) {
  const Int z1_4 = pow_ui(dec.z1, 4);
  const Int z1_2n = pow_ui(dec.z1, 2 * dec.n);
  const unsigned long da = dec.delta_a, db = dec.delta_b;

  FermatInstance f1, f2;
  f1.cse = f2.cse = dec.cse;
  f1.identity_index = 1;
  f2.identity_index = 2;
  f1.aterm = f2.aterm = dec.z2;
  f1.A = 1;
  f2.A = 3;
  f1.bterm = z1_4;
  f2.bterm = 1;

  switch (dec.cse) {
    case Case::I:
      f1.B = 7;
      f1.C = 10;
      f2.B = 7 * pow25(4 * da + 1, 4 * db + 1);
      f2.C = 1;
      break;
    case Case::II:
      f1.B = 7 * pow5(4 * db - 1);
      f1.C = 2;
      f2.B = 7 * pow2(4 * da + 1);
      f2.C = 5;
      break;
    case Case::III:
      f1.B = 7 * pow2(4 * da - 1);
      f1.C = 5;
      f2.B = 7 * pow5(4 * db + 1);
      f2.C = 2;
      break;
    case Case::IV:
      f1.B = 7 * pow25(4 * da - 1, 4 * db - 1);
      f1.C = 1;
      f2.B = 7;
      f2.C = 10;
      break;
  }
  f1.cterm = cterm_of(dec.cse, 1, z1_2n, da, db);
  f2.cterm = cterm_of(dec.cse, 2, z1_2n, da, db);

  if (!f1.holds(dec.n) || !f2.holds(dec.n))
    throw error("fermat_instances: internal identity failure");
  return {f1, f2};
}

inline bool pairwise_coprime(const FermatInstance& f) {
  Int t1 = f.A * f.aterm, t2 = f.B * f.bterm, t3 = f.C * f.cterm;
  return gcd(t1, t2) == 1 && gcd(t1, t3) == 1 && gcd(t2, t3) == 1;
}

inline bool check_seven_coprime(const Decomposition& dec) {
  if (dec.z1 * dec.z2 % 7 == 0) return false;
  auto [f1, f2] = fermat_instances(dec);
  return f1.cterm % 7 != 0 && f2.cterm % 7 != 0;
}

// Machine verification of the residue argument behind check_seven_coprime:
// each cterm is a unit times a sum of two squares mod 7, and -1 is a
// non-residue mod 7, so 7 never divides cterm when 7 does not divide z1.
// Loops over all residues of z1^(2n) (i.e. all nonzero squares mod 7) and
// over full periods of the powers of 2 and 5 mod 7.
inline bool seven_coprime_exhaustive_check() {
  if (legendre(Int(-1), Int(7)) != -1) return false;
  for (Case c : {Case::I, Case::II, Case::III, Case::IV}) {
    unsigned long min_da = (c == Case::III || c == Case::IV) ? 1 : 0;
    unsigned long min_db = (c == Case::II || c == Case::IV) ? 1 : 0;
    for (int idx : {1, 2})
      for (unsigned long s = 1; s <= 6; ++s)          // z1 mod 7 (unit)
        for (unsigned long da = min_da; da < min_da + 3; ++da)   // ord_7(2)=3
          for (unsigned long db = min_db; db < min_db + 6; ++db) {  // ord_7(5)=6
            Int z1_2n = sqr(Int(s));  // squares cover z1^(2n) for any n
            if (cterm_of(c, idx, z1_2n, da, db) % 7 == 0) return false;
          }
  }
  return true;
}

}  // namespace pentasum
