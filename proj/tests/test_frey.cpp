#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "pentasum/frey.hpp"

using namespace pentasum;

TEST_CASE("label enumeration and parsing", "[frey]") {
  auto labels = all_labels();
  CHECK(labels.size() == 20);
  std::map<Case, int> per_case;
  for (const CurveLabel& L : labels) {
    ++per_case[L.cse];
    CHECK(label_from_string(to_string(L)) == L);
  }
  CHECK(per_case[Case::I] == 6);
  CHECK(per_case[Case::II] == 6);
  CHECK(per_case[Case::III] == 4);
  CHECK(per_case[Case::IV] == 4);
  CHECK(!label_from_string("G_I_1").has_value());
  CHECK(!label_from_string("E_III_3").has_value());
  CHECK(!label_from_string("E_I").has_value());
}

TEST_CASE("curve index per subcase", "[frey]") {
  CHECK(curve_index(Case::I, Subcase::delta2plus) == 1);
  CHECK(curve_index(Case::I, Subcase::delta0) == 2);
  CHECK(curve_index(Case::I, Subcase::delta1) == 3);
  CHECK(curve_index(Case::II, Subcase::delta1) == 3);
  CHECK(curve_index(Case::III, Subcase::delta2plus) == 1);
  CHECK(curve_index(Case::III, Subcase::delta1) == 2);
  CHECK(curve_index(Case::IV, Subcase::delta1) == 2);
  CHECK_THROWS_AS(curve_index(Case::IV, Subcase::delta0), error);

  auto [e, f] = labels_for(Case::I, Subcase::delta1);
  CHECK(e == CurveLabel{Family::E, Case::I, 3});
  CHECK(f == CurveLabel{Family::F, Case::I, 3});
}

TEST_CASE("build_curve fixed coefficients", "[frey]") {
  // Known-solution subcase: index-3 pair of Case I with w = 1.
  FreyCurveModel e13 = build_curve({Family::E, Case::I, 3}, Int(1), 1, 0);
  CHECK(e13.a1 == 0);
  CHECK(e13.a2 == 100);  // 20 (1 + 4)
  CHECK(e13.a4 == 70);

  FreyCurveModel f12 = build_curve({Family::F, Case::I, 2}, Int(1), 0, 0);
  CHECK(f12.a2 == 26);  // 6 + 4*5
  CHECK(f12.a4 == 70);  // 14*5

  FreyCurveModel f13 = build_curve({Family::F, Case::I, 3}, Int(1), 1, 0);
  CHECK(f13.a2 == -43);  // -(3 + 8*5)
  CHECK(f13.a4 == 280);

  // Subcase constraint violations are rejected.
  CHECK_THROWS_AS(build_curve({Family::E, Case::I, 1}, Int(1), 1, 0), error);
  CHECK_THROWS_AS(build_curve({Family::E, Case::III, 2}, Int(1), 2, 0), error);
  CHECK_THROWS_AS(build_curve({Family::E, Case::II, 2}, Int(1), 0, 0), error);

  // Case-(v) rows reject parameters breaking the parity conditions
  // (w = 2 is not an odd square).
  CHECK_THROWS_AS(build_curve({Family::F, Case::I, 1}, Int(2), 2, 0), error);
}

TEST_CASE("invariants on textbook curves", "[frey]") {
  // y^2 = x^3 - x
  auto inv = invariants_of_coeffs(Int(0), Int(0), Int(0), Int(-1), Int(0));
  CHECK(inv.disc == 64);
  CHECK(inv.c4 == 48);

  // y^2 = x^3 (singular)
  auto cusp = invariants_of_coeffs(Int(0), Int(0), Int(0), Int(0), Int(0));
  CHECK(cusp.disc == 0);

  // y^2 + y = x^3 - x^2 (conductor-11 curve), disc = -11
  auto x11 = invariants_of_coeffs(Int(0), Int(-1), Int(1), Int(0), Int(0));
  CHECK(x11.disc == -11);
}

TEST_CASE("serre levels are the fourteen constants", "[frey]") {
  auto lvl = [](Family f, Case c, int k) {
    return serre_level({f, c, k});
  };
  CHECK(lvl(Family::E, Case::I, 1) == 44800);
  CHECK(lvl(Family::E, Case::I, 2) == 44800);
  CHECK(lvl(Family::E, Case::I, 3) == 44800);
  CHECK(lvl(Family::F, Case::I, 1) == 210);
  CHECK(lvl(Family::F, Case::I, 2) == 13440);
  CHECK(lvl(Family::F, Case::I, 3) == 840);
  CHECK(lvl(Family::E, Case::II, 1) == 8960);
  CHECK(lvl(Family::E, Case::II, 2) == 8960);
  CHECK(lvl(Family::E, Case::II, 3) == 8960);
  CHECK(lvl(Family::F, Case::II, 1) == 1050);
  CHECK(lvl(Family::F, Case::II, 2) == 67200);
  CHECK(lvl(Family::F, Case::II, 3) == 4200);
  CHECK(lvl(Family::E, Case::III, 1) == 350);
  CHECK(lvl(Family::E, Case::III, 2) == 5600);
  CHECK(lvl(Family::F, Case::III, 1) == 26880);
  CHECK(lvl(Family::F, Case::III, 2) == 26880);
  CHECK(lvl(Family::E, Case::IV, 1) == 70);
  CHECK(lvl(Family::E, Case::IV, 2) == 1120);
  CHECK(lvl(Family::F, Case::IV, 1) == 134400);
  CHECK(lvl(Family::F, Case::IV, 2) == 134400);

  CHECK(all_serre_levels() ==
        std::vector<long>{70, 210, 350, 840, 1050, 1120, 4200, 5600, 8960,
                          13440, 26880, 44800, 67200, 134400});

  // Shape: 2^e2 * 5^e5 * 3^{0 or 1} * 7.
  for (const CurveLabel& L : all_labels()) {
    Int N(serre_level(L));
    CHECK(valuation(N, 7) == 1);
    CHECK(valuation(N, 3) <= 1);
    Int cofactor = N / pow_ui(Int(7), valuation(N, 7)) /
                   pow_ui(Int(3), valuation(N, 3)) /
                   pow2(valuation(N, 2)) / pow5(valuation(N, 5));
    CHECK(cofactor == 1);
  }
}

TEST_CASE("closed-form discriminant fixed values", "[frey]") {
  CHECK(table6_discriminant({Family::E, Case::I, 1}, Int(1), Int(1), 7, 2, 0) ==
        3136000);  // 2^9 5^3 7^2
  CHECK(table6_discriminant({Family::F, Case::IV, 2}, Int(1), Int(1), 7, 1, 1) ==
        9408000);  // 2^9 3 5^3 7^2
  CHECK(table6_discriminant({Family::E, Case::I, 3}, Int(1), Int(3), 5, 1, 0) ==
        Int(3136000) * 243);
}

namespace {

// Force the quartic cofactor for given (case, z1-power y, da, db) by
// evaluating P at the smallest exponent tuple realizing the case, then
// stripping its fixed 2- and 5-part.
Int forced_cofactor(Case c, const Int& y, unsigned long da, unsigned long db) {
  unsigned long alpha = 0, beta = 0, a = 0, b = 0;
  switch (c) {
    case Case::I: a = da; b = db; break;
    case Case::II: a = da; beta = db; break;
    case Case::III: alpha = da; b = db; break;
    case Case::IV: alpha = da; beta = db; break;
  }
  Int x = pow25(alpha, beta) * y;
  Int P = P_of(x, pow25(a, b));
  return P / pow25(valuation(P, 2), valuation(P, 5));
}

}  // namespace

TEST_CASE("exact discriminants match the closed forms on all twenty curves",
          "[frey]") {
  IntRng rng(271828182);
  for (const CurveLabel& L : all_labels()) {
    for (int trial = 0; trial < 100; ++trial) {
      // z1 odd, coprime to 5 and 7.
      Int z1;
      do {
        z1 = 2 * rng.below(pow2(16)) + 1;
      } while (z1 % 5 == 0 || z1 % 7 == 0);
      unsigned long n = std::array<unsigned long, 3>{7, 11, 13}[rng.range(0, 2)];

      unsigned long da, db;
      if (L.cse == Case::I || L.cse == Case::II)
        da = L.index == 1 ? static_cast<unsigned long>(rng.range(2, 6))
                          : (L.index == 2 ? 0 : 1);
      else
        da = L.index == 1 ? static_cast<unsigned long>(rng.range(2, 6)) : 1;
      unsigned long db_min = (L.cse == Case::II || L.cse == Case::IV) ? 1 : 0;
      db = static_cast<unsigned long>(rng.range(db_min, 6));

      Int y = pow_ui(z1, n);              // z1^n
      Int w = sqr(y);                     // z1^(2n)
      Int t = forced_cofactor(L.cse, y, da, db);  // plays z2^n

      Int exact = invariants_of(build_curve(L, w, da, db)).disc;
      Int closed = table6_discriminant(L, y, t, 1, da, db);
      REQUIRE(exact == closed);
    }
  }
}

TEST_CASE("mod-ell construction agrees with exact reduction", "[frey]") {
  IntRng rng(314159);
  const long primes[] = {11, 13, 17, 19, 23, 29, 31};
  for (const CurveLabel& L : all_labels()) {
    for (int trial = 0; trial < 30; ++trial) {
      Int z1 = 2 * rng.below(pow2(20)) + 1;
      if (z1 % 5 == 0 || z1 % 7 == 0) continue;
      unsigned long n = 7;
      unsigned long da, db;
      if (L.cse == Case::I || L.cse == Case::II)
        da = L.index == 1 ? static_cast<unsigned long>(rng.range(2, 6))
                          : (L.index == 2 ? 0 : 1);
      else
        da = L.index == 1 ? static_cast<unsigned long>(rng.range(2, 6)) : 1;
      unsigned long db_min = (L.cse == Case::II || L.cse == Case::IV) ? 1 : 0;
      db = static_cast<unsigned long>(rng.range(db_min, 6));

      Int w = pow_ui(z1, 2 * n);
      FreyCurveModel m = build_curve(L, w, da, db);
      long ell = primes[rng.range(0, 6)];
      Fp F(static_cast<uint64_t>(ell));
      auto coeffs = build_curve_mod(L, F, F.reduce(w),
                                    F.pow(2, da), F.pow(5 % ell, db));
      CHECK(coeffs[0] == F.reduce(m.a1));
      CHECK(coeffs[1] == F.reduce(m.a2));
      CHECK(coeffs[2] == 0);
      CHECK(coeffs[3] == F.reduce(m.a4));
      CHECK(coeffs[4] == 0);
    }
  }
}

namespace {

// Independent all-pairs point counter over F_ell for the long model.
long naive_trace(const Fp& F, const ReducedCurve& rc) {
  long count = 1;  // point at infinity
  for (uint64_t x = 0; x < F.ell(); ++x)
    for (uint64_t y = 0; y < F.ell(); ++y) {
      uint64_t lhs =
          F.add(F.add(F.mul(y, y), F.mul(rc.a1, F.mul(x, y))), F.mul(rc.a3, y));
      uint64_t rhs = F.add(
          F.add(F.mul(F.mul(x, x), x), F.mul(rc.a2, F.mul(x, x))),
          F.add(F.mul(rc.a4, x), rc.a6));
      if (lhs == rhs) ++count;
    }
  return static_cast<long>(F.ell()) + 1 - count;
}

}  // namespace

TEST_CASE("trace of Frobenius: fixed curve", "[frey]") {
  // y^2 = x^3 + x over F_11 has complex multiplication; a_11 = 0.
  Fp F(11);
  ReducedCurve rc;
  rc.ell = 11;
  rc.a4 = 1;
  rc.type = ReductionType::good;
  CHECK(trace_of_frobenius(F, rc) == 0);
  CHECK(naive_trace(F, rc) == 0);
}

TEST_CASE("trace of Frobenius agrees with the all-pairs oracle", "[frey]") {
  IntRng rng(112358);
  const long primes[] = {11, 13, 17, 19, 23, 29, 31};
  int checked = 0;
  while (checked < 50) {
    long ell = primes[rng.range(0, 6)];
    Fp F(static_cast<uint64_t>(ell));
    ReducedCurve rc;
    rc.ell = static_cast<uint64_t>(ell);
    rc.a1 = static_cast<uint64_t>(rng.range(0, 1));
    rc.a2 = static_cast<uint64_t>(rng.range(0, ell - 1));
    rc.a3 = 0;
    rc.a4 = static_cast<uint64_t>(rng.range(0, ell - 1));
    rc.a6 = static_cast<uint64_t>(rng.range(0, ell - 1));
    try {
      rc = classify_reduced(F, {rc.a1, rc.a2, rc.a3, rc.a4, rc.a6});
    } catch (const error&) {
      continue;  // additive: not a valid sample
    }
    if (rc.type != ReductionType::good) continue;
    long a = trace_of_frobenius(F, rc);
    CHECK(a == naive_trace(F, rc));
    CHECK(static_cast<double>(a) * a <= 4.0 * static_cast<double>(ell));
    ++checked;
  }
}

TEST_CASE("twisting by a non-residue negates the trace", "[frey]") {
  IntRng rng(8675309);
  const long primes[] = {11, 13, 17, 19, 23};
  for (int trial = 0; trial < 25; ++trial) {
    long ell = primes[rng.range(0, 4)];
    Fp F(static_cast<uint64_t>(ell));
    uint64_t m = 0;
    for (uint64_t c = 2; c < F.ell(); ++c)
      if (!F.is_square(c)) { m = c; break; }
    REQUIRE(m != 0);

    uint64_t A = static_cast<uint64_t>(rng.range(0, ell - 1));
    uint64_t B = static_cast<uint64_t>(rng.range(0, ell - 1));
    uint64_t C = static_cast<uint64_t>(rng.range(0, ell - 1));
    ReducedCurve rc, tw;
    try {
      rc = classify_reduced(F, {0, A, 0, B, C});
      tw = classify_reduced(
          F, {0, F.mul(m, A), 0, F.mul(F.mul(m, m), B),
              F.mul(F.mul(m, F.mul(m, m)), C)});
    } catch (const error&) {
      continue;
    }
    if (rc.type != ReductionType::good) continue;
    REQUIRE(tw.type == ReductionType::good);
    CHECK(trace_of_frobenius(F, tw) == -trace_of_frobenius(F, rc));
  }
}

TEST_CASE("reduction classification", "[frey]") {
  // Worked n = 5 example: E_{I,3}(w=1, db=0) with z2 = 3; the curve has
  // bad reduction only inside {2,3,5,7}, so every ell >= 11 is good.
  FreyCurveModel m = build_curve({Family::E, Case::I, 3}, Int(1), 1, 0);
  Int disc = invariants_of(m).disc;
  for (long ell : {11L, 13L, 17L, 19L}) {
    CHECK(disc % ell != 0);
    CHECK(reduce_mod(m, static_cast<uint64_t>(ell)).type ==
          ReductionType::good);
  }
  CHECK_THROWS_AS(reduce_mod(m, 7), error);
  CHECK_THROWS_AS(reduce_mod(m, 12), error);

  // E-family curves degenerate multiplicatively when ell | z1 (w = 0).
  for (long ell : {11L, 13L, 17L}) {
    Fp F(static_cast<uint64_t>(ell));
    for (const CurveLabel& L : all_labels()) {
      if (L.family != Family::E) continue;
      auto coeffs = build_curve_mod(L, F, 0, F.pow(2, 3), F.pow(5 % ell, 2));
      ReducedCurve rc = classify_reduced(F, coeffs);
      CHECK(rc.type == ReductionType::multiplicative);
      CHECK_THROWS_AS(trace_of_frobenius(F, rc), error);
    }
  }
}
