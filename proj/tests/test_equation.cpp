#include <catch2/catch_amalgamated.hpp>

#include "pentasum/equation.hpp"

using namespace pentasum;

TEST_CASE("lhs on fixed values", "[equation]") {
  CHECK(lhs(Int(0), Int(5)) == 0);
  CHECK(lhs(Int(0), Int(123456)) == 0);
  CHECK(lhs(Int(1), Int(2)) == 243);
  CHECK(lhs(Int(1), Int(1)) == 33);  // 0 + 1 + 32
}

TEST_CASE("P_of on fixed values", "[equation]") {
  CHECK(P_of(Int(1), Int(2)) == 243);  // 3 + 80 + 160
  CHECK(P_of(Int(1), Int(0)) == 3);
  CHECK(P_of(Int(2), Int(1)) == 138);  // 48 + 80 + 10
}

TEST_CASE("factorization identity lhs = x * P", "[equation]") {
  IntRng rng(15485863);
  for (int i = 0; i < 10000; ++i) {
    Int x = rng.signed_nonzero(256);
    Int d = rng.signed_nonzero(200);
    CHECK(lhs(x, d) == x * P_of(x, d));
  }
}

TEST_CASE("verify_identities holds everywhere", "[equation]") {
  CHECK(verify_identities(Int(1), Int(2)));
  CHECK(verify_identities(Int(-7), Int(3)));
  CHECK(verify_identities(Int(1000001), pow25(4, 3)));
  IntRng rng(22801763489UL % 4294967291UL);
  for (int i = 0; i < 2000; ++i)
    CHECK(verify_identities(rng.signed_nonzero(180), rng.signed_nonzero(140)));
}

TEST_CASE("P is positive for nonzero x", "[equation]") {
  // P = 3x^4 + 20 d^2 x^2 + 10 d^4 with all coefficients positive.
  IntRng rng(5);
  for (int i = 0; i < 500; ++i) {
    Int x = rng.signed_nonzero(64);
    Int d = rng.below(pow2(40));
    CHECK(P_of(x, d) > 0);
  }
}

TEST_CASE("classify_case fixed examples", "[equation]") {
  CHECK(classify_case(1, 0, 0, 0) == Case::I);
  CHECK(classify_case(0, 0, 1, 1) == Case::IV);
  CHECK(classify_case(2, 0, 0, 3) == Case::II);
  CHECK(classify_case(0, 2, 3, 0) == Case::III);
  CHECK(classify_case(0, 0, 0, 0) == Case::I);
}

TEST_CASE("classify_case partitions the exponent lattice", "[equation]") {
  for (unsigned long a = 0; a <= 4; ++a)
    for (unsigned long b = 0; b <= 4; ++b)
      for (unsigned long alpha = 0; alpha <= 4; ++alpha)
        for (unsigned long beta = 0; beta <= 4; ++beta) {
          int matches = 0;
          if (a >= alpha && b >= beta) ++matches;
          if (a >= alpha && beta >= b + 1) ++matches;
          if (alpha >= a + 1 && b >= beta) ++matches;
          if (alpha >= a + 1 && beta >= b + 1) ++matches;
          REQUIRE(matches == 1);
          Case c = classify_case(a, b, alpha, beta);
          if (a >= alpha && b >= beta) CHECK(c == Case::I);
          if (a >= alpha && beta >= b + 1) CHECK(c == Case::II);
          if (alpha >= a + 1 && b >= beta) CHECK(c == Case::III);
          if (alpha >= a + 1 && beta >= b + 1) CHECK(c == Case::IV);
        }
}

TEST_CASE("subcase_of splits on the valuation gap", "[equation]") {
  CHECK(subcase_of(Case::I, 3, 3) == Subcase::delta0);
  CHECK(subcase_of(Case::I, 4, 3) == Subcase::delta1);
  CHECK(subcase_of(Case::II, 5, 3) == Subcase::delta2plus);
  CHECK(subcase_of(Case::III, 3, 4) == Subcase::delta1);
  CHECK(subcase_of(Case::IV, 3, 7) == Subcase::delta2plus);
  CHECK_THROWS_AS(subcase_of(Case::III, 3, 3), error);
}

TEST_CASE("decompose the known quintic solution", "[equation]") {
  CandidateSolution sol{Int(1), Int(3), 5, {1, 0}};
  Decomposition dec = decompose(sol);
  CHECK(dec.alpha == 0);
  CHECK(dec.beta == 0);
  CHECK(dec.x1 == 1);
  CHECK(dec.z1 == 1);
  CHECK(dec.z2 == 3);
  CHECK(dec.Z == 3);
  CHECK(dec.u == 0);
  CHECK(dec.v == 0);
  CHECK(dec.cse == Case::I);
  CHECK(dec.subcase == Subcase::delta1);
  CHECK(dec.delta_a == 1);
  CHECK(dec.delta_b == 0);
}

TEST_CASE("decompose sign-normalizes odd-exponent solutions", "[equation]") {
  CandidateSolution neg{Int(-1), Int(-3), 5, {1, 0}};
  Decomposition dec = decompose(neg);
  CHECK(dec.z1 == 1);
  CHECK(dec.z2 == 3);
  CHECK(dec.cse == Case::I);
}

TEST_CASE("decompose rejects non-solutions", "[equation]") {
  CHECK_THROWS_AS(decompose(CandidateSolution{Int(2), Int(6), 5, {0, 0}}),
                  error);
  CHECK_THROWS_AS(decompose(CandidateSolution{Int(0), Int(3), 5, {1, 0}}),
                  error);
  // Even exponent with negative x cannot satisfy the equation.
  CHECK_THROWS_AS(decompose(CandidateSolution{Int(-1), Int(3), 2, {1, 0}}),
                  error);
}

TEST_CASE("decompose then reconstruct is the identity on the quintic family",
          "[equation]") {
  // (x, z) = (d/2, 3d/2) solves the equation with n = 5 whenever 2 | d.
  for (unsigned long a = 1; a <= 6; ++a)
    for (unsigned long b = 0; b <= 4; ++b) {
      Int x = pow25(a - 1, b);
      CandidateSolution sol{x, 3 * x, 5, {a, b}};
      REQUIRE(lhs(sol.x, sol.params.d()) == pow_ui(sol.z, 5));
      Decomposition dec = decompose(sol);
      CHECK(dec.cse == Case::I);
      CHECK(dec.subcase == Subcase::delta1);
      CHECK(dec.delta_a == 1);
      CHECK(dec.delta_b == 0);
      CHECK(dec.z1 == 1);
      CHECK(dec.z2 == 3);
      CandidateSolution back = reconstruct(dec);
      CHECK(back.x == sol.x);
      CHECK(back.z == sol.z);
      CHECK(lhs(back.x, back.params.d()) == pow_ui(back.z, back.n));
    }
}

TEST_CASE("fermat instances of the known solution", "[equation]") {
  Decomposition dec = decompose(CandidateSolution{Int(1), Int(3), 5, {1, 0}});
  auto [f1, f2] = fermat_instances(dec);

  CHECK(f1.A == 1);
  CHECK(f1.aterm == 3);
  CHECK(f1.B == 7);
  CHECK(f1.bterm == 1);
  CHECK(f1.C == 10);
  CHECK(f1.cterm == 5);
  CHECK(f1.holds(5));  // 243 + 7 = 250 = 10 * 25

  CHECK(f2.A == 3);
  CHECK(f2.aterm == 3);
  CHECK(f2.B == 7 * 32 * 5);
  CHECK(f2.bterm == 1);
  CHECK(f2.C == 1);
  CHECK(f2.cterm == 43);  // 3 + 8 * 5
  CHECK(f2.holds(5));     // 729 + 1120 = 1849 = 43^2

  CHECK(pairwise_coprime(f1));
  CHECK(pairwise_coprime(f2));
  CHECK(check_seven_coprime(dec));
}

// Build a decomposition-shaped object from raw exponent data.  With n = 1,
// z2 := P1 trivially satisfies "z2^n = P1", so fermat_instances exercises
// the full parameter table as a polynomial identity in y = z1^n.
static Decomposition synthetic_dec(Case c, const Int& y, unsigned long alpha,
                                   unsigned long beta, unsigned long a,
                                   unsigned long b) {
  REQUIRE(classify_case(a, b, alpha, beta) == c);
  Decomposition dec;
  dec.n = 1;
  dec.params = {a, b};
  dec.alpha = alpha;
  dec.beta = beta;
  dec.x1 = y;
  dec.z1 = y;
  Int x = pow25(alpha, beta) * y;
  Int P = P_of(x, dec.params.d());
  dec.z2 = P / pow25(valuation(P, 2), valuation(P, 5));
  dec.Z = dec.z1 * dec.z2;
  dec.cse = c;
  dec.subcase = subcase_of(c, a, alpha);
  dec.delta_a = a >= alpha ? a - alpha : alpha - a;
  dec.delta_b = b >= beta ? b - beta : beta - b;
  return dec;
}

TEST_CASE("fermat instance identities across all four cases", "[equation]") {
  IntRng rng(602214076);
  for (int i = 0; i < 300; ++i) {
    // y coprime to 10 keeps the decomposition well-formed.
    Int y = rng.below(pow2(48)) * 10 + (rng.range(0, 1) ? 1 : 3);
    unsigned long lo = static_cast<unsigned long>(rng.range(0, 2));
    unsigned long hi = lo + 1 + static_cast<unsigned long>(rng.range(0, 2));
    struct Region {
      Case c;
      unsigned long a, b, alpha, beta;
    };
    const Region regions[] = {
        {Case::I, hi, hi, lo, lo},
        {Case::II, hi, lo, lo, hi},
        {Case::III, lo, hi, hi, lo},
        {Case::IV, lo, lo, hi, hi},
    };
    for (const Region& r : regions) {
      Decomposition dec = synthetic_dec(r.c, y, r.alpha, r.beta, r.a, r.b);
      auto [f1, f2] = fermat_instances(dec);  // throws if an identity fails
      CHECK(f1.holds(1));
      CHECK(f2.holds(1));
      CHECK(f1.cterm > 0);
      CHECK(f2.cterm > 0);
    }
  }
}

TEST_CASE("seven-coprimality", "[equation]") {
  CHECK(seven_coprime_exhaustive_check());

  Decomposition synthetic;
  synthetic.z1 = 7;
  synthetic.z2 = 1;
  CHECK(!check_seven_coprime(synthetic));
}

TEST_CASE("case names round-trip", "[equation]") {
  for (Case c : {Case::I, Case::II, Case::III, Case::IV})
    CHECK(case_from_string(to_string(c)) == c);
  CHECK(!case_from_string("V").has_value());
}
