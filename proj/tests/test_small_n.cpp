#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "pentasum/small_n.hpp"

using namespace pentasum;

namespace {
Rat R(const std::string& s) { return rat_from_string(s); }
}  // namespace

TEST_CASE("rational parsing", "[small_n]") {
  CHECK(R("-3/2") == Rat(-3, 2));
  CHECK(R("6/4") == Rat(3, 2));  // canonicalized
  CHECK(R("7") == Rat(7));
  CHECK_THROWS_AS(R("1/0"), error);
  CHECK_THROWS_AS(R("abc"), error);
}

// ---------------------------------------------------------------------------
// n = 2
// ---------------------------------------------------------------------------

TEST_CASE("n=2 congruence refutation, case I", "[small_n]") {
  const auto r = refute_n2(Case::I);
  CHECK(r.modulus == 5);
  CHECK(r.achievable == std::set<long>{1, 3});
  CHECK(r.required == std::set<long>{0});
  CHECK(r.witness_count == 20);
  CHECK(r.refuted());
}

TEST_CASE("n=2 congruence refutation, case II", "[small_n]") {
  const auto r = refute_n2(Case::II);
  CHECK(r.modulus == 5);
  CHECK(r.achievable == std::set<long>{1, 2});
  CHECK(r.required == std::set<long>{0});
  CHECK(r.refuted());
}

TEST_CASE("n=2 congruence refutation, case III", "[small_n]") {
  const auto r = refute_n2(Case::III);
  CHECK(r.modulus == 8);
  CHECK(r.achievable == std::set<long>{1});
  CHECK(r.required == std::set<long>{5});
  CHECK(r.refuted());
}

TEST_CASE("n=2 case IV needs the quartic", "[small_n]") {
  CHECK_THROWS_AS(refute_n2(Case::IV), error);
}

TEST_CASE("n=2 quartic reduction exponents", "[small_n]") {
  const auto q = n2_case_iv_quartic(2, 1);
  CHECK(q.k == 1);
  CHECK(q.l == 0);
  CHECK(q.lead == 3000);
  CHECK(q.mid == 200);
  CHECK(q.tail == 1);
  CHECK(q.T_of_x1(Int(9)) == 18);
  CHECK(q.value(Int(0)) == 1);
  CHECK(q.value(Int(1)) == 3201);
  CHECK_THROWS_AS(n2_case_iv_quartic(0, 1), error);
  CHECK_THROWS_AS(n2_case_iv_quartic(3, 0), error);
}

TEST_CASE("n=2 quartic reduction identity", "[small_n]") {
  for (long z1 : {1L, 3L, 7L, -5L, 11L})
    for (unsigned long da = 1; da <= 3; ++da)
      for (unsigned long db = 1; db <= 3; ++db)
        CHECK(n2_quartic_identity(Int(z1), da, db));
  IntRng rng(77001);
  for (int i = 0; i < 50; ++i)
    CHECK(n2_quartic_identity(rng.signed_nonzero(48), 1 + i % 4, 1 + i % 3));
}

TEST_CASE("n=2 cubic factorization and torsion pullback", "[small_n]") {
  for (const char* s : {"0", "1", "-200", "17/3", "-1003/7"}) {
    CHECK(n2_cubic_factorization_check(R(s)));
    CHECK(n2_quartic_torsion_pullback_check(R(s)));
  }
}

TEST_CASE("n=2 quartic-to-cubic map lands on the cubic", "[small_n]") {
  for (uint64_t ell : {11u, 13u, 101u}) {
    const Fp F(ell);
    CHECK(n2_quartic_map_check(F) > 0);
  }
}

TEST_CASE("n=2 quartic sweep finds only the trivial solution", "[small_n]") {
  const auto sols = n2_quartic_search(1000000);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].first == 0);
  CHECK(sols[0].second == 1);
}

// ---------------------------------------------------------------------------
// n = 3: curves, mapping, twist parameters
// ---------------------------------------------------------------------------

TEST_CASE("Mordell curve membership", "[small_n]") {
  CHECK(verify_point(R("1/4"), R("-3/2"), R("6")));
  CHECK_FALSE(verify_point(R("1/4"), R("-3/2"), R("7")));
  CHECK(verify_point(R("10"), R("330"), R("6000")));
  CHECK(verify_point(R("10"), R("330"), R("-6000")));
}

TEST_CASE("Mordell mapping round-trips", "[small_n]") {
  IntRng rng(424242);
  for (int i = 0; i < 100; ++i) {
    const Rat c(rng.signed_nonzero(20), rng.below(Int(1000)) + 1);
    const MordellCurve E(c);
    Rat Y(rng.signed_nonzero(40), rng.below(Int(100000)) + 1);
    Y.canonicalize();
    CHECK(E.Y_of_y1(E.y1_of_Y(Y)) == Y);
    Rat X1(rng.signed_nonzero(40), rng.below(Int(100000)) + 1);
    X1.canonicalize();
    CHECK(E.X1_of_x1(E.x1_of_X1(X1)) == X1);
  }
}

TEST_CASE("n=3 substitution identity", "[small_n]") {
  IntRng rng(57105);
  for (int i = 0; i < 200; ++i) {
    Rat c(rng.signed_nonzero(16), rng.below(Int(500)) + 1);
    Rat Y(rng.signed_nonzero(32), rng.below(Int(10000)) + 1);
    Rat X1(rng.signed_nonzero(32), rng.below(Int(10000)) + 1);
    c.canonicalize();
    Y.canonicalize();
    X1.canonicalize();
    CHECK(n3_substitution_identity(c, Y, X1));
  }
}

TEST_CASE("n=3 twist parameters per case", "[small_n]") {
  CHECK(n3_c_for(Case::I, 0, 0) == Rat(1));
  CHECK(n3_c_for(Case::I, 2, 2) == Rat(1, 100));
  CHECK(n3_c_for(Case::II, 1, 0) == Rat(5, 2));
  CHECK(n3_c_for(Case::III, 0, 2) == Rat(2, 25));
  CHECK(n3_c_for(Case::IV, 0, 0) == Rat(10));
  CHECK_THROWS_AS(n3_c_for(Case::I, 3, 0), error);

  // the twist lists agree with the bundled data, case by case
  for (Case cse : {Case::I, Case::II, Case::III, Case::IV}) {
    std::set<std::string> from_map;
    for (unsigned i = 0; i <= 2; ++i)
      for (unsigned j = 0; j <= 2; ++j)
        from_map.insert(rat_to_string(n3_c_for(cse, i, j)));
    std::set<std::string> bundled;
    for (const auto& [c, rank0] : n3_c_values(cse))
      bundled.insert(rat_to_string(c));
    CHECK(from_map == bundled);
  }
}

TEST_CASE("n=3 twist list sizes and rank tags", "[small_n]") {
  const auto v1 = n3_c_values(Case::I);
  REQUIRE(v1.size() == 9);
  std::set<std::string> rank0_I;
  for (const auto& [c, r0] : v1)
    if (r0) rank0_I.insert(rat_to_string(c));
  CHECK(rank0_I ==
        std::set<std::string>{"1", "1/2", "1/5", "1/10", "1/50", "1/20"});

  const auto v2 = n3_c_values(Case::II);
  REQUIRE(v2.size() == 3);
  for (const auto& [c, r0] : v2) CHECK(r0 == (c == Rat(5, 2)));

  const auto v3 = n3_c_values(Case::III);
  REQUIRE(v3.size() == 3);
  for (const auto& [c, r0] : v3) CHECK(r0 == (c == Rat(2, 5)));

  const auto v4 = n3_c_values(Case::IV);
  REQUIRE(v4.size() == 1);
  CHECK(v4[0].first == Rat(10));
  CHECK_FALSE(v4[0].second);
}

TEST_CASE("bundled data matches the file on disk", "[small_n]") {
  std::ifstream in(PENTASUM_DATA_DIR "/paper_points.txt");
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto from_file = parse_point_lists(buf.str());
  const auto& bundled = bundled_point_lists();
  REQUIRE(from_file.size() == bundled.size());
  for (const auto& [cse, entries] : bundled) {
    REQUIRE(from_file.count(cse) == 1);
    const auto& other = from_file.at(cse);
    REQUIRE(other.size() == entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
      CHECK(other[i].c == entries[i].c);
      CHECK(other[i].rank0 == entries[i].rank0);
      CHECK(other[i].points == entries[i].points);
    }
  }
}

TEST_CASE("point list parser rejects corrupt input", "[small_n]") {
  CHECK_THROWS_AS(parse_point_lists("p 1 2\n"), error);
  CHECK_THROWS_AS(parse_point_lists("case I src tag\nc 1 bogus\n"), error);
  CHECK_THROWS_AS(parse_point_lists("case I src tag\nc 1 points 1\np 1 2\n"),
                  error);  // (1,2) not on y^2 = x^3 + 630
  CHECK_THROWS_AS(parse_point_lists("case I src tag\nc 1 points 1\n"), error);
}

// ---------------------------------------------------------------------------
// n = 3: sixth-power filter and audit
// ---------------------------------------------------------------------------

TEST_CASE("sixth-power filter on fixed values", "[small_n]") {
  CHECK_FALSE(sixth_power_filter(R("128/9")));  // 2^7 / 3^2
  CHECK(sixth_power_filter(R("64")));
  CHECK_FALSE(sixth_power_filter(R("0")));
  CHECK_FALSE(sixth_power_filter(R("-64")));
  CHECK(sixth_power_filter(R("1")));
  CHECK(sixth_power_filter(R("1/2")));          // 2^-1 * 1^6
  CHECK(sixth_power_filter(R("729/50")));       // 3^6 * 2^-1 5^-2
  CHECK_FALSE(sixth_power_filter(R("190/3")));  // denominator 3 survives
  CHECK_FALSE(sixth_power_filter(R("3")));
}

TEST_CASE("sixth-power filter accepts the admissible shape", "[small_n]") {
  IntRng rng(90125);
  for (int i = 0; i < 200; ++i) {
    Int z1 = rng.below(Int(100000)) + 1;
    while (z1 % 2 == 0 || z1 % 5 == 0 || z1 % 3 == 0) ++z1;
    const long s = static_cast<long>(rng.below(Int(13)).get_si()) - 6;
    const long t = static_cast<long>(rng.below(Int(13)).get_si()) - 6;
    Rat v(pow_ui(z1, 6));
    Rat unit(1);
    if (s >= 0) unit *= Rat(pow2(s)); else unit /= Rat(pow2(-s));
    if (t >= 0) unit *= Rat(pow5(t)); else unit /= Rat(pow5(-t));
    CHECK(sixth_power_filter(v * unit));
    CHECK_FALSE(sixth_power_filter(-(v * unit)));
    CHECK_FALSE(sixth_power_filter(v * unit * 3));
  }
}

TEST_CASE("n=3 audit, case I totals", "[small_n]") {
  const auto rep = n3_audit(Case::I);
  CHECK(rep.points_checked == 15);
  CHECK(rep.y_values_checked == 30);
  CHECK(rep.all_rejected);
  REQUIRE(rep.curves.size() == 9);
  // the c = 1/4 twist: five pairs, ten Y values, everything rejected
  for (const auto& cu : rep.curves) {
    if (cu.c != Rat(1, 4)) continue;
    REQUIRE(cu.points.size() == 5);
    CHECK(cu.points[0].x1 == R("-3/2"));
    CHECK(cu.points[0].Y_plus == R("-2/3"));
    CHECK(cu.points[0].Y_minus == R("-6"));
    for (const auto& pa : cu.points) {
      CHECK(pa.plus_rejected);
      CHECK(pa.minus_rejected);
    }
  }
}

TEST_CASE("n=3 audit, remaining cases", "[small_n]") {
  CHECK(n3_audit(Case::II).points_checked == 8);
  CHECK(n3_audit(Case::III).points_checked == 8);
  const auto rep = n3_audit(Case::IV);
  CHECK(rep.points_checked == 4);
  CHECK(rep.all_rejected);
  // the one near-miss: (330, -6000) maps to integral (X1, Y) = (11, -70)
  const MordellCurve E(Rat(10));
  CHECK(E.X1_of_x1(Rat(330)) == Rat(11));
  CHECK(E.Y_of_y1(Rat(-6000)) == Rat(-70));
  CHECK_FALSE(sixth_power_filter(Rat(-70)));
  // the +y side is not even integral
  CHECK(E.Y_of_y1(Rat(6000)) == Rat(190, 3));
  CHECK_FALSE(sixth_power_filter(Rat(190, 3)));
}

TEST_CASE("n=3 audit rejects a surviving point", "[small_n]") {
  // synthetic entry whose Y value passes the filter: Y = 1 needs
  // y1 = 3c*13; pick c = 1 and a fake curve equation match via k override:
  // instead build a real point with Y divisible into the admissible shape.
  // Use c = 1: y1 = 39 would need x1^3 = 39^2 - 630 = 891, not a cube.
  // So fabricate the entry by putting an off-curve point: audit must throw.
  PointListEntry e;
  e.c = Rat(1);
  e.points.emplace_back(Rat(1), Rat(2));
  CHECK_THROWS_AS(n3_audit(Case::I, {e}), error);
}

// ---------------------------------------------------------------------------
// n = 3: box search cross-checks
// ---------------------------------------------------------------------------

TEST_CASE("box search agrees with bundled lists on small boxes", "[small_n]") {
  const auto& lists = bundled_point_lists();
  for (Case cse : {Case::I, Case::II, Case::III, Case::IV}) {
    for (const auto& e : lists.at(cse)) {
      if (e.rank0) continue;
      const auto r = box_check(cse, e, 1000, 8);
      INFO("case " << to_string(cse) << ", c = " << rat_to_string(e.c));
      CHECK(r.consistent);
    }
  }
}

TEST_CASE("box search is empty on rank-zero twists", "[small_n]") {
  for (const Rat& c : {Rat(1), Rat(1, 2), Rat(5, 2), Rat(2, 5)}) {
    const auto found = box_search(c, {2, 5}, 1000, 4);
    INFO("c = " << rat_to_string(c));
    CHECK(found.empty());
  }
}

TEST_CASE("box search finds a deep-denominator point", "[small_n]") {
  // 849/256 needs the full 2^8 denominator range
  const auto found = box_search(Rat(1, 4), {2, 5}, 900, 8);
  bool has = false;
  for (const auto& x : found)
    if (x == Rat(849, 256)) has = true;
  CHECK(has);
}

// ---------------------------------------------------------------------------
// n = 5
// ---------------------------------------------------------------------------

TEST_CASE("n=5 family on fixed parameters", "[small_n]") {
  const auto f10 = n5_family(EquationParams{1, 0});
  REQUIRE(f10.size() == 2);
  CHECK(f10[0] == std::pair<Int, Int>{1, 3});
  CHECK(f10[1] == std::pair<Int, Int>{-1, -3});

  CHECK(n5_family(EquationParams{0, 3}).empty());

  const auto f31 = n5_family(EquationParams{3, 1});
  REQUIRE(f31.size() == 2);
  CHECK(f31[0] == std::pair<Int, Int>{20, 60});
  CHECK(lhs(Int(20), Int(40)) == pow_ui(Int(60), 5));
}

TEST_CASE("n=5 family satisfies the equation for many parameters", "[small_n]") {
  for (unsigned long a = 1; a <= 6; ++a)
    for (unsigned long b = 0; b <= 4; ++b) {
      const EquationParams p{a, b};
      const auto fam = n5_family(p);
      REQUIRE(fam.size() == 2);
      for (const auto& [x, z] : fam)
        CHECK(lhs(x, p.d()) == pow_ui(z, 5));
    }
}
