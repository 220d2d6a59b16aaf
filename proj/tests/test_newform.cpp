// Tests for the newform eigenvalue store: parsing, integrity checks,
// space validation, and norm computations.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "pentasum/curvefile.hpp"
#include "pentasum/newform.hpp"

using namespace pentasum;

namespace {
std::string data_path(const std::string& name) {
  return std::string(PENTASUM_DATA_DIR) + "/newforms/" + name;
}

std::vector<NewformRecord> parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_newform_text(in, "inline");
}
}  // namespace

TEST_CASE("space table is internally consistent", "[newform]") {
  const auto& table = space_table();
  REQUIRE(table.size() == 14);
  long prev_level = 0;
  for (const auto& s : table) {
    CHECK(s.level > prev_level);
    prev_level = s.level;
    long dim = 0, classes = 0;
    int prev_deg = 0;
    for (const auto& h : s.histogram) {
      CHECK(h.degree > prev_deg);
      prev_deg = h.degree;
      REQUIRE(h.forms % h.degree == 0);
      dim += h.forms;
      classes += h.forms / h.degree;
    }
    CHECK(dim == s.dimension);
    CHECK(classes == s.num_classes);
  }
  CHECK(space_expectation(70)->dimension == 1);
  CHECK(space_expectation(210)->num_classes == 5);
  CHECK(space_expectation(840)->dimension == 12);
  CHECK(space_expectation(840)->num_classes == 11);
  CHECK(space_expectation(44800)->dimension == 912);
  CHECK(space_expectation(134400)->num_classes == 396);
  CHECK_FALSE(space_expectation(71).has_value());
}

TEST_CASE("eigenvalue bound: degree 1 and 2 exact, higher necessary",
          "[newform]") {
  // degree 1 at ell = 11: |a| <= 2 sqrt(11) ~ 6.63
  CHECK(roots_within_hecke_bound({Int(-6), Int(1)}, 11));
  CHECK(roots_within_hecke_bound({Int(6), Int(1)}, 11));
  CHECK_FALSE(roots_within_hecke_bound({Int(-7), Int(1)}, 11));
  CHECK_FALSE(roots_within_hecke_bound({Int(-9), Int(1)}, 11));
  // degree 2, real roots: x^2 - 32 has roots +-4 sqrt(2) ~ +-5.66
  CHECK(roots_within_hecke_bound({Int(-32), Int(0), Int(1)}, 11));
  // x^2 - 50 has roots +-7.07 > 2 sqrt(11)
  CHECK_FALSE(roots_within_hecke_bound({Int(-50), Int(0), Int(1)}, 11));
  // complex pair: x^2 + c, |root| = sqrt(c); bound is 4*ell
  CHECK(roots_within_hecke_bound({Int(44), Int(0), Int(1)}, 11));
  CHECK_FALSE(roots_within_hecke_bound({Int(45), Int(0), Int(1)}, 11));
  // double rational root: (x-2)^2 = x^2 - 4x + 4
  CHECK(roots_within_hecke_bound({Int(4), Int(-4), Int(1)}, 11));
  // degree 3 coefficient bound
  CHECK(roots_within_hecke_bound({Int(0), Int(-40), Int(0), Int(1)}, 11));
  CHECK_FALSE(roots_within_hecke_bound(
      {Int(1000000), Int(0), Int(0), Int(1)}, 11));
}

TEST_CASE("parse: single rational record", "[newform]") {
  auto recs = parse_str(
      "# comment\n"
      "form 70 70.2.a.a 1\n"
      "11 : -4 1\n"
      "13 : 6 1   # inline comment\n"
      "end\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].level == 70);
  CHECK(recs[0].label == "70.2.a.a");
  CHECK(recs[0].degree == 1);
  REQUIRE(recs[0].charpolys.size() == 2);
  CHECK(recs[0].charpolys.at(11) == std::vector<Int>{Int(-4), Int(1)});
  CHECK(recs[0].charpolys.at(13) == std::vector<Int>{Int(6), Int(1)});
}

TEST_CASE("parse: structural errors are rejected", "[newform]") {
  // coefficient count disagrees with the declared degree
  CHECK_THROWS_WITH(parse_str("form 70 x 2\n11 : -4 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("degree mismatch"));
  // eigenvalue bound: x - 9 at ell = 11 (|9| > 2 sqrt(11))
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n11 : -9 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("eigenvalue bound"));
  // duplicate (level, label)
  CHECK_THROWS_WITH(
      parse_str("form 70 x 1\n11 : -4 1\nend\n"
                "form 70 x 1\n11 : -4 1\nend\n"),
      Catch::Matchers::ContainsSubstring("duplicate record"));
  // non-monic
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n11 : -4 2\nend\n"),
                    Catch::Matchers::ContainsSubstring("not monic"));
  // composite "prime"
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n12 : -4 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("not a prime"));
  // bad integer
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n11 : -4x 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("bad"));
  // missing end
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n11 : -4 1\n"),
                    Catch::Matchers::ContainsSubstring("unterminated"));
  // end without form
  CHECK_THROWS_WITH(parse_str("end\n"),
                    Catch::Matchers::ContainsSubstring("without open record"));
  // eigenvalue line before any form
  CHECK_THROWS_WITH(parse_str("11 : -4 1\n"),
                    Catch::Matchers::ContainsSubstring("outside"));
  // duplicate prime within a record
  CHECK_THROWS_WITH(parse_str("form 70 x 1\n11 : -4 1\n11 : -4 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("duplicate prime"));
  // record with no eigenvalue data
  CHECK_THROWS_WITH(parse_str("form 70 x 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("no eigenvalue"));
  // empty degree
  CHECK_THROWS_WITH(parse_str("form 70 x 0\n11 : 1\nend\n"),
                    Catch::Matchers::ContainsSubstring("degree"));
}

TEST_CASE("ingest bundled data: counts and spot values", "[newform]") {
  auto r70 = ingest_local(data_path("level_70.nf"));
  REQUIRE(r70.size() == 1);
  CHECK(r70[0].degree == 1);
  CHECK(r70[0].charpolys.at(11) == std::vector<Int>{Int(-4), Int(1)});

  auto r210 = ingest_local(data_path("level_210.nf"));
  REQUIRE(r210.size() == 5);
  for (const auto& r : r210) CHECK(r.degree == 1);
  CHECK(r210[0].label == "210.2.a.a");
  CHECK(r210[0].charpolys.at(11) == std::vector<Int>{Int(4), Int(1)});
  CHECK(r210[0].charpolys.at(29) == std::vector<Int>{Int(-10), Int(1)});

  auto r840 = ingest_local(data_path("level_840.nf"));
  REQUIRE(r840.size() == 11);
  int deg2 = 0;
  for (const auto& r : r840) deg2 += (r.degree == 2);
  CHECK(deg2 == 1);
  const auto& quad = r840.back();
  CHECK(quad.label == "840.2.a.k");
  CHECK(quad.degree == 2);
  CHECK(quad.charpolys.at(11) ==
        std::vector<Int>{Int(-32), Int(0), Int(1)});
  CHECK(quad.charpolys.at(13) == std::vector<Int>{Int(4), Int(-4), Int(1)});
  CHECK(quad.charpolys.at(89) ==
        std::vector<Int>{Int(196), Int(28), Int(1)});

  auto r1050 = ingest_local(data_path("level_1050.nf"));
  REQUIRE(r1050.size() == 18);
  for (const auto& r : r1050) CHECK(r.degree == 1);

  // all records store the same prime set 11..97
  for (const auto& r : r840) {
    CHECK(r.charpolys.size() == 21);
    CHECK(r.charpolys.begin()->first == 11);
    CHECK(r.charpolys.rbegin()->first == 97);
  }
}

TEST_CASE("validate_space: bundled data matches the published table",
          "[newform]") {
  for (long level : {70L, 210L, 840L, 1050L}) {
    auto recs =
        ingest_local(data_path("level_" + std::to_string(level) + ".nf"));
    auto rep = validate_space(recs, *space_expectation(level));
    INFO("level " << level);
    for (const auto& d : rep.discrepancies) INFO(d);
    CHECK(rep.pass);
    CHECK(rep.discrepancies.empty());
  }
}

TEST_CASE("validate_space: discrepancies are reported, not fatal",
          "[newform]") {
  auto recs = ingest_local(data_path("level_840.nf"));
  recs.pop_back();  // drop the quadratic class
  auto rep = validate_space(recs, *space_expectation(840));
  CHECK_FALSE(rep.pass);
  bool saw_count = false, saw_dim = false, saw_deg = false;
  for (const auto& d : rep.discrepancies) {
    if (d.find("class count 10 != 11") != std::string::npos) saw_count = true;
    if (d.find("dimension 10 != 12") != std::string::npos) saw_dim = true;
    if (d.find("degree 2: 0 classes != 1") != std::string::npos)
      saw_deg = true;
  }
  CHECK(saw_count);
  CHECK(saw_dim);
  CHECK(saw_deg);

  // records at the wrong level are flagged
  auto r70 = ingest_local(data_path("level_70.nf"));
  auto rep2 = validate_space(r70, *space_expectation(210));
  CHECK_FALSE(rep2.pass);
}

TEST_CASE("norm_difference and the multiplicative norm", "[newform]") {
  NewformRecord rec = make_rational_record(
      70, "t", {{11, Int(2)}, {13, Int(-3)}});
  CHECK(norm_difference(rec, 11, Int(5)) == 3);
  CHECK(norm_difference(rec, 11, Int(2)) == 0);
  CHECK(norm_difference(rec, 13, Int(0)) == 3);
  // multiplicative comparison at ell = 11 with a_11(f) = 2:
  // |(12 - 2)(-12 - 2)| = 140
  CHECK(norm_multiplicative(rec, 11) == 140);
  // degree 2: x^2 - 2 evaluated at t = 0 has |norm| 2
  NewformRecord quad;
  quad.level = 840;
  quad.label = "q";
  quad.degree = 2;
  quad.charpolys[11] = {Int(-2), Int(0), Int(1)};
  CHECK(norm_difference(quad, 11, Int(0)) == 2);
  CHECK(norm_difference(quad, 11, Int(3)) == 7);
  // missing prime: diagnostic lists what is available
  CHECK_THROWS_WITH(norm_difference(rec, 17, Int(0)),
                    Catch::Matchers::ContainsSubstring("no eigenvalue data") &&
                        Catch::Matchers::ContainsSubstring("11 13"));
}

TEST_CASE("make_rational_record enforces the bound", "[newform]") {
  CHECK_THROWS_WITH(make_rational_record(70, "t", {{11, Int(7)}}),
                    Catch::Matchers::ContainsSubstring("bound"));
  auto r = make_rational_record(70, "t", {{11, Int(-6)}});
  CHECK(r.charpolys.at(11) == std::vector<Int>{Int(6), Int(1)});
}

TEST_CASE("serialization round-trip preserves records exactly", "[newform]") {
  for (long level : {70L, 840L}) {
    auto recs =
        ingest_local(data_path("level_" + std::to_string(level) + ".nf"));
    std::ostringstream os;
    write_newform_text(os, recs);
    auto again = parse_str(os.str());
    REQUIRE(again.size() == recs.size());
    CHECK(again == recs);
  }
}

TEST_CASE("degree-2 class: floating-point root cross-check", "[newform]") {
  auto r840 = ingest_local(data_path("level_840.nf"));
  const auto& quad = r840.back();
  REQUIRE(quad.degree == 2);
  for (const auto& [ell, cp] : quad.charpolys) {
    const double c = cp[0].get_d(), b = cp[1].get_d();
    const double disc = b * b - 4 * c;
    REQUIRE(disc >= 0.0);  // totally real coefficient field
    const double r1 = (-b + std::sqrt(disc)) / 2;
    const double r2 = (-b - std::sqrt(disc)) / 2;
    const double bound = 2 * std::sqrt(static_cast<double>(ell));
    CHECK(std::abs(r1) <= bound + 1e-9);
    CHECK(std::abs(r2) <= bound + 1e-9);
    for (long t : {-5L, 0L, 3L, 12L}) {
      const double direct =
          std::abs((t - r1) * (t - r2));
      const double exact = norm_difference(quad, ell, Int(t)).get_d();
      CHECK(std::abs(direct - exact) <= 1e-6 * (1.0 + exact));
    }
  }
}

TEST_CASE("curve models: bundled file parses and matches levels",
          "[newform]") {
  auto models = load_curve_models(data_path("curves.txt"));
  CHECK(models.size() == 31);
  int at210 = 0;
  for (const auto& m : models)
    if (m.level == 210) ++at210;
  CHECK(at210 == 5);
}

TEST_CASE("stored eigenvalues equal recomputed curve traces", "[newform]") {
  // the planted-form identity: a record built from a representative
  // curve's point counts agrees with the bundled eigenvalue data
  auto models = load_curve_models(data_path("curves.txt"));
  auto primes = primes_in(11, 97);
  std::map<std::string, NewformRecord> bundled;
  for (long level : {70L, 210L, 840L, 1050L})
    for (auto& r :
         ingest_local(data_path("level_" + std::to_string(level) + ".nf")))
      bundled[r.label] = r;
  int checked = 0;
  for (const auto& m : models) {
    if (m.level != 210 && m.level != 70) continue;  // spot-check six models
    auto rec = record_from_curve(m, primes);
    REQUIRE(bundled.count(m.label) == 1);
    const auto& b = bundled.at(m.label);
    CHECK(rec.charpolys == b.charpolys);
    for (long ell : primes)
      CHECK(norm_difference(b, ell,
                            Int(curve_trace(m, static_cast<uint64_t>(ell)))) ==
            0);
    ++checked;
  }
  CHECK(checked == 6);
}
