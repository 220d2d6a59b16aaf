#pragma once

// Storage and validation of weight-2 newform eigenvalue data.
//
// A NewformRecord describes one Galois conjugacy class of newforms on
// Gamma_0(level): for each stored prime ell it holds the characteristic
// polynomial of the Hecke eigenvalue a_ell over that class (a monic
// integer polynomial whose degree equals the size of the class).  For a
// class with rational eigenvalues the polynomial is x - a_ell.
//
// The on-disk format is line oriented:
//
//     # comment
//     form <level> <label> <degree>
//     <ell> : c0 c1 ... c_{d-1} 1        (coefficients low-to-high)
//     ...
//     end
//
// Ingestion enforces structural integrity (monic, degree match, no
// duplicate labels) and the Hecke eigenvalue bound: every root of every
// charpoly must have absolute value at most 2*sqrt(ell).  Degrees 1 and 2
// are checked exactly; higher degrees via the elementary-symmetric
// bounds |c_{d-k}| <= C(d,k) (2 sqrt(ell))^k.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pentasum/arith.hpp"

namespace pentasum {

struct NewformRecord {
  long level = 0;
  std::string label;
  int degree = 0;
  // ell -> monic integer charpoly of a_ell, coefficients low-to-high,
  // size degree + 1, trailing coefficient 1.
  std::map<long, std::vector<Int>> charpolys;

  bool operator==(const NewformRecord& o) const {
    return level == o.level && label == o.label && degree == o.degree &&
           charpolys == o.charpolys;
  }
};

// One row of a space summary: `forms` conjugate newforms of degree
// `degree`, i.e. forms/degree Galois classes contributing `forms` to the
// dimension of the new subspace.
struct DegreeCount {
  int degree = 0;
  long forms = 0;
  bool operator==(const DegreeCount& o) const {
    return degree == o.degree && forms == o.forms;
  }
};

struct SpaceSummary {
  long level = 0;
  long dimension = 0;
  long num_classes = 0;
  std::vector<DegreeCount> histogram;  // ascending by degree
};

// ---------------------------------------------------------------------------
// published dimensions/class counts for the fourteen levels of interest
// ---------------------------------------------------------------------------

inline const std::vector<SpaceSummary>& space_table() {
  static const std::vector<SpaceSummary> table = {
      {70, 1, 1, {{1, 1}}},
      {210, 5, 5, {{1, 5}}},
      {350, 10, 8, {{1, 6}, {2, 4}}},
      {840, 12, 11, {{1, 10}, {2, 2}}},
      {1050, 18, 18, {{1, 18}}},
      {1120, 24, 20, {{1, 16}, {2, 8}}},
      {4200, 58, 43, {{1, 32}, {2, 14}, {3, 12}}},
      {5600, 114, 52, {{1, 22}, {2, 32}, {3, 12}, {4, 16}, {5, 20}, {6, 12}}},
      {8960, 192, 64, {{1, 20}, {2, 24}, {3, 36}, {4, 16}, {6, 96}}},
      {13440, 192, 112, {{1, 64}, {2, 56}, {3, 36}, {4, 16}, {5, 20}}},
      {26880, 384, 128,
       {{1, 48}, {2, 32}, {3, 48}, {4, 112}, {6, 48}, {8, 96}}},
      {44800, 912, 196,
       {{1, 52}, {2, 64}, {3, 36}, {4, 88}, {5, 40}, {6, 168},
        {8, 96}, {9, 72}, {12, 192}, {16, 32}, {18, 72}}},
      {67200, 912, 356,
       {{1, 176}, {2, 128}, {3, 36}, {4, 144}, {5, 140}, {6, 48},
        {7, 168}, {9, 72}}},
      {134400, 1824, 396,
       {{1, 124}, {2, 120}, {3, 60}, {4, 208}, {5, 40}, {6, 240},
        {8, 224}, {9, 72}, {10, 80}, {11, 88}, {12, 192}, {13, 104},
        {16, 192}, {20, 80}}},
  };
  return table;
}

inline std::optional<SpaceSummary> space_expectation(long level) {
  for (const auto& s : space_table())
    if (s.level == level) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// eigenvalue bound
// ---------------------------------------------------------------------------

// True when every (real or complex) root of the monic polynomial lies in
// |x| <= 2 sqrt(ell).  Exact for degrees 1 and 2; for higher degrees a
// necessary coefficient test (elementary symmetric functions of d roots
// of modulus <= R are bounded by C(d,k) R^k).
inline bool roots_within_hecke_bound(const std::vector<Int>& coeffs,
                                     long ell) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  const Int L(ell);
  if (d == 1) {
    return sqr(coeffs[0]) <= 4 * L;
  }
  if (d == 2) {
    const Int& c = coeffs[0];
    const Int& b = coeffs[1];
    Int disc = sqr(b) - 4 * c;
    if (disc >= 0) {
      // real roots: p(2 sqrt l) >= 0, p(-2 sqrt l) >= 0, |b| <= 4 sqrt l
      if (sqr(b) > 16 * L) return false;
      Int s = 4 * L + c;
      return s >= 0 && sqr(s) >= 4 * sqr(b) * L;
    }
    // complex pair: |root|^2 = c
    return c <= 4 * L;
  }
  // binomial coefficient bound, exact squares: c_{d-k}^2 <= C(d,k)^2 4^k l^k
  Int binom = 1;
  for (int k = 1; k <= d; ++k) {
    binom = binom * (d - k + 1) / k;
    Int bound = sqr(binom) * pow_ui(4 * L, static_cast<unsigned long>(k));
    if (sqr(coeffs[d - k]) > bound) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// parsing / serialization
// ---------------------------------------------------------------------------

namespace detail {
inline std::string nf_err(const std::string& origin, long line,
                          const std::string& what) {
  std::ostringstream os;
  os << "newform data (" << origin << ":" << line << "): " << what;
  return os.str();
}
}  // namespace detail

// Parse eigenvalue records from a stream.  `origin` names the source in
// error messages.  Throws pentasum::error on any structural violation.
inline std::vector<NewformRecord> parse_newform_text(
    std::istream& in, const std::string& origin) {
  std::vector<NewformRecord> out;
  std::optional<NewformRecord> cur;
  std::string line;
  long lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw error(detail::nf_err(origin, lineno, what));
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank
    if (tok == "form") {
      if (cur) fail("missing 'end' before next 'form'");
      NewformRecord r;
      if (!(ls >> r.level >> r.label >> r.degree))
        fail("expected 'form <level> <label> <degree>'");
      if (r.level < 1) fail("level must be positive");
      if (r.degree < 1) fail("degree must be at least 1");
      std::string extra;
      if (ls >> extra) fail("trailing token '" + extra + "' on form line");
      for (const auto& prev : out)
        if (prev.level == r.level && prev.label == r.label)
          fail("duplicate record " + std::to_string(r.level) + "/" + r.label);
      cur = r;
    } else if (tok == "end") {
      if (!cur) fail("'end' without open record");
      if (cur->charpolys.empty()) fail("record has no eigenvalue lines");
      out.push_back(*cur);
      cur.reset();
    } else {
      if (!cur) fail("eigenvalue line outside of a record");
      long ell = 0;
      try {
        size_t used = 0;
        ell = std::stol(tok, &used);
        if (used != tok.size()) fail("bad prime '" + tok + "'");
      } catch (const std::exception&) {
        fail("bad prime '" + tok + "'");
      }
      if (ell < 2 || !is_prime(Int(ell)))
        fail("'" + tok + "' is not a prime");
      std::string colon;
      if (!(ls >> colon) || colon != ":") fail("expected ':' after prime");
      std::vector<Int> coeffs;
      std::string num;
      while (ls >> num) {
        try {
          coeffs.emplace_back(num);
        } catch (const std::exception&) {
          fail("bad integer coefficient '" + num + "'");
        }
      }
      if (coeffs.size() != static_cast<size_t>(cur->degree) + 1)
        fail("degree mismatch at ell=" + std::to_string(ell) + ": got " +
             std::to_string(coeffs.size() ? coeffs.size() - 1 : 0) +
             " coefficients below the leading one, record declares degree " +
             std::to_string(cur->degree));
      if (coeffs.back() != 1)
        fail("charpoly at ell=" + std::to_string(ell) + " is not monic");
      if (!roots_within_hecke_bound(coeffs, ell)) {
        std::ostringstream os;
        os << "eigenvalue bound violated at ell=" << ell << " for "
           << cur->label << ": a root of the charpoly exceeds 2*sqrt(" << ell
           << ")";
        fail(os.str());
      }
      if (cur->charpolys.count(ell))
        fail("duplicate prime " + std::to_string(ell) + " in record");
      cur->charpolys[ell] = std::move(coeffs);
    }
  }
  if (cur) fail("unterminated record (missing 'end')");
  return out;
}

inline std::vector<NewformRecord> ingest_local(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("newform data: cannot open " + path);
  return parse_newform_text(in, path);
}

inline void write_newform_text(std::ostream& os,
                               const std::vector<NewformRecord>& records) {
  for (const auto& r : records) {
    os << "form " << r.level << " " << r.label << " " << r.degree << "\n";
    for (const auto& [ell, coeffs] : r.charpolys) {
      os << ell << " :";
      for (const auto& c : coeffs) os << " " << c;
      os << "\n";
    }
    os << "end\n";
  }
}

// Convenience constructor for a class with rational eigenvalues.
inline NewformRecord make_rational_record(long level, const std::string& label,
                                          const std::map<long, Int>& aell) {
  NewformRecord r;
  r.level = level;
  r.label = label;
  r.degree = 1;
  for (const auto& [ell, a] : aell) {
    if (!roots_within_hecke_bound({a, Int(1)}, ell) ||
        !roots_within_hecke_bound({-a, Int(1)}, ell))
      throw error("make_rational_record: |a_" + std::to_string(ell) +
                  "| exceeds the eigenvalue bound");
    r.charpolys[ell] = {-a, Int(1)};
  }
  return r;
}

// ---------------------------------------------------------------------------
// space validation against a published summary
// ---------------------------------------------------------------------------

struct ValidationReport {
  long level = 0;
  bool pass = true;
  std::vector<std::string> discrepancies;
};

inline ValidationReport validate_space(const std::vector<NewformRecord>& recs,
                                       const SpaceSummary& expected) {
  ValidationReport rep;
  rep.level = expected.level;
  auto flag = [&](const std::string& s) {
    rep.pass = false;
    rep.discrepancies.push_back(s);
  };
  long dim = 0;
  std::map<int, long> classes_by_degree;
  for (const auto& r : recs) {
    if (r.level != expected.level) {
      flag("record " + r.label + " has level " + std::to_string(r.level) +
           " != " + std::to_string(expected.level));
      continue;
    }
    dim += r.degree;
    ++classes_by_degree[r.degree];
  }
  if (static_cast<long>(recs.size()) != expected.num_classes)
    flag("class count " + std::to_string(recs.size()) + " != " +
         std::to_string(expected.num_classes));
  if (dim != expected.dimension)
    flag("dimension " + std::to_string(dim) + " != " +
         std::to_string(expected.dimension));
  std::map<int, long> expected_classes;
  for (const auto& h : expected.histogram) {
    if (h.forms % h.degree != 0) {
      flag("summary histogram entry (" + std::to_string(h.degree) + "," +
           std::to_string(h.forms) + ") is not divisible by the degree");
      continue;
    }
    expected_classes[h.degree] = h.forms / h.degree;
  }
  for (const auto& [d, n] : expected_classes) {
    long got = classes_by_degree.count(d) ? classes_by_degree[d] : 0;
    if (got != n)
      flag("degree " + std::to_string(d) + ": " + std::to_string(got) +
           " classes != " + std::to_string(n));
  }
  for (const auto& [d, n] : classes_by_degree)
    if (!expected_classes.count(d))
      flag("degree " + std::to_string(d) + ": " + std::to_string(n) +
           " classes != 0");
  return rep;
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

// |Norm(t - a_ell(f))| = |charpoly_ell(t)|.
inline Int norm_difference(const NewformRecord& r, long ell, const Int& t) {
  auto it = r.charpolys.find(ell);
  if (it == r.charpolys.end()) {
    std::ostringstream os;
    os << "record " << r.label << " has no eigenvalue data at ell=" << ell
       << " (available:";
    for (const auto& [p, _] : r.charpolys) os << " " << p;
    os << ")";
    throw error(os.str());
  }
  return abs(eval_monic_poly(it->second, t));
}

// |Norm((ell+1)^2 - a_ell(f)^2)| = |P(ell+1) * P(-(ell+1))|, the quantity
// compared against when the candidate curve has multiplicative reduction
// at ell (where a_ell(curve) = +-(ell+1) formally).
inline Int norm_multiplicative(const NewformRecord& r, long ell) {
  Int q(ell + 1);
  return norm_difference(r, ell, q) * norm_difference(r, ell, -q);
}

}  // namespace pentasum
