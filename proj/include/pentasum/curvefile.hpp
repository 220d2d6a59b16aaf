#pragma once

// Representative elliptic curves for rational newform classes.
//
// The bundled file `curves.txt` lists one integral Weierstrass model per
// rational class discovered by the data generator:
//
//     # comment
//     curve <level> <label> <a1> <a2> <a3> <a4> <a6>
//
// These models exist so that the stored Hecke eigenvalues can be
// cross-checked against independently recomputed traces of Frobenius.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pentasum/arith.hpp"
#include "pentasum/frey.hpp"
#include "pentasum/newform.hpp"

namespace pentasum {

struct CurveModel {
  long level = 0;
  std::string label;
  Int a1, a2, a3, a4, a6;
};

inline std::vector<CurveModel> load_curve_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("curve models: cannot open " + path);
  std::vector<CurveModel> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok != "curve")
      throw error("curve models (" + path + ":" + std::to_string(lineno) +
                  "): expected 'curve', got '" + tok + "'");
    CurveModel m;
    std::string c1, c2, c3, c4, c6;
    if (!(ls >> m.level >> m.label >> c1 >> c2 >> c3 >> c4 >> c6))
      throw error("curve models (" + path + ":" + std::to_string(lineno) +
                  "): malformed curve line");
    try {
      m.a1 = Int(c1);
      m.a2 = Int(c2);
      m.a3 = Int(c3);
      m.a4 = Int(c4);
      m.a6 = Int(c6);
    } catch (const std::exception&) {
      throw error("curve models (" + path + ":" + std::to_string(lineno) +
                  "): bad coefficient");
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Trace of Frobenius at a good prime ell >= 11 of the given model.
inline long curve_trace(const CurveModel& m, uint64_t ell) {
  Fp F(ell);
  std::array<uint64_t, 5> a = {F.reduce(m.a1), F.reduce(m.a2), F.reduce(m.a3),
                               F.reduce(m.a4), F.reduce(m.a6)};
  ReducedCurve rc = classify_reduced(F, a);
  if (rc.type != ReductionType::good)
    throw error("curve_trace: " + m.label + " has bad reduction at ell=" +
                std::to_string(ell));
  return trace_of_frobenius(F, rc);
}

// Rational eigenvalue record rebuilt from a representative curve by
// counting points; used to cross-check stored data.
inline NewformRecord record_from_curve(const CurveModel& m,
                                       const std::vector<long>& primes) {
  std::map<long, Int> aell;
  for (long ell : primes)
    aell[ell] = Int(curve_trace(m, static_cast<uint64_t>(ell)));
  return make_rational_record(m.level, m.label, aell);
}

}  // namespace pentasum
