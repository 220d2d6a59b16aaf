#pragma once

// The per-prime elimination sieve.
//
// For a case/subcase with curve pair (E, F) and newform classes f (at
// E's level) and g (at F's level), the quantity
//
//     T_ell(f,g) = ell * prod over parameter classes of
//                        gcd(R_ell(f), R'_ell(g))
//
// must be divisible by any exponent n >= 7 for which a solution in that
// class exists, so  U(f,g) = gcd over ell <= B of T_ell(f,g)  bounds the
// possible n.  Parameter classes run over w = z1^(2n) in F_ell (a square,
// or 0 when ell | z1), and the valuation-gap classes (delta_a, delta_b)
// mod (ell - 1); the residue t = z2^n is *derived* from the first source
// identity of the case and cross-checked against the second, which both
// force the same t for genuine parameters.
//
// Reduction branches: by the closed-form discriminants, mod ell the
// E-curve discriminant is a {2,3,5,7}-unit times t*w^4 and the F-curve
// discriminant a unit times t.  Hence E has multiplicative reduction
// exactly when w = 0 or t = 0, F exactly when t = 0; all other classes
// have good reduction, where R compares traces.  At a multiplicative
// class the norm of (ell+1)^2 - a_ell(f)^2 is used.
//
// Single-Frey degradation: when only one level's data is available, the
// gcd is replaced by the single R value (a sound weakening).
//
// Determinism: reports depend only on the configuration and the stores;
// the prime grid is processed in sorted order and the thread count never
// changes any reported value.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pentasum/frey.hpp"
#include "pentasum/newform.hpp"

namespace pentasum {

enum class ResiduePolicy { squares_only, all_residues };
enum class SieveMode { multi_frey, single_frey_E, single_frey_F };

inline const char* to_string(ResiduePolicy p) {
  return p == ResiduePolicy::squares_only ? "squares-only" : "all-residues";
}
inline const char* to_string(SieveMode m) {
  switch (m) {
    case SieveMode::multi_frey: return "multi";
    case SieveMode::single_frey_E: return "single-E";
    case SieveMode::single_frey_F: return "single-F";
  }
  return "?";
}

// Subcases are addressed on the command line by their curve index.
inline Subcase subcase_from_index(Case c, int index) {
  if (c == Case::I || c == Case::II) {
    if (index == 1) return Subcase::delta2plus;
    if (index == 2) return Subcase::delta0;
    if (index == 3) return Subcase::delta1;
  } else {
    if (index == 1) return Subcase::delta2plus;
    if (index == 2) return Subcase::delta1;
  }
  throw error("subcase index " + std::to_string(index) + " is invalid for Case " +
              std::string(to_string(c)));
}

struct SieveConfig {
  Case cse = Case::I;
  Subcase sub = Subcase::delta2plus;
  long prime_bound = 59;
  ResiduePolicy policy = ResiduePolicy::squares_only;
  SieveMode mode = SieveMode::multi_frey;
  std::set<long> excluded = {2, 3, 5, 7};
  int jobs = 1;
  bool early_exit = true;  // stop the prime walk once the running gcd is 1

  void validate() const {
    if (prime_bound < 11) throw error("sieve: prime bound must be >= 11");
    if (jobs < 1) throw error("sieve: jobs must be >= 1");
  }

  std::set<long> effective_excluded() const {
    std::set<long> out = excluded;
    out.insert({2, 3, 5, 7});
    return out;
  }
};

// One literal parameter class.  delta_a/delta_b are residues mod
// (ell - 1); t is the value of z2^n forced by the source identities.
struct ParamClass {
  long ell = 0;
  uint64_t w = 0;
  uint64_t delta_a = 0, delta_b = 0;
  uint64_t t = 0;
};

// ---------------------------------------------------------------------------
// t derivation from the two source identities
// ---------------------------------------------------------------------------

// A = 2^{delta_a}, B = 5^{delta_b} in F_ell.  Computes t from the first
// identity of the case and checks the second forces the same value.
inline uint64_t derive_t(Case c, const Fp& F, uint64_t w, uint64_t A,
                         uint64_t B) {
  const uint64_t ell = F.ell();
  const uint64_t A2 = F.mul(A, A), A4 = F.mul(A2, A2);
  const uint64_t B2 = F.mul(B, B), B4 = F.mul(B2, B2);
  const uint64_t w2 = F.mul(w, w);
  auto red = [&](uint64_t v) { return v % ell; };
  const uint64_t inv2 = F.inv(2), inv5 = F.inv(red(5)),
                 inv10 = F.mul(inv2, inv5);

  uint64_t t = 0, lhs2 = 0, rhs2 = 0;
  switch (c) {
    case Case::I: {
      // t + 7 w^2 = 10 (w + A^2 B^2)^2 ; 3t + 70 A^4 B^4 = (3w + 10 A^2 B^2)^2
      uint64_t c1 = F.add(w, F.mul(A2, B2));
      t = F.sub(F.mul(red(10), F.mul(c1, c1)), F.mul(red(7), w2));
      uint64_t c2 = F.add(F.mul(3, w), F.mul(red(10), F.mul(A2, B2)));
      lhs2 = F.add(F.mul(3, t), F.mul(red(70), F.mul(A4, B4)));
      rhs2 = F.mul(c2, c2);
      break;
    }
    case Case::II: {
      // t + (7 B^4/5) w^2 = 2 (B^2 w + A^2)^2
      // 3t + 14 A^4 = 5 (3 (B^2/5) w + 2 A^2)^2
      uint64_t c1 = F.add(F.mul(B2, w), A2);
      t = F.sub(F.mul(2, F.mul(c1, c1)),
                F.mul(F.mul(red(7), F.mul(B4, inv5)), w2));
      uint64_t c2 = F.add(F.mul(3, F.mul(F.mul(B2, inv5), w)), F.mul(2, A2));
      lhs2 = F.add(F.mul(3, t), F.mul(red(14), A4));
      rhs2 = F.mul(red(5), F.mul(c2, c2));
      break;
    }
    case Case::III: {
      // t + (7 A^4/2) w^2 = 5 (A^2 w + B^2)^2
      // 3t + 35 B^4 = 2 (3 (A^2/2) w + 5 B^2)^2
      uint64_t c1 = F.add(F.mul(A2, w), B2);
      t = F.sub(F.mul(red(5), F.mul(c1, c1)),
                F.mul(F.mul(red(7), F.mul(A4, inv2)), w2));
      uint64_t c2 = F.add(F.mul(3, F.mul(F.mul(A2, inv2), w)),
                          F.mul(red(5), B2));
      lhs2 = F.add(F.mul(3, t), F.mul(red(35), B4));
      rhs2 = F.mul(2, F.mul(c2, c2));
      break;
    }
    case Case::IV: {
      // t + (7 A^4 B^4/10) w^2 = (A^2 B^2 w + 1)^2
      // 3t + 7 = 10 (3 (A^2 B^2/10) w + 1)^2
      uint64_t c1 = F.add(F.mul(F.mul(A2, B2), w), 1);
      t = F.sub(F.mul(c1, c1),
                F.mul(F.mul(red(7), F.mul(F.mul(A4, B4), inv10)), w2));
      uint64_t c2 = F.add(F.mul(3, F.mul(F.mul(F.mul(A2, B2), inv10), w)), 1);
      lhs2 = F.add(F.mul(3, t), red(7));
      rhs2 = F.mul(red(10), F.mul(c2, c2));
      break;
    }
  }
  if (lhs2 != rhs2)
    throw error("derive_t: the two source identities disagree at ell=" +
                std::to_string(ell) + " (engine corruption)");
  return t;
}

// ---------------------------------------------------------------------------
// parameter class enumeration
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<uint64_t> w_values(const Fp& F, ResiduePolicy policy) {
  std::vector<uint64_t> ws;
  if (policy == ResiduePolicy::squares_only) {
    ws = F.nonzero_squares();
    ws.insert(ws.begin(), 0);
  } else {
    ws.resize(F.ell());
    for (uint64_t i = 0; i < F.ell(); ++i) ws[i] = i;
  }
  return ws;
}

// The subcase pins delta_a exactly for the "= 0" and "= 1" rows; the
// ">= 2" rows relax to all residues mod (ell - 1) (the genuine exponent
// is unbounded, so only its class matters).  delta_b is always free.
inline std::vector<uint64_t> delta_a_values(Subcase s, uint64_t ell) {
  switch (s) {
    case Subcase::delta0: return {0};
    case Subcase::delta1: return {1};
    case Subcase::delta2plus: {
      std::vector<uint64_t> v(ell - 1);
      for (uint64_t i = 0; i < ell - 1; ++i) v[i] = i;
      return v;
    }
  }
  throw error("delta_a_values: bad subcase");
}

// A collapsed orbit: all (delta_a, delta_b) giving the same residue pair
// (A, B) = (2^da, 5^db), with its multiplicity.
struct ClassOrbit {
  uint64_t w = 0, A = 1, B = 1;
  unsigned long count = 1;
};

inline std::vector<ClassOrbit> class_orbits(Case /*c*/, Subcase s, const Fp& F,
                                            ResiduePolicy policy) {
  const uint64_t ell = F.ell();
  std::vector<std::pair<uint64_t, unsigned long>> As, Bs;
  if (s == Subcase::delta2plus) {
    const uint64_t ord2 = mult_order(F, 2 % ell);
    const unsigned long m2 = (ell - 1) / ord2;
    uint64_t v = 1;
    for (uint64_t i = 0; i < ord2; ++i, v = F.mul(v, 2)) As.push_back({v, m2});
  } else {
    As.push_back({s == Subcase::delta0 ? 1 : 2 % ell, 1});
  }
  const uint64_t five = 5 % ell;
  const uint64_t ord5 = mult_order(F, five);
  const unsigned long m5 = (ell - 1) / ord5;
  uint64_t v = 1;
  for (uint64_t i = 0; i < ord5; ++i, v = F.mul(v, five)) Bs.push_back({v, m5});

  std::vector<ClassOrbit> out;
  for (uint64_t w : w_values(F, policy))
    for (const auto& [A, mA] : As)
      for (const auto& [B, mB] : Bs) out.push_back({w, A, B, mA * mB});
  return out;
}

}  // namespace detail

// Literal enumeration (one entry per (w, delta_a, delta_b) tuple), with t
// derived and cross-checked.  Mostly for inspection and tests; the engine
// itself collapses tuples with equal residues (A, B).
inline std::vector<ParamClass> param_classes(Case c, Subcase s, long ell,
                                             ResiduePolicy policy) {
  if (ell < 11 || !is_prime(Int(ell)))
    throw error("param_classes: ell must be a prime >= 11 outside {2,3,5,7}");
  Fp F(static_cast<uint64_t>(ell));
  std::vector<uint64_t> dbs(static_cast<size_t>(ell - 1));
  for (uint64_t i = 0; i + 1 < static_cast<uint64_t>(ell); ++i) dbs[i] = i;
  std::vector<ParamClass> out;
  for (uint64_t w : detail::w_values(F, policy))
    for (uint64_t da : detail::delta_a_values(s, static_cast<uint64_t>(ell)))
      for (uint64_t db : dbs) {
        const uint64_t A = F.pow(2 % F.ell(), da);
        const uint64_t B = F.pow(5 % F.ell(), db);
        out.push_back({ell, w, da, db, derive_t(c, F, w, A, B)});
      }
  return out;
}

inline unsigned long param_class_count(Case, Subcase s, long ell,
                                       ResiduePolicy policy) {
  const unsigned long nw = policy == ResiduePolicy::squares_only
                               ? static_cast<unsigned long>((ell + 1) / 2)
                               : static_cast<unsigned long>(ell);
  const unsigned long na =
      s == Subcase::delta2plus ? static_cast<unsigned long>(ell - 1) : 1;
  return nw * na * static_cast<unsigned long>(ell - 1);
}

// ---------------------------------------------------------------------------
// R values
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_multiplicative_class(Family fam, uint64_t w, uint64_t t) {
  return fam == Family::E ? (w == 0 || t == 0) : (t == 0);
}

}  // namespace detail

// R_ell(form) for the labelled curve at one parameter class: the norm of
// a_ell(curve) - a_ell(form) at good-reduction classes, and of
// (ell+1)^2 - a_ell(form)^2 at multiplicative ones.
inline Int r_value(const CurveLabel& L, const ParamClass& cls,
                   const NewformRecord& form) {
  Fp F(static_cast<uint64_t>(cls.ell));
  const uint64_t t = cls.t;
  if (detail::is_multiplicative_class(L.family, cls.w, t))
    return norm_multiplicative(form, cls.ell);
  const uint64_t A = F.pow(2 % F.ell(), cls.delta_a);
  const uint64_t B = F.pow(5 % F.ell(), cls.delta_b);
  auto coeffs = build_curve_mod(L, F, cls.w, A, B);
  ReducedCurve rc = classify_reduced(F, coeffs);
  if (rc.type != ReductionType::good)
    throw error("r_value: unexpected bad reduction in the good branch for " +
                to_string(L) + " at ell=" + std::to_string(cls.ell));
  return norm_difference(form, cls.ell, Int(trace_of_frobenius(F, rc)));
}

// ---------------------------------------------------------------------------
// T_ell and U
// ---------------------------------------------------------------------------

// T_ell for a pair.  Pass both forms for the multi-Frey product
// gcd(R, R'); pass only f (E side) or only g (F side) for single-Frey
// degradation, where the gcd is replaced by the single R value.  Returns
// ell * product over classes, saturating at 0.
inline Int t_value(const std::optional<NewformRecord>& f,
                   const std::optional<NewformRecord>& g, Case c, Subcase s,
                   long ell, ResiduePolicy policy) {
  if (!f && !g) throw error("t_value: at least one newform side is required");
  Fp F(static_cast<uint64_t>(ell));
  auto [LE, LF] = labels_for(c, s);

  // trace cache keyed by reduced coefficients (a3 = a6 = 0 throughout)
  std::map<std::array<uint64_t, 3>, long> traces;
  auto curve_trace_mod = [&](const CurveLabel& L, uint64_t w, uint64_t A,
                             uint64_t B) -> long {
    auto coeffs = build_curve_mod(L, F, w, A, B);
    const std::array<uint64_t, 3> key = {coeffs[0], coeffs[1], coeffs[3]};
    auto it = traces.find(key);
    if (it != traces.end()) return it->second;
    ReducedCurve rc = classify_reduced(F, coeffs);
    if (rc.type != ReductionType::good)
      throw error("t_value: unexpected bad reduction in the good branch for " +
                  to_string(L) + " at ell=" + std::to_string(ell));
    long a = trace_of_frobenius(F, rc);
    traces.emplace(key, a);
    return a;
  };

  // norm caches per side: by curve trace at good classes, one value at
  // multiplicative ones
  struct SideCache {
    const NewformRecord* form = nullptr;
    std::map<long, Int> by_trace;
    std::optional<Int> mult;
  };
  SideCache sf, sg;
  sf.form = f ? &*f : nullptr;
  sg.form = g ? &*g : nullptr;
  auto norm_for = [&](SideCache& side, const CurveLabel& L, uint64_t w,
                      uint64_t A, uint64_t B, uint64_t t) -> const Int& {
    if (detail::is_multiplicative_class(L.family, w, t)) {
      if (!side.mult) side.mult = norm_multiplicative(*side.form, ell);
      return *side.mult;
    }
    long a = curve_trace_mod(L, w, A, B);
    auto it = side.by_trace.find(a);
    if (it == side.by_trace.end())
      it = side.by_trace
               .emplace(a, norm_difference(*side.form, ell, Int(a)))
               .first;
    return it->second;
  };

  Int acc(1);
  for (const auto& orbit : detail::class_orbits(c, s, F, policy)) {
    const uint64_t t = derive_t(c, F, orbit.w, orbit.A, orbit.B);
    Int val;
    if (f && g) {
      const Int& rf = norm_for(sf, LE, orbit.w, orbit.A, orbit.B, t);
      const Int& rg = norm_for(sg, LF, orbit.w, orbit.A, orbit.B, t);
      val = gcd(rf, rg);
    } else if (f) {
      val = norm_for(sf, LE, orbit.w, orbit.A, orbit.B, t);
    } else {
      val = norm_for(sg, LF, orbit.w, orbit.A, orbit.B, t);
    }
    if (val == 0) return Int(0);
    acc *= pow_ui(val, orbit.count);
  }
  return ell * acc;
}

// Prime factors >= 7 of a nonzero U.  Factors below the trial-division
// bound are found exactly; a remaining composite cofactor (never seen in
// practice -- U is a gcd of unrelated products) is surfaced unfactored.
struct SurvivorSet {
  std::vector<Int> primes;     // survivors: 7 or >= 11
  Int unfactored_cofactor{1};  // > 1 only if factoring gave up
};

inline SurvivorSet survivors_of(Int u) {
  SurvivorSet out;
  if (u == 0 || u == 1) return out;
  u = abs(u);
  for (long p : {2L, 3L, 5L}) u = strip_factor(u, Int(p));
  for (long p = 7; p <= 100000 && u > 1;
       p += (p == 7 ? 4 : (p % 6 == 1 ? 4 : 2))) {
    if (!is_prime(Int(p))) continue;
    if (u % p == 0) {
      out.primes.push_back(Int(p));
      u = strip_factor(u, Int(p));
    }
  }
  if (u > 1) {
    if (is_prime(u))
      out.primes.push_back(u);
    else
      out.unfactored_cofactor = u;
  }
  return out;
}

// ---------------------------------------------------------------------------
// whole runs
// ---------------------------------------------------------------------------

struct PairReport {
  std::string f_label = "-";  // "-" in single-F mode
  std::string g_label = "-";  // "-" in single-E mode
  std::vector<std::pair<long, Int>> t_values;  // sorted by ell; may stop early
  Int u{0};
  bool no_elimination = true;  // u == 0
  std::vector<Int> survivors;
  Int unfactored_cofactor{1};
  long minimal_prime_bound = 0;  // smallest ell with prefix gcd == final U
  double elapsed_ms = 0;
};

struct SieveReport {
  SieveConfig config;
  long level_E = 0, level_F = 0;
  std::string label_E, label_F;
  std::vector<long> data_unavailable;  // required levels with no records
  bool runnable = false;
  std::map<long, unsigned long> class_counts;  // literal count per ell
  std::vector<PairReport> pairs;
  bool all_pairs_eliminate = false;      // every pair has U != 0
  std::vector<Int> aggregate_survivors;  // union over pairs when they do
  double elapsed_ms = 0;
};

// Eigenvalue data handed to a run, keyed by level.
struct SieveInput {
  std::map<long, std::vector<NewformRecord>> by_level;
};

inline SieveReport run_sieve(const SieveConfig& cfg, const SieveInput& input) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  SieveReport rep;
  rep.config = cfg;
  auto [LE, LF] = labels_for(cfg.cse, cfg.sub);
  rep.label_E = to_string(LE);
  rep.label_F = to_string(LF);
  rep.level_E = serre_level(LE);
  rep.level_F = serre_level(LF);

  const bool need_E = cfg.mode != SieveMode::single_frey_F;
  const bool need_F = cfg.mode != SieveMode::single_frey_E;
  auto records_at = [&](long level) -> const std::vector<NewformRecord>* {
    auto it = input.by_level.find(level);
    if (it == input.by_level.end() || it->second.empty()) return nullptr;
    return &it->second;
  };
  const std::vector<NewformRecord>* fs = need_E ? records_at(rep.level_E) : nullptr;
  const std::vector<NewformRecord>* gs = need_F ? records_at(rep.level_F) : nullptr;
  if (need_E && !fs) rep.data_unavailable.push_back(rep.level_E);
  if (need_F && !gs) rep.data_unavailable.push_back(rep.level_F);
  if (!rep.data_unavailable.empty()) {
    rep.runnable = false;
    return rep;
  }
  rep.runnable = true;

  const auto primes =
      primes_in(2, cfg.prime_bound, cfg.effective_excluded());
  for (long ell : primes)
    rep.class_counts[ell] =
        param_class_count(cfg.cse, cfg.sub, ell, cfg.policy);

  // assemble the (f, g) pair grid
  std::vector<std::pair<const NewformRecord*, const NewformRecord*>> grid;
  if (cfg.mode == SieveMode::multi_frey) {
    for (const auto& f : *fs)
      for (const auto& g : *gs) grid.push_back({&f, &g});
  } else if (cfg.mode == SieveMode::single_frey_E) {
    for (const auto& f : *fs) grid.push_back({&f, nullptr});
  } else {
    for (const auto& g : *gs) grid.push_back({nullptr, &g});
  }

  for (const auto& [fp_, gp_] : grid) {
    const auto t_pair = std::chrono::steady_clock::now();
    PairReport pr;
    if (fp_) pr.f_label = fp_->label;
    if (gp_) pr.g_label = gp_->label;
    std::optional<NewformRecord> f, g;
    if (fp_) f = *fp_;
    if (gp_) g = *gp_;

    // compute T_ell over the sorted prime grid; with early exit the walk
    // stops at the first prefix whose running gcd is exactly 1 (the final
    // U is then 1 regardless of the remaining primes, so the truncated
    // report equals the full one)
    std::vector<Int> tvals(primes.size());
    std::vector<char> have(primes.size(), 0);
    auto compute_at = [&](size_t i) {
      tvals[i] =
          t_value(f, g, cfg.cse, cfg.sub, primes[i], cfg.policy);
      have[i] = 1;
    };
    if (cfg.jobs <= 1 && cfg.early_exit) {
      Int running(0);
      for (size_t i = 0; i < primes.size(); ++i) {
        compute_at(i);
        running = gcd(running, tvals[i]);
        if (running == 1) break;
      }
    } else if (cfg.jobs <= 1) {
      for (size_t i = 0; i < primes.size(); ++i) compute_at(i);
    } else {
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      const int nw = std::min<int>(cfg.jobs, static_cast<int>(primes.size()));
      for (int k = 0; k < nw; ++k)
        pool.emplace_back([&] {
          for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= primes.size()) break;
            compute_at(i);
          }
        });
      for (auto& th : pool) th.join();
    }

    // deterministic sequential reduction over whatever was computed
    Int running(0);
    for (size_t i = 0; i < primes.size() && have[i]; ++i) {
      pr.t_values.push_back({primes[i], tvals[i]});
      running = gcd(running, tvals[i]);
      if (cfg.early_exit && running == 1) break;
    }
    pr.u = running;
    pr.no_elimination = (pr.u == 0);
    // minimal prime bound: first prefix already equal to the final U
    Int prefix(0);
    for (const auto& [ell, tv] : pr.t_values) {
      prefix = gcd(prefix, tv);
      if (prefix == pr.u) {
        pr.minimal_prime_bound = ell;
        break;
      }
    }
    if (pr.u != 0) {
      auto sv = survivors_of(pr.u);
      pr.survivors = sv.primes;
      pr.unfactored_cofactor = sv.unfactored_cofactor;
    }
    pr.elapsed_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t_pair)
                        .count();
    rep.pairs.push_back(std::move(pr));
  }

  rep.all_pairs_eliminate =
      !rep.pairs.empty() &&
      std::all_of(rep.pairs.begin(), rep.pairs.end(),
                  [](const PairReport& p) { return !p.no_elimination; });
  if (rep.all_pairs_eliminate) {
    std::set<Int> agg;
    for (const auto& p : rep.pairs)
      agg.insert(p.survivors.begin(), p.survivors.end());
    rep.aggregate_survivors.assign(agg.begin(), agg.end());
  }
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return rep;
}

// ---------------------------------------------------------------------------
// planted-form harness
// ---------------------------------------------------------------------------

// A rational "newform" whose eigenvalues are the labelled Frey
// specialization's own traces: by construction it matches the curve at
// every good prime, so a sieve run against it must never eliminate.
inline NewformRecord planted_record(const FreyCurveModel& m, long level,
                                    const std::string& label,
                                    const std::vector<long>& primes) {
  std::map<long, Int> aell;
  for (long ell : primes) {
    ReducedCurve rc = reduce_mod(m, static_cast<uint64_t>(ell));
    if (rc.type != ReductionType::good)
      throw error("planted_record: " + to_string(m.label) +
                  " has bad reduction at ell=" + std::to_string(ell));
    aell[ell] = Int(trace_of_frobenius(rc));
  }
  return make_rational_record(level, label, aell);
}

// ---------------------------------------------------------------------------
// report rendering (stable key order, no volatile fields)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json render_report(const SieveReport& rep) {
  nlohmann::ordered_json j;
  j["schema"] = "sieve-report/1";
  nlohmann::ordered_json cfg;
  cfg["case"] = to_string(rep.config.cse);
  cfg["subcase_index"] = curve_index(rep.config.cse, rep.config.sub);
  cfg["subcase"] = to_string(rep.config.sub);
  cfg["prime_bound"] = rep.config.prime_bound;
  cfg["residue_policy"] = to_string(rep.config.policy);
  cfg["mode"] = to_string(rep.config.mode);
  cfg["excluded_primes"] = rep.config.effective_excluded();
  cfg["early_exit"] = rep.config.early_exit;
  // jobs is deliberately not rendered: the report must be byte-identical
  // across thread counts
  j["config"] = cfg;
  j["curves"] = {{"E", rep.label_E}, {"F", rep.label_F}};
  j["levels"] = {{"E", rep.level_E}, {"F", rep.level_F}};
  j["runnable"] = rep.runnable;
  if (!rep.data_unavailable.empty())
    j["data_unavailable"] = rep.data_unavailable;
  if (!rep.runnable) return j;
  nlohmann::ordered_json counts;
  for (const auto& [ell, n] : rep.class_counts)
    counts[std::to_string(ell)] = n;
  j["class_counts"] = counts;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : rep.pairs) {
    nlohmann::ordered_json pj;
    pj["f"] = p.f_label;
    pj["g"] = p.g_label;
    nlohmann::ordered_json tj;
    for (const auto& [ell, tv] : p.t_values)
      tj[std::to_string(ell)] = tv.get_str();
    pj["T"] = tj;
    pj["U"] = p.u.get_str();
    pj["no_elimination"] = p.no_elimination;
    nlohmann::ordered_json sv = nlohmann::ordered_json::array();
    for (const auto& s : p.survivors) sv.push_back(s.get_str());
    pj["survivors"] = sv;
    if (p.unfactored_cofactor != 1)
      pj["unfactored_cofactor"] = p.unfactored_cofactor.get_str();
    pj["minimal_prime_bound"] = p.minimal_prime_bound;
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  j["all_pairs_eliminate"] = rep.all_pairs_eliminate;
  if (rep.all_pairs_eliminate) {
    nlohmann::ordered_json sv = nlohmann::ordered_json::array();
    for (const auto& s : rep.aggregate_survivors) sv.push_back(s.get_str());
    j["aggregate_survivors"] = sv;
  }
  return j;
}

}  // namespace pentasum
