#pragma once

// REST client for downloading newform eigenvalue data, with a local cache.
//
// The client speaks the LMFDB API shape:
//
//   GET {base}/api/mf_newforms/?_format=json&_fields=label,dim,traces
//        &weight=2&char_order=1&level=<N>&_limit=<page>&_offset=<k>
//     -> {"data": [{"label": "...", "dim": d, "traces": [t_1, t_2, ...]}, ...]}
//
//   GET {base}/api/mf_hecke_nf/?_format=json
//        &_fields=field_poly,ap,hecke_ring_power_basis,maxp&label=<label>
//     -> {"data": [{"field_poly": [c0,...,1], "ap": [[..], ...],
//                   "hecke_ring_power_basis": true, "maxp": P}]}
//
// traces[i] is Tr_{K_f/Q}(a_{i+1}); ap[i] holds the coordinates of a_p at
// the i-th prime (p_1 = 2) with respect to the power basis 1, v, ..,
// v^{d-1}, where v is a root of field_poly.  Degree-1 classes are
// converted directly from traces (charpoly x - a_ell); higher degrees go
// through the multiplication matrix of a_ell on Q[v]/(field_poly), whose
// characteristic polynomial is computed exactly over the rationals.
// Eigenvalue encodings that are not a plain power basis are rejected with
// a "conversion unsupported" diagnostic rather than guessed at.
//
// Successful responses (including "level has no newforms") are written to
// <cache_dir>/level_<N>_B<bound>.nf in the local eigenvalue format and
// re-ingested, so a fetch and a later offline read of its cache yield
// identical records.  Cache writes are atomic (temp file then rename).
// Requests are globally rate limited and retried with exponential backoff.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "pentasum/newform.hpp"

namespace pentasum {

struct LmfdbConfig {
  std::string base_url = "https://www.lmfdb.org";
  std::string cache_dir = "lmfdb_cache";
  int rate_limit_ms = 500;  // >= 500ms between requests (max 2/s)
  int max_retries = 2;      // additional attempts after the first
  int backoff_ms = 250;     // doubled after each failed attempt
  int timeout_sec = 15;
  int page_size = 100;
  bool offline = false;  // never touch the network; cache only

  // Environment overrides: PENTASUM_LMFDB_URL, PENTASUM_CACHE_DIR.
  static LmfdbConfig from_env() {
    LmfdbConfig cfg;
    if (const char* v = std::getenv("PENTASUM_LMFDB_URL"); v && *v)
      cfg.base_url = v;
    if (const char* v = std::getenv("PENTASUM_CACHE_DIR"); v && *v)
      cfg.cache_dir = v;
    return cfg;
  }
};

struct FetchResult {
  std::vector<NewformRecord> records;
  bool from_cache = false;
  bool unavailable = false;  // level absent from the upstream database
  std::string cache_path;
};

// ---------------------------------------------------------------------------
// charpoly of an algebraic eigenvalue given in a power basis
// ---------------------------------------------------------------------------

// field_poly: monic integer polynomial of degree d (low-to-high), defining
// K = Q[v]/(field_poly).  coords: d integers, the eigenvalue a = sum
// coords[i] v^i.  Returns the characteristic polynomial of a acting on K
// by multiplication (monic, degree d, integer coefficients, low-to-high).
inline std::vector<Int> charpoly_from_power_basis(
    const std::vector<Int>& field_poly, const std::vector<Int>& coords) {
  const int d = static_cast<int>(field_poly.size()) - 1;
  if (d < 1) throw error("charpoly_from_power_basis: empty field_poly");
  if (field_poly.back() != 1)
    throw error("charpoly_from_power_basis: field_poly is not monic");
  if (static_cast<int>(coords.size()) != d)
    throw error("charpoly_from_power_basis: coordinate length " +
                std::to_string(coords.size()) + " != field degree " +
                std::to_string(d));
  // column j of the multiplication matrix: coordinates of a * v^j
  std::vector<std::vector<Int>> col(d, std::vector<Int>(d));
  std::vector<Int> cur(coords.begin(), coords.end());
  for (int j = 0; j < d; ++j) {
    col[j] = cur;
    if (j + 1 < d) {
      std::vector<Int> nxt(d);
      Int lead = cur[d - 1];
      for (int i = d - 1; i >= 1; --i) nxt[i] = cur[i - 1] - lead * field_poly[i];
      nxt[0] = -lead * field_poly[0];
      cur = std::move(nxt);
    }
  }
  // Faddeev-LeVerrier over exact rationals:
  //   B_1 = M, c_{d-1} = -tr(B_1); B_k = M(B_{k-1} + c_{d-k+1} I),
  //   c_{d-k} = -tr(B_k)/k.
  std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M[i][j] = mpq_class(col[j][i]);
  std::vector<mpq_class> c(d + 1);
  c[d] = 1;
  auto B = M;
  for (int k = 1; k <= d; ++k) {
    if (k > 1) {
      auto T = B;
      for (int i = 0; i < d; ++i) T[i][i] += c[d - k + 1];
      std::vector<std::vector<mpq_class>> P(d, std::vector<mpq_class>(d));
      for (int i = 0; i < d; ++i)
        for (int m = 0; m < d; ++m) {
          if (M[i][m] == 0) continue;
          for (int j = 0; j < d; ++j) P[i][j] += M[i][m] * T[m][j];
        }
      B = std::move(P);
    }
    mpq_class tr(0);
    for (int i = 0; i < d; ++i) tr += B[i][i];
    c[d - k] = -tr / k;
  }
  std::vector<Int> out(d + 1);
  for (int i = 0; i <= d; ++i) {
    if (c[i].get_den() != 1)
      throw error("charpoly_from_power_basis: non-integral coefficient");
    out[i] = c[i].get_num();
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP plumbing
// ---------------------------------------------------------------------------

namespace detail {

// Global spacing between outgoing requests (shared across threads).
inline void rate_limit_wait(int min_interval_ms) {
  static std::mutex mu;
  static std::chrono::steady_clock::time_point last{};
  std::lock_guard<std::mutex> lk(mu);
  auto now = std::chrono::steady_clock::now();
  if (last.time_since_epoch().count() != 0) {
    auto earliest = last + std::chrono::milliseconds(min_interval_ms);
    if (now < earliest) {
      std::this_thread::sleep_for(earliest - now);
      now = std::chrono::steady_clock::now();
    }
  }
  last = now;
}

inline nlohmann::json http_get_json(const LmfdbConfig& cfg,
                                    const std::string& path_and_query) {
  std::string last_err;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg.backoff_ms << (attempt - 1)));
    rate_limit_wait(cfg.rate_limit_ms);
    httplib::Client cli(cfg.base_url);
    cli.set_connection_timeout(cfg.timeout_sec, 0);
    cli.set_read_timeout(cfg.timeout_sec, 0);
    cli.set_follow_location(true);
    auto res = cli.Get(path_and_query);
    if (!res) {
      last_err = "connection error: " + httplib::to_string(res.error());
      continue;  // retry
    }
    if (res->status >= 500) {
      last_err = "HTTP status " + std::to_string(res->status);
      continue;  // retry
    }
    if (res->status != 200)
      throw error("lmfdb: HTTP status " + std::to_string(res->status) +
                  " for " + cfg.base_url + path_and_query);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const std::exception& e) {
      throw error(std::string("lmfdb: malformed JSON response: ") + e.what());
    }
  }
  throw error("lmfdb: request failed after " +
              std::to_string(cfg.max_retries + 1) + " attempts (" + last_err +
              ") for " + cfg.base_url + path_and_query);
}

inline const nlohmann::json& data_array(const nlohmann::json& j,
                                        const std::string& what) {
  auto it = j.find("data");
  if (it == j.end() || !it->is_array())
    throw error("lmfdb: " + what + " response has no 'data' array");
  return *it;
}

inline std::vector<Int> int_vector(const nlohmann::json& arr,
                                   const std::string& what) {
  if (!arr.is_array()) throw error("lmfdb: " + what + " is not an array");
  std::vector<Int> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer())
      throw error("lmfdb: non-integer entry in " + what);
    out.emplace_back(static_cast<long>(v.get<long long>()));
  }
  return out;
}

inline NewformRecord convert_item(const nlohmann::json& it, long level,
                                  const std::vector<long>& primes,
                                  const LmfdbConfig& cfg) {
  if (!it.contains("label") || !it.contains("dim"))
    throw error("lmfdb: newform item missing 'label' or 'dim'");
  const std::string label = it["label"].get<std::string>();
  const long dim = it["dim"].get<long>();
  if (dim < 1) throw error("lmfdb: " + label + ": dim < 1");
  std::vector<long> traces;
  if (it.contains("traces") && it["traces"].is_array())
    for (const auto& t : it["traces"]) traces.push_back(t.get<long>());
  if (!traces.empty() && traces[0] != dim)
    throw error("lmfdb: " + label + ": traces[0]=" +
                std::to_string(traces[0]) + " != dim");
  if (dim == 1) {
    if (static_cast<long>(traces.size()) < primes.back())
      throw error("lmfdb: " + label + ": trace list covers n <= " +
                  std::to_string(traces.size()) + ", need n <= " +
                  std::to_string(primes.back()));
    std::map<long, Int> aell;
    for (long ell : primes) aell[ell] = Int(traces[ell - 1]);
    return make_rational_record(level, label, aell);
  }
  // degree >= 2: pull the power-basis eigenvalue data for this class
  auto j = http_get_json(
      cfg,
      "/api/mf_hecke_nf/?_format=json"
      "&_fields=field_poly,ap,hecke_ring_power_basis,maxp&label=" +
          label);
  const auto& data = data_array(j, "mf_hecke_nf");
  if (data.empty())
    throw error("lmfdb: no stored eigenvalue data for " + label);
  const auto& h = data[0];
  if (!h.value("hecke_ring_power_basis", false))
    throw error("lmfdb: conversion unsupported for " + label +
                ": eigenvalues are not stored in a power basis "
                "(exotic Hecke ring encoding)");
  auto field_poly = int_vector(h.at("field_poly"), label + ".field_poly");
  if (static_cast<long>(field_poly.size()) != dim + 1 ||
      field_poly.back() != 1)
    throw error("lmfdb: " + label + ": field_poly is not monic of degree " +
                std::to_string(dim));
  const long maxp = h.value("maxp", 0L);
  if (maxp < primes.back())
    throw error("lmfdb: " + label + ": ap data reaches p <= " +
                std::to_string(maxp) + ", need p <= " +
                std::to_string(primes.back()));
  const auto& ap = h.at("ap");
  if (!ap.is_array()) throw error("lmfdb: " + label + ": 'ap' not an array");
  const auto all_primes = primes_in(2, primes.back());
  if (ap.size() < all_primes.size())
    throw error("lmfdb: " + label + ": 'ap' has " +
                std::to_string(ap.size()) + " entries, need " +
                std::to_string(all_primes.size()));
  NewformRecord rec;
  rec.level = level;
  rec.label = label;
  rec.degree = static_cast<int>(dim);
  for (long ell : primes) {
    size_t idx = 0;
    while (idx < all_primes.size() && all_primes[idx] != ell) ++idx;
    auto coords = int_vector(ap[idx], label + ".ap[" + std::to_string(idx) +
                                          "]");
    auto cp = charpoly_from_power_basis(field_poly, coords);
    if (static_cast<long>(traces.size()) >= ell &&
        -cp[dim - 1] != traces[ell - 1])
      throw error("lmfdb: " + label + ": trace mismatch at ell=" +
                  std::to_string(ell) +
                  " between 'traces' and the power-basis data");
    if (!roots_within_hecke_bound(cp, ell))
      throw error("lmfdb: " + label + ": eigenvalue bound violated at ell=" +
                  std::to_string(ell) + " in the downloaded data");
    rec.charpolys[ell] = std::move(cp);
  }
  return rec;
}

inline void write_cache_atomic(const std::filesystem::path& path,
                               const std::vector<NewformRecord>& recs,
                               long level, long prime_bound) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> seq{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(seq.fetch_add(1));
  {
    std::ofstream os(tmp);
    if (!os) throw error("lmfdb: cannot write cache file " + tmp.string());
    os << "# weight-2 trivial-character newform eigenvalue data\n";
    os << "# level " << level << ", primes 11.." << prime_bound << "\n";
    if (recs.empty())
      os << "# no newforms at this level in the upstream database\n";
    write_newform_text(os, recs);
    os.flush();
    if (!os) throw error("lmfdb: write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// fetch with caching
// ---------------------------------------------------------------------------

// Fetch all weight-2 trivial-character newform classes at `level`,
// converted to per-prime charpolys for primes 11 <= ell <= prime_bound.
// Results are cached under cfg.cache_dir and reruns are served from the
// cache without touching the network.  An empty record list with
// unavailable=true means the level has no newforms upstream (that fact is
// cached too); network failure after retries raises an error naming the
// missing cache file.
inline FetchResult fetch_lmfdb(long level, long prime_bound,
                               const LmfdbConfig& cfg) {
  namespace fs = std::filesystem;
  if (level < 1) throw error("fetch_lmfdb: level must be positive");
  if (prime_bound < 11) throw error("fetch_lmfdb: prime_bound must be >= 11");
  fs::path cache = fs::path(cfg.cache_dir) /
                   ("level_" + std::to_string(level) + "_B" +
                    std::to_string(prime_bound) + ".nf");
  FetchResult out;
  out.cache_path = cache.string();
  if (fs::exists(cache)) {
    out.records = ingest_local(cache.string());
    out.from_cache = true;
    out.unavailable = out.records.empty();
    return out;
  }
  if (cfg.offline)
    throw error("lmfdb: offline mode and no cache at " + cache.string());
  const auto primes = primes_in(11, prime_bound);
  std::vector<nlohmann::json> items;
  for (long offset = 0;;) {
    std::ostringstream q;
    q << "/api/mf_newforms/?_format=json&_fields=label,dim,traces"
      << "&weight=2&char_order=1&level=" << level << "&_limit="
      << cfg.page_size << "&_offset=" << offset;
    auto j = detail::http_get_json(cfg, q.str());
    const auto& data = detail::data_array(j, "mf_newforms");
    for (const auto& it : data) items.push_back(it);
    if (static_cast<long>(data.size()) < cfg.page_size) break;
    offset += cfg.page_size;
  }
  for (const auto& it : items)
    out.records.push_back(detail::convert_item(it, level, primes, cfg));
  std::sort(out.records.begin(), out.records.end(),
            [](const NewformRecord& a, const NewformRecord& b) {
              return std::make_tuple(a.label.size(), std::cref(a.label)) <
                     std::make_tuple(b.label.size(), std::cref(b.label));
            });
  detail::write_cache_atomic(cache, out.records, level, prime_bound);
  // re-ingest so callers see exactly what the cache will serve later
  out.records = ingest_local(cache.string());
  out.unavailable = out.records.empty();
  return out;
}

// Fetch several levels with a bounded number of worker threads (requests
// remain globally rate limited).  Failures are collected per level.
struct MultiFetchOutcome {
  std::map<long, FetchResult> ok;
  std::map<long, std::string> failed;
};

inline MultiFetchOutcome fetch_lmfdb_many(std::vector<long> levels,
                                          long prime_bound,
                                          const LmfdbConfig& cfg,
                                          int max_inflight = 4) {
  MultiFetchOutcome out;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) return out;
  std::atomic<size_t> next{0};
  std::mutex mu;
  const int workers =
      std::max(1, std::min<int>(max_inflight, static_cast<int>(levels.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int i = 0; i < workers; ++i)
    pool.emplace_back([&] {
      for (;;) {
        size_t k = next.fetch_add(1);
        if (k >= levels.size()) break;
        long lv = levels[k];
        try {
          auto r = fetch_lmfdb(lv, prime_bound, cfg);
          std::lock_guard<std::mutex> lk(mu);
          out.ok.emplace(lv, std::move(r));
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(mu);
          out.failed.emplace(lv, e.what());
        }
      }
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace pentasum
