#pragma once

// Run manifests.  Every CLI run records what was executed: the command,
// the fully resolved configuration, SHA-256 digests of every input file
// consumed and output file produced, artifact/schema versions, and
// timing.  All volatile data (timestamps, wall clock) lives here and only
// here, so the outputs themselves stay byte-identical across reruns of
// the same configuration.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentasum/arith.hpp"

namespace pentasum {

inline std::string to_hex(const unsigned char* digest, unsigned len) {
  static const char* hexd = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hexd[digest[i] >> 4]);
    out.push_back(hexd[digest[i] & 0xf]);
  }
  return out;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1)
    throw error("sha256: digest computation failed");
  return to_hex(md, len);
}

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("sha256: cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw error("sha256: context allocation failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.good()) {
    in.read(buf, sizeof buf);
    std::streamsize got = in.gcount();
    if (got > 0) EVP_DigestUpdate(ctx, buf, static_cast<size_t>(got));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  return to_hex(md, len);
}

inline std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[80];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

struct RunManifest {
  std::string command;
  std::vector<std::string> argv_echo;
  nlohmann::ordered_json config;  // resolved configuration snapshot
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
  std::string artifact_version = "pentasum/1.0";
  std::string report_schema;
  std::string started_at_utc;
  double wall_clock_ms = 0;

  void add_input(const std::string& path) {
    input_digests[path] = sha256_file(path);
  }
  void add_output(const std::string& path) {
    output_digests[path] = sha256_file(path);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "run-manifest/1";
    j["command"] = command;
    j["argv"] = argv_echo;
    j["config"] = config;
    j["inputs"] = input_digests;
    j["outputs"] = output_digests;
    j["artifact_version"] = artifact_version;
    if (!report_schema.empty()) j["report_schema"] = report_schema;
    j["started_at_utc"] = started_at_utc;
    j["wall_clock_ms"] = wall_clock_ms;
    return j;
  }
};

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream os(path);
  if (!os) throw error("manifest: cannot write " + path);
  os << m.to_json().dump(2) << "\n";
  if (!os) throw error("manifest: write failed for " + path);
}

}  // namespace pentasum
