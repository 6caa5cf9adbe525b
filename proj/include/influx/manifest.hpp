#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace influx {

inline constexpr const char* kToolVersion = "influx 0.1.0";

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex chars.
std::string file_digest(const std::string& path);

/// Record of one CLI invocation, written alongside every output so runs
/// can be reproduced with `influx rerun`.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> args;  // full argv tail, as given
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  std::string tool_version = kToolVersion;
  std::map<std::string, double> timings_seconds;

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace influx
