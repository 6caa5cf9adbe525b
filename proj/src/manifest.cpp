#include "influx/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "influx/io.hpp"

#include "json.hpp"

namespace influx {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

void RunManifest::save(const std::string& path) const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["args"] = args;
  j["input_digests"] = input_digests;
  j["output_digests"] = output_digests;
  j["seed"] = seed;
  j["rng_algorithm"] = rng_algorithm;
  j["tool_version"] = tool_version;
  j["timings_seconds"] = timings_seconds;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  nlohmann::json j;
  in >> j;
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.args = j.at("args").get<std::vector<std::string>>();
  if (j.contains("input_digests"))
    m.input_digests = j["input_digests"].get<std::map<std::string, std::string>>();
  if (j.contains("output_digests"))
    m.output_digests =
        j["output_digests"].get<std::map<std::string, std::string>>();
  if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("rng_algorithm"))
    m.rng_algorithm = j["rng_algorithm"].get<std::string>();
  if (j.contains("tool_version"))
    m.tool_version = j["tool_version"].get<std::string>();
  if (j.contains("timings_seconds"))
    m.timings_seconds = j["timings_seconds"].get<std::map<std::string, double>>();
  return m;
}

}  // namespace influx
