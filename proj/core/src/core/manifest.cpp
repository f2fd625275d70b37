#include "arrowlab/core/manifest.hpp"

#include <ctime>
#include <fstream>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::core {

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = nlohmann::json{{"seed", m.seed},
                     {"scenario", m.scenario},
                     {"config_digest", m.config_digest},
                     {"outputs", m.outputs},
                     {"timestamp", m.timestamp}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("seed").get_to(m.seed);
  j.at("scenario").get_to(m.scenario);
  j.at("config_digest").get_to(m.config_digest);
  j.at("outputs").get_to(m.outputs);
  j.at("timestamp").get_to(m.timestamp);
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("fnv1a64:{:016x}", h);
}

std::string config_digest(const nlohmann::json& config) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  return content_digest(config.dump());
}

std::string iso8601_utc(std::int64_t epoch_seconds) {
  const auto t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                     tm.tm_min, tm.tm_sec);
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write manifest {}", path.string()));
  out << nlohmann::json(m).dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read manifest {}", path.string()));
  try {
    return nlohmann::json::parse(in).get<RunManifest>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed manifest {}: {}", path.string(), e.what()));
  }
}

}  // namespace arrowlab::core
