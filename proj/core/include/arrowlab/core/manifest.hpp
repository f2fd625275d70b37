#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace arrowlab::core {

/// Record of one scenario execution. Identical (seed, config) reproduce
/// identical manifests, so the timestamp is supplied by the caller rather
/// than read from the clock here.
struct RunManifest {
  std::uint64_t seed = 0;
  std::string scenario;
  std::string config_digest;
  std::vector<std::string> outputs;  // paths relative to the manifest's directory
  std::string timestamp;             // ISO-8601 UTC

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

/// 64-bit FNV-1a digest, rendered as "fnv1a64:<16 hex digits>".
std::string content_digest(std::string_view bytes);

/// Digest of the canonical (sorted-key, compact) serialization of a JSON value.
std::string config_digest(const nlohmann::json& config);

/// Seconds since the Unix epoch rendered as ISO-8601 UTC.
std::string iso8601_utc(std::int64_t epoch_seconds);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace arrowlab::core
