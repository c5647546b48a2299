#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spns/errors.hpp"

namespace spns::cli {

struct RunContext {
  std::optional<std::uint64_t> seed;  // --seed; overrides the config's "seed"
  std::filesystem::path out;          // empty: nothing is written
  int threads = 1;
  std::filesystem::path config_dir = ".";  // relative input paths resolve here
  std::optional<std::filesystem::path> registry;  // else SPNS_REGISTRY, else the shipped file
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
  std::vector<std::string> files;  // written outputs, relative to out
};

/// 1 for an unmet precondition, 2 for config, input and file problems, 3 for
/// resolution, domain and calibration failures.
int exit_code(ErrorKind kind) noexcept;

const std::vector<std::string>& commands();

/// Validates the whole config, then runs.  Every report carries the command, the
/// registry version, the config hash and the seed.  Errors propagate as spns::Error.
RunResult run(const std::string& command, const nlohmann::json& config, const RunContext& ctx);

/// SHA-256 of the config's canonical dump (sorted keys, no whitespace).
std::string config_hash(const nlohmann::json& config);

/// Packs a run directory into a ustar archive: manifest.json first, then every file
/// the report lists, sorted.  Throws io when the report or a listed file is missing.
nlohmann::json write_bundle(const std::filesystem::path& run_dir, const std::filesystem::path& archive);
/// Member name to contents.
std::map<std::string, std::string> read_bundle(const std::filesystem::path& archive);

/// Re-runs the bundled certify and compares against the bundled certificate.  Exit
/// 0 only when the verdict passes and the certificate is reproduced exactly.
RunResult certify_from_bundle(const std::filesystem::path& archive, const RunContext& ctx);

}  // namespace spns::cli
