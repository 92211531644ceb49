#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace netresp {

// Command-line values that override the matching top-level config keys.
struct CliOverrides {
  std::optional<std::uint64_t> seed;   // "seed"
  std::optional<std::string> out;      // "out"
  std::optional<int> workers;          // "workers"
  std::optional<std::string> rk;       // "rk": "5" or a range "1-6"
  bool create = false;                 // "create"
  bool resume = false;                 // "resume"
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitMismatch = 4,
};

const std::vector<std::string>& command_names();

// Reads a JSON config; an empty path gives an empty object.
nlohmann::json load_config(const std::filesystem::path& path);

// Merged config as the commands see it.
nlohmann::json effective_config(nlohmann::json config, const CliOverrides& o);

// 64-bit FNV-1a over bytes, as 16 lower-case hex digits.
std::string fnv1a_hex(std::string_view bytes);

// "5" -> {5}; "1-6" -> {1, ..., 6}.
std::vector<int> parse_rk(const std::string& text);

// Runs one command against an effective config. Relative input paths are
// resolved against `base` (normally the config file's directory). Throws the
// library's exceptions on failure.
void run_command(const std::string& command, const nlohmann::json& config, const std::filesystem::path& base);

// run_command wrapped with error reporting to `err`; returns an ExitCode.
int dispatch(const std::string& command, const std::filesystem::path& config_path, const CliOverrides& o,
             std::ostream& err);

}  // namespace netresp
