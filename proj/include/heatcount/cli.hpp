#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace heatcount::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name) and returns its exit code:
/// 0 success, 1 verification failed, 2 usage or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a grid given as a comma list whose items are numbers or inclusive
/// `start:stop:step` ranges. Errors name `field`.
std::vector<double> parse_grid(std::string_view text, std::string_view field);

std::string sha256_file(const std::filesystem::path& path);

/// Record of one run, written after every output file it lists.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::string version;
  double duration_s = 0.0;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace heatcount::cli
