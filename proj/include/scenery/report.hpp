#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scenery/error.hpp"

namespace scenery {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";

// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_other = 1,
  exit_config = 2,
  exit_precision = 3,
  exit_zero_mass = 4,
  exit_depth = 5,
};

int exit_code_for(ErrorCode code);

std::uint64_t fnv1a64(std::string_view bytes);
// Hash of the canonical (sorted-key, compact) dump of the config.
std::string config_hash(const json& config);

// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::string& path, std::string_view content);

json error_json(const Error& e);

// Summary JSON builder. Every value is tagged empirical or closed_form, and
// empirical ones carry an error field.
class Report {
 public:
  Report(std::string command, json config);

  void empirical(const std::string& name, double value, double error);
  void closed_form(const std::string& name, double value);
  void set(const std::string& name, json value);
  void add_file(const std::string& path);

  json to_json() const;
  std::string dump() const;

 private:
  std::string command_;
  json config_;
  json summary_ = json::object();
  json extra_ = json::object();
  std::vector<std::string> files_;
};

}  // namespace scenery
