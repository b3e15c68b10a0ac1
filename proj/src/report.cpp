#include "scenery/report.hpp"

#include <cstdio>
#include <fstream>

#include "scenery/measure.hpp"

namespace scenery {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_error:
    case ErrorCode::invalid_params:
    case ErrorCode::unsupported_kind:
    case ErrorCode::invalid_radius:
      return exit_config;
    case ErrorCode::precision_loss:
    case ErrorCode::ambiguous_mass:
      return exit_precision;
    case ErrorCode::zero_mass:
      return exit_zero_mass;
    case ErrorCode::depth_exceeded:
      return exit_depth;
    case ErrorCode::origin_not_in_support:
      return exit_other;
  }
  return exit_other;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

void write_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorCode::config_error, "cannot write " + tmp);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) fail(ErrorCode::config_error, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(ErrorCode::config_error, "cannot rename into " + path);
  }
}

json error_json(const Error& e) {
  return {{"error", std::string(error_name(e.code()))},
          {"message", e.what()},
          {"exit_code", exit_code_for(e.code())}};
}

Report::Report(std::string command, json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Report::empirical(const std::string& name, double value, double error) {
  summary_[name] = {{"value", value}, {"error", error}, {"tag", "empirical"}};
}

void Report::closed_form(const std::string& name, double value) {
  summary_[name] = {{"value", value}, {"tag", "closed_form"}};
}

void Report::set(const std::string& name, json value) { extra_[name] = std::move(value); }

void Report::add_file(const std::string& path) { files_.push_back(path); }

json Report::to_json() const {
  json depth = config_.value("depth", json());
  if (depth.is_null() && config_.contains("measure") && config_["measure"].is_object()) {
    depth = config_["measure"].value("depth", json(kDefaultMaxDepth));
  }
  json prov = {{"config_hash", config_hash(config_)},
               {"tool_version", kToolVersion},
               {"seed", config_.value("seed", json())},
               {"depth", depth}};
  return {{"command", command_},
          {"config", config_},
          {"provenance", prov},
          {"summary", summary_},
          {"details", extra_},
          {"files", files_}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace scenery
