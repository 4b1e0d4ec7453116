#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hadams/decomposition.hpp"

namespace hadams {

// schema violation; message carries a pointer to the offending key
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunContext {
  std::string out_dir = "out";
  uint64_t seed = 20240901;
  int threads = 1;
};

// Rejects unknown keys and wrong types before any computation.
void validate_config(const nlohmann::json& config, const std::string& subcommand);

// Executes one subcommand; writes CSV/report artifacts into ctx.out_dir.
// Returns the process exit status (0 = success; numerical diagnostics give a
// nonzero status with the report still written).
int run_subcommand(const std::string& subcommand, const nlohmann::json& config,
                   const std::string& config_text, const RunContext& ctx);

// decompose input: {"N": int, "entries": [{"n": int, "path": str}, ...]};
// paths are resolved relative to the manifest's directory.
SequenceFamily load_manifest(const std::string& manifest_path,
                             const QuadratureSpec& q);
void save_manifest(const std::string& manifest_path, const SequenceFamily& fam);

}  // namespace hadams
