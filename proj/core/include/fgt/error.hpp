#pragma once

#include <stdexcept>
#include <string>

namespace fgt {

/// Bad scenario file, missing file, out-of-range parameter in a config.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Simulation or estimation failure at runtime (divergence, degenerate fit,
/// non-convergence). Distinct from ConfigError so the CLI can map the two to
/// different exit codes.
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fgt
