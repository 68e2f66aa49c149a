#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

/// A value failed a numerical or structural validity check (non-unitary
/// gate, unnormalized state, inconsistent record stream).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A data file (payoff table, config) could not be parsed.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A run configuration is incomplete or inconsistent.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgame
