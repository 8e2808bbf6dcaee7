#pragma once

#include <stdexcept>
#include <string>

namespace ppdsim {

/// Invalid or inconsistent configuration input (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Runtime failure during a simulation or search (maps to CLI exit code 1).
class SimError : public std::runtime_error {
  public:
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr const char* kToolName = "ppdsim";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace ppdsim
