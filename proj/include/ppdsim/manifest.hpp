#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ppdsim {

/// Record of one CLI invocation, written as manifest.json into every output
/// directory. Re-running the recorded command reproduces all other outputs
/// byte for byte (the manifest itself carries wall-clock metadata).
struct RunManifest {
    std::string command;           // subcommand name
    std::vector<std::string> argv; // full command line
    std::string scenario_path;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    std::string tool = "ppdsim";
    std::string version;
    std::string created_utc;
    double wall_seconds = 0.0;

    void write(const std::string& path) const;
};

std::string utc_timestamp_now();

} // namespace ppdsim
