#include "ppdsim/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "ppdsim/common.hpp"

namespace ppdsim {

std::string utc_timestamp_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["argv"] = argv;
    j["scenario"] = scenario_path;
    j["seeds"] = seeds;
    j["out_dir"] = out_dir;
    j["created_utc"] = created_utc;
    j["wall_seconds"] = wall_seconds;
    std::ofstream out(path);
    if (!out)
        throw SimError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

} // namespace ppdsim
