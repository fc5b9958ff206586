/// Append-only catalog of completed runs: one line per invocation with the
/// canonical config hash, so identical re-runs are visible as repeated hashes.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fujita/numerics.hpp"

namespace fujita {

struct CatalogEntry {
    std::string timestamp;  // ISO-8601 UTC
    std::string subcommand;
    std::string config_hash;  // 16 hex digits
    std::string output_path;
    std::string summary;
};

inline std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void append_catalog(const std::filesystem::path& out_dir, const CatalogEntry& entry) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "catalog.csv";
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::runtime_error("cannot append to catalog: " + path.string());
    if (fresh) os << "timestamp,subcommand,config_hash,output,summary\n";
    os << entry.timestamp << ',' << entry.subcommand << ',' << entry.config_hash << ','
       << entry.output_path << ',' << entry.summary << '\n';
}

}  // namespace fujita
