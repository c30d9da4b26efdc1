#ifndef PFRONTIER_PIPELINE_HPP
#define PFRONTIER_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>

namespace pfrontier {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by the C API and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyData = 3;
inline constexpr int kExitInternalError = 4;

///// Declarative run configuration: a flat key/value store loaded from a
/// config file, with flag overrides applied on top (flags win).
struct RunConfig {
    std::map<std::string, std::string> values;

    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
    void set(const std::string& key, const std::string& value) { values[key] = value; }
};

///// Parses a flat TOML-style file: `key = value` lines, optional [section]
/// headers (prefixing keys as section.key), # comments, quoted strings.
RunConfig load_config_file(const std::string& path);

/// FNV-1a over the sorted key=value pairs; stamped into output headers.
std::uint64_t config_hash(const RunConfig& config);

/// Executes one subcommand (synth | pindex | frontier | backtest | factor).
/// Returns an exit code; on failure `error_out` carries the message.
int run_command(const RunConfig& config, const std::string& command,
                std::string* error_out = nullptr);

}  // namespace pfrontier

#endif
