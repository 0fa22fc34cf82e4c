#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sparse_rls::cli {

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // bad arguments, config or input files
inline constexpr int kExitNumeric = 3;  // non-finite values inside a recursion

/// Environment variable consulted for the worker count when neither the
/// command line nor the config sets one.
inline constexpr const char* kThreadsEnv = "SPARSE_RLS_THREADS";

enum class Format { Csv, Json };

struct SimulateOptions {
    std::filesystem::path config;
    std::filesystem::path out;
    Format format = Format::Csv;
    std::optional<unsigned> threads;
    std::optional<std::size_t> window;
    std::size_t every = 1;
};

struct SweepOptions {
    std::filesystem::path config;
    std::string algorithm;
    std::string grid;  // start:step:stop, inclusive
    std::filesystem::path out;
    Format format = Format::Csv;
    std::optional<unsigned> threads;
    std::optional<std::size_t> window;
};

struct IdentifyOptions {
    std::filesystem::path samples;
    std::filesystem::path algo_config;
    std::filesystem::path out;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& log);
int cmd_sweep(const SweepOptions& opt, std::ostream& log);
int cmd_identify(const IdentifyOptions& opt, std::ostream& log);

/// Expands `start:step:stop` (inclusive of stop up to rounding). Throws
/// ConfigError on malformed or empty grids.
std::vector<double> parse_grid(const std::string& spec);

/// Path of the manifest written next to `out`.
std::filesystem::path manifest_path(const std::filesystem::path& out);

/// Full command-line entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparse_rls::cli
