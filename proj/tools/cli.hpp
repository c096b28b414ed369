#pragma once

// Command-line front end for the hbp benchmark tool. Everything here is
// callable in-process so tests can drive the exact code path `main` uses.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbp/bench.hpp"

namespace hbp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

std::string tool_version();

/// Bad flag, bad value, or malformed config file.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string function = "booth";
    std::string optimizer = "bfgs";
    std::size_t hidden = 10;
    std::size_t samples = 500;
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
    double eta = 0.1;
    std::size_t epochs = 500;
    std::size_t max_iters = 500;
    double grad_tol = 1e-5;
    double c1 = 1e-4;
    double c2 = 0.9;
    std::string out = "./out";
};

/// `key = value` pairs in file order, keyed by canonical name.
struct ConfigEntry {
    std::string value;
    std::size_t line;
};
using ConfigValues = std::map<std::string, ConfigEntry>;

/// Parses a `key = value` file with `#` comments. Dashes in keys are read as
/// underscores. Throws UsageError naming the line for malformed lines and
/// unknown keys.
ConfigValues parse_config(const std::filesystem::path& path);

/// Applies one config value to `opts`; throws UsageError for unparsable values.
void apply_config_value(Options& opts, const std::string& key, const ConfigEntry& entry);

/// Range and membership checks on a fully resolved option set.
void validate(const Options& opts);

/// Benchmark configuration for the named function in `opts`.
BenchConfig to_bench_config(const Options& opts);

/// Shortest round-trip decimal, locale independent.
std::string format_double(double v);

void write_history_csv(const std::filesystem::path& path, const TrainReport& report);
void write_comparison_csv(const std::filesystem::path& path, const Comparison& cmp);
void write_report(const std::filesystem::path& path, const Options& opts, const TrainReport& report);
void write_manifest(const std::filesystem::path& path, const std::string& command, const Options& opts,
                    const std::vector<std::string>& artifacts);

/// Runs one invocation; `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbp::cli
