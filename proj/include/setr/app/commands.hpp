#pragma once

// The four front-end commands. Each loads a scenario, runs it, writes its
// files under the output directory and returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "json.hpp"

#include "setr/app/config.hpp"

namespace setr::app {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { Compute, Curve, Simulate, Verify };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Command c) noexcept;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;  ///< verify criterion not met, or I/O failure
inline constexpr int invalid = 2;
inline constexpr int numerical = 3;
}  // namespace exit_code

struct CommandOptions {
    std::filesystem::path config{};
    std::optional<std::filesystem::path> out{};
    std::optional<std::size_t> paths{};
    std::optional<std::uint64_t> seed{};
    OutputFormat format = OutputFormat::Json;
    unsigned threads = 1;
};

/// Loads options.config and runs it. Diagnostics go to `err`, the report (or
/// the primary CSV with OutputFormat::Csv) to `out`.
int run_command(Command cmd, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Same, for an already parsed scenario.
int run_command(Command cmd, ScenarioConfig config, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

/// Directory a run writes to: --out, else the scenario's output, else "setr_out".
std::filesystem::path output_dir(const ScenarioConfig& config, const CommandOptions& options);

}  // namespace setr::app
