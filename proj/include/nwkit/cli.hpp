#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nwkit::cli {

// One resolved invocation. `params` already carries the merged
// CLI > config-file > defaults precedence for --set/--config keys.
struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> params;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
};

// Parses `nwkit <command> [--config p] [--out dir] [--seed n] [--set k=v]...
// [inputs...]`. Throws DomainError on unusable arguments.
RunConfig parse_args(const std::vector<std::string>& args);

// Dispatches to the named module and writes the report plus numeric tables
// under output_dir. Returns the process exit code (0 ok, 1 domain/fit
// error, 2 parse error).
int run(const RunConfig& config);

// Full entry point: argument parsing, error-to-exit-code mapping, usage text.
int main_entry(int argc, char** argv);

std::string usage_text();

} // namespace nwkit::cli
