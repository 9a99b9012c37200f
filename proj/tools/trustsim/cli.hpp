#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustsim/testbed/presets.hpp"

namespace trustsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

struct SweepSpec {
  std::string param;
  std::vector<std::string> values;
};

/// Everything a run or sweep needs, before validation against the preset.
struct Invocation {
  std::string preset;
  std::vector<std::string> policies;  // empty = every policy of the preset
  std::vector<std::uint64_t> seeds;   // empty = {base_seed .. base_seed + repeats - 1}
  std::uint64_t base_seed = 1;
  std::uint64_t repeats = 1;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::filesystem::path out;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::optional<SweepSpec> sweep;
};

/// Reads a JSON config (or a manifest written by a previous run).
/// Throws ConfigError on unknown keys or badly typed values.
Invocation load_config(const std::filesystem::path& path);

/// "1,2,5-8" -> {1,2,5,6,7,8}. Throws ConfigError on bad syntax or duplicates.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Comma-separated list, whitespace trimmed, empty items dropped.
std::vector<std::string> split_list(std::string_view text);

/// "key=value". Throws ConfigError without '='.
std::pair<std::string, std::string> parse_override(std::string_view text);

std::uint64_t fnv1a64(std::string_view data);

struct Resolved {
  const Preset* preset = nullptr;
  ParamSet params;
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  std::optional<SweepSpec> sweep;
  std::filesystem::path out;
  unsigned jobs = 1;
};

/// Validates an invocation against its preset. Throws ConfigError.
Resolved resolve(const Invocation& inv);

/// Hash of everything that determines the output files (not the output path).
std::string config_hash(const Resolved& r, std::string_view command);

int run_command(const Invocation& inv, std::ostream& log);
int sweep_command(const Invocation& inv, std::ostream& log);
int plot_data_command(std::string_view figure, const std::vector<std::filesystem::path>& inputs,
                      const std::filesystem::path& out, std::ostream& log);
void list_presets(std::ostream& out, bool verbose);

/// Full command line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace trustsim::cli
