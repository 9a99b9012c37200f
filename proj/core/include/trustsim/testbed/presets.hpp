#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trustsim {

enum class ParamKind { integer, real, boolean, text };

std::string_view to_string(ParamKind k);

struct Param {
  std::string key;
  ParamKind kind = ParamKind::real;
  std::string value;
  std::string help;
  std::vector<std::string> choices;  // text params only; empty = free text
};

/// Flat, ordered set of documented parameters. Setting an undeclared key or
/// a value of the wrong kind throws ConfigError.
class ParamSet {
 public:
  ParamSet& declare(std::string key, ParamKind kind, std::string value, std::string help,
                    std::vector<std::string> choices = {});
  void set(std::string_view key, std::string_view value);

  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] const Param& at(std::string_view key) const;
  [[nodiscard]] double real(std::string_view key) const;
  [[nodiscard]] std::int64_t integer(std::string_view key) const;
  [[nodiscard]] std::size_t count(std::string_view key) const;  // integer >= 0
  [[nodiscard]] bool flag(std::string_view key) const;
  [[nodiscard]] const std::string& text(std::string_view key) const;
  [[nodiscard]] const std::vector<Param>& entries() const { return params_; }

 private:
  Param* find(std::string_view key);
  std::vector<Param> params_;
};

struct Preset {
  std::string name;
  std::string summary;
  std::vector<std::string> policies;  // accepted policy ids, default run order
  ParamSet params;
  std::vector<std::string> figures;   // plot-data figure ids this preset feeds
};

const std::vector<Preset>& preset_registry();
/// Throws ConfigError for an unknown name.
const Preset& find_preset(std::string_view name);

struct Series {
  std::string figure;
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PolicyRun {
  std::string policy;
  std::vector<std::pair<std::string, std::optional<double>>> metrics;
  std::vector<Series> series;

  [[nodiscard]] std::optional<double> metric(std::string_view name) const;
};

/// Runs one seed of a preset. `policies` must be a non-empty subset of the
/// preset's ids (ConfigError otherwise). Every run reports at least welfare,
/// fairness_hon, quality and waiting_time, undefined where the scenario has
/// no such notion.
std::vector<PolicyRun> run_preset(const Preset& preset, const ParamSet& params,
                                  std::span<const std::string> policies, std::uint64_t seed);

struct FigureInfo {
  std::string id;
  std::string preset;  // "sweep" for figures built from sweep tables
  std::string x_label;
  std::string y_label;
};

const std::vector<FigureInfo>& figure_registry();
/// Null when unknown.
const FigureInfo* find_figure(std::string_view id);

}  // namespace trustsim
