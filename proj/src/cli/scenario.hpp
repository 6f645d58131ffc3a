#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "surfhol/crossed_module.hpp"
#include "surfhol/pathspace.hpp"
#include "surfhol/plaquette.hpp"
#include "surfhol/serialize.hpp"

namespace surfhol::cli {

/// Command-line overrides. Each one replaces the matching key under `run`.
struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<int> resolution;
  std::optional<std::string> convention;
};

/// Parses YAML (or JSON, which YAML also accepts but is detected and handed to
/// the JSON parser for exact number handling) into one JSON tree.
Json parse_config_text(const std::string& text, bool json);
Json load_config_file(const std::filesystem::path& path);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_digest(const Json& config);

/// Typed access to a scenario config. Relative CSV paths resolve against base_dir.
class Scenario {
 public:
  Scenario(Json config, std::filesystem::path base_dir, const Flags& flags);

  const Json& config() const { return config_; }
  const Json& run() const { return run_; }
  std::uint64_t seed() const { return seed_; }

  /// Instances named by run.instances, else `instance`, else `fallback`
  /// (all built-ins when empty).
  std::vector<CrossedModulePtr> instances(const std::vector<std::string>& fallback = {}) const;
  CrossedModulePtr instance() const;

  int dim() const;
  int samples(int fallback) const;
  int resolution(int fallback) const;
  CompositionConvention convention() const;

  ConnectionForm connection(const std::string& name, GroupTag algebra) const;
  TwoFormField two_form(const std::string& name, GroupTag algebra) const;
  DiscretePath path(const std::string& name, int intervals) const;
  PathVariation variation(const std::string& name, int intervals) const;
  SurfaceMap surface(const std::string& name) const;
  std::filesystem::path resolve(const std::string& relative) const;

  // run.<key> with a default; type errors throw UsageError.
  std::string run_string(const std::string& key, const std::string& fallback) const;
  double run_number(const std::string& key, double fallback) const;
  int run_int(const std::string& key, int fallback) const;
  std::vector<double> run_numbers(const std::string& key, const std::vector<double>& fallback) const;
  bool has_run(const std::string& key) const { return run_.contains(key); }

 private:
  const Json& section_entry(const char* section, const std::string& name) const;

  Json config_;
  Json run_;
  std::filesystem::path base_dir_;
  std::uint64_t seed_;
};

struct Report {
  std::string subcommand;
  std::string config_digest;
  std::uint64_t seed = 0;
  bool pass = true;
  Json metrics = Json::object();
  std::vector<std::string> conventions;
  Json details = Json::object();

  /// Records a metric and folds `ok` into pass.
  void check(const std::string& name, double value, bool ok);
  void metric(const std::string& name, double value) { metrics[name] = value; }
  Json to_json() const;
};

struct CsvRow {
  double resolution;
  double residual;
  std::optional<double> order;
};

struct Outcome {
  Report report;
  std::vector<CsvRow> table;
};

}  // namespace surfhol::cli
