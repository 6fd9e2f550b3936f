#pragma once

// Config-driven sweeps over the verification suites and their CSV/JSON
// reports. The config schema is documented in README.md; it and the CSV
// column order are the compatibility surface.

#include "arealaw/potential.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace arealaw {

/// Largest window the dense suites accept (2^12 states).
inline constexpr int kEdWindowCap = 12;
/// Longest chain for the free-fermion scan.
inline constexpr int kGaussianSitesCap = 4096;

enum class Suite {
  AreaLaw,
  Lts,
  GibbsCondition,
  HalvesSeries,
  Donald,
  Pinsker,
  Ssa,
  GroundState,
  GaussianScan,
  Dynamics,
};
std::string to_string(Suite s);
std::optional<Suite> parse_suite(const std::string& name);
const std::vector<Suite>& all_suites();

struct RegionSpec {
  enum class Kind { Half, Central, Prefix, Sites };
  Kind kind = Kind::Half;
  int k = 0;
  std::vector<int> sites;  // Kind::Sites, positions 0..n-1 in the window

  std::string label() const;
  /// The region inside [0, n-1]; nullopt when it does not fit or leaves an
  /// empty complement.
  std::optional<Region> resolve(const Window& w) const;
};

struct ExperimentConfig {
  std::vector<ModelSpec> models;
  std::vector<double> betas;
  std::vector<int> windows;
  std::vector<RegionSpec> regions;
  std::vector<Suite> suites;
  std::map<Suite, double> tolerances;  // per suite, defaults filled in
  std::uint64_t seed = 0;
  int trials = 100;                    // LTS channels per (model, beta, window, region)
  int samples = 100;                   // random draws per random-state suite
  std::vector<int> halves = {2, 3, 4, 5};
  std::vector<int> ladder = {32, 64, 128, 256};

  double tolerance(Suite s) const;
};

/// Aggregated validation failure; what() lists every message.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> errors);
  std::vector<std::string> errors;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every violated rule, empty for a valid config.
std::vector<std::string> validation_errors(const ExperimentConfig& config);
/// Throws ConfigError listing every violated rule.
void validate(const ExperimentConfig& config);

struct Entry {
  std::string name;
  double value = 0.0;
  bool entropy = false;  // nats, rescaled by --bits
  bool operator==(const Entry&) const = default;
};

struct ResultRecord {
  std::string suite;
  std::string model;
  std::string statistics;
  std::optional<double> beta;  // absent for suites without a temperature
  int window = 0;
  std::string region;
  std::vector<Entry> quantities;
  std::vector<Entry> slacks;
  std::vector<std::string> flags;
  double tolerance = 0.0;
  bool pass = false;

  /// pass = every slack >= -tolerance and no hard flag.
  void finalize();
  bool operator==(const ResultRecord&) const = default;
};

/// Flags that force a failure: point errors and support violations.
bool is_hard_flag(const std::string& flag);

struct RunOptions {
  int threads = 0;  // 0: hardware concurrency
};

/// Deterministic in (config, seed) for any thread count. Records are sorted
/// by (suite, model, beta, window) with grid order breaking ties.
std::vector<ResultRecord> run(const ExperimentConfig& config, RunOptions options = {});

enum class Format { Csv, Json };

struct EmitOptions {
  bool bits = false;
};

void emit_csv(const std::vector<ResultRecord>& records, std::ostream& out, EmitOptions opt = {});
void emit_json(const std::vector<ResultRecord>& records, std::ostream& out, EmitOptions opt = {});
/// Writes to `path`; throws IoError when the file cannot be written.
void emit(const std::vector<ResultRecord>& records, Format format, const std::filesystem::path& path,
          EmitOptions opt = {});
std::vector<ResultRecord> records_from_json(const std::string& text);

/// 0 when every record passes, 1 otherwise.
int exit_code(const std::vector<ResultRecord>& records);

}  // namespace arealaw
