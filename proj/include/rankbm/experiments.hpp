#pragma once

// Declarative verification experiments: each kind binds a stationary law, a
// simulation or sampling pipeline and a set of statistical checks, and writes
//
//   <output>/raw.csv        trajectory,observable,argument,value
//   <output>/verdict.json   per-test {name, statistic, threshold, seed, pass}
//   <output>/config-echo    fully resolved experiment parameters (JSON)

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rankbm/core_types.hpp"
#include "rankbm/simulator.hpp"
#include "rankbm/stats.hpp"

namespace rankbm::experiments {

enum class Kind {
  kStationarityFinite,
  kStationarityApproximant,
  kDriftIdentity,
  kTheoremBDrift,
  kGrowth,
  kSingularity,
  kRbmResidual,
  kRankedDecomposition,
  kConjecture2Exploration,
};

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

/// Defaults that may be omitted from a config file. Nothing else is implicit.
inline constexpr double kDefaultHorizon = 1.0;
inline constexpr double kDefaultDt = 1e-3;
inline constexpr std::size_t kDefaultTrajectories = 10000;

struct ExperimentSpec {
  std::string name;
  Kind kind = Kind::kRbmResidual;
  DriftSpec drift;
  std::uint64_t seed = 0;

  std::optional<double> a;
  std::optional<double> a_alt;
  std::optional<std::size_t> particles;  // N
  std::optional<std::size_t> m;
  std::optional<std::size_t> depth;  // n
  std::optional<std::size_t> runs;

  double horizon = kDefaultHorizon;
  double dt = kDefaultDt;
  std::size_t trajectories = kDefaultTrajectories;

  std::size_t ks_gaps = 0;
  std::size_t identity_cases = 0;
  std::size_t random_specs = 0;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::vector<std::size_t> ranks;  // 1-based
  std::size_t checkpoints = 0;

  std::filesystem::path output;

  /// Checks the kind's preconditions. Throws ConfigError.
  void validate() const;
  bool exploratory() const noexcept { return kind == Kind::kConjecture2Exploration; }
};

/// Parses and validates an experiment config (YAML). Unknown keys are
/// rejected; errors carry the line of the offending node. Each spec's
/// output is `<output root>/<name>`, the root coming from the file's
/// `output` key unless `output_root` overrides it.
std::vector<ExperimentSpec> load_config(const std::filesystem::path& path,
                                        std::optional<std::filesystem::path> output_root = {});
std::vector<ExperimentSpec> parse_config(std::string_view text,
                                         std::optional<std::filesystem::path> output_root = {});

struct RawRow {
  std::size_t trajectory = 0;
  std::string observable;
  double argument = 0.0;
  double value = 0.0;
};

struct VerdictReport {
  std::string experiment;
  Kind kind = Kind::kRbmResidual;
  bool exploratory = false;
  std::uint64_t seed = 0;
  std::vector<stats::TestVerdict> tests;
  nlohmann::json details = nlohmann::json::object();

  /// Exploratory reports never fail.
  bool pass() const;
  nlohmann::json to_json() const;
};

/// Ensemble results keyed by simulation configuration, so experiments that
/// need the same run (approximant stationarity and its drift) share it.
class SimulationCache {
 public:
  std::shared_ptr<const sim::EnsembleResult> get_or_run(const sim::SimConfig& config);

 private:
  std::map<std::string, std::shared_ptr<const sim::EnsembleResult>> entries_;
};

struct ExperimentResult {
  VerdictReport verdict;
  std::vector<RawRow> raw;
};

/// Runs one experiment without touching the filesystem.
ExperimentResult execute(const ExperimentSpec& spec, SimulationCache* cache = nullptr);

/// Runs one experiment and writes its outputs under spec.output.
VerdictReport run(const ExperimentSpec& spec, SimulationCache* cache = nullptr);

/// Runs the specs in order (optionally only the one named `only`), sharing
/// a simulation cache.
std::vector<VerdictReport> run_suite(const std::vector<ExperimentSpec>& specs,
                                     std::optional<std::string> only = {});

std::string raw_csv(const std::vector<RawRow>& rows);
nlohmann::json config_echo(const ExperimentSpec& spec);
nlohmann::json drift_to_json(const DriftSpec& drift);
/// Accepts a built-in name (atlas, driftless, inverted-atlas) or
/// {"prefix": [...], "tail": x}.
DriftSpec drift_from_json(const nlohmann::json& value);
DriftSpec named_drift(std::string_view name);

/// A random (drift spec, a, m) case with a strictly above its bound.
struct RandomCase {
  DriftSpec drift;
  double a = 0.0;
  std::size_t m = 2;
};
RandomCase random_case(RandomStream& stream, std::size_t max_m = 30);

}  // namespace rankbm::experiments
