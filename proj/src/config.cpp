// Experiment config parsing and validation.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rankbm/experiments.hpp"
#include "rankbm/io.hpp"
#include "rankbm/stationary_laws.hpp"

namespace rankbm::experiments {
namespace {

struct KindSchema {
  Kind kind;
  std::string_view name;
  std::vector<std::string_view> required;
  std::vector<std::string_view> optional;
};

const std::vector<KindSchema>& schemas() {
  static const std::vector<KindSchema> table = {
      {Kind::kStationarityFinite, "stationarity-finite", {"N"}, {"T", "dt", "M"}},
      {Kind::kStationarityApproximant,
       "stationarity-approximant",
       {"a", "m", "ks_gaps", "identity_cases"},
       {"T", "dt", "M"}},
      {Kind::kDriftIdentity, "drift-identity", {"N"}, {"T", "dt", "M"}},
      {Kind::kTheoremBDrift, "theorem-b-drift", {"a", "m", "ranks"}, {"T", "dt", "M"}},
      {Kind::kGrowth, "growth", {"a", "n", "runs", "x_min", "x_max"}, {}},
      {Kind::kSingularity, "singularity", {"a", "a_alt", "n", "runs"}, {}},
      {Kind::kRbmResidual, "rbm-residual", {"a", "n", "random_specs"}, {}},
      {Kind::kRankedDecomposition, "ranked-decomposition", {"N"}, {"T", "dt", "M"}},
      {Kind::kConjecture2Exploration,
       "conjecture2-exploration",
       {"a", "m", "ranks", "checkpoints"},
       {"T", "dt", "M"}},
  };
  return table;
}

const KindSchema& schema_for(Kind kind) {
  for (const auto& s : schemas()) {
    if (s.kind == kind) return s;
  }
  throw std::logic_error("unknown experiment kind");
}

int line_of(const YAML::Node& node) { return node.Mark().line; }

template <class T>
T scalar_as(const YAML::Node& node, std::string_view key, std::string_view expected) {
  if (!node.IsScalar()) {
    throw ConfigError(std::string(key) + " must be " + std::string(expected), line_of(node));
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(std::string(key) + " must be " + std::string(expected) + ", got '" +
                          node.Scalar() + "'",
                      line_of(node));
  }
}

double real_of(const YAML::Node& node, std::string_view key) {
  const auto v = scalar_as<double>(node, key, "a real number");
  if (!std::isfinite(v)) throw ConfigError(std::string(key) + " must be finite", line_of(node));
  return v;
}

std::uint64_t count_of(const YAML::Node& node, std::string_view key) {
  if (node.IsScalar() && !node.Scalar().empty() && node.Scalar().front() == '-') {
    throw ConfigError(std::string(key) + " must be a nonnegative integer, got '" + node.Scalar() +
                          "'",
                      line_of(node));
  }
  return scalar_as<std::uint64_t>(node, key, "a nonnegative integer");
}

DriftSpec drift_of(const YAML::Node& node) {
  if (node.IsScalar()) {
    try {
      return named_drift(node.Scalar());
    } catch (const ValidationError& e) {
      throw ConfigError(e.what(), line_of(node));
    }
  }
  if (!node.IsMap()) {
    throw ConfigError("drift must be a built-in name or {prefix: [...], tail: x}", line_of(node));
  }
  std::vector<double> prefix;
  std::optional<double> tail;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (key == "prefix") {
      if (!kv.second.IsSequence()) throw ConfigError("drift prefix must be a list", line_of(kv.second));
      for (const auto& item : kv.second) prefix.push_back(real_of(item, "drift prefix entry"));
    } else if (key == "tail") {
      tail = real_of(kv.second, "drift tail");
    } else {
      throw ConfigError("unknown drift field '" + key + "'", line_of(kv.first));
    }
  }
  if (!tail) throw ConfigError("drift needs a 'tail' value", line_of(node));
  return DriftSpec(std::move(prefix), *tail);
}

void fail(const std::string& message) { throw ConfigError(message); }

void require_bound(const DriftSpec& drift, double a, std::string_view label) {
  const double bound = stationary::a_lower_bound(drift);
  if (!(a > bound)) {
    fail(std::string(label) + " = " + io::format_double(a) +
         " violates the stationarity condition a > -2 inf_n mean(g_1..g_n), i.e. " +
         std::string(label) + " > " + io::format_double(bound));
  }
}

void require_stable(const DriftSpec& drift, std::size_t n) {
  if (!stationary::stability_check(drift, n)) {
    fail("drifts are not stable for N = " + std::to_string(n) +
         ": need mean(g_1..g_k) > mean(g_1..g_N) for all k < N");
  }
}

void require_time_grid(const ExperimentSpec& s, std::size_t min_trajectories) {
  if (!(s.horizon > 0.0)) fail("T must be > 0");
  if (!(s.dt > 0.0)) fail("dt must be > 0");
  if (s.dt > s.horizon) fail("dt must not exceed T");
  if (s.trajectories < min_trajectories) {
    fail("M must be >= " + std::to_string(min_trajectories));
  }
}

}  // namespace

std::string_view kind_name(Kind kind) { return schema_for(kind).name; }

std::optional<Kind> parse_kind(std::string_view name) {
  for (const auto& s : schemas()) {
    if (s.name == name) return s.kind;
  }
  return std::nullopt;
}

DriftSpec named_drift(std::string_view name) {
  if (name == "atlas") return DriftSpec::atlas();
  if (name == "driftless") return DriftSpec::driftless();
  if (name == "inverted-atlas") return DriftSpec::inverted_atlas();
  throw ValidationError("unknown drift spec '" + std::string(name) +
                        "' (expected atlas, driftless or inverted-atlas)");
}

nlohmann::json drift_to_json(const DriftSpec& drift) {
  return {{"prefix", drift.prefix()}, {"tail", drift.tail()}};
}

DriftSpec drift_from_json(const nlohmann::json& value) {
  if (value.is_string()) return named_drift(value.get<std::string>());
  if (!value.is_object()) throw ValidationError("drift spec must be a name or an object");
  for (const auto& [key, _] : value.items()) {
    if (key != "prefix" && key != "tail") {
      throw ValidationError("unknown drift field '" + key + "'");
    }
  }
  if (!value.contains("tail")) throw ValidationError("drift spec needs a 'tail' value");
  std::vector<double> prefix;
  if (value.contains("prefix")) prefix = value.at("prefix").get<std::vector<double>>();
  return DriftSpec(std::move(prefix), value.at("tail").get<double>());
}

void ExperimentSpec::validate() const {
  if (name.empty()) fail("experiment name must not be empty");
  if (!std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
      })) {
    fail("experiment name '" + name + "' may only use letters, digits, '-', '_' and '.'");
  }
  auto need = [&](const auto& field, std::string_view key) {
    if (!field) fail("missing required parameter '" + std::string(key) + "'");
  };

  switch (kind) {
    case Kind::kStationarityFinite:
    case Kind::kDriftIdentity:
    case Kind::kRankedDecomposition:
      need(particles, "N");
      if (*particles < 2) fail("N must be >= 2 (need at least 2 particles)");
      require_time_grid(*this, kind == Kind::kRankedDecomposition ? 1 : 10);
      require_stable(drift, *particles);
      break;
    case Kind::kStationarityApproximant:
    case Kind::kTheoremBDrift:
    case Kind::kConjecture2Exploration:
      need(a, "a");
      need(m, "m");
      if (*m < 2) fail("m must be >= 2");
      require_bound(drift, *a, "a");
      require_time_grid(*this, kind == Kind::kStationarityApproximant ? 10 : 2);
      if (kind == Kind::kStationarityApproximant) {
        if (ks_gaps == 0 || ks_gaps > *m * *m - 1) {
          fail("ks_gaps must be between 1 and m^2 - 1 = " + std::to_string(*m * *m - 1));
        }
        if (identity_cases == 0) fail("identity_cases must be >= 1");
      } else {
        if (ranks.empty()) fail("ranks must list at least one rank");
        for (std::size_t k : ranks) {
          if (k < 1 || k > *m * *m) {
            fail("rank " + std::to_string(k) + " outside 1..m^2 = " + std::to_string(*m * *m));
          }
        }
      }
      if (kind == Kind::kConjecture2Exploration) {
        sim::SimConfig grid;
        grid.horizon = horizon;
        grid.dt = dt;
        if (checkpoints == 0 || checkpoints > grid.steps()) {
          fail("checkpoints must be between 1 and the number of steps");
        }
      }
      break;
    case Kind::kGrowth:
      need(a, "a");
      need(depth, "n");
      need(runs, "runs");
      need(x_min, "x_min");
      need(x_max, "x_max");
      require_bound(drift, *a, "a");
      if (!(*a > 0.0)) fail("growth needs a > 0 (density grows like exp(a x))");
      if (*depth < 1 || *runs < 1) fail("n and runs must be >= 1");
      if (!(*x_min >= 0.0 && *x_max > *x_min)) fail("need 0 <= x_min < x_max");
      break;
    case Kind::kSingularity:
      need(a, "a");
      need(a_alt, "a_alt");
      need(depth, "n");
      need(runs, "runs");
      require_bound(drift, *a, "a");
      require_bound(drift, *a_alt, "a_alt");
      if (!(*a > 0.0 && *a_alt > 0.0)) fail("singularity needs a > 0 and a_alt > 0");
      if (*a == *a_alt) fail("a and a_alt must differ");
      if (*depth < 1 || *runs < 1) fail("n and runs must be >= 1");
      break;
    case Kind::kRbmResidual:
      need(a, "a");
      need(depth, "n");
      if (*depth < 3) fail("n must be >= 3");
      break;
  }
}

std::vector<ExperimentSpec> parse_config(std::string_view text,
                                         std::optional<std::filesystem::path> output_root) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error: " + e.msg, e.mark.line);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping with an 'experiments' list", 0);

  std::filesystem::path out_root = "results";
  YAML::Node list;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key == "output") {
      out_root = scalar_as<std::string>(kv.second, "output", "a path");
    } else if (key == "experiments") {
      list = kv.second;
    } else {
      throw ConfigError("unknown top-level key '" + key + "'", line_of(kv.first));
    }
  }
  if (output_root) out_root = *output_root;
  if (!list || !list.IsSequence()) {
    throw ConfigError("config needs an 'experiments' list", line_of(root));
  }

  std::vector<ExperimentSpec> specs;
  std::set<std::string> seen;
  for (const auto& node : list) {
    if (!node.IsMap()) throw ConfigError("each experiment must be a mapping", line_of(node));
    const int line = line_of(node);

    const YAML::Node kind_node = node["kind"];
    if (!kind_node) throw ConfigError("experiment is missing 'kind'", line);
    const auto kind_text = scalar_as<std::string>(kind_node, "kind", "a string");
    const auto kind = parse_kind(kind_text);
    if (!kind) throw ConfigError("unknown experiment kind '" + kind_text + "'", line_of(kind_node));
    const KindSchema& schema = schema_for(*kind);

    ExperimentSpec spec;
    spec.kind = *kind;
    std::set<std::string> present;
    bool has_drift = false, has_seed = false, has_name = false;

    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      present.insert(key);
      const bool kind_key =
          std::find(schema.required.begin(), schema.required.end(), key) != schema.required.end() ||
          std::find(schema.optional.begin(), schema.optional.end(), key) != schema.optional.end();
      if (key == "kind") continue;
      if (key == "name") {
        spec.name = scalar_as<std::string>(v, "name", "a string");
        has_name = true;
      } else if (key == "drift") {
        spec.drift = drift_of(v);
        has_drift = true;
      } else if (key == "seed") {
        spec.seed = count_of(v, "seed");
        has_seed = true;
      } else if (!kind_key) {
        throw ConfigError("parameter '" + key + "' is not allowed for kind " + kind_text,
                          line_of(kv.first));
      } else if (key == "a") {
        spec.a = real_of(v, key);
      } else if (key == "a_alt") {
        spec.a_alt = real_of(v, key);
      } else if (key == "N") {
        spec.particles = count_of(v, key);
      } else if (key == "m") {
        spec.m = count_of(v, key);
      } else if (key == "n") {
        spec.depth = count_of(v, key);
      } else if (key == "runs") {
        spec.runs = count_of(v, key);
      } else if (key == "T") {
        spec.horizon = real_of(v, key);
      } else if (key == "dt") {
        spec.dt = real_of(v, key);
      } else if (key == "M") {
        spec.trajectories = count_of(v, key);
      } else if (key == "ks_gaps") {
        spec.ks_gaps = count_of(v, key);
      } else if (key == "identity_cases") {
        spec.identity_cases = count_of(v, key);
      } else if (key == "random_specs") {
        spec.random_specs = count_of(v, key);
      } else if (key == "x_min") {
        spec.x_min = real_of(v, key);
      } else if (key == "x_max") {
        spec.x_max = real_of(v, key);
      } else if (key == "checkpoints") {
        spec.checkpoints = count_of(v, key);
      } else if (key == "ranks") {
        if (!v.IsSequence()) throw ConfigError("ranks must be a list", line_of(v));
        for (const auto& r : v) spec.ranks.push_back(count_of(r, "rank"));
      }
    }
    if (!has_name) throw ConfigError("experiment is missing 'name'", line);
    if (!has_drift) throw ConfigError("experiment '" + spec.name + "' is missing 'drift'", line);
    if (!has_seed) throw ConfigError("experiment '" + spec.name + "' is missing 'seed'", line);
    for (auto req : schema.required) {
      if (!present.count(std::string(req))) {
        throw ConfigError("experiment '" + spec.name + "' is missing required parameter '" +
                              std::string(req) + "'",
                          line);
      }
    }
    if (!seen.insert(spec.name).second) {
      throw ConfigError("duplicate experiment name '" + spec.name + "'", line);
    }
    try {
      spec.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("experiment '" + spec.name + "': " + e.what(), line);
    } catch (const ValidationError& e) {
      throw ConfigError("experiment '" + spec.name + "': " + e.what(), line);
    }
    spec.output = out_root / spec.name;
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<ExperimentSpec> load_config(const std::filesystem::path& path,
                                        std::optional<std::filesystem::path> output_root) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(output_root));
}

nlohmann::json config_echo(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["kind"] = std::string(kind_name(spec.kind));
  j["drift"] = drift_to_json(spec.drift);
  j["seed"] = spec.seed;
  j["exploratory"] = spec.exploratory();
  const KindSchema& schema = schema_for(spec.kind);
  auto has = [&](std::string_view key) {
    return std::find(schema.required.begin(), schema.required.end(), key) != schema.required.end() ||
           std::find(schema.optional.begin(), schema.optional.end(), key) != schema.optional.end();
  };
  if (spec.a) j["a"] = *spec.a;
  if (spec.a_alt) j["a_alt"] = *spec.a_alt;
  if (spec.particles) j["N"] = *spec.particles;
  if (spec.m) j["m"] = *spec.m;
  if (spec.depth) j["n"] = *spec.depth;
  if (spec.runs) j["runs"] = *spec.runs;
  if (has("T")) {
    j["T"] = spec.horizon;
    j["dt"] = spec.dt;
    j["M"] = spec.trajectories;
  }
  if (has("ks_gaps")) j["ks_gaps"] = spec.ks_gaps;
  if (has("identity_cases")) j["identity_cases"] = spec.identity_cases;
  if (has("random_specs")) j["random_specs"] = spec.random_specs;
  if (spec.x_min) j["x_min"] = *spec.x_min;
  if (spec.x_max) j["x_max"] = *spec.x_max;
  if (has("ranks")) j["ranks"] = spec.ranks;
  if (has("checkpoints")) j["checkpoints"] = spec.checkpoints;
  j["output"] = spec.output.generic_string();
  return j;
}

}  // namespace rankbm::experiments
