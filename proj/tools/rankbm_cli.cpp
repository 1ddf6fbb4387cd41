// rankbm: rates, gap samples and the verification suite from the command line.
//
// Exit codes: 0 success, 1 verification failure or compute error,
// 2 usage or config error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rankbm/experiments.hpp"
#include "rankbm/io.hpp"
#include "rankbm/stationary_laws.hpp"

namespace {

using namespace rankbm;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LawOptions {
  std::string drift = "atlas";
  std::optional<double> a;
  std::optional<std::size_t> n;
  std::optional<std::size_t> finite;  // --N
  std::optional<std::size_t> m;
  bool allow_degenerate = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--drift-spec", drift,
                   "atlas | driftless | inverted-atlas | JSON {\"prefix\": [...], \"tail\": x}")
        ->capture_default_str();
    cmd.add_option("--a", a, "stationarity parameter of the infinite-system law");
    cmd.add_option("--n", n, "number of gaps of the infinite-system law (default 1000)");
    cmd.add_option("--N", finite, "particle count of the finite system");
    cmd.add_option("--m", m, "approximant index (needs --a; m^2 particles)");
    cmd.add_flag("--allow-degenerate", allow_degenerate, "admit a = 0 when the law exists there");
  }

  DriftSpec spec() const {
    if (!drift.empty() && (drift.front() == '{' || drift.front() == '"')) {
      json parsed;
      try {
        parsed = json::parse(drift);
      } catch (const json::exception& e) {
        throw UsageError(std::string("--drift-spec is not valid JSON: ") + e.what());
      }
      return experiments::drift_from_json(parsed);
    }
    return experiments::named_drift(drift);
  }

  // Resolved law plus its description for the config echo.
  std::pair<GapLaw, json> resolve() const {
    const DriftSpec d = spec();
    json echo = {{"drift", experiments::drift_to_json(d)}};
    if (finite) {
      if (a || m || n) throw UsageError("--N cannot be combined with --a, --n or --m");
      echo["N"] = *finite;
      return {stationary::finite_stationary_rates(d, *finite), echo};
    }
    if (!a) throw UsageError("choose a law: --N <particles>, --a <a> [--n <gaps>] or --a <a> --m <m>");
    echo["a"] = *a;
    if (m) {
      if (n) throw UsageError("--n cannot be combined with --m");
      echo["m"] = *m;
      return {stationary::approximant(d, *a, *m).law(), echo};
    }
    const std::size_t depth = n.value_or(stationary::kDefaultDepth);
    echo["n"] = depth;
    echo["allow_degenerate"] = allow_degenerate;
    return {stationary::infinite_rates(d, *a, depth, allow_degenerate), echo};
  }
};

void write_echo(const std::optional<std::string>& out, const json& echo) {
  const std::string text = echo.dump(2) + "\n";
  if (out) {
    io::write_file(*out + ".config-echo", text);
  } else {
    std::cerr << text;
  }
}

int cmd_rates(const LawOptions& law_opts, const std::optional<std::string>& out) {
  auto [law, echo] = law_opts.resolve();
  echo["command"] = "rates";
  if (out) {
    std::ostringstream csv;
    stationary::write_law_csv(law, csv);
    io::write_file(*out, csv.str());
    echo["out"] = *out;
    write_echo(out, echo);
  } else {
    std::cout << io::join(law.rates(), ",") << "\n";
  }
  return 0;
}

int cmd_sample(const LawOptions& law_opts, std::size_t count, std::uint64_t seed,
               std::uint64_t stream, const std::optional<std::string>& out) {
  if (count == 0) throw UsageError("--count must be >= 1");
  auto [law, echo] = law_opts.resolve();
  const Matrix draws = stationary::sample_gaps(law, count, {seed, stream});
  std::string csv;
  for (std::size_t k = 0; k < draws.cols; ++k) {
    if (k) csv += ',';
    csv += "gap_" + std::to_string(k + 1);
  }
  csv += '\n';
  for (std::size_t r = 0; r < draws.rows; ++r) {
    const auto row = draws.row(r);
    csv += io::join({row.begin(), row.end()}, ",");
    csv += '\n';
  }
  echo["command"] = "sample";
  echo["count"] = count;
  echo["seed"] = seed;
  echo["stream"] = stream;
  if (out) {
    io::write_file(*out, csv);
    echo["out"] = *out;
    write_echo(out, echo);
  } else {
    std::cout << csv;
    write_echo(out, echo);
  }
  return 0;
}

int cmd_verify(const std::string& config, const std::optional<std::string>& out,
               const std::optional<std::string>& only) {
  std::optional<std::filesystem::path> root;
  if (out) root = *out;
  const auto specs = experiments::load_config(config, root);
  const auto reports = experiments::run_suite(specs, only);

  std::size_t failed = 0;
  std::cout << std::left << std::setw(34) << "experiment" << std::setw(28) << "kind"
            << "verdict\n";
  for (const auto& r : reports) {
    std::size_t bad = 0;
    for (const auto& t : r.tests) bad += t.pass ? 0 : 1;
    std::string verdict = r.exploratory ? "exploratory" : (r.pass() ? "PASS" : "FAIL");
    if (!r.exploratory && bad) verdict += " (" + std::to_string(bad) + "/" +
                                          std::to_string(r.tests.size()) + " tests failed)";
    std::cout << std::setw(34) << r.experiment << std::setw(28)
              << experiments::kind_name(r.kind) << verdict << "\n";
    for (const auto& t : r.tests) {
      if (!t.pass && !r.exploratory) {
        std::cout << "    " << t.name << ": statistic " << io::format_double(t.statistic)
                  << ", threshold " << io::format_double(t.threshold) << "\n";
      }
    }
    if (!r.pass()) ++failed;
  }
  std::cout << failed << " failed experiment(s)\n";
  return failed ? kExitFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-based Brownian particle systems: stationary laws, sampling, verification"};
  app.require_subcommand(1);

  LawOptions rates_law;
  std::optional<std::string> rates_out;
  auto* rates = app.add_subcommand("rates", "print the gap rates of a stationary law");
  rates_law.add_to(*rates);
  rates->add_option("--out", rates_out, "write k,lambda_k,mean_k CSV here instead of stdout");

  LawOptions sample_law;
  std::size_t count = 0;
  std::uint64_t seed = 0, stream = 0;
  std::optional<std::string> sample_out;
  auto* sample = app.add_subcommand("sample", "draw independent gap configurations");
  sample_law.add_to(*sample);
  sample->add_option("--count", count, "number of configurations")->required();
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample->add_option("--stream", stream, "RNG stream")->capture_default_str();
  sample->add_option("--out", sample_out, "CSV output path (default stdout)");

  std::string config;
  std::optional<std::string> verify_out, only;
  auto* verify = app.add_subcommand("verify", "run an experiment config");
  verify->add_option("--config", config, "experiment config file")->required();
  verify->add_option("--out", verify_out, "output root (overrides the config's)");
  verify->add_option("--only", only, "run only this experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*rates) return cmd_rates(rates_law, rates_out);
    if (*sample) return cmd_sample(sample_law, count, seed, stream, sample_out);
    return cmd_verify(config, verify_out, only);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
