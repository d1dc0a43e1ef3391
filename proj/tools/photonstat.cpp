#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "photonstat/errors.hpp"
#include "photonstat/experiment.hpp"
#include "photonstat/scenario.hpp"
#include "photonstat/table.hpp"

namespace {

using namespace photonstat;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kCapacity = 3, kValidation = 4 };

struct Args {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> samples;
  std::string out;
  bool validate = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string figure;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config_path, "scenario JSON file")->check(CLI::ExistingFile);
  sub->add_option("--seed", a.seed, "ensemble seed (overrides the config)");
  sub->add_option("--out", a.out, "CSV output path; a .json sidecar is written next to it");
  sub->add_flag("--validate", a.validate, "append an independent evaluation and fail on discrepancy");
  sub->add_option("--realizations", a.realizations, "disorder realizations")->check(CLI::PositiveNumber);
  sub->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int run(const std::string& command, Args& a) {
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  ScenarioConfig config;
  if (!a.config_path.empty())
    config = load_config(a.config_path);
  else if (command != "figure")
    throw ConfigError("--config", "required for " + command);
  nlohmann::json overrides = nlohmann::json::object();
  if (a.seed) {
    config.ensemble.seed = *a.seed;
    overrides["seed"] = *a.seed;
  }
  if (a.realizations) {
    config.realizations = *a.realizations;
    overrides["realizations"] = *a.realizations;
  }
  if (a.samples) {
    if (*a.samples < 2) throw ConfigError("--samples", "must be >= 2");
    config.samples = *a.samples;
    overrides["samples"] = *a.samples;
  }
  const RunOptions options{a.threads, a.validate};

  ResultTable table;
  if (command == "correlate")
    table = run_correlate(config, options);
  else if (command == "classical")
    table = run_classical(config, options);
  else if (command == "deviation")
    table = run_deviation(config, options);
  else if (command == "conditions")
    table = run_conditions(config, options);
  else
    table = run_figure(a.figure, config, options);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (a.out.empty()) {
    write_csv(std::cout, table);
  } else {
    std::ofstream csv(a.out, std::ios::binary);
    if (!csv) throw ConfigError("--out", "cannot write " + a.out);
    write_csv(csv, table);
    nlohmann::json side;
    side["tool"] = "photonstat";
    side["version"] = PHOTONSTAT_VERSION;
    side["command"] = command;
    if (command == "figure") side["figure"] = a.figure;
    side["config"] = config.source;
    side["config_path"] = a.config_path;
    side["overrides"] = overrides;
    side["threads"] = a.threads;
    side["validate"] = a.validate;
    side["columns"] = table.columns();
    side["rows"] = table.size();
    side["summary"] = table.summary;
    side["started_at"] = started;
    side["wall_clock_seconds"] = seconds;
    std::ofstream js(sidecar_path(a.out));
    js << side.dump(2) << "\n";
  }

  if (table.summary.contains(kSummaryCapacityRows) && table.summary[kSummaryCapacityRows].get<long long>() > 0) {
    std::cerr << "photonstat: " << table.summary[kSummaryCapacityRows].get<long long>()
              << " row(s) exceeded an evaluation cap\n";
    return kCapacity;
  }
  if (a.validate && table.summary.contains(kSummaryValidationPassed)) {
    std::cerr << "photonstat: validation max discrepancy " << table.summary[kSummaryMaxDiscrepancy].get<double>()
              << " over " << table.summary["validated_rows"].get<std::size_t>() << " row(s)\n";
    if (!table.summary[kSummaryValidationPassed].get<bool>()) return kValidation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon correlation functions of independent emitters"};
  app.set_version_flag("--version", std::string(PHOTONSTAT_VERSION));
  app.require_subcommand(1);
  Args args;
  std::string command;
  auto* correlate = app.add_subcommand("correlate", "quantum g^(m,n) over a sweep");
  auto* classical = app.add_subcommand("classical", "classical-oscillator g^(m,n) over a sweep");
  auto* deviation = app.add_subcommand("deviation", "deviation from the Gaussian moment theorem");
  auto* conditions = app.add_subcommand("conditions", "finite-N and spin-coherence condition margins");
  auto* figure = app.add_subcommand("figure", "figure data: fig1, fig2, fig3, fig4");
  for (auto* sub : {correlate, classical, deviation, conditions, figure}) add_common(sub, args);
  classical->add_option("--samples", args.samples, "Monte Carlo phase draws per row");
  figure->add_option("id", args.figure, "figure id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  for (auto* sub : app.get_subcommands()) command = sub->get_name();

  try {
    return run(command, args);
  } catch (const ConfigError& e) {
    std::cerr << "photonstat: config error: " << e.what() << "\n";
    return kConfig;
  } catch (const CapacityError& e) {
    std::cerr << "photonstat: capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const DomainError& e) {
    std::cerr << "photonstat: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "photonstat: invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "photonstat: error: " << e.what() << "\n";
    return kFailure;
  }
}
