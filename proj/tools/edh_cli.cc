// Command-line driver for scenarios, sweeps, attacks and report export.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edh/bench/config.h"
#include "edh/bench/report.h"
#include "edh/bench/scenario.h"
#include "edh/ledger/ledger_io.h"
#include "json.hpp"

namespace {

using edh::ErrorKind;

int EmitError(const absl::Status& status) {
  const std::optional<ErrorKind> kind = edh::ErrorKindOf(status);
  nlohmann::ordered_json j{
      {"error",
       {{"kind", kind ? std::string(edh::ErrorKindName(*kind)) : "Internal"},
        {"code", absl::StatusCodeToString(status.code())},
        {"message", std::string(status.message())}}}};
  std::cerr << j.dump() << '\n';
  return 1;
}

absl::StatusOr<edh::ScenarioConfig> LoadConfig(
    const std::string& path, std::optional<std::uint64_t> seed) {
  edh::ScenarioConfig cfg;
  if (!path.empty()) {
    EDH_ASSIGN_OR_RETURN(cfg, edh::LoadScenarioConfig(path));
  }
  if (seed) cfg.workload.seed = *seed;
  return cfg;
}

absl::Status InitLedger(const edh::ScenarioConfig& cfg, const std::string& out) {
  edh::ScenarioConfig writes_only = cfg;
  writes_only.workload.n_queries = 0;
  writes_only.workload.repeats.reset();
  writes_only.workload.repeat_ratio = 0.0;
  writes_only.workload.requesters.clear();
  if (writes_only.workload.epsilon.kind == edh::EpsilonStrategy::Kind::kCalibratedRange) {
    writes_only.workload.epsilon.kind = edh::EpsilonStrategy::Kind::kRange;
  }
  EDH_ASSIGN_OR_RETURN(edh::Workload workload,
                       edh::GenerateWorkload(writes_only.workload));
  EDH_ASSIGN_OR_RETURN(edh::ModeRun run,
                       edh::RunMode(writes_only, workload, edh::NoiseMode::kEdh));
  std::ostringstream ledger;
  EDH_RETURN_IF_ERROR(edh::ExportLedgerJsonl(cfg.topology.channel_id,
                                             cfg.workload.epsilon_t, run.chain,
                                             ledger));
  if (out.empty()) {
    std::cout << ledger.str();
    return absl::OkStatus();
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  file << ledger.str();
  file.close();
  if (!file) {
    return edh::MakeError(ErrorKind::kIoFailure, "cannot write " + out);
  }
  nlohmann::ordered_json j{
      {"ledger", out},
      {"channel_id", cfg.topology.channel_id},
      {"height", run.chain.back().height},
      {"records", run.world.records().size()},
      {"tip_hash", edh::ToHex(run.chain.back().block_hash)},
      {"replicas_consistent", run.replicas_consistent}};
  std::cout << j.dump(2) << '\n';
  return absl::OkStatus();
}

absl::Status Run(const edh::ScenarioConfig& cfg, const std::string& out) {
  EDH_ASSIGN_OR_RETURN(edh::ScenarioReport report, edh::RunScenario(cfg));
  if (!out.empty()) EDH_RETURN_IF_ERROR(edh::ExportReport(report, out));
  std::cout << edh::SummaryJson(report);
  return absl::OkStatus();
}

absl::Status Sweep(const edh::ScenarioConfig& cfg, std::vector<double> epsilons,
                   const std::string& out) {
  if (epsilons.empty()) epsilons = cfg.sweep_epsilon_t;
  if (epsilons.empty()) {
    return edh::MakeError(ErrorKind::kConfigInvalid,
                          "no epsilon_t values: pass --epsilon-list");
  }
  for (double e : epsilons) {
    if (!(e > 0.0)) {
      return edh::MakeError(ErrorKind::kConfigInvalid,
                            "epsilon_t values must be positive");
    }
  }
  EDH_ASSIGN_OR_RETURN(std::vector<edh::SweepPoint> points,
                       edh::RunErrorSweep(cfg, epsilons));
  if (!out.empty()) EDH_RETURN_IF_ERROR(edh::ExportSweep(points, out));
  std::cout << edh::SweepJson(points);
  return absl::OkStatus();
}

absl::Status Attack(const edh::ScenarioConfig& cfg, const std::string& kind_name,
                    const std::string& mode_name) {
  EDH_ASSIGN_OR_RETURN(edh::AttackKind kind, edh::ParseAttackKind(kind_name));
  std::vector<edh::NoiseMode> modes;
  if (mode_name == "both") {
    modes = {edh::NoiseMode::kNaive, edh::NoiseMode::kEdh};
  } else {
    EDH_ASSIGN_OR_RETURN(edh::NoiseMode mode, edh::ParseNoiseMode(mode_name));
    modes = {mode};
  }
  EDH_ASSIGN_OR_RETURN(edh::Workload workload,
                       edh::GenerateWorkload(cfg.workload));
  edh::WorldState data;
  for (const edh::WriteTransaction& w : workload.writes) {
    EDH_RETURN_IF_ERROR(data.ApplyWrite(w, 1));
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (edh::NoiseMode mode : modes) {
    EDH_ASSIGN_OR_RETURN(edh::AttackReport report,
                         edh::RunAttack(cfg, workload, data, kind, mode));
    out.push_back({{"mode", std::string(edh::NoiseModeName(mode))},
                   {"report", nlohmann::ordered_json::parse(
                                  edh::AttackReportToJson(report))}});
  }
  std::cout << out.dump(2) << '\n';
  return absl::OkStatus();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving ledger simulator and benchmark harness"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for all randomness (overrides config)");

  std::string config_path;
  std::string out;

  auto* init = app.add_subcommand("init-ledger",
                                  "Commit the workload's writes and export the ledger");
  init->add_option("config", config_path, "Scenario config (JSON)")->required();
  init->add_option("--out", out, "JSON-lines ledger file (default: stdout)");

  auto* run = app.add_subcommand("run", "Run naive and EDH modes and summarize");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--out", out, "Also export the full report to this directory");

  std::vector<double> epsilons;
  auto* sweep = app.add_subcommand("sweep", "Relative error versus epsilon_t");
  sweep->add_option("--epsilon-list", epsilons, "epsilon_t values")
      ->delimiter(',');
  sweep->add_option("--config", config_path, "Scenario config (JSON)");
  sweep->add_option("--out", out, "Directory for error_vs_epsilon.csv");

  std::string kind;
  std::string mode = "both";
  auto* attack = app.add_subcommand("attack", "Run one adversary strategy");
  attack->add_option("--kind", kind, "linking|composition|averaging")
      ->required()
      ->check(CLI::IsMember({"linking", "composition", "averaging"}));
  attack->add_option("--mode", mode, "naive|edh|both");
  attack->add_option("--config", config_path, "Scenario config (JSON)");

  auto* exp = app.add_subcommand("export", "Run a scenario and write all reports");
  exp->add_option("--out", out, "Output directory")->required();
  exp->add_option("--config", config_path, "Scenario config (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json j{{"error",
                              {{"kind", "UsageError"},
                               {"code", "INVALID_ARGUMENT"},
                               {"message", e.what()}}}};
    std::cerr << j.dump() << '\n';
    return 2;
  }

  absl::StatusOr<edh::ScenarioConfig> cfg = LoadConfig(config_path, seed);
  if (!cfg.ok()) return EmitError(cfg.status());

  absl::Status status;
  if (*init) {
    status = InitLedger(*cfg, out);
  } else if (*run) {
    status = Run(*cfg, out);
  } else if (*sweep) {
    status = Sweep(*cfg, epsilons, out);
  } else if (*attack) {
    status = Attack(*cfg, kind, mode);
  } else if (*exp) {
    absl::StatusOr<edh::ScenarioReport> report = edh::RunScenario(*cfg);
    status = report.ok() ? edh::ExportReport(*report, out) : report.status();
    if (status.ok()) std::cout << edh::SummaryJson(*report);
  }
  if (!status.ok()) return EmitError(status);
  return 0;
}
