// rupert: command-line front end.
//
// Exit status: 0 success, 1 bad arguments or malformed input, 2 check gave
// up (EXHAUSTED), 3 a passage was found (INVALID), 4 corrupt checkpoint,
// 5 search interrupted with a resumable checkpoint.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rupert/certify.hpp"
#include "rupert/cli_support.hpp"
#include "rupert/error.hpp"
#include "rupert/nieuwland.hpp"
#include "rupert/polyhedron.hpp"
#include "rupert/search.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace rupert;
using namespace rupert::cli;

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }

json check_config_json(const CheckConfig& c) {
  return {{"delta_init", c.delta_init},
          {"decay", c.decay},
          {"threshold_b", c.threshold_b},
          {"buffer_mode", to_string(c.buffer_mode)}};
}

struct CertifyArgs {
  std::string poly = "stellated:0.55";
  std::string point;
  CheckConfig check;
  std::string buffer_mode = "norm-scaled";
  bool no_canonicalize = false;
};

int run_certify(const CertifyArgs& a) {
  const Polyhedron poly = parse_poly_spec(a.poly);
  CheckConfig cfg = a.check;
  cfg.buffer_mode = parse_buffer_mode(a.buffer_mode);
  cfg.validate();
  const ParamPoint given = parse_point(a.point);
  const ParamPoint point = a.no_canonicalize ? given : canonicalize(given, poly);
  const CertOutcome out = check(point, poly, cfg);

  json j = outcome_json(out, point);
  j["polyhedron"] = poly.label();
  j["config"] = check_config_json(cfg);
  std::cout << j.dump(2) << '\n';
  switch (out.kind) {
    case CertKind::kRuledOut: return kExitOk;
    case CertKind::kExhausted: return kExitExhausted;
    case CertKind::kInvalid: return kExitInvalid;
  }
  return kExitOk;
}

struct SearchArgs {
  std::string poly = "stellated:0.55";
  std::string min_side = "pi/8";
  std::optional<unsigned> workers;
  std::string out;
  std::optional<std::string> resume;
  std::optional<std::string> checkpoint;
  std::optional<std::uint64_t> stop_after;
  std::string buffer_mode = "norm-scaled";
  std::optional<std::string> csv;
  std::optional<std::string> roots;
  CheckConfig check;
};

int run_search_cmd(const SearchArgs& a, int argc, const char* const* argv) {
  const Polyhedron poly = parse_poly_spec(a.poly);
  SearchConfig cfg;
  cfg.min_side = parse_angle(a.min_side);
  cfg.check = a.check;
  cfg.check.buffer_mode = parse_buffer_mode(a.buffer_mode);
  cfg.workers = resolve_workers(a.workers);
  if (a.roots) cfg.roots = parse_int_list(*a.roots);
  cfg.results_path = a.out;
  cfg.checkpoint_path = a.checkpoint ? fs::path(*a.checkpoint) : fs::path(a.out + ".ckpt");
  cfg.stop_after = a.stop_after;
  cfg.cancel = &g_cancel;
  cfg.validate();

  RunManifest manifest = start_manifest(argc, argv, poly);
  json roots = json::array();
  for (int r : cfg.roots) roots.push_back(r);
  manifest.config = {{"min_side", cfg.min_side},
                     {"workers", cfg.workers},
                     {"roots", roots},
                     {"check", check_config_json(cfg.check)},
                     {"results_path", cfg.results_path.string()},
                     {"checkpoint_path", cfg.checkpoint_path.string()}};

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::optional<fs::path> resume;
  if (a.resume) resume = fs::path(*a.resume);
  const SearchState state = run_search(poly, cfg, resume);
  manifest.finished_at = utc_timestamp();

  const CoverageReport report = coverage_report(state);
  json j = json::parse(report.to_json());
  j["complete"] = state.complete();
  j["interrupted"] = state.interrupted;
  j["processed"] = state.processed;
  j["numeric_failures"] = state.numeric_failures;
  json invalid = json::array();
  for (const InvalidPoint& p : state.invalid_points) {
    invalid.push_back({{"point", p.point.to_array()}, {"passage_scale", p.passage_scale}});
  }
  j["invalid_points"] = invalid;
  j["results"] = state.complete() ? cfg.results_path.string() : cfg.results_path.string() + ".part";
  if (state.interrupted) j["checkpoint"] = cfg.checkpoint_path.string();
  j["manifest"] = manifest.to_json();

  write_file_atomic(a.out + ".manifest.json", manifest.to_json().dump(2) + "\n");
  if (a.csv) write_file_atomic(*a.csv, report.depth_csv());
  std::cout << j.dump(2) << '\n';

  if (!state.invalid_points.empty()) {
    std::cerr << "rupert: " << state.invalid_points.size()
              << " passage(s) found; see invalid_points\n";
    return kExitInvalid;
  }
  if (state.interrupted) {
    std::cerr << "rupert: interrupted; resume with --resume " << cfg.checkpoint_path.string() << '\n';
    return kExitInterrupted;
  }
  return kExitOk;
}

int run_report(const std::string& in_path, const std::optional<std::string>& csv) {
  std::ifstream in(in_path);
  if (!in) throw InvalidParameter("cannot open " + in_path);
  const RecordAudit audit = audit_records(in);
  json j = json::parse(audit.report.to_json());
  j.erase("wall_time_seconds");
  j["records"] = audit.records;
  j["complete"] = audit.complete;
  j["volume_conserved"] = !audit.overlap;
  j["problems"] = audit.problems;
  j["warnings"] = audit.warnings;
  if (csv) write_file_atomic(*csv, audit.report.depth_csv());
  std::cout << j.dump(2) << '\n';
  for (const std::string& w : audit.warnings) std::cerr << "warning: " << w << '\n';
  for (const std::string& p : audit.problems) std::cerr << "error: " << p << '\n';
  return audit.overlap ? kExitUsage : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rupert passage search and non-passage certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "Check one orientation pair");
  certify->add_option("--poly", ca.poly, "cube | stellated:<a> | file:<path>")->capture_default_str();
  certify->add_option("--point", ca.point, "alpha,theta,phi,theta',phi' (radians; pi/64 style allowed)")
      ->required();
  certify->add_option("--threshold", ca.check.threshold_b, "Give up once delta falls to this")
      ->capture_default_str();
  certify->add_option("--delta-init", ca.check.delta_init)->capture_default_str();
  certify->add_option("--decay", ca.check.decay)->capture_default_str();
  certify->add_option("--buffer-mode", ca.buffer_mode, "norm-scaled | paper-literal")->capture_default_str();
  certify->add_flag("--no-canonicalize", ca.no_canonicalize, "Check the point exactly as given");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Orthtree search over the reduced parameter space");
  search->add_option("--poly", sa.poly)->capture_default_str();
  search->add_option("--min-side", sa.min_side, "Boxes smaller than this are not split")->capture_default_str();
  search->add_option("--workers", sa.workers, "Default: RUPERT_WORKERS or hardware threads");
  search->add_option("--out", sa.out, "Results file (JSON lines)")->required();
  search->add_option("--resume", sa.resume, "Checkpoint to resume from");
  search->add_option("--checkpoint", sa.checkpoint, "Checkpoint path (default <out>.ckpt)");
  search->add_option("--stop-after", sa.stop_after, "Checkpoint and stop after this many boxes");
  search->add_option("--buffer-mode", sa.buffer_mode)->capture_default_str();
  search->add_option("--delta-init", sa.check.delta_init)->capture_default_str();
  search->add_option("--decay", sa.check.decay)->capture_default_str();
  search->add_option("--csv", sa.csv, "Coverage-by-depth CSV");
  search->add_option("--roots", sa.roots, "Comma-separated root box indices 0..31");

  std::string report_in;
  std::optional<std::string> report_csv;
  auto* report = app.add_subcommand("report", "Recompute a report from a results file");
  report->add_option("--in", report_in)->required();
  report->add_option("--csv", report_csv, "Coverage-by-depth CSV");

  std::string passage_poly = "cube";
  std::uint64_t passage_budget = 100000, passage_seed = 0;
  std::optional<unsigned> passage_workers;
  auto* passage = app.add_subcommand("passage", "Search for a passage by direct optimization");
  passage->add_option("--poly", passage_poly)->capture_default_str();
  passage->add_option("--budget", passage_budget, "Objective evaluations")->capture_default_str();
  passage->add_option("--seed", passage_seed)->capture_default_str();
  passage->add_option("--workers", passage_workers);

  double sweep_from = 0.5, sweep_to = 0.6, sweep_step = 0.005;
  std::uint64_t sweep_budget = 100000, sweep_seed = 0;
  std::optional<unsigned> sweep_workers;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Nieuwland estimates for stellated tetrahedra");
  sweep->add_option("--from", sweep_from)->capture_default_str();
  sweep->add_option("--to", sweep_to)->capture_default_str();
  sweep->add_option("--step", sweep_step)->capture_default_str();
  sweep->add_option("--budget", sweep_budget)->capture_default_str();
  sweep->add_option("--seed", sweep_seed)->capture_default_str();
  sweep->add_option("--workers", sweep_workers);
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*certify) return run_certify(ca);
    if (*search) return run_search_cmd(sa, argc, argv);
    if (*report) return run_report(report_in, report_csv);
    if (*passage) {
      const Polyhedron poly = parse_poly_spec(passage_poly);
      PassageSearchOptions opts;
      opts.workers = resolve_workers(passage_workers);
      const PassageCandidate c = find_passage(poly, passage_budget, passage_seed, opts);
      json j = candidate_json(c);
      j["replay_ok"] = replay_candidate(poly, c);
      RunManifest m = start_manifest(argc, argv, poly);
      m.config = {{"budget", passage_budget}, {"workers", opts.workers}};
      m.seeds = {passage_seed};
      m.finished_at = utc_timestamp();
      j["manifest"] = m.to_json();
      std::cout << j.dump(2) << '\n';
      return kExitOk;
    }
    if (*sweep) {
      PassageSearchOptions opts;
      opts.workers = resolve_workers(sweep_workers);
      const Polyhedron first = stellated_tetrahedron(sweep_from);
      RunManifest m = start_manifest(argc, argv, first);
      m.poly_label = "stellated:" + std::to_string(sweep_from) + ".." + std::to_string(sweep_to);
      m.config = {{"from", sweep_from}, {"to", sweep_to}, {"step", sweep_step},
                  {"budget", sweep_budget}, {"workers", opts.workers}};
      m.seeds = {sweep_seed};
      const auto rows = nieuwland_sweep(sweep_from, sweep_to, sweep_step, sweep_budget, sweep_seed, opts);
      m.finished_at = utc_timestamp();
      const std::string csv = sweep_csv(rows);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        write_file_atomic(sweep_out, csv);
        write_file_atomic(sweep_out + ".manifest.json", m.to_json().dump(2) + "\n");
      }
      return kExitOk;
    }
  } catch (const CheckpointCorrupt& e) {
    std::cerr << "rupert: corrupt checkpoint: " << e.what() << '\n';
    return kExitCheckpoint;
  } catch (const Error& e) {
    std::cerr << "rupert: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rupert: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
