#pragma once

// Pieces of the command-line front end that are worth testing without
// spawning the binary: argument mini-languages, manifests, JSON views of
// results and atomic file output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rupert/certify.hpp"
#include "rupert/nieuwland.hpp"
#include "rupert/polyhedron.hpp"

namespace rupert::cli {

inline constexpr const char* kVersion = "1.0.0";

// Exit statuses shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitExhausted = 2,
  kExitInvalid = 3,
  kExitCheckpoint = 4,
  kExitInterrupted = 5,
};

// "cube", "stellated:<a>" or "file:<path>". Throws ParseError or
// InvalidParameter.
Polyhedron parse_poly_spec(std::string_view spec);

// A radian value: a decimal, or a multiple of pi such as "pi", "-pi/4",
// "3pi/2", "3*pi/64", "0.5*pi". Throws ParseError.
double parse_angle(std::string_view text);

// Five comma-separated angles (alpha, theta, phi, theta', phi').
ParamPoint parse_point(std::string_view text);

// Comma-separated integers.
std::vector<int> parse_int_list(std::string_view text);

// Worker count: the flag when given, else RUPERT_WORKERS, else the number
// of hardware threads.
unsigned resolve_workers(std::optional<unsigned> flag);

struct RunManifest {
  std::string command_line;
  nlohmann::ordered_json config;
  std::string poly_label;
  std::uint64_t poly_hash = 0;
  std::string code_version = kVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<std::uint64_t> seeds;

  nlohmann::ordered_json to_json() const;
};

RunManifest start_manifest(int argc, const char* const* argv, const Polyhedron& poly);
std::string utc_timestamp();

nlohmann::ordered_json outcome_json(const CertOutcome& outcome, const ParamPoint& point);
nlohmann::ordered_json candidate_json(const PassageCandidate& cand);

// Writes to path + ".tmp" and renames over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rupert::cli
