#pragma once

// Orthtree search over Lambda. Boxes are dyadic: a box at depth d has side
// (pi/2) / 2^d and integer grid indices along each of the five axes, so
// centers, splits and overlap tests are exact.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rupert/certify.hpp"
#include "rupert/polyhedron.hpp"

namespace rupert {

inline constexpr double kRootSide = std::numbers::pi / 2.0;
// (2pi)^2 * pi * (pi/2)^2
inline constexpr double kLambdaVolume =
    std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi;

double side_at_depth(int depth);

struct BoxKey {
  std::uint8_t depth = 0;
  std::array<std::uint32_t, 5> index{};
  friend constexpr bool operator==(const BoxKey&, const BoxKey&) = default;
  friend constexpr auto operator<=>(const BoxKey&, const BoxKey&) = default;
};

class Box5 {
 public:
  Box5() = default;
  explicit Box5(BoxKey key) : key_(key) {}

  const BoxKey& key() const { return key_; }
  int depth() const { return key_.depth; }
  double side() const { return side_at_depth(key_.depth); }
  double volume() const;
  std::array<double, 5> center() const;
  ParamPoint center_point() const { return ParamPoint::from_array(center()); }
  bool contains(const ParamPoint& p) const;

  // Recovers the key from a center and side as printed in a results file.
  // Throws ParseError if they do not describe a grid box inside Lambda.
  static Box5 from_center(const std::array<double, 5>& center, double side);

  friend bool operator==(const Box5&, const Box5&) = default;

 private:
  BoxKey key_;
};

// The 4 x 1 x 2 x 1 x 4 tiling of Lambda by cubes of side pi/2, in
// lexicographic (alpha, theta, phi, theta', phi') order.
std::vector<Box5> initial_decomposition();

// The 32 half-side children, child b taking the upper half of axis k when
// bit k of b is set.
std::vector<Box5> split(const Box5& box);

enum class BoxStatus { kRuledOut, kSmall, kInvalid };
const char* to_string(BoxStatus status);
BoxStatus parse_box_status(std::string_view text);

struct FinalizedBox {
  Box5 box;
  BoxStatus status = BoxStatus::kSmall;
  std::optional<double> delta_success;
  std::optional<double> passage_scale;
};

// One JSON-lines record; decimals printed with 17 significant digits.
std::string to_jsonl(const FinalizedBox& rec);
// Throws ParseError on malformed input.
FinalizedBox parse_jsonl(std::string_view line);

struct InvalidPoint {
  ParamPoint point;
  double passage_scale = 0.0;
  Box5 box;
};

struct DepthTally {
  std::uint64_t checked = 0;
  std::uint64_t split = 0;
  std::uint64_t ruled_out = 0;
  std::uint64_t small = 0;  // excludes boxes whose center was a passage
  std::uint64_t invalid = 0;
};

struct SearchConfig {
  double min_side = std::numbers::pi / 8.0;
  // threshold_b is replaced per box by 0.9 * side / 2.
  CheckConfig check;
  unsigned workers = 1;
  // Indices into initial_decomposition(); empty means all 32.
  std::vector<int> roots;
  // Arbitrary pairwise disjoint grid boxes to search instead of the roots.
  // Used to study a small region at fine resolution.
  std::vector<Box5> start_boxes;

  std::filesystem::path results_path;     // empty: no results file
  std::filesystem::path checkpoint_path;  // empty: no checkpoints
  std::uint64_t checkpoint_every_boxes = 10000;
  std::chrono::seconds checkpoint_every_time{60};
  // Simulated interruption: stop (with a checkpoint) once this many boxes
  // have been processed in total.
  std::optional<std::uint64_t> stop_after;
  // Polled between batches; when it reads true the search checkpoints and
  // returns with interrupted set, exactly as for stop_after.
  const std::atomic<bool>* cancel = nullptr;
  std::size_t batch_size = 4096;

  void validate() const;
};

struct SearchState {
  std::deque<Box5> queue;
  std::vector<Box5> small_cubes;  // includes the boxes of invalid_points
  std::vector<InvalidPoint> invalid_points;
  std::vector<DepthTally> tallies;
  std::uint64_t processed = 0;
  std::uint64_t numeric_failures = 0;
  std::uint64_t results_bytes = 0;
  bool interrupted = false;
  double wall_time_seconds = 0.0;

  DepthTally& tally(int depth);
  double ruled_out_volume() const;
  double queued_volume() const;
  double small_volume() const;
  bool complete() const { return queue.empty(); }
};

// Volume of the searched region: 32 roots, the selected subset, or the
// start boxes.
double root_volume(const SearchConfig& cfg);

SearchState initial_state(const SearchConfig& cfg);

// What happens to one popped box. Pure; safe to call concurrently.
struct BoxOutcome {
  enum class Action { kRuledOut, kSmall, kInvalid, kSplit } action = Action::kSmall;
  bool checked = false;
  bool numeric_failure = false;
  std::optional<double> delta_success;
  std::optional<double> passage_scale;
};
BoxOutcome process_box(const Box5& box, const Polyhedron& poly, const SearchConfig& cfg);

// Runs the queue to exhaustion (or to cfg.stop_after). Results are streamed
// to cfg.results_path + ".part" and renamed into place on completion.
// Throws CheckpointCorrupt if resume_from cannot be read, InvalidParameter
// if it belongs to a different polyhedron or configuration.
SearchState run_search(const Polyhedron& poly, const SearchConfig& cfg,
                       const std::optional<std::filesystem::path>& resume_from = std::nullopt);

void save_checkpoint(const std::filesystem::path& path, const SearchState& state,
                     const Polyhedron& poly, const SearchConfig& cfg);
SearchState load_checkpoint(const std::filesystem::path& path, const Polyhedron& poly,
                            const SearchConfig& cfg);

struct DepthSummary {
  int depth = 0;
  double side = 0.0;
  std::uint64_t ruled_out = 0;
  std::uint64_t small = 0;
  std::uint64_t invalid = 0;
  friend bool operator==(const DepthSummary&, const DepthSummary&) = default;
};

struct CoverageReport {
  double total_volume = kLambdaVolume;
  double ruled_out_volume = 0.0;
  double coverage_percent = 0.0;
  double finalized_volume = 0.0;
  std::vector<DepthSummary> by_depth;
  std::uint64_t invalid_count = 0;
  double wall_time_seconds = 0.0;

  // Everything except timing: what must agree across reruns and resumes.
  bool same_result(const CoverageReport& other) const;
  std::string summary_json() const;
  std::string to_json() const;
  std::string depth_csv() const;
};

CoverageReport coverage_report(const SearchState& state);

// Recomputes the report from a results file and cross-checks it: no box may
// repeat or nest inside another, and the finalized boxes may not hold more
// volume than Lambda.
struct RecordAudit {
  CoverageReport report;
  std::uint64_t records = 0;
  bool overlap = false;
  bool complete = false;
  std::vector<std::string> problems;
  std::vector<std::string> warnings;
};
// Throws ParseError on a malformed line.
RecordAudit audit_records(std::istream& in);

}  // namespace rupert
