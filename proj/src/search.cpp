#include "rupert/search.hpp"

#include <algorithm>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rupert/error.hpp"

namespace rupert {
namespace {

constexpr std::array<std::uint32_t, 5> kRootCounts{4, 1, 2, 1, 4};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double fifth_power(double s) { return s * s * s * s * s; }

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    const std::size_t count = std::min<std::size_t>(workers, n);
    for (std::size_t w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < n; i = next++) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

class ResultsWriter {
 public:
  ResultsWriter(const std::filesystem::path& final_path, std::uint64_t resume_bytes, bool resuming)
      : final_(final_path) {
    if (final_.empty()) return;
    part_ = final_;
    part_ += ".part";
    if (resuming) {
      if (!std::filesystem::exists(part_)) {
        throw CheckpointCorrupt("results file " + part_.string() + " is missing");
      }
      if (std::filesystem::file_size(part_) < resume_bytes) {
        throw CheckpointCorrupt("results file is shorter than the checkpoint records");
      }
      std::filesystem::resize_file(part_, resume_bytes);
      out_.open(part_, std::ios::binary | std::ios::app);
    } else {
      out_.open(part_, std::ios::binary | std::ios::trunc);
    }
    if (!out_) throw InvalidParameter("cannot write results file " + part_.string());
  }

  void write(const FinalizedBox& rec) {
    if (!out_.is_open()) return;
    out_ << to_jsonl(rec) << '\n';
  }

  std::uint64_t flush() {
    if (!out_.is_open()) return 0;
    out_.flush();
    if (!out_) throw InvalidParameter("failed writing results file");
    return static_cast<std::uint64_t>(out_.tellp());
  }

  void finish() {
    if (!out_.is_open()) return;
    flush();
    out_.close();
    std::filesystem::rename(part_, final_);
  }

 private:
  std::filesystem::path final_, part_;
  std::ofstream out_;
};

}  // namespace

double side_at_depth(int depth) { return std::ldexp(kRootSide, -depth); }

double Box5::volume() const { return fifth_power(side()); }

std::array<double, 5> Box5::center() const {
  const double s = side();
  std::array<double, 5> c;
  for (std::size_t k = 0; k < 5; ++k) c[k] = (static_cast<double>(key_.index[k]) + 0.5) * s;
  return c;
}

bool Box5::contains(const ParamPoint& p) const {
  const auto c = center();
  const auto x = p.to_array();
  const double half = 0.5 * side();
  for (std::size_t k = 0; k < 5; ++k) {
    if (std::abs(x[k] - c[k]) > half) return false;
  }
  return true;
}

Box5 Box5::from_center(const std::array<double, 5>& center, double side) {
  if (!(side > 0.0) || !std::isfinite(side)) throw ParseError("box side must be positive");
  const double levels = std::log2(kRootSide / side);
  const long depth = std::lround(levels);
  if (depth < 0 || depth > 40 || std::abs(side_at_depth(static_cast<int>(depth)) - side) > 1e-12 * side) {
    throw ParseError("box side " + fmt17(side) + " is not a dyadic fraction of pi/2");
  }
  BoxKey key;
  key.depth = static_cast<std::uint8_t>(depth);
  for (std::size_t k = 0; k < 5; ++k) {
    const double pos = center[k] / side - 0.5;
    const double idx = std::round(pos);
    const double limit = std::ldexp(static_cast<double>(kRootCounts[k]), static_cast<int>(depth));
    if (std::abs(pos - idx) > 1e-6 || idx < 0.0 || idx >= limit) {
      throw ParseError("box center is off the grid or outside Lambda");
    }
    key.index[k] = static_cast<std::uint32_t>(idx);
  }
  return Box5(key);
}

std::vector<Box5> initial_decomposition() {
  std::vector<Box5> out;
  out.reserve(32);
  BoxKey key;
  for (std::uint32_t a = 0; a < kRootCounts[0]; ++a)
    for (std::uint32_t t = 0; t < kRootCounts[1]; ++t)
      for (std::uint32_t f = 0; f < kRootCounts[2]; ++f)
        for (std::uint32_t tp = 0; tp < kRootCounts[3]; ++tp)
          for (std::uint32_t fp = 0; fp < kRootCounts[4]; ++fp) {
            key.index = {a, t, f, tp, fp};
            out.emplace_back(key);
          }
  return out;
}

std::vector<Box5> split(const Box5& box) {
  std::vector<Box5> out;
  out.reserve(32);
  for (std::uint32_t b = 0; b < 32; ++b) {
    BoxKey key;
    key.depth = static_cast<std::uint8_t>(box.key().depth + 1);
    for (std::size_t k = 0; k < 5; ++k) key.index[k] = 2 * box.key().index[k] + ((b >> k) & 1u);
    out.emplace_back(key);
  }
  return out;
}

const char* to_string(BoxStatus status) {
  switch (status) {
    case BoxStatus::kRuledOut: return "ruled_out";
    case BoxStatus::kSmall: return "small";
    case BoxStatus::kInvalid: return "invalid";
  }
  return "?";
}

BoxStatus parse_box_status(std::string_view text) {
  if (text == "ruled_out") return BoxStatus::kRuledOut;
  if (text == "small") return BoxStatus::kSmall;
  if (text == "invalid") return BoxStatus::kInvalid;
  throw ParseError("unknown box status '" + std::string(text) + "'");
}

std::string to_jsonl(const FinalizedBox& rec) {
  std::string line = "{\"center\":[";
  const auto c = rec.box.center();
  for (std::size_t k = 0; k < 5; ++k) {
    if (k) line += ',';
    line += fmt17(c[k]);
  }
  line += "],\"side\":" + fmt17(rec.box.side());
  line += ",\"status\":\"" + std::string(to_string(rec.status)) + "\"";
  line += ",\"delta_success\":" + (rec.delta_success ? fmt17(*rec.delta_success) : "null");
  line += ",\"passage_scale\":" + (rec.passage_scale ? fmt17(*rec.passage_scale) : "null");
  line += '}';
  return line;
}

FinalizedBox parse_jsonl(std::string_view line) {
  try {
    const nlohmann::json j = nlohmann::json::parse(line);
    const auto& jc = j.at("center");
    if (!jc.is_array() || jc.size() != 5) throw ParseError("center must have 5 entries");
    std::array<double, 5> c;
    for (std::size_t k = 0; k < 5; ++k) c[k] = jc.at(k).get<double>();
    FinalizedBox rec;
    rec.box = Box5::from_center(c, j.at("side").get<double>());
    rec.status = parse_box_status(j.at("status").get<std::string>());
    if (!j.at("delta_success").is_null()) rec.delta_success = j.at("delta_success").get<double>();
    if (!j.at("passage_scale").is_null()) rec.passage_scale = j.at("passage_scale").get<double>();
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed results record: ") + e.what());
  }
}

void SearchConfig::validate() const {
  if (!(min_side > 0.0)) throw InvalidParameter("min_side must be positive");
  if (!(check.decay > 0.0 && check.decay < 1.0)) throw InvalidParameter("decay must lie in (0, 1)");
  if (!(check.delta_init > 0.0)) throw InvalidParameter("delta_init must be positive");
  if (batch_size == 0) throw InvalidParameter("batch_size must be positive");
  std::set<int> seen;
  for (int r : roots) {
    if (r < 0 || r >= 32 || !seen.insert(r).second) {
      throw InvalidParameter("roots must be distinct indices in [0, 32)");
    }
  }
  if (!start_boxes.empty()) {
    if (!roots.empty()) throw InvalidParameter("give either roots or start boxes, not both");
    const std::vector<Box5> top = initial_decomposition();
    std::set<BoxKey> keys;
    for (const Box5& b : start_boxes) {
      BoxKey up = b.key();
      while (up.depth > 0) {
        --up.depth;
        for (auto& i : up.index) i >>= 1;
      }
      if (std::find(top.begin(), top.end(), Box5(up)) == top.end()) {
        throw InvalidParameter("start box lies outside Lambda");
      }
      keys.insert(b.key());
    }
    for (const BoxKey& key : keys) {
      BoxKey up = key;
      while (up.depth > 0) {
        --up.depth;
        for (auto& i : up.index) i >>= 1;
        if (keys.count(up)) throw InvalidParameter("start boxes overlap");
      }
    }
    if (keys.size() != start_boxes.size()) throw InvalidParameter("start boxes repeat");
  }
}

DepthTally& SearchState::tally(int depth) {
  if (tallies.size() <= static_cast<std::size_t>(depth)) tallies.resize(depth + 1);
  return tallies[depth];
}

double SearchState::ruled_out_volume() const {
  double v = 0.0;
  for (std::size_t d = 0; d < tallies.size(); ++d) {
    v += static_cast<double>(tallies[d].ruled_out) * fifth_power(side_at_depth(static_cast<int>(d)));
  }
  return v;
}

double SearchState::queued_volume() const {
  double v = 0.0;
  for (const Box5& b : queue) v += b.volume();
  return v;
}

double SearchState::small_volume() const {
  double v = 0.0;
  for (const Box5& b : small_cubes) v += b.volume();
  return v;
}

double root_volume(const SearchConfig& cfg) {
  if (!cfg.start_boxes.empty()) {
    double v = 0.0;
    for (const Box5& b : cfg.start_boxes) v += b.volume();
    return v;
  }
  const std::size_t n = cfg.roots.empty() ? 32 : cfg.roots.size();
  return static_cast<double>(n) * fifth_power(kRootSide);
}

SearchState initial_state(const SearchConfig& cfg) {
  SearchState state;
  const std::vector<Box5> roots = initial_decomposition();
  if (!cfg.start_boxes.empty()) {
    state.queue.assign(cfg.start_boxes.begin(), cfg.start_boxes.end());
  } else if (cfg.roots.empty()) {
    state.queue.assign(roots.begin(), roots.end());
  } else {
    for (int r : cfg.roots) state.queue.push_back(roots[r]);
  }
  return state;
}

BoxOutcome process_box(const Box5& box, const Polyhedron& poly, const SearchConfig& cfg) {
  BoxOutcome out;
  const double side = box.side();
  if (side < cfg.min_side) {
    // Not split further, but a passage at its center is still worth
    // reporting; the exact test is two small LPs.
    out.action = BoxOutcome::Action::kSmall;
    try {
      const CertOutcome res = check_passage(box.center_point(), poly);
      if (res.kind == CertKind::kInvalid) {
        out.action = BoxOutcome::Action::kInvalid;
        out.passage_scale = res.passage_scale;
      }
    } catch (const Error&) {
      out.numeric_failure = true;
    }
    return out;
  }
  out.checked = true;
  try {
    const ParamPoint center = box.center_point();
    CheckConfig check_cfg = cfg.check;
    check_cfg.threshold_b = 0.9 * side / 2.0;
    // A box this large cannot be covered from delta_init; only the passage
    // test at its center is meaningful.
    const CertOutcome res = check_cfg.threshold_b < check_cfg.delta_init
                                ? check(center, poly, check_cfg)
                                : check_passage(center, poly);
    if (res.kind == CertKind::kInvalid) {
      out.action = BoxOutcome::Action::kInvalid;
      out.passage_scale = res.passage_scale;
    } else if (covers_box(res, side)) {
      out.action = BoxOutcome::Action::kRuledOut;
      out.delta_success = res.delta_success;
    } else {
      out.action = BoxOutcome::Action::kSplit;
    }
  } catch (const Error&) {
    out.numeric_failure = true;
    out.action = BoxOutcome::Action::kSplit;
  }
  return out;
}

SearchState run_search(const Polyhedron& poly, const SearchConfig& cfg,
                       const std::optional<std::filesystem::path>& resume_from) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  SearchState state = resume_from ? load_checkpoint(*resume_from, poly, cfg) : initial_state(cfg);
  state.interrupted = false;
  const double prior_wall = state.wall_time_seconds;
  ResultsWriter results(cfg.results_path, state.results_bytes, resume_from.has_value());

  auto elapsed = [&] {
    return prior_wall + std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  auto checkpoint = [&] {
    state.results_bytes = results.flush();
    state.wall_time_seconds = elapsed();
    if (!cfg.checkpoint_path.empty()) save_checkpoint(cfg.checkpoint_path, state, poly, cfg);
  };

  std::uint64_t checked_since = 0;
  auto last_checkpoint = std::chrono::steady_clock::now();
  std::vector<Box5> batch;
  std::vector<BoxOutcome> outcomes;

  while (!state.queue.empty()) {
    const bool cancelled = cfg.cancel && cfg.cancel->load(std::memory_order_relaxed);
    if (cancelled || (cfg.stop_after && state.processed >= *cfg.stop_after)) {
      checkpoint();
      state.interrupted = true;
      return state;
    }
    std::size_t n = std::min(cfg.batch_size, state.queue.size());
    if (cfg.stop_after) n = std::min<std::uint64_t>(n, *cfg.stop_after - state.processed);

    batch.assign(state.queue.begin(), state.queue.begin() + static_cast<std::ptrdiff_t>(n));
    state.queue.erase(state.queue.begin(), state.queue.begin() + static_cast<std::ptrdiff_t>(n));
    outcomes.assign(n, BoxOutcome{});
    parallel_for(n, cfg.workers, [&](std::size_t i) { outcomes[i] = process_box(batch[i], poly, cfg); });

    for (std::size_t i = 0; i < n; ++i) {
      const Box5& box = batch[i];
      const BoxOutcome& o = outcomes[i];
      DepthTally& t = state.tally(box.depth());
      if (o.checked) {
        ++t.checked;
        ++checked_since;
      }
      if (o.numeric_failure) ++state.numeric_failures;
      switch (o.action) {
        case BoxOutcome::Action::kRuledOut:
          ++t.ruled_out;
          results.write({box, BoxStatus::kRuledOut, o.delta_success, std::nullopt});
          break;
        case BoxOutcome::Action::kSmall:
          ++t.small;
          state.small_cubes.push_back(box);
          results.write({box, BoxStatus::kSmall, std::nullopt, std::nullopt});
          break;
        case BoxOutcome::Action::kInvalid:
          ++t.invalid;
          state.small_cubes.push_back(box);
          state.invalid_points.push_back({box.center_point(), *o.passage_scale, box});
          results.write({box, BoxStatus::kInvalid, std::nullopt, o.passage_scale});
          break;
        case BoxOutcome::Action::kSplit:
          ++t.split;
          for (const Box5& child : split(box)) state.queue.push_back(child);
          break;
      }
    }
    state.processed += n;

    const auto now = std::chrono::steady_clock::now();
    if (checked_since >= cfg.checkpoint_every_boxes ||
        now - last_checkpoint >= cfg.checkpoint_every_time) {
      checkpoint();
      checked_since = 0;
      last_checkpoint = now;
    }
  }

  results.finish();
  state.results_bytes = 0;
  state.wall_time_seconds = elapsed();
  if (!cfg.checkpoint_path.empty()) std::filesystem::remove(cfg.checkpoint_path);
  return state;
}

bool CoverageReport::same_result(const CoverageReport& other) const {
  return total_volume == other.total_volume && ruled_out_volume == other.ruled_out_volume &&
         coverage_percent == other.coverage_percent &&
         finalized_volume == other.finalized_volume && by_depth == other.by_depth &&
         invalid_count == other.invalid_count;
}

namespace {

nlohmann::ordered_json summary_object(const CoverageReport& r) {
  nlohmann::ordered_json j;
  j["total_volume"] = r.total_volume;
  j["ruled_out_volume"] = r.ruled_out_volume;
  j["coverage_percent"] = r.coverage_percent;
  j["finalized_volume"] = r.finalized_volume;
  j["invalid_count"] = r.invalid_count;
  nlohmann::ordered_json depths = nlohmann::ordered_json::array();
  for (const DepthSummary& d : r.by_depth) {
    depths.push_back({{"depth", d.depth}, {"side", d.side}, {"ruled_out", d.ruled_out},
                      {"small", d.small}, {"invalid", d.invalid}});
  }
  j["cube_count_by_depth"] = depths;
  return j;
}

void finish_report(CoverageReport& r) {
  r.ruled_out_volume = 0.0;
  r.finalized_volume = 0.0;
  for (const DepthSummary& d : r.by_depth) {
    const double v = fifth_power(d.side);
    r.ruled_out_volume += static_cast<double>(d.ruled_out) * v;
    r.finalized_volume += static_cast<double>(d.ruled_out + d.small + d.invalid) * v;
    r.invalid_count += d.invalid;
  }
  r.coverage_percent = 100.0 * r.ruled_out_volume / r.total_volume;
}

}  // namespace

std::string CoverageReport::summary_json() const { return summary_object(*this).dump(); }

std::string CoverageReport::to_json() const {
  nlohmann::ordered_json j = summary_object(*this);
  j["wall_time_seconds"] = wall_time_seconds;
  return j.dump(2);
}

std::string CoverageReport::depth_csv() const {
  std::string out = "depth,side,ruled_out,small,invalid,ruled_out_volume\n";
  for (const DepthSummary& d : by_depth) {
    out += std::to_string(d.depth) + ',' + fmt17(d.side) + ',' + std::to_string(d.ruled_out) + ',' +
           std::to_string(d.small) + ',' + std::to_string(d.invalid) + ',' +
           fmt17(static_cast<double>(d.ruled_out) * fifth_power(d.side)) + '\n';
  }
  return out;
}

CoverageReport coverage_report(const SearchState& state) {
  CoverageReport r;
  for (std::size_t d = 0; d < state.tallies.size(); ++d) {
    const DepthTally& t = state.tallies[d];
    r.by_depth.push_back({static_cast<int>(d), side_at_depth(static_cast<int>(d)), t.ruled_out,
                          t.small, t.invalid});
  }
  finish_report(r);
  r.wall_time_seconds = state.wall_time_seconds;
  return r;
}

RecordAudit audit_records(std::istream& in) {
  RecordAudit audit;
  std::set<BoxKey> keys;
  std::vector<DepthSummary> depths;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    FinalizedBox rec;
    try {
      rec = parse_jsonl(line);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    ++audit.records;
    const int d = rec.box.depth();
    if (depths.size() <= static_cast<std::size_t>(d)) {
      for (int k = static_cast<int>(depths.size()); k <= d; ++k) depths.push_back({k, side_at_depth(k), 0, 0, 0});
    }
    switch (rec.status) {
      case BoxStatus::kRuledOut: ++depths[d].ruled_out; break;
      case BoxStatus::kSmall: ++depths[d].small; break;
      case BoxStatus::kInvalid: ++depths[d].invalid; break;
    }
    if (!keys.insert(rec.box.key()).second) {
      audit.overlap = true;
      audit.problems.push_back("line " + std::to_string(lineno) + ": duplicate box");
    }
  }

  // Dyadic boxes overlap only by nesting, so checking every ancestor finds
  // all overlaps.
  for (const BoxKey& key : keys) {
    BoxKey up = key;
    while (up.depth > 0) {
      --up.depth;
      for (auto& i : up.index) i >>= 1;
      if (keys.count(up)) {
        audit.overlap = true;
        audit.problems.push_back("a depth-" + std::to_string(key.depth) +
                                 " box lies inside a depth-" + std::to_string(up.depth) + " box");
        break;
      }
    }
  }

  audit.report.by_depth = std::move(depths);
  finish_report(audit.report);
  const double total = audit.report.total_volume;
  if (audit.report.finalized_volume > total * (1.0 + 1e-6)) {
    audit.overlap = true;
    audit.problems.push_back("finalized volume exceeds the volume of Lambda");
  }
  audit.complete = std::abs(audit.report.finalized_volume - total) <= 1e-6 * total;
  if (audit.records == 0) audit.warnings.push_back("results file holds no records");
  else if (!audit.complete) audit.warnings.push_back("finalized boxes do not cover all of Lambda");
  return audit;
}

}  // namespace rupert
