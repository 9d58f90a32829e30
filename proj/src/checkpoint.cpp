// Checkpoint container:
//   "RUPERTCK" | u32 version | u64 n | n bytes of JSON metadata
//   | u64 count | count queue keys | u64 count | count small-cube keys
// Keys are 21 bytes: depth, then five u32 indices. Integers little-endian.

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rupert/error.hpp"
#include "rupert/search.hpp"

namespace rupert {
namespace {

constexpr char kMagic[8] = {'R', 'U', 'P', 'E', 'R', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kKeyBytes = 21;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_key(std::string& out, const BoxKey& key) {
  out.push_back(static_cast<char>(key.depth));
  for (std::uint32_t i : key.index) put_u32(out, i);
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  const char* take(std::size_t n) {
    if (data_.size() - pos_ < n) throw CheckpointCorrupt("checkpoint is truncated");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint32_t u32() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(4));
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | p[b];
    return v;
  }
  std::uint64_t u64() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(8));
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
    return v;
  }
  BoxKey key() {
    BoxKey k;
    k.depth = static_cast<std::uint8_t>(*take(1));
    for (auto& i : k.index) i = u32();
    return k;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

nlohmann::json key_json(const BoxKey& k) {
  return {k.depth, k.index[0], k.index[1], k.index[2], k.index[3], k.index[4]};
}

BoxKey key_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 6) throw CheckpointCorrupt("bad box key in checkpoint");
  BoxKey k;
  k.depth = j[0].get<std::uint8_t>();
  for (std::size_t i = 0; i < 5; ++i) k.index[i] = j[i + 1].get<std::uint32_t>();
  return k;
}

nlohmann::json config_json(const SearchConfig& cfg) {
  nlohmann::json starts = nlohmann::json::array();
  for (const Box5& b : cfg.start_boxes) starts.push_back(key_json(b.key()));
  return {{"min_side", cfg.min_side},
          {"start_boxes", starts},
          {"delta_init", cfg.check.delta_init},
          {"decay", cfg.check.decay},
          {"buffer_mode", to_string(cfg.check.buffer_mode)},
          {"roots", cfg.roots}};
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const SearchState& state,
                     const Polyhedron& poly, const SearchConfig& cfg) {
  nlohmann::json meta;
  meta["polyhedron"] = {{"label", poly.label()}, {"vertex_hash", poly.vertex_hash()}};
  meta["config"] = config_json(cfg);
  meta["processed"] = state.processed;
  meta["numeric_failures"] = state.numeric_failures;
  meta["results_bytes"] = state.results_bytes;
  meta["wall_time_seconds"] = state.wall_time_seconds;
  nlohmann::json tallies = nlohmann::json::array();
  for (const DepthTally& t : state.tallies) {
    tallies.push_back({t.checked, t.split, t.ruled_out, t.small, t.invalid});
  }
  meta["tallies"] = tallies;
  nlohmann::json invalid = nlohmann::json::array();
  for (const InvalidPoint& p : state.invalid_points) {
    invalid.push_back({{"key", key_json(p.box.key())},
                       {"point", p.point.to_array()},
                       {"passage_scale", p.passage_scale}});
  }
  meta["invalid"] = invalid;

  std::string blob(kMagic, sizeof kMagic);
  put_u32(blob, kVersion);
  const std::string text = meta.dump();
  put_u64(blob, text.size());
  blob += text;
  put_u64(blob, state.queue.size());
  for (const Box5& b : state.queue) put_key(blob, b.key());
  put_u64(blob, state.small_cubes.size());
  for (const Box5& b : state.small_cubes) put_key(blob, b.key());

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw InvalidParameter("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SearchState load_checkpoint(const std::filesystem::path& path, const Polyhedron& poly,
                            const SearchConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointCorrupt("cannot open checkpoint " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data));

  if (std::memcmp(r.take(sizeof kMagic), kMagic, sizeof kMagic) != 0) {
    throw CheckpointCorrupt("not a search checkpoint");
  }
  if (const std::uint32_t v = r.u32(); v != kVersion) {
    throw CheckpointCorrupt("unsupported checkpoint version " + std::to_string(v));
  }

  SearchState state;
  nlohmann::json meta;
  try {
    const std::uint64_t n = r.u64();
    meta = nlohmann::json::parse(std::string(r.take(n), n));

    if (meta.at("polyhedron").at("vertex_hash").get<std::uint64_t>() != poly.vertex_hash()) {
      throw InvalidParameter("checkpoint belongs to a different polyhedron (" +
                             meta["polyhedron"]["label"].get<std::string>() + ")");
    }
    if (meta.at("config") != config_json(cfg)) {
      throw InvalidParameter("checkpoint was written with a different search configuration");
    }
    state.processed = meta.at("processed").get<std::uint64_t>();
    state.numeric_failures = meta.at("numeric_failures").get<std::uint64_t>();
    state.results_bytes = meta.at("results_bytes").get<std::uint64_t>();
    state.wall_time_seconds = meta.at("wall_time_seconds").get<double>();
    for (const auto& t : meta.at("tallies")) {
      state.tallies.push_back({t.at(0).get<std::uint64_t>(), t.at(1).get<std::uint64_t>(),
                               t.at(2).get<std::uint64_t>(), t.at(3).get<std::uint64_t>(),
                               t.at(4).get<std::uint64_t>()});
    }
    for (const auto& p : meta.at("invalid")) {
      state.invalid_points.push_back(
          {ParamPoint::from_array(p.at("point").get<std::array<double, 5>>()),
           p.at("passage_scale").get<double>(), Box5(key_from_json(p.at("key")))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointCorrupt(std::string("checkpoint metadata is malformed: ") + e.what());
  }

  const std::uint64_t queued = r.u64();
  if (queued > r.remaining() / kKeyBytes) throw CheckpointCorrupt("checkpoint is truncated");
  for (std::uint64_t i = 0; i < queued; ++i) state.queue.emplace_back(r.key());
  const std::uint64_t small = r.u64();
  if (small > r.remaining() / kKeyBytes) throw CheckpointCorrupt("checkpoint is truncated");
  state.small_cubes.reserve(small);
  for (std::uint64_t i = 0; i < small; ++i) state.small_cubes.emplace_back(r.key());
  if (r.remaining() != 0) throw CheckpointCorrupt("trailing bytes after checkpoint data");

  const double expected = root_volume(cfg);
  const double held = state.ruled_out_volume() + state.queued_volume() + state.small_volume();
  if (std::abs(held - expected) > 1e-6 * expected) {
    throw CheckpointCorrupt("checkpoint does not conserve search volume");
  }
  return state;
}

}  // namespace rupert
