#include "rupert/cli_support.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <thread>

#include "rupert/error.hpp"
#include "rupert/lp.hpp"

namespace rupert::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  // std::from_chars for double is unavailable in older libstdc++ builds.
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

Polyhedron parse_poly_spec(std::string_view spec) {
  spec = trim(spec);
  if (spec == "cube") return cube();
  if (spec.starts_with("stellated:")) {
    const auto a = parse_decimal(spec.substr(10));
    if (!a) throw ParseError("bad stellation parameter in '" + std::string(spec) + "'");
    return stellated_tetrahedron(*a);
  }
  if (spec.starts_with("file:")) return load_polyhedron(std::string(spec.substr(5)));
  throw ParseError("unknown polyhedron '" + std::string(spec) + "' (use cube, stellated:<a> or file:<path>)");
}

double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const std::size_t pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) {
    if (const auto v = parse_decimal(s)) return *v;
    throw ParseError("bad angle '" + std::string(text) + "'");
  }

  std::string_view coeff = trim(s.substr(0, pi_at));
  std::string_view rest = trim(s.substr(pi_at + 2));
  if (coeff.ends_with('*')) coeff = trim(coeff.substr(0, coeff.size() - 1));
  double c = 1.0;
  if (coeff == "-") {
    c = -1.0;
  } else if (coeff == "+") {
    c = 1.0;
  } else if (!coeff.empty()) {
    const auto v = parse_decimal(coeff);
    if (!v) throw ParseError("bad angle '" + std::string(text) + "'");
    c = *v;
  }
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ParseError("bad angle '" + std::string(text) + "'");
    const auto v = parse_decimal(trim(rest.substr(1)));
    if (!v || *v == 0.0) throw ParseError("bad angle '" + std::string(text) + "'");
    denom = *v;
  }
  return c * std::numbers::pi / denom;
}

ParamPoint parse_point(std::string_view text) {
  const auto parts = split_on(text, ',');
  if (parts.size() != 5) throw ParseError("a point needs 5 comma-separated angles");
  std::array<double, 5> x;
  for (std::size_t k = 0; k < 5; ++k) x[k] = parse_angle(parts[k]);
  return ParamPoint::from_array(x);
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view part : split_on(text, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw ParseError("bad integer '" + std::string(part) + "'");
    }
    out.push_back(v);
  }
  return out;
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("RUPERT_WORKERS")) {
    const auto v = parse_decimal(env);
    if (v && *v >= 1.0) return static_cast<unsigned>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(poly_hash));
  return {{"command_line", command_line},
          {"config", config},
          {"polyhedron", {{"label", poly_label}, {"vertex_hash", hash}}},
          {"code_version", code_version},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"seeds", seeds}};
}

RunManifest start_manifest(int argc, const char* const* argv, const Polyhedron& poly) {
  RunManifest m;
  for (int i = 0; i < argc; ++i) {
    if (i) m.command_line += ' ';
    m.command_line += argv[i];
  }
  m.poly_label = poly.label();
  m.poly_hash = poly.vertex_hash();
  m.started_at = utc_timestamp();
  return m;
}

nlohmann::ordered_json outcome_json(const CertOutcome& o, const ParamPoint& point) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(o.kind);
  j["point"] = point.to_array();
  j["epsilon"] = opt_json(o.epsilon);
  j["delta_success"] = opt_json(o.delta_success);
  j["witness_scales"] = {o.s_p, o.s_q};
  j["passage_scale"] = opt_json(o.passage_scale);
  if (o.passage_scale) {
    j["passage_translation"] = {o.passage_translation.x, o.passage_translation.y};
    j["passage_direction"] = o.passage_p_into_q ? "P_into_Q" : "Q_into_P";
  }
  j["iterations"] = o.iterations;
  return j;
}

nlohmann::ordered_json candidate_json(const PassageCandidate& c) {
  nlohmann::ordered_json j;
  j["scale"] = c.scale;
  j["passage"] = c.scale > 1.0 + kFitEps;
  j["point"] = c.point.to_array();
  j["translation"] = {c.translation.x, c.translation.y};
  j["direction"] = c.p_into_q ? "P_into_Q" : "Q_into_P";
  j["evaluations"] = c.evaluations;
  return j;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidParameter("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rupert::cli
