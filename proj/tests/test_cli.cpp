// Runs the built binary end to end.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RUPERT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rupert_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  for (const char* suffix : {"", ".part", ".ckpt", ".manifest.json"}) fs::remove(p.string() + suffix);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json summary(const nlohmann::json& j) {
  nlohmann::json s;
  for (const char* k : {"total_volume", "ruled_out_volume", "coverage_percent", "finalized_volume",
                        "invalid_count", "cube_count_by_depth"}) {
    s[k] = j.at(k);
  }
  return s;
}

}  // namespace

TEST_CASE("certify exit codes") {
  const Run same = run("certify --poly stellated:0.55 --point 0,0,0,0,0");
  CHECK(same.code == 2);
  CHECK(nlohmann::json::parse(same.out)["kind"] == "EXHAUSTED");

  const Run passage = run(
      "certify --poly cube --point "
      "1.934611275617371,0.46344415244076675,0.84114452364281489,1.5285963403290099,5.2607727027893542e-08");
  CHECK(passage.code == 3);
  CHECK(nlohmann::json::parse(passage.out)["kind"] == "INVALID");

  const Run ruled = run(
      "certify --poly stellated:0.55 --point "
      "5.1541754472957546,1.227184630308513,1.227184630308513,0.44178646691106466,2.4052818754046852");
  CHECK(ruled.code == 0);
  const auto j = nlohmann::json::parse(ruled.out);
  CHECK(j["kind"] == "RULED_OUT");
  CHECK(j["epsilon"].get<double>() == 0.10485760000000005);

  CHECK(run("certify --point 1,2,3").code == 1);
  CHECK(run("certify --poly sphere --point 0,0,0,0,0").code == 1);
  CHECK(run("frobnicate").code == 1);
}

TEST_CASE("search with min-side above the root side") {
  const fs::path out = scratch("trivial.jsonl");
  const Run r = run("search --poly stellated:0.55 --min-side 1.6 --out " + out.string());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["coverage_percent"] == 0.0);
  CHECK(j["complete"] == true);
  CHECK(j["manifest"]["polyhedron"]["label"] == "stellated:0.55");
  CHECK(fs::exists(out));
  CHECK(fs::exists(out.string() + ".manifest.json"));
  CHECK_FALSE(fs::exists(out.string() + ".part"));

  // The report command reproduces the search's own report.
  const Run rep = run("report --in " + out.string());
  CHECK(rep.code == 0);
  CHECK(summary(nlohmann::json::parse(rep.out)) == summary(j));
}

TEST_CASE("cube search finds passages") {
  const fs::path out = scratch("cube.jsonl");
  const Run r = run("search --poly cube --min-side 0.4 --out " + out.string());
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.out)["invalid_count"].get<int>() > 0);
}

TEST_CASE("interrupted search resumes to the same report") {
  const fs::path full = scratch("full.jsonl");
  const Run a = run("search --poly stellated:0.55 --min-side pi/8 --roots 9,22 --workers 2 --out " +
                    full.string());
  REQUIRE(a.code == 0);

  const fs::path part = scratch("part.jsonl");
  const Run b = run("search --poly stellated:0.55 --min-side pi/8 --roots 9,22 --workers 2 --stop-after 700 --out " +
                    part.string());
  CHECK(b.code == 5);
  CHECK(fs::exists(part.string() + ".ckpt"));
  const Run c = run("search --poly stellated:0.55 --min-side pi/8 --roots 9,22 --workers 1 --out " +
                    part.string() + " --resume " + part.string() + ".ckpt");
  CHECK(c.code == 0);
  CHECK(summary(nlohmann::json::parse(c.out)) == summary(nlohmann::json::parse(a.out)));
  CHECK(slurp(part) == slurp(full));
}

TEST_CASE("corrupt checkpoint exits 4") {
  const fs::path bad = scratch("bad.ckpt");
  std::ofstream(bad) << "not a checkpoint";
  const fs::path out = scratch("bad.jsonl");
  CHECK(run("search --min-side pi/8 --out " + out.string() + " --resume " + bad.string()).code == 4);
}

TEST_CASE("report on empty and tampered files") {
  const fs::path empty = scratch("empty.jsonl");
  std::ofstream(empty).close();
  const Run e = run("report --in " + empty.string());
  CHECK(e.code == 0);
  const auto j = nlohmann::json::parse(e.out);
  CHECK(j["coverage_percent"] == 0.0);
  CHECK(j["warnings"].size() == 1);

  const fs::path src = scratch("tamper_src.jsonl");
  REQUIRE(run("search --poly stellated:0.55 --min-side 1.6 --out " + src.string()).code == 0);
  std::string text = slurp(src);
  const std::string first = text.substr(0, text.find('\n') + 1);
  const fs::path dup = scratch("tampered.jsonl");
  std::ofstream(dup) << text << first;
  const Run t = run("report --in " + dup.string());
  CHECK(t.code == 1);
  CHECK(nlohmann::json::parse(t.out)["volume_conserved"] == false);

  const fs::path junk = scratch("junk.jsonl");
  std::ofstream(junk) << "{\"center\": 3}\n";
  CHECK(run("report --in " + junk.string()).code == 1);
}

TEST_CASE("passage and sweep emit results") {
  const Run p = run("passage --poly cube --budget 3000 --seed 1");
  CHECK(p.code == 0);
  const auto j = nlohmann::json::parse(p.out);
  CHECK(j["scale"].get<double>() > 1.0);
  CHECK(j["replay_ok"] == true);
  CHECK(j["manifest"]["seeds"][0] == 1);

  const fs::path csv = scratch("sweep.csv");
  CHECK(run("sweep --from 0.55 --to 0.56 --step 0.005 --budget 200 --out " + csv.string()).code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("a,best_scale,alpha,theta,phi,theta_p,phi_p\n", 0) == 0);
  CHECK(fs::exists(csv.string() + ".manifest.json"));
}
