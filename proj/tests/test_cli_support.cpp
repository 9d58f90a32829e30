#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "rupert/cli_support.hpp"
#include "rupert/error.hpp"

using namespace rupert;
using namespace rupert::cli;
using std::numbers::pi;

TEST_CASE("angles accept decimals and multiples of pi") {
  CHECK(parse_angle("0") == 0.0);
  CHECK(parse_angle("-1.25") == -1.25);
  CHECK(parse_angle("pi") == pi);
  CHECK(parse_angle("-pi") == -pi);
  CHECK(parse_angle("pi/64") == pi / 64);
  CHECK(parse_angle("3pi/4") == 3 * pi / 4);
  CHECK(parse_angle("3*pi/4") == 3 * pi / 4);
  CHECK(parse_angle("0.5*pi") == 0.5 * pi);
  CHECK(parse_angle(" 2*pi ") == 2 * pi);
  CHECK_THROWS_AS(parse_angle(""), ParseError);
  CHECK_THROWS_AS(parse_angle("tau"), ParseError);
  CHECK_THROWS_AS(parse_angle("pi/0"), ParseError);
  CHECK_THROWS_AS(parse_angle("1e400"), ParseError);
}

TEST_CASE("points need five angles") {
  const ParamPoint p = parse_point("0,pi/4,1.5,pi/8, 2pi");
  CHECK(p.theta == pi / 4);
  CHECK(p.phi_p == 2 * pi);
  CHECK_THROWS_AS(parse_point("1,2,3,4"), ParseError);
  CHECK_THROWS_AS(parse_point("1,2,3,4,5,6"), ParseError);
  CHECK(parse_int_list("0,5, 31") == std::vector<int>{0, 5, 31});
  CHECK_THROWS_AS(parse_int_list("1,x"), ParseError);
}

TEST_CASE("polyhedron specs") {
  CHECK(parse_poly_spec("cube").label() == "cube");
  CHECK(parse_poly_spec("stellated:0.6").label() == "stellated:0.6");
  CHECK_THROWS_AS(parse_poly_spec("stellated:zero"), ParseError);
  CHECK_THROWS_AS(parse_poly_spec("stellated:0.2"), InvalidParameter);
  CHECK_THROWS_AS(parse_poly_spec("dodecahedron"), ParseError);

  const auto path = std::filesystem::temp_directory_path() / "rupert_tet.txt";
  std::ofstream(path) << "# unit tetrahedron\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n";
  const Polyhedron t = parse_poly_spec("file:" + path.string());
  CHECK(t.size() == 4);
}

TEST_CASE("worker resolution prefers the flag, then the environment") {
  CHECK(resolve_workers(5) == 5);
  ::setenv("RUPERT_WORKERS", "3", 1);
  CHECK(resolve_workers(std::nullopt) == 3);
  ::unsetenv("RUPERT_WORKERS");
  CHECK(resolve_workers(std::nullopt) >= 1);
}

TEST_CASE("manifest records the run") {
  const char* argv[] = {"rupert", "search", "--poly", "cube"};
  RunManifest m = start_manifest(4, argv, cube());
  m.seeds = {0};
  const auto j = m.to_json();
  CHECK(j["command_line"] == "rupert search --poly cube");
  CHECK(j["polyhedron"]["label"] == "cube");
  CHECK(j["polyhedron"]["vertex_hash"].get<std::string>().size() == 16);
  CHECK(j["code_version"] == kVersion);
  CHECK(j["started_at"].get<std::string>().size() == 20);
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto path = std::filesystem::temp_directory_path() / "rupert_atomic.txt";
  write_file_atomic(path, "hello\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "hello");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}
