#include <doctest.h>

#include <cmath>
#include <random>

#include "rupert/certify.hpp"
#include "rupert/error.hpp"
#include "rupert/lp.hpp"

using namespace rupert;

namespace {

// A depth-4 grid center that the default check rules out for P_{0.55}.
const ParamPoint kRuledOutPoint{5.1541754472957546, 1.227184630308513, 1.227184630308513,
                                0.44178646691106466, 2.4052818754046852};
// Where the cube passage search with seed 3 ended up.
const ParamPoint kCubePassage{1.934611275617371, 0.46344415244076675, 0.84114452364281489,
                              1.5285963403290099, 5.2607727027893542e-08};

}  // namespace

TEST_CASE("identical orientations are exhausted") {
  const CertOutcome o = check({0, 0, 0, 0, 0}, stellated_tetrahedron(0.55), {});
  CHECK(o.kind == CertKind::kExhausted);
  CHECK(o.s_p == doctest::Approx(1.0));
  CHECK(o.s_q == doctest::Approx(1.0));
  CHECK_FALSE(o.epsilon);
  CHECK(std::string(to_string(o.kind)) == "EXHAUSTED");
}

TEST_CASE("frozen ruled-out point") {
  const CertOutcome o = check(kRuledOutPoint, stellated_tetrahedron(0.55), {});
  REQUIRE(o.kind == CertKind::kRuledOut);
  CHECK(*o.delta_success == 0.065536000000000025);
  CHECK(*o.epsilon == 0.10485760000000005);
  CHECK(o.iterations == 7);
  CHECK(o.s_p == 0.61039560687411221);
  CHECK(o.s_q == 0.58478629880665589);
  // The returned epsilon is twice the decayed delta.
  CHECK(*o.epsilon == doctest::Approx(2.0 * 0.8 * *o.delta_success).epsilon(1e-15));
}

TEST_CASE("ruled-out neighborhoods contain no passage") {
  const Polyhedron poly = stellated_tetrahedron(0.55);
  const CertOutcome o = check(kRuledOutPoint, poly, {});
  REQUIRE(o.kind == CertKind::kRuledOut);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double half = *o.epsilon / 2.0;
  for (int k = 0; k < 100; ++k) {
    auto x = kRuledOutPoint.to_array();
    for (double& c : x) c += half * u(rng);
    const ShadowPair s = shadows(poly, ParamPoint::from_array(x));
    CHECK(fit_scale(s.p, s.q).s_star < 1.0 + kFitEps);
    CHECK(fit_scale(s.q, s.p).s_star < 1.0 + kFitEps);
  }
}

TEST_CASE("a head start does not shrink the certificate") {
  const Polyhedron poly = stellated_tetrahedron(0.55);
  const CertOutcome o = check(kRuledOutPoint, poly, {});
  REQUIRE(o.kind == CertKind::kRuledOut);
  CheckConfig cfg;
  cfg.delta_init = *o.delta_success;
  const CertOutcome again = check(kRuledOutPoint, poly, cfg);
  REQUIRE(again.kind == CertKind::kRuledOut);
  CHECK(*again.delta_success >= *o.delta_success);
}

TEST_CASE("cube passage is reported as invalid with a replayable witness") {
  const Polyhedron c = cube();
  const CertOutcome o = check(kCubePassage, c, {});
  REQUIRE(o.kind == CertKind::kInvalid);
  REQUIRE(o.passage_scale);
  CHECK(*o.passage_scale > 1.06);
  CHECK_FALSE(o.epsilon);
  const ShadowPair s = shadows(c, kCubePassage);
  const PlanarPolygon& inner = o.passage_p_into_q ? s.p : s.q;
  const PlanarPolygon& outer = o.passage_p_into_q ? s.q : s.p;
  CHECK(containment_slack(inner, outer, 1.0, o.passage_translation) > 0.0);
  CHECK(check_passage(kCubePassage, c).kind == CertKind::kInvalid);
}

TEST_CASE("check is deterministic") {
  const Polyhedron poly = stellated_tetrahedron(0.55);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    ParamPoint x{6 * u(rng), 1.5 * u(rng), 3 * u(rng), 1.5 * u(rng), 6 * u(rng)};
    const CertOutcome a = check(x, poly, {});
    const CertOutcome b = check(x, poly, {});
    CHECK(a.kind == b.kind);
    CHECK(a.epsilon == b.epsilon);
    CHECK(a.s_p == b.s_p);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("buffer radii by mode") {
  const BufferRadii lit = buffer_radii(0.1, BufferMode::kPaperLiteral, std::sqrt(3.0));
  CHECK(lit.r_p == doctest::Approx(std::sqrt(5.0) * 0.1));
  CHECK(lit.r_q == doctest::Approx(std::sqrt(2.0) * 0.1));
  const BufferRadii ns = buffer_radii(0.1, BufferMode::kNormScaled, std::sqrt(3.0));
  CHECK(ns.r_p == doctest::Approx(std::sqrt(15.0) * 0.1));
  CHECK(ns.r_q == doctest::Approx(std::sqrt(6.0) * 0.1));
  CHECK(parse_buffer_mode("paper-literal") == BufferMode::kPaperLiteral);
  CHECK(parse_buffer_mode("NORM_SCALED") == BufferMode::kNormScaled);
  CHECK_THROWS_AS(parse_buffer_mode("loose"), InvalidParameter);
}

TEST_CASE("paper-literal buffers certify at least as much") {
  CheckConfig lit;
  lit.buffer_mode = BufferMode::kPaperLiteral;
  const CertOutcome o = check(kRuledOutPoint, stellated_tetrahedron(0.55), lit);
  REQUIRE(o.kind == CertKind::kRuledOut);
  CHECK(*o.delta_success >= 0.065536000000000025);
}

TEST_CASE("config validation and box coverage") {
  CheckConfig bad;
  bad.decay = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  CheckConfig low;
  low.threshold_b = 0.5;
  CHECK_THROWS_AS(low.validate(), InvalidParameter);

  CertOutcome o;
  o.kind = CertKind::kRuledOut;
  o.delta_success = 0.1;
  CHECK(covers_box(o, 0.2));
  CHECK_FALSE(covers_box(o, 0.2000001));
  o.kind = CertKind::kExhausted;
  CHECK_FALSE(covers_box(o, 0.01));
}
