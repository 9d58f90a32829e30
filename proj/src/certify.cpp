#include "rupert/certify.hpp"

#include <algorithm>
#include <cmath>

#include "rupert/error.hpp"
#include "rupert/lp.hpp"

namespace rupert {

const char* to_string(CertKind kind) {
  switch (kind) {
    case CertKind::kRuledOut: return "RULED_OUT";
    case CertKind::kExhausted: return "EXHAUSTED";
    case CertKind::kInvalid: return "INVALID";
  }
  return "?";
}

const char* to_string(BufferMode mode) {
  return mode == BufferMode::kPaperLiteral ? "paper-literal" : "norm-scaled";
}

BufferMode parse_buffer_mode(std::string_view text) {
  if (text == "paper-literal" || text == "PAPER_LITERAL") return BufferMode::kPaperLiteral;
  if (text == "norm-scaled" || text == "NORM_SCALED") return BufferMode::kNormScaled;
  throw InvalidParameter("unknown buffer mode '" + std::string(text) + "'");
}

void CheckConfig::validate() const {
  if (!(decay > 0.0 && decay < 1.0)) throw InvalidParameter("decay must lie in (0, 1)");
  if (!(threshold_b > 0.0)) throw InvalidParameter("threshold_b must be positive");
  if (!(delta_init > threshold_b)) throw InvalidParameter("delta_init must exceed threshold_b");
}

BufferRadii buffer_radii(double delta, BufferMode mode, double max_vertex_norm) {
  const double scale = mode == BufferMode::kNormScaled ? max_vertex_norm : 1.0;
  return {std::sqrt(5.0) * delta * scale, std::sqrt(2.0) * delta * scale};
}

namespace {

// True iff `inner` provably cannot be scaled past 1 - kFitEps into `outer`.
bool certainly_no_fit(const PlanarPolygon& inner, const PlanarPolygon& outer) {
  try {
    const FitResult fit = fit_scale(inner, outer, {.certify = true});
    return fit.certified && fit.s_star < 1.0 - kFitEps;
  } catch (const NumericFailure&) {
    return false;
  }
}

}  // namespace

namespace {

// Fills the exact-fit fields; true iff the point itself is a passage.
bool exact_stage(const PlanarPolygon& p, const PlanarPolygon& q, CertOutcome& out) {
  const FitResult fp = fit_scale(p, q);
  const FitResult fq = fit_scale(q, p);
  out.s_p = fp.s_star;
  out.s_q = fq.s_star;
  if (std::max(fp.s_star, fq.s_star) > 1.0 + kFitEps) {
    out.kind = CertKind::kInvalid;
    out.passage_p_into_q = fp.s_star >= fq.s_star;
    const FitResult& best = out.passage_p_into_q ? fp : fq;
    out.passage_scale = best.s_star;
    out.passage_translation = best.t_star;
    return true;
  }
  out.kind = CertKind::kExhausted;
  return false;
}

}  // namespace

CertOutcome check_passage(const ParamPoint& point, const Polyhedron& poly) {
  const ShadowPair pair = shadows(poly, point);
  CertOutcome out;
  exact_stage(pair.p, pair.q, out);
  return out;
}

CertOutcome check(const ParamPoint& point, const Polyhedron& poly, const CheckConfig& cfg) {
  cfg.validate();
  const ShadowPair pair = shadows(poly, point);
  const PlanarPolygon& p = pair.p;
  const PlanarPolygon& q = pair.q;

  CertOutcome out;
  if (exact_stage(p, q, out)) return out;

  double delta = cfg.delta_init;
  while (delta > cfg.threshold_b) {
    ++out.iterations;
    const BufferRadii r = buffer_radii(delta, cfg.buffer_mode, poly.max_vertex_norm());
    const std::optional<PlanarPolygon> p_minus = try_buffer(p, -r.r_p);
    const PlanarPolygon q_plus = buffer(q, r.r_q);
    const PlanarPolygon p_plus = buffer(p, r.r_p);
    const std::optional<PlanarPolygon> q_minus = try_buffer(q, -r.r_q);
    const double used = delta;
    delta *= cfg.decay;
    if (!p_minus || !q_minus) continue;
    // The second test runs Q into P, so both directions are excluded.
    if (certainly_no_fit(*p_minus, q_plus) && certainly_no_fit(*q_minus, p_plus)) {
      out.kind = CertKind::kRuledOut;
      out.epsilon = 2.0 * delta;
      out.delta_success = used;
      return out;
    }
  }
  out.kind = CertKind::kExhausted;
  return out;
}

bool covers_box(const CertOutcome& outcome, double side) {
  return outcome.kind == CertKind::kRuledOut && outcome.delta_success &&
         *outcome.delta_success >= 0.5 * side;
}

}  // namespace rupert
