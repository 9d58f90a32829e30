#pragma once

// The per-point check: either the orientation pair at a point is itself a
// passage, or buffered shadows prove that no passage exists within a cube of
// angle perturbations around it, or the check gives up.
//
// With P = R_alpha M_{theta,phi} poly and Q = M_{theta',phi'} poly, every
// orientation whose angles are within delta of the point moves each projected
// vertex v by at most sqrt(5) delta |v| (for P) or sqrt(2) delta |v| (for Q).
// Eroding one shadow and growing the other by those radii and failing to fit
// in both directions rules out the whole perturbation cube.

#include <optional>

#include "rupert/geometry.hpp"
#include "rupert/polyhedron.hpp"

namespace rupert {

enum class CertKind { kRuledOut, kExhausted, kInvalid };

const char* to_string(CertKind kind);

enum class BufferMode {
  // Radii sqrt(5) delta and sqrt(2) delta, with no vertex-norm factor.
  kPaperLiteral,
  // Radii scaled by the largest vertex norm V of the polyhedron; sound.
  kNormScaled,
};

const char* to_string(BufferMode mode);
BufferMode parse_buffer_mode(std::string_view text);

struct CheckConfig {
  double delta_init = 0.25;
  double decay = 0.8;
  double threshold_b = 1e-3;
  BufferMode buffer_mode = BufferMode::kNormScaled;

  // Throws InvalidParameter unless 0 < decay < 1 and delta_init > threshold_b > 0.
  void validate() const;
};

struct CertOutcome {
  CertKind kind = CertKind::kExhausted;
  // 2 * delta after the decay step, as the reference procedure returns it.
  // Set iff kind == kRuledOut.
  std::optional<double> epsilon;
  // The delta whose buffers proved the bound (before the decay step). Every
  // point within delta_success of the center in each angle is covered.
  std::optional<double> delta_success;
  double s_p = 0.0;  // fit_scale(P, Q) at the exact orientations
  double s_q = 0.0;  // fit_scale(Q, P)
  // Set iff kind == kInvalid: the larger of s_p and s_q, with its witness.
  std::optional<double> passage_scale;
  Point2 passage_translation;
  bool passage_p_into_q = true;
  int iterations = 0;
};

struct BufferRadii {
  double r_p = 0.0;
  double r_q = 0.0;
};
BufferRadii buffer_radii(double delta, BufferMode mode, double max_vertex_norm);

CertOutcome check(const ParamPoint& point, const Polyhedron& poly, const CheckConfig& cfg);

// Only the exact-orientation stage of check: kInvalid or kExhausted.
CertOutcome check_passage(const ParamPoint& point, const Polyhedron& poly);

// The cube-coverage criterion: a box of side w centered at the checked point
// is ruled out iff the check succeeded with delta_success >= w / 2.
bool covers_box(const CertOutcome& outcome, double side);

}  // namespace rupert
