#pragma once

// Direct search for passages: multistart sampling over the parameter box
// followed by coordinate pattern search on
//   f(x) = max(fit_scale(P(x), Q(x)), fit_scale(Q(x), P(x))).
// The best f found estimates the Nieuwland number from below.

#include <cstdint>
#include <string>
#include <vector>

#include "rupert/geometry.hpp"
#include "rupert/polyhedron.hpp"

namespace rupert {

struct PassageCandidate {
  ParamPoint point;       // canonicalized when the polyhedron allows it
  double scale = 0.0;     // best objective value found
  Point2 translation;     // LP witness at `point` for the winning direction
  bool p_into_q = true;   // which shadow is scaled into the other
  std::uint64_t evaluations = 0;
};

struct PassageSearchOptions {
  unsigned workers = 1;
  // Evaluations one restart may spend before the next restart begins.
  std::uint64_t restart_budget = 4000;
  double initial_step = 0.19634954084936207;  // pi/16
  double final_step = 1e-7;
};

struct ObjectiveValue {
  double scale = 0.0;
  Point2 translation;
  bool p_into_q = true;
};

ObjectiveValue passage_objective(const Polyhedron& poly, const ParamPoint& point);

// Deterministic in (budget, seed) and independent of the worker count. The
// evaluation sequence for budget B is a prefix of the one for any larger
// budget, so the result never gets worse as the budget grows.
PassageCandidate find_passage(const Polyhedron& poly, std::uint64_t budget, std::uint64_t seed,
                              const PassageSearchOptions& opts = {});

// Replays the candidate at scale - 1e-9 with direct halfplane checks,
// without the LP. True iff the scaled shadow lies strictly inside the other.
bool replay_candidate(const Polyhedron& poly, const PassageCandidate& cand);

struct SweepRow {
  double a = 0.0;
  PassageCandidate best;
};

// One find_passage per a = a_from + k * step up to a_to (inclusive within
// 1e-9). Every row uses the same seed.
std::vector<SweepRow> nieuwland_sweep(double a_from, double a_to, double step,
                                      std::uint64_t budget, std::uint64_t seed,
                                      const PassageSearchOptions& opts = {});

// Header a,best_scale,alpha,theta,phi,theta_p,phi_p; 17 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace rupert
