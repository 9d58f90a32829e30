#include "rupert/nieuwland.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "rupert/error.hpp"
#include "rupert/lp.hpp"

namespace rupert {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

struct Improvement {
  std::uint64_t at_eval;  // 1-based evaluation count when reached
  double scale;
  ParamPoint point;
};

struct RestartTrace {
  std::vector<Improvement> improvements;
  std::uint64_t evaluations = 0;
};

ParamPoint random_start(const Polyhedron& poly, std::uint64_t seed, std::uint64_t restart) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= restart * 0xd1b54a32d192ed03ull;
  const bool reduced = poly.has_quarter_turn_symmetry();
  std::array<double, 5> x;
  for (std::size_t k = 0; k < 5; ++k) {
    const double extent = reduced ? kLambdaExtent[k] : 2.0 * std::numbers::pi;
    x[k] = unit_double(state) * extent;
  }
  return ParamPoint::from_array(x);
}

RestartTrace run_restart(const Polyhedron& poly, std::uint64_t seed, std::uint64_t restart,
                         std::uint64_t cap, const PassageSearchOptions& opts) {
  RestartTrace trace;
  std::array<double, 5> x = random_start(poly, seed, restart).to_array();
  double best = passage_objective(poly, ParamPoint::from_array(x)).scale;
  trace.evaluations = 1;
  trace.improvements.push_back({1, best, ParamPoint::from_array(x)});

  double step = opts.initial_step;
  while (step >= opts.final_step && trace.evaluations < cap) {
    bool improved = false;
    for (std::size_t k = 0; k < 5 && trace.evaluations < cap; ++k) {
      for (double sign : {1.0, -1.0}) {
        if (trace.evaluations >= cap) break;
        std::array<double, 5> y = x;
        y[k] += sign * step;
        const double f = passage_objective(poly, ParamPoint::from_array(y)).scale;
        ++trace.evaluations;
        if (f > best) {
          best = f;
          x = y;
          improved = true;
          trace.improvements.push_back({trace.evaluations, best, ParamPoint::from_array(x)});
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return trace;
}

}  // namespace

ObjectiveValue passage_objective(const Polyhedron& poly, const ParamPoint& point) {
  ObjectiveValue out;
  try {
    const ShadowPair pair = shadows(poly, point);
    const FitResult fp = fit_scale(pair.p, pair.q);
    const FitResult fq = fit_scale(pair.q, pair.p);
    out.p_into_q = fp.s_star >= fq.s_star;
    const FitResult& best = out.p_into_q ? fp : fq;
    out.scale = best.s_star;
    out.translation = best.t_star;
  } catch (const NumericFailure&) {
    out.scale = 0.0;
  }
  return out;
}

PassageCandidate find_passage(const Polyhedron& poly, std::uint64_t budget, std::uint64_t seed,
                              const PassageSearchOptions& opts) {
  if (budget == 0) throw InvalidParameter("budget must be at least 1");
  const std::uint64_t cap = std::max<std::uint64_t>(1, opts.restart_budget);
  const unsigned workers = std::max(1u, opts.workers);

  double best_scale = -std::numeric_limits<double>::infinity();
  ParamPoint best_point;
  std::uint64_t used = 0;
  std::uint64_t next_restart = 0;

  while (used < budget) {
    // Speculatively run a wave of restarts at full cap; only the ones the
    // budget reaches are consumed, in restart order.
    const std::uint64_t wave = workers;
    std::vector<RestartTrace> traces(wave);
    {
      std::atomic<std::uint64_t> next{0};
      auto work = [&] {
        for (std::uint64_t i = next++; i < wave; i = next++) {
          traces[i] = run_restart(poly, seed, next_restart + i, cap, opts);
        }
      };
      if (workers == 1) {
        work();
      } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      }
    }
    for (const RestartTrace& trace : traces) {
      if (used >= budget) break;
      const std::uint64_t allowed = std::min(cap, budget - used);
      for (const Improvement& imp : trace.improvements) {
        if (imp.at_eval > allowed) break;
        if (imp.scale > best_scale) {
          best_scale = imp.scale;
          best_point = imp.point;
        }
      }
      used += std::min(allowed, trace.evaluations);
      ++next_restart;
    }
  }

  PassageCandidate cand;
  cand.point = canonicalize(best_point, poly);
  cand.scale = best_scale;
  cand.evaluations = used;
  const ObjectiveValue at = passage_objective(poly, cand.point);
  cand.translation = at.translation;
  cand.p_into_q = at.p_into_q;
  return cand;
}

bool replay_candidate(const Polyhedron& poly, const PassageCandidate& cand) {
  const ShadowPair pair = shadows(poly, cand.point);
  const PlanarPolygon& inner = cand.p_into_q ? pair.p : pair.q;
  const PlanarPolygon& outer = cand.p_into_q ? pair.q : pair.p;
  const double s = cand.scale - kFitEps;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const Point2 v = s * inner.vertex(i) + cand.translation;
    for (std::size_t j = 0; j < outer.size(); ++j) {
      const HalfPlane h = outer.halfplane(j);
      if (!(dot(h.normal, v) < h.offset)) return false;
    }
  }
  return true;
}

std::vector<SweepRow> nieuwland_sweep(double a_from, double a_to, double step,
                                      std::uint64_t budget, std::uint64_t seed,
                                      const PassageSearchOptions& opts) {
  if (!(a_from > 0.0 && a_from <= a_to && a_to < 1.0)) {
    throw InvalidParameter("sweep range must satisfy 0 < a_from <= a_to < 1");
  }
  if (!(step > 0.0)) throw InvalidParameter("sweep step must be positive");
  const auto count = static_cast<std::uint64_t>(std::floor((a_to - a_from) / step + 1e-9)) + 1;
  std::vector<SweepRow> rows;
  rows.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double a = a_from + static_cast<double>(k) * step;
    rows.push_back({a, find_passage(stellated_tetrahedron(a), budget, seed, opts)});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "a,best_scale,alpha,theta,phi,theta_p,phi_p\n";
  char buf[64];
  for (const SweepRow& row : rows) {
    const auto x = row.best.point.to_array();
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", row.a, row.best.scale);
    out += buf;
    for (double v : x) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace rupert
