#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "problem.hpp"
#include "quadrature.hpp"

namespace ihoc {

struct UnsupportedProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationSweep {
  std::vector<double> horizons;
  std::vector<double> values;  // J_T in the problem's original sense
};

inline void write_sweep_csv(const std::string& path, const TruncationSweep& sweep,
                            double limit_value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "T,J_T,gap\n";
  char buf[40];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (std::size_t i = 0; i < sweep.horizons.size(); ++i) {
    put(sweep.horizons[i]);
    out << ",";
    put(sweep.values[i]);
    out << ",";
    put(sweep.values[i] - limit_value);
    out << "\n";
  }
}

namespace detail {

inline double expint_segment(double gamma, double a, double b) {
  // int_a^b e^{gamma t} dt
  if (std::abs(gamma) < 1e-14) return b - a;
  return (std::exp(gamma * b) - std::exp(gamma * a)) / gamma;
}

struct SwitchEval {
  double value;
  double x_end;
};

// Exact propagation and cost of the switching model over [0,T] with switch
// times s (sorted), control starting at level `first_hi`.
inline SwitchEval eval_switching(const SwitchingModel& sm, double T, std::vector<double> s,
                                 bool first_hi) {
  std::sort(s.begin(), s.end());
  s.erase(std::remove_if(s.begin(), s.end(), [&](double v) { return v < 0.0 || v > T; }),
          s.end());
  s.push_back(T);
  double x = sm.x0, t0 = 0.0, J = 0.0;
  bool hi = first_hi;
  for (double t1 : s) {
    if (t1 > t0) {
      double u = hi ? sm.u_hi : sm.u_lo;
      double al = sm.alpha(u), be = sm.beta(u), c0 = sm.c0(u), c1 = sm.c1(u);
      double C, D;
      if (std::abs(al) < 1e-14) {
        // x(t) = x + be (t - t0): handled as affine with C slope
        // cost: int e^{-rho t} (c0 + c1 (x + be (t-t0)))
        double base = c0 + c1 * (x - be * t0);
        J += base * expint_segment(-sm.rho, t0, t1);
        if (std::abs(sm.rho) < 1e-14) {
          J += c1 * be * 0.5 * (t1 * t1 - t0 * t0);
        } else {
          // int t e^{-rho t} dt
          auto anti = [&](double tt) {
            return -std::exp(-sm.rho * tt) * (tt / sm.rho + 1.0 / (sm.rho * sm.rho));
          };
          J += c1 * be * (anti(t1) - anti(t0));
        }
        x = x + be * (t1 - t0);
      } else {
        C = x + be / al;
        D = -be / al;
        J += c1 * C * std::exp(-al * t0) * expint_segment(al - sm.rho, t0, t1);
        J += (c0 + c1 * D) * expint_segment(-sm.rho, t0, t1);
        x = C * std::exp(al * (t1 - t0)) + D;
      }
      t0 = t1;
    }
    hi = !hi;
  }
  return {J, x};
}

}  // namespace detail

struct SwitchingSolution {
  double value = 0.0;               // best J_T in the original sense
  std::vector<double> switch_times;
  bool first_hi = true;
};

// Best truncated value over bang-bang controls with at most `switch_count`
// switches, by refining grid search over the switch times. Needs the
// problem's switching metadata.
inline SwitchingSolution solve_truncated_switching(const ControlProblem& pb, double T,
                                                   int switch_count, int rounds = 6) {
  if (!pb.switching) throw UnsupportedProblem("problem carries no switching model");
  const SwitchingModel& sm = *pb.switching;
  double sign = sm.maximize ? 1.0 : -1.0;
  SwitchingSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& s, bool first_hi) {
    double v = sign * detail::eval_switching(sm, T, s, first_hi).value;
    if (v > best.value) {
      best.value = v;
      best.switch_times = s;
      best.first_hi = first_hi;
    }
  };
  if (switch_count < 0 || switch_count > 2)
    throw UnsupportedProblem("supported switch counts: 0, 1, 2");
  for (bool first_hi : {false, true}) {
    if (switch_count == 0) {
      consider({}, first_hi);
      continue;
    }
    // round 0: coarse tensor grid; later rounds shrink around the best
    std::vector<double> center(std::size_t(switch_count), 0.5 * T);
    double span = 0.5 * T;
    double local_best = -std::numeric_limits<double>::infinity();
    std::vector<double> local_s;
    for (int r = 0; r < rounds; ++r) {
      const int M = 32;
      auto axis = [&](double c) {
        std::vector<double> v;
        for (int i = 0; i <= M; ++i) {
          double x = c - span + 2.0 * span * double(i) / double(M);
          v.push_back(std::min(T, std::max(0.0, x)));
        }
        return v;
      };
      if (switch_count == 1) {
        for (double s1 : axis(center[0])) {
          double v = sign * detail::eval_switching(sm, T, {s1}, first_hi).value;
          if (v > local_best) {
            local_best = v;
            local_s = {s1};
          }
        }
      } else {
        auto a1 = axis(center[0]), a2 = axis(center[1]);
        for (double s1 : a1)
          for (double s2 : a2) {
            if (s2 < s1) continue;
            double v = sign * detail::eval_switching(sm, T, {s1, s2}, first_hi).value;
            if (v > local_best) {
              local_best = v;
              local_s = {s1, s2};
            }
          }
      }
      center = local_s;
      if (center.size() < std::size_t(switch_count)) center.resize(switch_count, center.back());
      span /= double(8);
    }
    consider(local_s, first_hi);
    consider({}, first_hi);  // degenerate: fewer effective switches
  }
  best.value *= sign;  // back to the original sense
  return best;
}

// Truncated cost of a sampled process at horizon T (minimization form of
// the stored problem; callers flip the sign for max-stated models).
inline double truncated_cost(const ControlProblem& pb, const CandidateProcess& cand, double T) {
  const auto& t = cand.x.grid.nodes;
  std::vector<double> nodes;
  std::vector<double> vals;
  for (std::size_t i = 0; i < t.size() && t[i] <= T + 1e-12; ++i) {
    double w = pb.omega(t[i]);
    nodes.push_back(t[i]);
    vals.push_back(std::isfinite(w) ? w * pb.f(t[i], cand.state_node(i), cand.control_node(i))
                                    : 0.0);
  }
  if (!nodes.empty() && nodes.back() < T - 1e-12 && T <= t.back()) {
    // close the last partial interval at exactly T
    Vec xv(cand.x.dim), uv(cand.u.dim);
    for (std::size_t c = 0; c < cand.x.dim; ++c) xv[c] = cand.x.eval(T, c);
    for (std::size_t c = 0; c < cand.u.dim; ++c) uv[c] = cand.u.eval(T, c);
    double w = pb.omega(T);
    nodes.push_back(T);
    vals.push_back(std::isfinite(w) ? w * pb.f(T, xv, uv) : 0.0);
  }
  if (nodes.size() < 2) return 0.0;
  return cumulative_head(nodes, vals).back();
}

// Defect of a competitor against the candidate at the given horizons:
// Delta(T) = J_T(competitor) - J_T(candidate).
inline TruncationSweep defect_series(const ControlProblem& pb, const CandidateProcess& cand,
                                     const CandidateProcess& competitor,
                                     const std::vector<double>& horizons) {
  TruncationSweep s;
  for (double T : horizons) {
    s.horizons.push_back(T);
    s.values.push_back(truncated_cost(pb, competitor, T) - truncated_cost(pb, cand, T));
  }
  return s;
}

struct HypothesisHResult {
  Verdict verdict = Verdict::Inconclusive;
  bool pathology = false;
  double limit_value = 0.0;      // J of the limit candidate, original sense
  double sweep_final = 0.0;
  double gap = 0.0;
  std::string note;
};

// Finite-horizon approximation hypothesis: truncated optimal values must
// approach the cost of the limiting candidate. A diverging sweep against a
// finite limit value, or a settled sweep at a different value, is the
// pathological regime.
inline HypothesisHResult hypothesis_H_check(const ControlProblem& pb,
                                            const TruncationSweep& sweep,
                                            const CandidateProcess& limit_candidate,
                                            double rel_tol = 1e-3) {
  if (sweep.values.size() < 3) throw std::invalid_argument("sweep needs at least 3 horizons");
  HypothesisHResult out;
  double sense = pb.original_sense_max ? -1.0 : 1.0;
  out.limit_value = sense * truncated_cost(pb, limit_candidate, sweep.horizons.back());
  std::size_t n = sweep.values.size();
  out.sweep_final = sweep.values[n - 1];
  double d1 = std::abs(sweep.values[n - 1] - sweep.values[n - 2]);
  double d2 = std::abs(sweep.values[n - 2] - sweep.values[n - 3]);
  double scale = std::max(1.0, std::abs(out.sweep_final));
  bool settled = d1 <= rel_tol * scale && d1 <= d2 + rel_tol * scale;
  out.gap = std::abs(out.sweep_final - out.limit_value);
  if (!settled && d1 >= 0.95 * d2) {
    out.verdict = Verdict::Fail;
    out.pathology = true;
    out.note = "truncated optima diverge from the limit candidate's value";
    return out;
  }
  if (!settled) {
    out.verdict = Verdict::Inconclusive;
    out.note = "sweep not settled";
    return out;
  }
  if (out.gap <= rel_tol * scale) {
    out.verdict = Verdict::Pass;
  } else {
    out.verdict = Verdict::Fail;
    out.pathology = true;
    out.note = "truncated optima settle away from the limit candidate's value";
  }
  return out;
}

}  // namespace ihoc
