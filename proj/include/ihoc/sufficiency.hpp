#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "extremal.hpp"
#include "problem.hpp"

namespace ihoc {

// Pointwise maximized Hamiltonian sup_{u in U} H(t,x,u,p,lambda0) over the
// probe controls; ref_u seeds the probe pattern.
inline double hamiltonian_sup(const ControlProblem& pb, double t, const Vec& x, const Vec& p,
                              double lambda0, const Vec& ref_u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& u : pb.U.probe_points(ref_u))
    best = std::max(best, hamiltonian(pb, t, x, u, p, lambda0));
  return best;
}

enum class ConcavityMode { Midpoint, Hessian };

// Concavity of the maximized Hamiltonian in the state over the tube.
// Midpoint mode tests H((x1+x2)/2) >= (H(x1)+H(x2))/2 on sampled pairs;
// Hessian mode tests second differences along the tube axes. Violations
// are normalized by 1 + |H| with tolerance 1e-8.
inline CheckResult concavity_check(const ControlProblem& pb, const CandidateProcess& cand,
                                   const PontryaginData& pd, const Tube& tube,
                                   ConcavityMode mode = ConcavityMode::Midpoint,
                                   std::uint64_t seed = 0, double tol = 1e-8) {
  DetRng rng(seed);
  const auto& t = pd.p.grid.nodes;
  std::size_t n = pb.state_dim;
  std::size_t stride = std::max<std::size_t>(1, t.size() / 65);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); i += stride) {
    if (!std::isfinite(pb.omega(t[i]))) continue;
    Vec pv(n), uref = cand.control_node(i);
    for (std::size_t c = 0; c < n; ++c) pv[c] = pd.p.value(i, c);
    auto Hs = [&](const Vec& xv) {
      return hamiltonian_sup(pb, t[i], xv, pv, pd.lambda0, uref);
    };
    auto xs = tube_slice_samples(tube, t[i], rng);
    if (mode == ConcavityMode::Midpoint) {
      for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); b += 3) {
          Vec mid(n);
          for (std::size_t c = 0; c < n; ++c) mid[c] = 0.5 * (xs[a][c] + xs[b][c]);
          double ha = Hs(xs[a]), hb = Hs(xs[b]), hm = Hs(mid);
          double viol = 0.5 * (ha + hb) - hm;
          worst = std::max(worst, viol / (1.0 + std::abs(hm)));
        }
    } else {
      Vec c0(n);
      for (std::size_t c = 0; c < n; ++c) c0[c] = tube.center.eval(t[i], c);
      double h = 0.25 * tube.gamma;
      for (std::size_t axis = 0; axis < n; ++axis) {
        Vec xp = c0, xm = c0;
        xp[axis] += h;
        xm[axis] -= h;
        double second = (Hs(xp) - 2.0 * Hs(c0) + Hs(xm)) / (h * h);
        worst = std::max(worst, second / (1.0 + std::abs(Hs(c0))));
      }
    }
  }
  return {"hamiltonian_concavity", worst <= tol ? Verdict::Pass : Verdict::Fail, worst,
          mode == ConcavityMode::Midpoint ? "midpoint test" : "second-difference test"};
}

// Strict growth toward the candidate:
//   H(t,x_*,p) - H(t,x,p) - <dp/dt, x - x_*> >= rate(t) ||x - x_*||^2
// over tube samples (H here is the maximized Hamiltonian). A derivative
// override replaces dp/dt, which the constrained theory needs (it uses the
// absolutely continuous part only).
inline CheckResult strict_growth_check(const ControlProblem& pb, const CandidateProcess& cand,
                                       const PontryaginData& pd, const Tube& tube,
                                       const std::function<double(double)>& rate,
                                       const std::vector<double>* dp_override = nullptr,
                                       std::uint64_t seed = 0, double tol = 1e-8) {
  DetRng rng(seed);
  const auto& t = pd.p.grid.nodes;
  std::size_t n = pb.state_dim;
  std::vector<double> dp = dp_override ? *dp_override
                          : (pd.p.derivatives ? *pd.p.derivatives
                                              : finite_difference(pd.p.grid, pd.p.values, n));
  std::size_t stride = std::max<std::size_t>(1, t.size() / 65);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); i += stride) {
    if (!std::isfinite(pb.omega(t[i]))) continue;
    Vec pv(n), xstar = cand.state_node(i), uref = cand.control_node(i);
    for (std::size_t c = 0; c < n; ++c) pv[c] = pd.p.value(i, c);
    double h_star = hamiltonian_sup(pb, t[i], xstar, pv, pd.lambda0, uref);
    for (const auto& xv : tube_slice_samples(tube, t[i], rng)) {
      double dist2 = 0.0, pair = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        double d = xv[c] - xstar[c];
        dist2 += d * d;
        pair += dp[i * n + c] * d;
      }
      if (dist2 < 1e-16) continue;
      double lhs = h_star - hamiltonian_sup(pb, t[i], xv, pv, pd.lambda0, uref) - pair;
      double viol = rate(t[i]) * dist2 - lhs;
      worst = std::max(worst, viol / (1.0 + std::abs(h_star)));
    }
  }
  return {"strict_growth", worst <= tol ? Verdict::Pass : Verdict::Fail, worst,
          "growth rate against tube samples"};
}

// Convexity in x of each state constraint over the tube (midpoint test).
inline CheckReport constraint_convexity_check(const ControlProblem& pb, const Tube& tube,
                                              std::uint64_t seed = 0, double tol = 1e-8) {
  DetRng rng(seed);
  CheckReport rep;
  const auto& t = tube.center.grid.nodes;
  std::size_t n = tube.center.dim;
  std::size_t stride = std::max<std::size_t>(1, t.size() / 65);
  for (std::size_t j = 0; j < pb.g.size(); ++j) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); i += stride) {
      auto xs = tube_slice_samples(tube, t[i], rng);
      for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); b += 3) {
          Vec mid(n);
          for (std::size_t c = 0; c < n; ++c) mid[c] = 0.5 * (xs[a][c] + xs[b][c]);
          double viol = pb.g[j](t[i], mid) -
                        0.5 * (pb.g[j](t[i], xs[a]) + pb.g[j](t[i], xs[b]));
          worst = std::max(worst, viol);
        }
    }
    rep.items.push_back({"constraint_convexity_" + std::to_string(j + 1),
                         worst <= tol ? Verdict::Pass : Verdict::Fail, worst, "midpoint test"});
  }
  return rep;
}

}  // namespace ihoc
