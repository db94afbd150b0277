#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "extremal.hpp"
#include "problem.hpp"

namespace ihoc {

// Nonnegative multiplier measure for one state constraint: an absolutely
// continuous density on the grid plus finitely many atoms.
struct ConstraintMeasure {
  SampledFn density;  // scalar; empty means zero density
  struct Atom {
    double tau;
    double beta;
  };
  std::vector<Atom> atoms;

  bool has_density() const { return !density.values.empty(); }
  double density_at(std::size_t node) const { return has_density() ? density.values[node] : 0.0; }
};

// Multipliers for the state-constrained necessary conditions. The adjoint
// is stored left-continuous: sample values are left limits, the jump after
// an atom at tau is beta * nu(tau) * g_x(tau, x(tau)).
struct ConstrainedMultipliers {
  double lambda0 = 1.0;
  SampledFn p;
  std::vector<ConstraintMeasure> measures;  // one per constraint
};

// Each measure must be nonnegative and concentrated on the contact set
// {t : g_j(t, x(t)) = 0} of its constraint.
inline CheckReport support_check(const ControlProblem& pb, const CandidateProcess& cand,
                                 const ConstrainedMultipliers& cm, double tol = 1e-6) {
  CheckReport rep;
  const auto& t = cand.x.grid.nodes;
  for (std::size_t j = 0; j < cm.measures.size(); ++j) {
    const auto& mu = cm.measures[j];
    double worst = 0.0;
    Verdict v = Verdict::Pass;
    std::string note;
    if (mu.has_density())
      for (std::size_t i = 0; i < t.size(); ++i) {
        double lam = mu.density.values[i];
        if (lam < -tol) {
          v = Verdict::Fail;
          note = "negative density";
          break;
        }
        if (lam > tol) {
          double gv = pb.g[j](t[i], cand.state_node(i));
          worst = std::max(worst, std::abs(gv));
          if (std::abs(gv) > tol) {
            v = Verdict::Fail;
            note = "density off the contact set";
          }
        }
      }
    for (const auto& a : mu.atoms) {
      if (a.beta < -tol) {
        v = Verdict::Fail;
        note = "negative atom";
      }
      Vec xv(cand.x.dim);
      for (std::size_t c = 0; c < cand.x.dim; ++c) xv[c] = cand.x.eval(a.tau, c);
      double gv = pb.g[j](a.tau, xv);
      worst = std::max(worst, std::abs(gv));
      if (std::abs(gv) > tol) {
        v = Verdict::Fail;
        note = "atom off the contact set";
      }
    }
    rep.items.push_back({"measure_support_" + std::to_string(j + 1), v, worst, note});
  }
  return rep;
}

namespace detail {

// H_x along the candidate for given multipliers: -lambda0 omega f_x + phi_x^T p.
inline std::vector<double> hx_samples(const ControlProblem& pb, const CandidateProcess& cand,
                                      double lambda0, const SampledFn& p) {
  const auto& t = p.grid.nodes;
  std::size_t n = pb.state_dim;
  std::vector<double> hx(t.size() * n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec xv = cand.state_node(i), uv = cand.control_node(i);
    Vec fx = pb.f_x(t[i], xv, uv);
    Mat px = pb.phi_x(t[i], xv, uv);
    Vec pv(n);
    for (std::size_t c = 0; c < n; ++c) pv[c] = p.value(i, c);
    Vec at = mat_vec(transpose(px, n), pv, n);
    double w = pb.omega(t[i]);
    if (!std::isfinite(w)) w = 0.0;
    for (std::size_t c = 0; c < n; ++c) hx[i * n + c] = -lambda0 * w * fx[c] + at[c];
  }
  return hx;
}

}  // namespace detail

// Residual of the integral form of the constrained adjoint equation,
//   p(t) = int_t^inf H_x ds - sum_j int_[t,inf) nu g_jx dmu_j,
// normalized by max(1, sup||p||). Atoms at tau >= t count toward the tail.
inline CheckResult integral_adjoint_residual(const ControlProblem& pb,
                                             const CandidateProcess& cand,
                                             const ConstrainedMultipliers& cm,
                                             double tol = 1e-5) {
  pb.validate();
  const auto& t = cm.p.grid.nodes;
  std::size_t n = pb.state_dim, N = t.size();
  auto hx = detail::hx_samples(pb, cand, cm.lambda0, cm.p);

  // absolutely continuous part of the measure term folded into the integrand
  std::vector<double> integrand = hx;
  for (std::size_t j = 0; j < cm.measures.size(); ++j) {
    if (!cm.measures[j].has_density()) continue;
    for (std::size_t i = 0; i < N; ++i) {
      Vec gx = pb.g_x[j](t[i], cand.state_node(i));
      double w = pb.nu(t[i]) * cm.measures[j].density_at(i);
      for (std::size_t c = 0; c < n; ++c) integrand[i * n + c] -= w * gx[c];
    }
  }
  std::vector<std::vector<double>> tails(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> comp(N);
    for (std::size_t i = 0; i < N; ++i) comp[i] = integrand[i * n + c];
    tails[c] = cumulative_tail(t, comp);
  }
  double resid = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    Vec rhs(n);
    for (std::size_t c = 0; c < n; ++c) rhs[c] = tails[c][i];
    for (std::size_t j = 0; j < cm.measures.size(); ++j)
      for (const auto& a : cm.measures[j].atoms) {
        if (a.tau < t[i]) continue;
        Vec xv(cand.x.dim);
        for (std::size_t c = 0; c < cand.x.dim; ++c) xv[c] = cand.x.eval(a.tau, c);
        Vec gx = pb.g_x[j](a.tau, xv);
        double w = a.beta * pb.nu(a.tau);
        for (std::size_t c = 0; c < n; ++c) rhs[c] -= w * gx[c];
      }
    for (std::size_t c = 0; c < n; ++c) {
      scale = std::max(scale, std::abs(cm.p.value(i, c)));
      resid = std::max(resid, std::abs(cm.p.value(i, c) - rhs[c]));
    }
  }
  double normalized = resid / scale;
  return {"integral_adjoint_residual", normalized <= tol ? Verdict::Pass : Verdict::Fail,
          normalized, ""};
}

// ||p||^2 / nu -> 0 along the grid tail.
inline CheckResult constrained_transversality(const ControlProblem& pb,
                                              const ConstrainedMultipliers& cm) {
  const auto& t = cm.p.grid.nodes;
  std::size_t N = t.size(), n = cm.p.dim;
  std::vector<double> energy(N);
  for (std::size_t i = 0; i < N; ++i) {
    double pp = 0.0;
    for (std::size_t c = 0; c < n; ++c) pp += cm.p.value(i, c) * cm.p.value(i, c);
    energy[i] = pp / pb.nu(t[i]);
  }
  auto d = detail::decay_verdict("p_energy_over_nu", t, energy);
  return {d.name, d.verdict, d.final_value, "tail decay"};
}

inline CheckResult constrained_max_condition(const ControlProblem& pb,
                                             const CandidateProcess& cand,
                                             const ConstrainedMultipliers& cm,
                                             double tol = 1e-6) {
  PontryaginData pd;
  pd.lambda0 = cm.lambda0;
  pd.p = cm.p;
  return max_condition_check(pb, cand, pd, tol);
}

struct AdjointDecomposition {
  SampledFn q;  // absolutely continuous part, q(0) = 0
  SampledFn r;  // pure-jump part from the atoms, left-continuous
  double residual = 0.0;  // max ||p - p(0) - q - r||
};

// Splits the adjoint into p(0) + q + r with
//   q(t) = -int_0^t (H_x - sum_j lambda_j nu g_jx) ds,
//   r(t) = sum_j sum_{tau_jk < t} beta_jk nu(tau_jk) g_jx(tau_jk, x(tau_jk)).
inline AdjointDecomposition decompose_adjoint(const ControlProblem& pb,
                                              const CandidateProcess& cand,
                                              const ConstrainedMultipliers& cm) {
  const auto& t = cm.p.grid.nodes;
  std::size_t n = pb.state_dim, N = t.size();
  auto hx = detail::hx_samples(pb, cand, cm.lambda0, cm.p);
  std::vector<double> integrand = hx;
  for (std::size_t j = 0; j < cm.measures.size(); ++j) {
    if (!cm.measures[j].has_density()) continue;
    for (std::size_t i = 0; i < N; ++i) {
      Vec gx = pb.g_x[j](t[i], cand.state_node(i));
      double w = pb.nu(t[i]) * cm.measures[j].density_at(i);
      for (std::size_t c = 0; c < n; ++c) integrand[i * n + c] -= w * gx[c];
    }
  }
  AdjointDecomposition out;
  out.q.grid = cm.p.grid;
  out.q.dim = n;
  out.q.values.resize(N * n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> comp(N);
    for (std::size_t i = 0; i < N; ++i) comp[i] = integrand[i * n + c];
    auto C = cumulative_head(t, comp);
    for (std::size_t i = 0; i < N; ++i) out.q.values[i * n + c] = -C[i];
  }
  out.r.grid = cm.p.grid;
  out.r.dim = n;
  out.r.values.assign(N * n, 0.0);
  for (std::size_t j = 0; j < cm.measures.size(); ++j)
    for (const auto& a : cm.measures[j].atoms) {
      Vec xv(cand.x.dim);
      for (std::size_t c = 0; c < cand.x.dim; ++c) xv[c] = cand.x.eval(a.tau, c);
      Vec gx = pb.g_x[j](a.tau, xv);
      double w = a.beta * pb.nu(a.tau);
      for (std::size_t i = 0; i < N; ++i)
        if (a.tau < t[i])
          for (std::size_t c = 0; c < n; ++c) out.r.values[i * n + c] += w * gx[c];
    }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      double recon = cm.p.value(0, c) + out.q.value(i, c) + out.r.value(i, c);
      out.residual = std::max(out.residual, std::abs(cm.p.value(i, c) - recon));
    }
  return out;
}

// Integration-by-parts identity for the pure-jump part against a probe y
// with y(0) = 0:
//   int_0^t <r, y'> ds = <r(t), y(t)> - sum_{tau < t} <beta nu(tau) g_x(tau), y(tau)>.
// r is piecewise constant, so the left side is a finite sum of
// <r_segment, y(end) - y(start)> terms; reports the worst deviation over
// probe horizons.
inline CheckResult jump_integration_by_parts_check(const ControlProblem& pb,
                                                   const CandidateProcess& cand,
                                                   const ConstrainedMultipliers& cm,
                                                   const SampledFn& y) {
  std::size_t n = pb.state_dim;
  struct JumpTerm {
    double tau;
    Vec w;  // beta nu(tau) g_x
  };
  std::vector<JumpTerm> jumps;
  for (std::size_t j = 0; j < cm.measures.size(); ++j)
    for (const auto& a : cm.measures[j].atoms) {
      Vec xv(cand.x.dim);
      for (std::size_t c = 0; c < cand.x.dim; ++c) xv[c] = cand.x.eval(a.tau, c);
      Vec gx = pb.g_x[j](a.tau, xv);
      for (double& v : gx) v *= a.beta * pb.nu(a.tau);
      jumps.push_back({a.tau, gx});
    }
  std::sort(jumps.begin(), jumps.end(),
            [](const JumpTerm& a, const JumpTerm& b) { return a.tau < b.tau; });
  auto y_at = [&](double tt) {
    Vec v(n);
    for (std::size_t c = 0; c < n; ++c) v[c] = y.eval(tt, c);
    return v;
  };
  double worst = 0.0;
  for (double T : {0.5 * y.grid.t_max(), 0.8 * y.grid.t_max(), y.grid.t_max()}) {
    // left side: r piecewise constant between jump times
    Vec r(n, 0.0);
    double seg_start = 0.0;
    double lhs = 0.0;
    Vec rhs_sum(n, 0.0);
    for (const auto& jt : jumps) {
      if (jt.tau >= T) break;
      Vec ya = y_at(seg_start), yb = y_at(jt.tau);
      for (std::size_t c = 0; c < n; ++c) lhs += r[c] * (yb[c] - ya[c]);
      for (std::size_t c = 0; c < n; ++c) r[c] += jt.w[c];
      seg_start = jt.tau;
    }
    {
      Vec ya = y_at(seg_start), yb = y_at(T);
      for (std::size_t c = 0; c < n; ++c) lhs += r[c] * (yb[c] - ya[c]);
    }
    double rhs = 0.0;
    Vec yT = y_at(T);
    for (std::size_t c = 0; c < n; ++c) rhs += r[c] * yT[c];
    for (const auto& jt : jumps) {
      if (jt.tau >= T) break;
      Vec yt = y_at(jt.tau);
      for (std::size_t c = 0; c < n; ++c) rhs -= jt.w[c] * yt[c];
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {"jump_integration_by_parts", worst <= 1e-6 ? Verdict::Pass : Verdict::Fail, worst, ""};
}

}  // namespace ihoc
