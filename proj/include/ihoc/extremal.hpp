#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "problem.hpp"
#include "spaces.hpp"

namespace ihoc {

struct TailNotSettled : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// H(t,x,u,p,lambda0) = -lambda0 omega(t) f(t,x,u) + <p, phi(t,x,u)>.
inline double hamiltonian(const ControlProblem& pb, double t, const Vec& x, const Vec& u,
                          const Vec& p, double lambda0) {
  double h = -lambda0 * pb.omega(t) * pb.f(t, x, u);
  Vec ph = pb.phi(t, x, u);
  for (std::size_t i = 0; i < p.size(); ++i) h += p[i] * ph[i];
  return h;
}

namespace detail {

inline Mat mat_mul(const Mat& A, const Mat& B, std::size_t n) {
  Mat C(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      double a = A[i * n + k];
      for (std::size_t j = 0; j < n; ++j) C[i * n + j] += a * B[k * n + j];
    }
  return C;
}

inline Vec mat_vec(const Mat& A, const Vec& v, std::size_t n) {
  Vec r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i] += A[i * n + j] * v[j];
  return r;
}

inline Mat transpose(const Mat& A, std::size_t n) {
  Mat T(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) T[j * n + i] = A[i * n + j];
  return T;
}

inline Mat identity(std::size_t n) {
  Mat I(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) I[i * n + i] = 1.0;
  return I;
}

// One RK4 step of M' = s * A(t) * M (s = +1 for the forward fundamental
// matrix, -1 with transposed coefficient for its dual).
template <class CoefFn>
inline Mat rk4_matrix_step(const CoefFn& A, double t, double h, const Mat& M, std::size_t n,
                           bool dual) {
  auto rhs = [&](double tt, const Mat& W) {
    Mat a = A(tt);
    if (dual) {
      Mat r = mat_mul(transpose(a, n), W, n);
      for (double& x : r) x = -x;
      return r;
    }
    return mat_mul(a, W, n);
  };
  Mat k1 = rhs(t, M);
  Mat tmp(n * n);
  for (std::size_t i = 0; i < n * n; ++i) tmp[i] = M[i] + 0.5 * h * k1[i];
  Mat k2 = rhs(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < n * n; ++i) tmp[i] = M[i] + 0.5 * h * k2[i];
  Mat k3 = rhs(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < n * n; ++i) tmp[i] = M[i] + h * k3[i];
  Mat k4 = rhs(t + h, tmp);
  Mat out(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    out[i] = M[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace detail

// Forward fundamental matrix Y (Y' = phi_x Y, Y(0)=I) and its dual Z
// (Z' = -phi_x^T Z, Z(0)=I) along the candidate. Z^{-1} = Y^T, which is
// tracked as the duality defect max_t ||Z^T Y - I||_F.
struct FundamentalMatrices {
  Grid grid;
  std::size_t dim = 1;
  std::vector<double> Y, Z;  // node-major blocks of dim*dim
  double duality_defect = 0.0;

  Mat Y_at(std::size_t i) const {
    return Mat(Y.begin() + i * dim * dim, Y.begin() + (i + 1) * dim * dim);
  }
  Mat Z_at(std::size_t i) const {
    return Mat(Z.begin() + i * dim * dim, Z.begin() + (i + 1) * dim * dim);
  }
};

inline FundamentalMatrices fundamental_matrices(const ControlProblem& pb,
                                                const CandidateProcess& cand,
                                                int substeps = 4) {
  pb.validate();
  std::size_t n = pb.state_dim;
  const auto& t = cand.x.grid.nodes;
  auto A = [&](double tt) { return pb.phi_x(tt, cand.state_at(tt), cand.control_at(tt)); };
  FundamentalMatrices fm;
  fm.grid = cand.x.grid;
  fm.dim = n;
  fm.Y.resize(t.size() * n * n);
  fm.Z.resize(t.size() * n * n);
  Mat Y = detail::identity(n), Z = detail::identity(n);
  auto store = [&](std::size_t i) {
    std::copy(Y.begin(), Y.end(), fm.Y.begin() + i * n * n);
    std::copy(Z.begin(), Z.end(), fm.Z.begin() + i * n * n);
  };
  store(0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    double h = (t[i] - t[i - 1]) / double(substeps);
    double tt = t[i - 1];
    for (int s = 0; s < substeps; ++s) {
      Y = detail::rk4_matrix_step(A, tt, h, Y, n, false);
      Z = detail::rk4_matrix_step(A, tt, h, Z, n, true);
      tt += h;
    }
    store(i);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    Mat D = detail::mat_mul(detail::transpose(fm.Z_at(i), n), fm.Y_at(i), n);
    double d = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        double e = D[r * n + c] - (r == c ? 1.0 : 0.0);
        d += e * e;
      }
    fm.duality_defect = std::max(fm.duality_defect, std::sqrt(d));
  }
  return fm;
}

struct PontryaginData {
  double lambda0 = 1.0;
  SampledFn p;
};

// Adjoint by the decay-anchored representation
//   p(t) = -Z(t) int_t^inf omega(s) Y^T(s) f_x(s, x(s), u(s)) ds,
// the unique adjoint solution compatible with natural transversality.
// Backward shooting is deliberately not used: tail errors would be
// amplified by the unstable adjoint modes.
inline PontryaginData adjoint_via_representation(const ControlProblem& pb,
                                                 const CandidateProcess& cand,
                                                 const FundamentalMatrices& fm,
                                                 double lambda0 = 1.0) {
  std::size_t n = pb.state_dim;
  const auto& t = fm.grid.nodes;
  std::size_t N = t.size();
  std::vector<double> m(N * n);  // integrand omega Y^T f_x
  double m_peak = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    Vec fx = pb.f_x(t[i], cand.state_node(i), cand.control_node(i));
    Vec v = detail::mat_vec(detail::transpose(fm.Y_at(i), n), fx, n);
    double w = pb.omega(t[i]);
    double nn = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double val = std::isfinite(w) ? w * v[c] : 0.0;
      m[i * n + c] = val;
      nn = std::max(nn, std::abs(val));
    }
    m_peak = std::max(m_peak, nn);
  }
  // tail control: the integrand must have decayed at the grid end
  double m_end = 0.0, m_prev = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    m_end = std::max(m_end, std::abs(m[(N - 1) * n + c]));
    m_prev = std::max(m_prev, std::abs(m[(N - 11) * n + c]));
  }
  if (m_end > fm.grid.tail_tol * (1.0 + m_peak) || m_end > m_prev)
    throw TailNotSettled("representation integrand has not decayed at the grid end");

  PontryaginData pd;
  pd.lambda0 = lambda0;
  pd.p.grid = fm.grid;
  pd.p.dim = n;
  pd.p.values.resize(N * n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> comp(N);
    for (std::size_t i = 0; i < N; ++i) comp[i] = m[i * n + c];
    auto I = cumulative_tail(t, comp);
    for (std::size_t i = 0; i < N; ++i) pd.p.values[i * n + c] = I[i];  // temp: integral
  }
  for (std::size_t i = 0; i < N; ++i) {
    Vec I(n);
    for (std::size_t c = 0; c < n; ++c) I[c] = pd.p.values[i * n + c];
    Vec pv = detail::mat_vec(fm.Z_at(i), I, n);
    for (std::size_t c = 0; c < n; ++c) pd.p.values[i * n + c] = -pv[c];
  }
  return pd;
}

// Max-norm residual of p' = -phi_x^T p + lambda0 omega f_x, normalized by
// max(1, sup||p||).
inline CheckResult adjoint_residual(const ControlProblem& pb, const CandidateProcess& cand,
                                    const PontryaginData& pd, double tol = 1e-6) {
  const auto& t = pd.p.grid.nodes;
  std::size_t n = pb.state_dim;
  std::vector<double> dp =
      pd.p.derivatives ? *pd.p.derivatives : finite_difference(pd.p.grid, pd.p.values, n);
  double resid = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec xv = cand.state_at(t[i]), uv = cand.control_at(t[i]);
    Mat px = pb.phi_x(t[i], xv, uv);
    Vec fx = pb.f_x(t[i], xv, uv);
    Vec pv(n);
    for (std::size_t c = 0; c < n; ++c) {
      pv[c] = pd.p.value(i, c);
      scale = std::max(scale, std::abs(pv[c]));
    }
    Vec at = detail::mat_vec(detail::transpose(px, n), pv, n);
    double w = pb.omega(t[i]);
    if (!std::isfinite(w)) continue;
    for (std::size_t c = 0; c < n; ++c)
      resid = std::max(resid, std::abs(dp[i * n + c] + at[c] - pd.lambda0 * w * fx[c]));
  }
  double normalized = resid / scale;
  return {"adjoint_residual", normalized <= tol ? Verdict::Pass : Verdict::Fail, normalized, ""};
}

// sup_t [ sup_{u in U} H - H(u_*(t)) ] over the probe controls, normalized
// by 1 + |H(u_*)|; nodes where omega is singular are skipped (they form a
// null set at worst).
inline CheckResult max_condition_check(const ControlProblem& pb, const CandidateProcess& cand,
                                       const PontryaginData& pd, double tol = 1e-6) {
  const auto& t = pd.p.grid.nodes;
  std::size_t n = pb.state_dim;
  double worst_gap = 0.0;
  double bad_measure = 0.0;
  double hbar = t.back() / double(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(pb.omega(t[i]))) continue;
    Vec xv = cand.state_node(i), uv = cand.control_node(i);
    Vec pv(n);
    for (std::size_t c = 0; c < n; ++c) pv[c] = pd.p.value(i, c);
    double h_star = hamiltonian(pb, t[i], xv, uv, pv, pd.lambda0);
    double best = h_star;
    for (const auto& up : pb.U.probe_points(uv))
      best = std::max(best, hamiltonian(pb, t[i], xv, up, pv, pd.lambda0));
    double gap = (best - h_star) / (1.0 + std::abs(h_star));
    worst_gap = std::max(worst_gap, gap);
    if (gap > tol) bad_measure += (i + 1 < t.size() ? t[i + 1] - t[i] : hbar);
  }
  bool ok = bad_measure < 10.0 * hbar;
  return {"max_condition", ok ? Verdict::Pass : Verdict::Fail, worst_gap,
          ok ? "" : "maximum condition violated on a non-null set"};
}

// Natural transversality along the adjoint: ||p||^2 / nu -> 0 and
// ||p|| -> 0, plus <p, x> -> 0 along the candidate. The star variant
// (heavy-tailed weights, general p) checks ||p|| / nu -> 0 instead of the
// squared form.
inline CheckReport transversality_check(const ControlProblem& pb, const CandidateProcess& cand,
                                        const PontryaginData& pd, bool star_variant = false) {
  const auto& t = pd.p.grid.nodes;
  std::size_t N = t.size(), n = pd.p.dim;
  std::vector<double> energy(N), plain(N), pairing(N);
  for (std::size_t i = 0; i < N; ++i) {
    double pp = 0.0, px = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      pp += pd.p.value(i, c) * pd.p.value(i, c);
      px += pd.p.value(i, c) * cand.x.eval(t[i], c);
    }
    double w = pb.nu(t[i]);
    energy[i] = star_variant ? std::sqrt(pp) / w : pp / w;
    plain[i] = std::sqrt(pp);
    pairing[i] = px;
  }
  CheckReport rep;
  auto d1 = detail::decay_verdict(star_variant ? "p_over_nu" : "p_energy_over_nu", t, energy);
  rep.items.push_back({d1.name, d1.verdict, d1.final_value, "tail decay"});
  auto d2 = detail::decay_verdict("p_norm", t, plain);
  rep.items.push_back({d2.name, d2.verdict, d2.final_value, "tail decay"});
  auto d3 = detail::decay_verdict("p_state_pairing", t, pairing);
  rep.items.push_back({d3.name, d3.verdict, d3.final_value, "tail decay"});
  return rep;
}

// Asymptotic Hamiltonian condition: under the weight precondition
// (omega^2/nu -> 0, or omega/nu -> 0 in the star variant) the Hamiltonian
// along the process vanishes at infinity.
inline CheckReport michel_check(const ControlProblem& pb, const CandidateProcess& cand,
                                const PontryaginData& pd, bool star_variant = false) {
  const auto& t = pd.p.grid.nodes;
  std::size_t N = t.size(), n = pd.p.dim;
  CheckReport rep;
  {
    std::vector<double> pre(N);
    for (std::size_t i = 0; i < N; ++i) {
      double w = pb.omega(t[i]);
      pre[i] = std::isfinite(w) ? (star_variant ? w : w * w) / pb.nu(t[i]) : 0.0;
    }
    auto d = detail::decay_verdict("weight_precondition", t, pre);
    rep.items.push_back({d.name, d.verdict, d.final_value, "omega-to-nu decay"});
  }
  {
    std::vector<double> hv(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(pb.omega(t[i]))) continue;
      Vec pv(n);
      for (std::size_t c = 0; c < n; ++c) pv[c] = pd.p.value(i, c);
      hv[i] = hamiltonian(pb, t[i], cand.state_node(i), cand.control_node(i), pv, pd.lambda0);
    }
    auto d = detail::decay_verdict("hamiltonian_to_zero", t, hv);
    rep.items.push_back({d.name, d.verdict, d.final_value, "H along the process"});
  }
  return rep;
}

// Stability-of-restarts hypothesis: solutions restarted from perturbed
// states at late times stay within C_s * ||perturbation|| * mu(t),
// mu(t) = e^{b t}, and mu must lie in L2(nu) (2b below the weight rate).
struct SConditionSpec {
  double b = 0.0;      // growth rate of mu
  double C_s = 1.0;
  double K0 = 1.0;
  std::vector<double> restart_times{2.0, 5.0, 10.0, 20.0};
  std::vector<double> deltas{1e-3, 1e-2, 0.1};
};

inline CheckReport normality_check_S(const ControlProblem& pb, const CandidateProcess& cand,
                                     const SConditionSpec& spec) {
  pb.validate();
  CheckReport rep;
  {
    // mu in L2(nu)
    auto mi = improper_integral(
        [&](double t) { return std::exp(2.0 * spec.b * t + pb.nu.log_eval(t)); });
    rep.items.push_back({"mu_in_L2_nu", detail::from_integral(mi), mi.value,
                         "||mu||^2 in the weighted space"});
  }
  const auto& t = cand.x.grid.nodes;
  std::size_t n = pb.state_dim;
  double worst_ratio = 0.0;
  auto rhs = [&](double tt, const Vec& xv) { return pb.phi(tt, xv, cand.control_at(tt)); };
  for (double T : spec.restart_times) {
    if (T < spec.K0) continue;
    auto it = std::lower_bound(t.begin(), t.end(), T);
    if (it == t.end()) continue;
    std::size_t i0 = std::size_t(it - t.begin());
    for (double del : spec.deltas) {
      for (std::size_t axis = 0; axis < n; ++axis) {
        Vec x = cand.state_node(i0);
        x[axis] += del;
        // RK4 restart along the grid
        for (std::size_t i = i0; i + 1 < t.size(); ++i) {
          double h = t[i + 1] - t[i];
          Vec k1 = rhs(t[i], x);
          Vec tmp(n);
          for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
          Vec k2 = rhs(t[i] + 0.5 * h, tmp);
          for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
          Vec k3 = rhs(t[i] + 0.5 * h, tmp);
          for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + h * k3[c];
          Vec k4 = rhs(t[i + 1], tmp);
          for (std::size_t c = 0; c < n; ++c)
            x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
          double dev = 0.0;
          for (std::size_t c = 0; c < n; ++c) {
            double ref = cand.x.value(i + 1, c);
            dev += (x[c] - ref) * (x[c] - ref);
          }
          double bound = spec.C_s * del * std::exp(spec.b * (t[i + 1] - 0.0));
          worst_ratio = std::max(worst_ratio, std::sqrt(dev) / bound);
        }
      }
    }
  }
  rep.items.push_back({"restart_stability",
                       worst_ratio <= 1.0 + 1e-6 ? Verdict::Pass : Verdict::Fail, worst_ratio,
                       "sup deviation over C_s * ||perturbation|| * mu(t)"});
  return rep;
}

struct AbnormalityResult {
  bool normal_feasible = false;
  bool abnormal_found = false;
  double lambda0 = 1.0;
  PontryaginData certificate;
  double gap = 0.0;
  std::string note;
};

// Tries the normal route (lambda0 = 1, representation adjoint); when that
// fails, searches the abnormal adjoint solutions p(t) = Z(t) p0 over
// normalized directions p0 for one satisfying maximum condition and
// transversality. Nontriviality floor 1e-12 on (lambda0, p(0)).
inline AbnormalityResult abnormality_probe(const ControlProblem& pb, const CandidateProcess& cand,
                                           const FundamentalMatrices& fm, double tol = 1e-6,
                                           std::uint64_t seed = 0) {
  AbnormalityResult out;
  std::size_t n = pb.state_dim;
  try {
    PontryaginData pd = adjoint_via_representation(pb, cand, fm, 1.0);
    auto mc = max_condition_check(pb, cand, pd, tol);
    auto ar = adjoint_residual(pb, cand, pd, tol);
    if (mc.verdict == Verdict::Pass && ar.verdict == Verdict::Pass) {
      out.normal_feasible = true;
      out.lambda0 = 1.0;
      out.certificate = pd;
      out.gap = mc.value;
      return out;
    }
    out.note = "normal multiplier rejected: " +
               std::string(mc.verdict != Verdict::Pass ? "maximum condition" : "adjoint residual");
  } catch (const TailNotSettled& e) {
    out.note = std::string("normal multiplier rejected: ") + e.what();
  }

  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < n; ++i)
    for (double s : {1.0, -1.0}) {
      Vec d(n, 0.0);
      d[i] = s;
      dirs.push_back(d);
    }
  DetRng rng(seed);
  for (int k = 0; k < 8; ++k) {
    Vec d(n);
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = rng.uniform(-1.0, 1.0);
      nn += d[i] * d[i];
    }
    nn = std::sqrt(nn);
    if (nn < 1e-12) continue;
    for (double& v : d) v /= nn;
    dirs.push_back(d);
  }
  const auto& t = fm.grid.nodes;
  for (const auto& p0 : dirs) {
    if (detail::vec_norm(p0) < 1e-12) continue;  // nontriviality floor
    PontryaginData pd;
    pd.lambda0 = 0.0;
    pd.p.grid = fm.grid;
    pd.p.dim = n;
    pd.p.values.resize(t.size() * n);
    for (std::size_t i = 0; i < t.size(); ++i) {
      Vec pv = detail::mat_vec(fm.Z_at(i), p0, n);
      for (std::size_t c = 0; c < n; ++c) pd.p.values[i * n + c] = pv[c];
    }
    auto mc = max_condition_check(pb, cand, pd, tol);
    if (mc.verdict != Verdict::Pass) continue;
    auto tv = transversality_check(pb, cand, pd);
    if (tv.overall() == Verdict::Fail) continue;
    out.abnormal_found = true;
    out.lambda0 = 0.0;
    out.certificate = pd;
    out.gap = mc.value;
    return out;
  }
  return out;
}

}  // namespace ihoc
