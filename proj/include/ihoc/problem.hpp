#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "quadrature.hpp"
#include "weights.hpp"

namespace ihoc {

using Vec = std::vector<double>;
using Mat = std::vector<double>;  // row-major, rows = state dim

struct EvaluationDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG (splitmix64), identical across platforms.
struct DetRng {
  std::uint64_t state;
  explicit DetRng(std::uint64_t seed = 0) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

struct UnboundedAboveDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Admissible control region.
struct ControlSet {
  enum class Kind { Box, FiniteSample, HalfLine } kind = Kind::Box;
  std::size_t dim = 1;
  Vec lower, upper;            // Box bounds, +-inf allowed
  std::vector<Vec> samples;    // FiniteSample
  Vec origin;                  // HalfLine: u_i >= origin_i

  static ControlSet box(Vec lo, Vec hi) {
    ControlSet s;
    s.kind = Kind::Box;
    s.dim = lo.size();
    if (hi.size() != lo.size()) throw std::invalid_argument("box bound size mismatch");
    s.lower = std::move(lo);
    s.upper = std::move(hi);
    return s;
  }
  static ControlSet whole_space(std::size_t dim) {
    double inf = std::numeric_limits<double>::infinity();
    return box(Vec(dim, -inf), Vec(dim, inf));
  }
  static ControlSet finite(std::vector<Vec> pts) {
    ControlSet s;
    s.kind = Kind::FiniteSample;
    if (pts.empty()) throw std::invalid_argument("finite control set is empty");
    s.dim = pts.front().size();
    s.samples = std::move(pts);
    return s;
  }
  static ControlSet half_line(Vec origin) {
    ControlSet s;
    s.kind = Kind::HalfLine;
    s.dim = origin.size();
    s.origin = std::move(origin);
    return s;
  }

  bool contains(const Vec& u, double tol) const {
    if (u.size() != dim) return false;
    switch (kind) {
      case Kind::Box:
        for (std::size_t i = 0; i < dim; ++i)
          if (u[i] < lower[i] - tol || u[i] > upper[i] + tol) return false;
        return true;
      case Kind::HalfLine:
        for (std::size_t i = 0; i < dim; ++i)
          if (u[i] < origin[i] - tol) return false;
        return true;
      case Kind::FiniteSample:
        for (const auto& s : samples) {
          double d = 0.0;
          for (std::size_t i = 0; i < dim; ++i) d = std::max(d, std::abs(s[i] - u[i]));
          if (d <= tol) return true;
        }
        return false;
    }
    return false;
  }

  // Deterministic probe points for maximization scans. Boxes get 129
  // points per finite axis, centered around a reference control when a
  // bound is infinite; half-lines get a geometric grid outward from the
  // origin. A maximizer escaping the probe range raises
  // UnboundedAboveDetected at the caller's discretion.
  std::vector<Vec> probe_points(const Vec& reference) const {
    std::vector<Vec> pts;
    switch (kind) {
      case Kind::FiniteSample:
        return samples;
      case Kind::Box: {
        std::vector<std::vector<double>> axes(dim);
        for (std::size_t i = 0; i < dim; ++i) {
          double lo = lower[i], hi = upper[i];
          double ref = reference.empty() ? 0.0 : reference[i];
          if (!std::isfinite(lo)) lo = ref - 8.0 * (1.0 + std::abs(ref));
          if (!std::isfinite(hi)) hi = ref + 8.0 * (1.0 + std::abs(ref));
          for (int j = 0; j <= 128; ++j)
            axes[i].push_back(lo + (hi - lo) * double(j) / 128.0);
          if (!reference.empty() && reference[i] >= lo && reference[i] <= hi)
            axes[i].push_back(reference[i]);
        }
        // tensor grid for dim 1..2; axis sweeps through the reference above
        if (dim == 1) {
          for (double v : axes[0]) pts.push_back({v});
        } else {
          Vec base = reference.empty() ? Vec(dim, 0.0) : reference;
          for (std::size_t i = 0; i < dim; ++i)
            for (double v : axes[i]) {
              Vec u = base;
              u[i] = v;
              pts.push_back(u);
            }
        }
        return pts;
      }
      case Kind::HalfLine: {
        Vec base = reference.empty() ? origin : reference;
        for (std::size_t i = 0; i < dim; ++i) {
          double o = origin[i];
          std::vector<double> axis{o};
          double step = 1e-4 * (1.0 + std::abs(base[i] - o));
          double span = 64.0 * (1.0 + std::abs(base[i] - o));
          for (double d = step; d <= span; d *= 1.15) axis.push_back(o + d);
          if (base[i] > o) axis.push_back(base[i]);
          for (double v : axis) {
            Vec u = base;
            u[i] = v;
            pts.push_back(u);
          }
        }
        return pts;
      }
    }
    return pts;
  }
};

// Truncated bang-bang structure used by the horizon experiments: scalar
// dynamics x' = alpha(u) x + beta(u), cost integrand
// e^{-rho t}(c0(u) + c1(u) x), controls switching between two levels.
struct SwitchingModel {
  double u_lo = 0.0, u_hi = 1.0;
  std::function<double(double)> alpha, beta, c0, c1;  // functions of u
  double rho = 0.0;
  double x0 = 1.0;
  bool maximize = true;
};

// Infinite-horizon problem in minimization form:
//   int_0^inf omega(t) f(t,x,u) dt -> inf,  x' = phi(t,x,u), x(0) = x0,
//   u(t) in U, g_j(t,x(t)) <= 0.
struct ControlProblem {
  std::size_t state_dim = 1;
  std::size_t control_dim = 1;
  std::function<double(double, const Vec&, const Vec&)> f;
  std::function<Vec(double, const Vec&, const Vec&)> f_x;
  std::function<Vec(double, const Vec&, const Vec&)> phi;
  std::function<Mat(double, const Vec&, const Vec&)> phi_x;
  std::vector<std::function<double(double, const Vec&)>> g;
  std::vector<std::function<Vec(double, const Vec&)>> g_x;
  ControlSet U = ControlSet::whole_space(1);
  Vec x0;
  DistributionSpec omega = DistributionSpec::exponential(1.0);
  WeightSpec nu = WeightSpec::exponential(1.0);
  double p_exp = 2.0;
  std::string description;
  bool original_sense_max = false;  // true if stated as a maximization before the sign flip
  std::optional<SwitchingModel> switching;  // catalog metadata for horizon experiments

  void validate() const {
    if (!f || !phi) throw std::invalid_argument("problem needs f and phi");
    if (x0.size() != state_dim) throw std::invalid_argument("x0 dimension mismatch");
    if (g.size() != g_x.size()) throw std::invalid_argument("g/g_x count mismatch");
  }
};

// Candidate process: sampled state and control, optional closed forms for
// off-node evaluation.
struct CandidateProcess {
  SampledFn x;
  SampledFn u;
  std::function<Vec(double)> x_of_t;  // optional exact forms
  std::function<Vec(double)> u_of_t;

  Vec state_at(double t) const {
    if (x_of_t) return x_of_t(t);
    Vec v(x.dim);
    for (std::size_t c = 0; c < x.dim; ++c) v[c] = x.eval(t, c);
    return v;
  }
  Vec control_at(double t) const {
    if (u_of_t) return u_of_t(t);
    Vec v(u.dim);
    for (std::size_t c = 0; c < u.dim; ++c) v[c] = u.eval(t, c);
    return v;
  }
  Vec state_node(std::size_t i) const {
    Vec v(x.dim);
    for (std::size_t c = 0; c < x.dim; ++c) v[c] = x.value(i, c);
    return v;
  }
  Vec control_node(std::size_t i) const {
    Vec v(u.dim);
    for (std::size_t c = 0; c < u.dim; ++c) v[c] = u.value(i, c);
    return v;
  }
};

// Uniform neighborhood of a reference trajectory.
struct Tube {
  SampledFn center;
  double gamma = 0.5;
};

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double value = 0.0;  // residual, gap or witness constant
  std::string note;
};

struct CheckReport {
  std::vector<CheckResult> items;
  Verdict overall() const {
    bool inc = false;
    for (const auto& c : items) {
      if (c.verdict == Verdict::Fail) return Verdict::Fail;
      if (c.verdict == Verdict::Inconclusive) inc = true;
    }
    return inc ? Verdict::Inconclusive : Verdict::Pass;
  }
  const CheckResult* find(const std::string& n) const {
    for (const auto& c : items)
      if (c.name == n) return &c;
    return nullptr;
  }
};

namespace detail {

inline double vec_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline void check_finite(const Vec& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw EvaluationDomainError(std::string(what) + " is not finite");
}

}  // namespace detail

// Max-norm dynamics residual ||x' - phi(t,x,u)|| over grid nodes,
// normalized by 1 + sup||x'||.
inline CheckResult check_dynamics_residual(const ControlProblem& pb, const CandidateProcess& cand,
                                           double tol = 1e-6) {
  pb.validate();
  cand.x.validate();
  const auto& t = cand.x.grid.nodes;
  std::vector<double> dx =
      cand.x.derivatives ? *cand.x.derivatives : finite_difference(cand.x.grid, cand.x.values, cand.x.dim);
  double resid = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec xv = cand.state_node(i), uv = cand.control_node(i);
    Vec ph = pb.phi(t[i], xv, uv);
    double r = 0.0;
    for (std::size_t c = 0; c < pb.state_dim; ++c) {
      r = std::max(r, std::abs(dx[i * cand.x.dim + c] - ph[c]));
      scale = std::max(scale, std::abs(dx[i * cand.x.dim + c]));
    }
    resid = std::max(resid, r);
  }
  double normalized = resid / scale;
  return {"dynamics_residual", normalized <= tol ? Verdict::Pass : Verdict::Fail, normalized, ""};
}

// Deterministic tube samples at one time slice: 2n axis points, n(n-1)
// diagonal points and 8 seeded random points on the gamma-ball boundary
// region around the center.
inline std::vector<Vec> tube_slice_samples(const Tube& tube, double t, DetRng& rng) {
  std::size_t n = tube.center.dim;
  Vec c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = tube.center.eval(t, i);
  std::vector<Vec> out;
  out.push_back(c);
  for (std::size_t i = 0; i < n; ++i)
    for (double s : {-1.0, 1.0}) {
      Vec v = c;
      v[i] += s * tube.gamma;
      out.push_back(v);
    }
  double d = tube.gamma / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec v = c;
      v[i] += d;
      v[j] -= d;
      out.push_back(v);
    }
  for (int k = 0; k < 8; ++k) {
    Vec v = c;
    for (std::size_t i = 0; i < n; ++i) v[i] += tube.gamma * rng.uniform(-1.0, 1.0);
    out.push_back(v);
  }
  return out;
}

// Linear-growth bound on (f, phi) and boundedness of (f_x, phi_x) over the
// tube; reports the witness constant. Non-finite evaluations surface as
// EvaluationDomainError.
inline CheckResult check_A2_growth(const ControlProblem& pb, const Tube& tube,
                                   std::uint64_t seed = 0) {
  pb.validate();
  DetRng rng(seed);
  double c0 = 0.0;
  const auto& t = tube.center.grid.nodes;
  std::size_t stride = std::max<std::size_t>(1, t.size() / 257);
  for (std::size_t i = 0; i < t.size(); i += stride) {
    auto xs = tube_slice_samples(tube, t[i], rng);
    Vec uref(pb.control_dim, 0.0);
    auto us = pb.U.probe_points(uref);
    std::size_t ustride = std::max<std::size_t>(1, us.size() / 17);
    for (const auto& xv : xs) {
      for (std::size_t k = 0; k < us.size(); k += ustride) {
        const Vec& uv = us[k];
        double fv = pb.f(t[i], xv, uv);
        Vec ph = pb.phi(t[i], xv, uv);
        if (!std::isfinite(fv)) throw EvaluationDomainError("f not finite on tube");
        detail::check_finite(ph, "phi");
        double num = std::abs(fv) + detail::vec_norm(ph);
        c0 = std::max(c0, num / (1.0 + detail::vec_norm(xv)));
        if (pb.f_x) {
          Vec fx = pb.f_x(t[i], xv, uv);
          detail::check_finite(fx, "f_x");
          c0 = std::max(c0, detail::vec_norm(fx));
        }
        if (pb.phi_x) {
          Mat px = pb.phi_x(t[i], xv, uv);
          detail::check_finite(px, "phi_x");
          c0 = std::max(c0, detail::vec_norm(px));
        }
      }
    }
  }
  return {"A2_growth", Verdict::Pass, c0, "witness growth constant"};
}

// Admissibility of a candidate: initial value, dynamics, control region
// membership, finite cost, state constraints.
inline CheckReport check_admissible(const ControlProblem& pb, const CandidateProcess& cand,
                                    double tol = 1e-6) {
  pb.validate();
  cand.x.validate();
  cand.u.validate();
  CheckReport rep;
  const auto& t = cand.x.grid.nodes;

  {
    double r = 0.0;
    for (std::size_t c = 0; c < pb.state_dim; ++c)
      r = std::max(r, std::abs(cand.x.value(0, c) - pb.x0[c]));
    rep.items.push_back({"initial_value", r <= tol ? Verdict::Pass : Verdict::Fail, r, ""});
  }
  rep.items.push_back(check_dynamics_residual(pb, cand, tol));
  {
    std::size_t bad = 0;
    double worst_t = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!pb.U.contains(cand.control_node(i), tol)) {
        ++bad;
        worst_t = t[i];
      }
    // an exceptional set of measure below ~10 grid steps is tolerated
    double hbar = t.back() / double(t.size() - 1);
    bool ok = double(bad) * hbar < 10.0 * hbar + 1e-15;
    rep.items.push_back({"control_region", ok ? Verdict::Pass : Verdict::Fail, worst_t,
                         ok ? "" : "control leaves the admissible region"});
  }
  {
    // cost integral settles along the grid
    std::vector<double> integrand(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      double v = pb.omega(t[i]) * pb.f(t[i], cand.state_node(i), cand.control_node(i));
      integrand[i] = std::isfinite(v) ? v : 0.0;
    }
    auto C = cumulative_head(t, integrand);
    double total = C.back();
    double at80 = C[t.size() - t.size() / 5];
    double inc = std::abs(total - at80);
    Verdict v = inc <= 1e-6 * std::max(1.0, std::abs(total)) ? Verdict::Pass
               : (inc >= 0.05 * std::max(1.0, std::abs(total)) ? Verdict::Fail
                                                               : Verdict::Inconclusive);
    rep.items.push_back({"cost_finite", v, total, "tail increment of the cost integral"});
  }
  for (std::size_t j = 0; j < pb.g.size(); ++j) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i)
      worst = std::max(worst, pb.g[j](t[i], cand.state_node(i)));
    rep.items.push_back({"state_constraint_" + std::to_string(j + 1),
                         worst <= tol ? Verdict::Pass : Verdict::Fail, worst, "sup g_j"});
  }
  return rep;
}

// Indices j with sup_t g_j(t, x(t)) = 0 within tolerance.
inline std::vector<std::size_t> active_indices(const ControlProblem& pb,
                                               const CandidateProcess& cand, double tol = 1e-6) {
  const auto& t = cand.x.grid.nodes;
  std::vector<std::size_t> act;
  for (std::size_t j = 0; j < pb.g.size(); ++j) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i)
      worst = std::max(worst, pb.g[j](t[i], cand.state_node(i)));
    if (worst >= -tol) act.push_back(j);
  }
  return act;
}

// Each active constraint must be strictly inactive somewhere.
inline CheckResult check_condition_F(const ControlProblem& pb, const CandidateProcess& cand,
                                     double tol = 1e-6) {
  const auto& t = cand.x.grid.nodes;
  for (std::size_t j : active_indices(pb, cand, tol)) {
    bool strict = false;
    for (std::size_t i = 0; i < t.size() && !strict; ++i)
      if (pb.g[j](t[i], cand.state_node(i)) < -tol) strict = true;
    if (!strict)
      return {"condition_F", Verdict::Fail, double(j + 1),
              "active constraint never strictly inactive"};
  }
  return {"condition_F", Verdict::Pass, 0.0, ""};
}

}  // namespace ihoc
