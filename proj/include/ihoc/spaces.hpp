#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "grid.hpp"
#include "quadrature.hpp"
#include "weights.hpp"

namespace ihoc {

// ||x||_{Lp(nu)} = ( int ||x(t)||^p nu(t) dt )^{1/p} on the sample grid.
inline double weighted_Lp_norm(const SampledFn& x, const WeightSpec& nu, double p = 2.0) {
  x.validate();
  if (!(p >= 1.0)) throw std::invalid_argument("need p >= 1");
  const auto& t = x.grid.nodes;
  std::vector<double> integrand(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double n2 = 0.0;
    for (std::size_t c = 0; c < x.dim; ++c) n2 += x.value(i, c) * x.value(i, c);
    integrand[i] = std::pow(std::sqrt(n2), p) * nu(t[i]);
  }
  return std::pow(trapezoid(t, integrand), 1.0 / p);
}

// ||x||_{W1p(nu)} = ||x||_{Lp(nu)} + ||x'||_{Lp(nu)}; derivative samples are
// used when present, finite differences otherwise.
inline double weighted_W1p_norm(const SampledFn& x, const WeightSpec& nu, double p = 2.0) {
  x.validate();
  SampledFn dx = x;
  dx.values = x.derivatives ? *x.derivatives : finite_difference(x.grid, x.values, x.dim);
  dx.derivatives.reset();
  return weighted_Lp_norm(x, nu, p) + weighted_Lp_norm(dx, nu, p);
}

struct DecayCheck {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double final_value = 0.0;
  double peak_value = 0.0;
};

namespace detail {

// Verdict on the last 20% of nodes: clear decay toward 0 or already
// negligible relative to the peak.
inline DecayCheck decay_verdict(const std::string& name, const std::vector<double>& t,
                                const std::vector<double>& v) {
  DecayCheck c{name, Verdict::Inconclusive, 0.0, 0.0};
  std::size_t n = v.size();
  std::size_t tail0 = n - n / 5;
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  double tail_start = std::abs(v[tail0]);
  double tail_max = 0.0;
  for (std::size_t i = tail0; i < n; ++i) tail_max = std::max(tail_max, std::abs(v[i]));
  double fin = std::abs(v[n - 1]);
  c.final_value = fin;
  c.peak_value = peak;
  if (peak == 0.0 || tail_max <= 1e-8 * std::max(1.0, peak)) {
    c.verdict = Verdict::Pass;
    return c;
  }
  bool shrinking = fin <= 0.5 * std::max(tail_start, 1e-300) && tail_max <= tail_start * 1.5;
  if (shrinking)
    c.verdict = Verdict::Pass;
  else if (fin >= 0.9 * tail_start && fin > 1e-6 * std::max(1.0, peak))
    c.verdict = Verdict::Fail;
  (void)t;
  return c;
}

}  // namespace detail

struct DecayReport {
  std::vector<DecayCheck> checks;
  Verdict overall() const {
    bool inc = false;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return Verdict::Fail;
      if (c.verdict == Verdict::Inconclusive) inc = true;
    }
    return inc ? Verdict::Inconclusive : Verdict::Pass;
  }
};

// For x in the nu-weighted Sobolev space and y in its dual-weighted
// counterpart, the products ||x||^2 nu, ||y||^2 / nu, <x,y> and nu*x all
// vanish at infinity; checks each along the sample grid.
inline DecayReport check_decay_lemmas(const SampledFn& x, const SampledFn& y,
                                      const WeightSpec& nu) {
  x.validate();
  y.validate();
  if (x.dim != y.dim) throw std::invalid_argument("dimension mismatch");
  const auto& t = x.grid.nodes;
  std::size_t n = t.size();
  std::vector<double> f(n), g(n), h(n), psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xx = 0.0, yy = 0.0, xy = 0.0, xmax = 0.0;
    for (std::size_t c = 0; c < x.dim; ++c) {
      double xv = x.value(i, c), yv = y.eval(t[i], c);
      xx += xv * xv;
      yy += yv * yv;
      xy += xv * yv;
      xmax = std::max(xmax, std::abs(xv));
    }
    double w = nu(t[i]);
    f[i] = xx * w;
    g[i] = yy / w;
    h[i] = xy;
    psi[i] = xmax * w;
  }
  DecayReport r;
  r.checks.push_back(detail::decay_verdict("state_energy_nu", t, f));
  r.checks.push_back(detail::decay_verdict("dual_energy_inv_nu", t, g));
  r.checks.push_back(detail::decay_verdict("pairing", t, h));
  r.checks.push_back(detail::decay_verdict("nu_times_state", t, psi));
  return r;
}

}  // namespace ihoc
