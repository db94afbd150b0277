#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "grid.hpp"

namespace ihoc {

// Composite trapezoid on arbitrary nodes.
inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

// Cumulative tail integrals I[i] = int_{t_i}^{t_max} f dt with an
// endpoint-derivative (Euler-Maclaurin) correction per interval. Plain
// trapezoid at the default grid resolution leaves a bias above the
// tightest residual budgets.
inline std::vector<double> cumulative_tail(const std::vector<double>& t,
                                           const std::vector<double>& f) {
  std::size_t n = t.size();
  std::vector<double> df(n);
  Grid g;
  g.nodes = t;
  df = finite_difference(g, f, 1);
  std::vector<double> I(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    double h = t[i + 1] - t[i];
    double piece = 0.5 * h * (f[i] + f[i + 1]) - h * h / 12.0 * (df[i + 1] - df[i]);
    I[i] = I[i + 1] + piece;
  }
  return I;
}

// Cumulative head integrals C[i] = int_0^{t_i} f dt, same correction.
inline std::vector<double> cumulative_head(const std::vector<double>& t,
                                           const std::vector<double>& f) {
  std::size_t n = t.size();
  Grid g;
  g.nodes = t;
  std::vector<double> df = finite_difference(g, f, 1);
  std::vector<double> C(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double h = t[i] - t[i - 1];
    C[i] = C[i - 1] + 0.5 * h * (f[i] + f[i - 1]) - h * h / 12.0 * (df[i] - df[i - 1]);
  }
  return C;
}

enum class IntegralStatus { Converged, Divergent, Unsettled };

struct ImproperIntegral {
  IntegralStatus status = IntegralStatus::Unsettled;
  double value = std::numeric_limits<double>::quiet_NaN();
  double last_increment = 0.0;
  double head_exponent = 0.0;  // measured log-log slope of the integrand at 0
  std::string note;
};

namespace detail {

// Integral over [a,b] with a refining Richardson pass; integrand assumed
// finite on [a,b].
inline double smooth_integral(const std::function<double(double)>& f, double a, double b,
                              std::size_t n = 2048) {
  auto sum = [&](std::size_t m) {
    double s = 0.0, h = (b - a) / double(m);
    double prev = f(a);
    for (std::size_t i = 1; i <= m; ++i) {
      double cur = f(a + h * double(i));
      s += 0.5 * h * (prev + cur);
      prev = cur;
    }
    return s;
  };
  double c = sum(n), fine = sum(2 * n);
  return fine + (fine - c) / 3.0;  // Richardson for trapezoid
}

}  // namespace detail

// Improper integral of f over (0, infinity) with a possible power
// singularity at 0. Head: the local exponent e of f near 0 is measured
// numerically; e <= -1 means a divergent head, otherwise the head is
// integrated on a power-graded substitution chosen from e. Tail:
// doubling-horizon plateau classification.
inline ImproperIntegral improper_integral(const std::function<double(double)>& f,
                                          double t_start = 8.0, int doublings = 40,
                                          double rel_tol = 1e-8) {
  ImproperIntegral out;

  // local exponent near zero
  double e = 0.0;
  {
    double f1 = std::abs(f(1e-5)), f2 = std::abs(f(1e-7));
    if (f1 > 0 && f2 > 0 && std::isfinite(f1) && std::isfinite(f2))
      e = std::log(f1 / f2) / std::log(1e-5 / 1e-7);
  }
  out.head_exponent = e;
  if (e <= -1.0 + 1e-3) {
    out.status = IntegralStatus::Divergent;
    out.note = "integrand head exponent <= -1";
    return out;
  }

  double head;
  if (e < -1e-3) {
    // substitute t = s^gamma so the transformed integrand is bounded at 0
    double gamma = 2.0 / (1.0 + e);
    head = detail::smooth_integral(
        [&](double s) {
          if (s <= 0.0) return 0.0;
          double t = std::pow(s, gamma);
          double v = f(t) * gamma * std::pow(s, gamma - 1.0);
          return std::isfinite(v) ? v : 0.0;
        },
        0.0, std::pow(1.0, 1.0 / gamma), 4096);
  } else {
    head = detail::smooth_integral([&](double t) { double v = f(t); return std::isfinite(v) ? v : 0.0; },
                                   0.0, 1.0, 4096);
  }

  // tail by doublings from 1; stop early once an increment is negligible
  std::vector<double> partial{head};
  std::vector<double> incs;
  double lo = 1.0, hi = t_start;
  for (int d = 0; d <= doublings; ++d) {
    double inc = detail::smooth_integral(f, lo, hi, 4096);
    if (!std::isfinite(inc)) {
      out.status = IntegralStatus::Divergent;
      out.note = "non-finite tail increment";
      return out;
    }
    partial.push_back(partial.back() + inc);
    incs.push_back(std::abs(inc));
    lo = hi;
    hi *= 2.0;
    if (incs.back() <= rel_tol * std::max(1.0, std::abs(partial.back()))) break;
  }
  out.value = partial.back();
  out.last_increment = incs.back();
  double scale = std::max(1e-300, std::abs(out.value));
  if (incs.back() <= rel_tol * std::max(1.0, scale)) {
    out.status = IntegralStatus::Converged;
    return out;
  }
  // non-shrinking or growing increments mean divergence
  bool shrinking = true;
  for (std::size_t i = 1; i < incs.size(); ++i)
    if (incs[i] > 0.95 * incs[i - 1] && incs[i] > rel_tol * scale) shrinking = false;
  out.status = shrinking ? IntegralStatus::Unsettled : IntegralStatus::Divergent;
  out.note = shrinking ? "increments shrinking but not settled" : "tail increments not shrinking";
  return out;
}

}  // namespace ihoc
