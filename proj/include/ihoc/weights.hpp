#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "quadrature.hpp"

namespace ihoc {

struct InvalidWeight : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// State-space weight nu.
struct WeightSpec {
  enum class Family { Exponential, PowerLaw, Tabulated } family = Family::Exponential;
  double a = 1.0;      // rate (Exponential) or power (PowerLaw)
  SampledFn table;     // Tabulated only

  static WeightSpec exponential(double a) {
    if (!(a > 0.0)) throw InvalidWeight("exponential weight needs a > 0");
    return WeightSpec{Family::Exponential, a, {}};
  }
  static WeightSpec power_law(double a) {
    if (!(a > 1.0)) throw InvalidWeight("power-law weight needs a > 1");
    return WeightSpec{Family::PowerLaw, a, {}};
  }
  static WeightSpec tabulated(SampledFn s) {
    s.validate();
    for (double v : s.values)
      if (!(v > 0.0)) throw InvalidWeight("tabulated weight must be positive");
    return WeightSpec{Family::Tabulated, 0.0, std::move(s)};
  }

  double operator()(double t) const {
    switch (family) {
      case Family::Exponential: return std::exp(-a * t);
      case Family::PowerLaw: return std::pow(1.0 + t, -a);
      case Family::Tabulated: return table.eval(t);
    }
    return 0.0;
  }

  double log_eval(double t) const {
    switch (family) {
      case Family::Exponential: return -a * t;
      case Family::PowerLaw: return -a * std::log1p(t);
      case Family::Tabulated: return std::log(table.eval(t));
    }
    return 0.0;
  }

  double deriv(double t) const {
    switch (family) {
      case Family::Exponential: return -a * std::exp(-a * t);
      case Family::PowerLaw: return -a * std::pow(1.0 + t, -a - 1.0);
      case Family::Tabulated: {
        if (table.derivatives) {
          SampledFn d = table;
          d.values = *table.derivatives;
          d.derivatives.reset();
          return d.eval(t);
        }
        double h = 1e-5 * (1.0 + std::abs(t));
        return ((*this)(t + h) - (*this)(std::max(0.0, t - h))) /
               (t + h - std::max(0.0, t - h));
      }
    }
    return 0.0;
  }

  std::string describe() const {
    switch (family) {
      case Family::Exponential: return "Exponential(" + std::to_string(a) + ")";
      case Family::PowerLaw: return "PowerLaw(" + std::to_string(a) + ")";
      case Family::Tabulated: return "Tabulated";
    }
    return "?";
  }
};

// Objective weight omega.
struct DistributionSpec {
  enum class Family { Exponential, Weibull } family = Family::Exponential;
  double rho = 1.0;  // Exponential rate; rho = 0 admitted for undiscounted toys
  double k = 0.5;    // Weibull shape, in (0,1)

  static DistributionSpec exponential(double rho) {
    if (!(rho >= 0.0)) throw InvalidWeight("exponential distribution needs rho >= 0");
    return DistributionSpec{Family::Exponential, rho, 0.0};
  }
  static DistributionSpec weibull(double k) {
    if (!(k > 0.0 && k < 1.0)) throw InvalidWeight("weibull shape must lie in (0,1)");
    return DistributionSpec{Family::Weibull, 0.0, k};
  }

  double operator()(double t) const {
    if (family == Family::Exponential) return std::exp(-rho * t);
    return std::pow(t, k - 1.0) * std::exp(-std::pow(t, k));
  }

  double log_eval(double t) const {
    if (family == Family::Exponential) return -rho * t;
    return (k - 1.0) * std::log(t) - std::pow(t, k);
  }

  std::string describe() const {
    if (family == Family::Exponential) return "Exponential(rho=" + std::to_string(rho) + ")";
    return "Weibull(k=" + std::to_string(k) + ")";
  }
};

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct PropertyCheck {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double witness = 0.0;
  std::string note;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  Verdict overall() const {
    bool inconclusive = false;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return Verdict::Fail;
      if (c.verdict == Verdict::Inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
  }
  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline Verdict from_integral(const ImproperIntegral& r) {
  switch (r.status) {
    case IntegralStatus::Converged: return Verdict::Pass;
    case IntegralStatus::Divergent: return Verdict::Fail;
    case IntegralStatus::Unsettled: return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

inline PropertyCheck positivity_continuity(const WeightSpec& nu, const std::string& name) {
  PropertyCheck c{name, Verdict::Pass, 0.0, "positivity and continuity on probe nodes"};
  double prev = nu(0.0);
  for (int i = 0; i <= 4096; ++i) {
    double t = 120.0 * double(i) / 4096.0;
    double v = nu(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
      c.verdict = Verdict::Fail;
      c.witness = t;
      c.note = "non-positive or non-finite value";
      return c;
    }
    // crude continuity probe: adjacent samples must not jump wildly
    if (i > 0 && std::abs(v - prev) > 1e3 * std::max(v, prev)) {
      c.verdict = Verdict::Fail;
      c.witness = t;
      c.note = "jump between probe nodes";
      return c;
    }
    prev = v;
  }
  return c;
}

inline PropertyCheck monotone_decreasing(const WeightSpec& nu, const std::string& name) {
  PropertyCheck c{name, Verdict::Pass, 0.0, "non-increasing on probe nodes"};
  double prev = nu(0.0);
  for (int i = 1; i <= 4096; ++i) {
    double t = 120.0 * double(i) / 4096.0;
    double v = nu(t);
    if (v > prev * (1.0 + 1e-12)) {
      c.verdict = Verdict::Fail;
      c.witness = t;
      c.note = "increase detected";
      return c;
    }
    prev = v;
  }
  return c;
}

inline PropertyCheck sobolev_w11(const WeightSpec& nu, const std::string& name) {
  auto in = improper_integral([&](double t) { return nu(t); });
  auto id = improper_integral([&](double t) { return std::abs(nu.deriv(t)); });
  PropertyCheck c{name, Verdict::Pass, in.value + id.value, "nu and nu' integrable"};
  Verdict v1 = from_integral(in), v2 = from_integral(id);
  if (v1 == Verdict::Fail || v2 == Verdict::Fail) c.verdict = Verdict::Fail;
  else if (v1 == Verdict::Inconclusive || v2 == Verdict::Inconclusive)
    c.verdict = Verdict::Inconclusive;
  return c;
}

inline PropertyCheck derivative_bound(const WeightSpec& nu, const std::string& name) {
  double K = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    double t = 120.0 * double(i) / 4096.0;
    double ratio = std::abs(nu.deriv(t)) / nu(t);
    if (!std::isfinite(ratio)) {
      return {name, Verdict::Fail, t, "|nu'|/nu not finite"};
    }
    K = std::max(K, ratio);
  }
  return {name, Verdict::Pass, K, "K = sup |nu'|/nu over probe nodes"};
}

// sup_t nu(t) int_0^t 1/nu: evaluate at doubling horizons and classify.
inline PropertyCheck shifted_mass_bound(const WeightSpec& nu, const std::string& name) {
  // integrand nu(T)/nu(s) computed in log form; it stays <= 1 for
  // monotone weights, so no overflow at long horizons
  auto S = [&](double T) {
    double lT = nu.log_eval(T);
    return detail::smooth_integral(
        [&](double s) { return std::exp(lT - nu.log_eval(s)); }, 0.0, T, 8192);
  };
  std::vector<double> vals;
  double sup = 0.0;
  for (double T : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    double v = S(T);
    if (!std::isfinite(v)) return {name, Verdict::Fail, T, "non-finite at horizon"};
    vals.push_back(v);
    sup = std::max(sup, v);
  }
  std::size_t n = vals.size();
  double d1 = std::abs(vals[n - 1] - vals[n - 2]);
  double d2 = std::abs(vals[n - 2] - vals[n - 3]);
  if (d1 <= 1e-6 * std::max(1.0, vals[n - 1]))
    return {name, Verdict::Pass, sup, "plateau at doubling horizons"};
  if (d1 >= 0.95 * d2) return {name, Verdict::Fail, sup, "still growing at doubling horizons"};
  return {name, Verdict::Inconclusive, sup, "not settled"};
}

}  // namespace detail

// Properties used by the Hilbert-space (p = 2) theory for the pair (nu, omega).
inline PropertyReport check_properties_p2(const WeightSpec& nu, const DistributionSpec& omega) {
  PropertyReport r;
  r.checks.push_back(detail::positivity_continuity(nu, "E1"));
  r.checks.push_back(detail::monotone_decreasing(nu, "E2"));
  r.checks.push_back(detail::sobolev_w11(nu, "E3"));
  r.checks.push_back(detail::derivative_bound(nu, "E4"));
  r.checks.push_back(detail::shifted_mass_bound(nu, "E5"));
  {
    auto i6 = improper_integral([&](double t) { return omega(t); });
    r.checks.push_back({"E6", detail::from_integral(i6), i6.value, "omega integrable"});
  }
  {
    auto i7 = improper_integral(
        [&](double t) { return std::exp(2.0 * omega.log_eval(t) - nu.log_eval(t)); });
    r.checks.push_back({"E7", detail::from_integral(i7), i7.value, "omega^2/nu integrable"});
  }
  return r;
}

// Variant used for general exponent p (dual q = p/(p-1)) and heavy-tailed
// weights: the shifted-mass bound is replaced by a vanishing-product test
// and the integrability coupling becomes nu^{1-q} omega^q.
inline PropertyReport check_properties_star(const WeightSpec& nu, const DistributionSpec& omega,
                                            double p) {
  PropertyReport r;
  if (!(p > 1.0)) {
    r.checks.push_back({"E*0", Verdict::Fail, p, "need p > 1 for a dual exponent"});
    return r;
  }
  double q = p / (p - 1.0);
  r.checks.push_back({"E*0", Verdict::Pass, q, "dual exponent q = p/(p-1)"});
  r.checks.push_back(detail::positivity_continuity(nu, "E*1"));
  r.checks.push_back(detail::monotone_decreasing(nu, "E*2"));
  r.checks.push_back(detail::sobolev_w11(nu, "E*3"));
  r.checks.push_back(detail::derivative_bound(nu, "E*4"));
  {
    // t * nu(t) -> 0: trend over doubling horizons
    std::vector<double> vals;
    for (double T : {16.0, 32.0, 64.0, 128.0, 256.0}) vals.push_back(T * nu(T));
    bool ok = true;
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (!(vals[i] <= 0.9 * vals[i - 1] || vals[i] < 1e-12)) ok = false;
    r.checks.push_back({"E*5", ok ? Verdict::Pass : Verdict::Fail, vals.back(),
                        "t*nu(t) at doubling horizons must shrink"});
  }
  {
    auto i6 = improper_integral([&](double t) { return omega(t); });
    r.checks.push_back({"E*6", detail::from_integral(i6), i6.value, "omega integrable"});
  }
  {
    auto i7 = improper_integral(
        [&](double t) { return std::exp((1.0 - q) * nu.log_eval(t) + q * omega.log_eval(t)); });
    r.checks.push_back({"E*7", detail::from_integral(i7), i7.value,
                        "nu^{1-q} omega^q integrable"});
  }
  return r;
}

}  // namespace ihoc
