#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "extremal.hpp"
#include "problem.hpp"

namespace ihoc {

struct ParameterConstraintViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownEntry : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using ParamMap = std::map<std::string, double>;

struct CatalogInstance {
  std::string name;
  ControlProblem problem;
  std::optional<CandidateProcess> reference;
  std::optional<PontryaginData> reference_multipliers;
  std::optional<ConstrainedMultipliers> reference_constrained;
  ParamMap params;  // resolved parameter values
};

struct CatalogSummary {
  std::string name;
  std::string description;
  ParamMap defaults;
};

namespace detail {

inline ParamMap resolve_params(const ParamMap& defaults, const ParamMap& overrides) {
  ParamMap out = defaults;
  for (const auto& [k, v] : overrides) {
    auto it = out.find(k);
    if (it == out.end()) throw ParameterConstraintViolated("unknown parameter: " + k);
    it->second = v;
  }
  return out;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterConstraintViolated(what);
}

inline CandidateProcess closed_form_candidate(
    const Grid& g, std::size_t nx, std::size_t nu_dim,
    const std::function<Vec(double)>& x, const std::function<Vec(double)>& dx,
    const std::function<Vec(double)>& u) {
  CandidateProcess c;
  c.x = SampledFn::from_function(g, nx, x, dx);
  c.u = SampledFn::from_function(g, nu_dim, u);
  c.x_of_t = x;
  c.u_of_t = u;
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entries. All problems are stored in minimization form; entries whose
// source formulation maximizes carry original_sense_max = true.
// ---------------------------------------------------------------------------

inline CatalogInstance catalog_regulator(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({{"a", 3.0}}, overrides);
  double a = p.at("a");
  detail::require(a > 0.0 && a < 4.0, "regulator needs weight rate a in (0,4)");
  CatalogInstance inst;
  inst.name = "regulator";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.f = [](double, const Vec& x, const Vec& u) { return 0.5 * (x[0] * x[0] + u[0] * u[0]); };
  pb.f_x = [](double, const Vec& x, const Vec&) { return Vec{x[0]}; };
  pb.phi = [](double, const Vec& x, const Vec& u) { return Vec{2.0 * x[0] + u[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{2.0}; };
  pb.U = ControlSet::whole_space(1);
  pb.x0 = {2.0};
  pb.omega = DistributionSpec::exponential(2.0);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "scalar linear-quadratic regulator, unstable drift";

  const double s = 1.0 - std::sqrt(2.0);       // closed orbit rate
  const double c = 2.0 * (1.0 + std::sqrt(2.0));
  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [=](double t) { return Vec{2.0 * std::exp(s * t)}; },
      [=](double t) { return Vec{2.0 * s * std::exp(s * t)}; },
      [=](double t) { return Vec{-c * std::exp(s * t)}; });
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = SampledFn::scalar(
      grid, [=](double t) { return -c * std::exp(-(1.0 + std::sqrt(2.0)) * t); },
      [=](double t) { return c * (1.0 + std::sqrt(2.0)) * std::exp(-(1.0 + std::sqrt(2.0)) * t); });
  inst.reference_multipliers = pd;
  return inst;
}

inline CatalogInstance catalog_regulator2(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({{"a", 3.0}}, overrides);
  double a = p.at("a");
  detail::require(a > 0.0 && a < 4.0, "needs weight rate a in (0,4)");
  CatalogInstance inst;
  inst.name = "regulator2";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.f = [](double, const Vec& x, const Vec& u) { return 0.5 * (x[0] * x[0] + u[0] * u[0]); };
  pb.f_x = [](double, const Vec& x, const Vec&) { return Vec{x[0]}; };
  pb.phi = [](double, const Vec& x, const Vec& u) { return Vec{x[0] + u[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{1.0}; };
  pb.U = ControlSet::whole_space(1);
  pb.x0 = {1.0};
  pb.omega = DistributionSpec::exponential(2.0);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "linear-quadratic regulator held at a steady state";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [](double) { return Vec{1.0}; }, [](double) { return Vec{0.0}; },
      [](double) { return Vec{-1.0}; });
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = SampledFn::scalar(grid, [](double t) { return -std::exp(-2.0 * t); },
                           [](double t) { return 2.0 * std::exp(-2.0 * t); });
  inst.reference_multipliers = pd;
  return inst;
}

inline CatalogInstance catalog_regulator3(const ParamMap& overrides, const Grid& grid) {
  CatalogInstance inst = catalog_regulator(overrides, grid);
  inst.name = "regulator3";
  ControlProblem& pb = inst.problem;
  pb.g.push_back([](double, const Vec& x) { return -x[0]; });
  pb.g_x.push_back([](double, const Vec&) { return Vec{-1.0}; });
  pb.description = "regulator with a nonnegativity state constraint that never binds";
  ConstrainedMultipliers cm;
  cm.lambda0 = 1.0;
  cm.p = inst.reference_multipliers->p;
  cm.measures.resize(1);  // zero measure
  inst.reference_constrained = cm;
  return inst;
}

inline CatalogInstance catalog_halkin(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({{"rho", 0.5}, {"a", 0.5}}, overrides);
  double rho = p.at("rho"), a = p.at("a");
  detail::require(rho > 0.0 && rho < 1.0, "discount rho must lie in (0,1)");
  detail::require(a > 0.0 && a < 2.0, "weight rate a must lie in (0,2)");
  CatalogInstance inst;
  inst.name = "halkin";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [](double, const Vec& x, const Vec& u) { return x[0] - u[0]; };
  pb.f_x = [](double, const Vec&, const Vec&) { return Vec{1.0}; };
  pb.phi = [](double, const Vec& x, const Vec& u) { return Vec{u[0] * u[0] + x[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{1.0}; };
  pb.U = ControlSet::box({0.0}, {1.0});
  pb.x0 = {0.0};
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "abnormal single-process problem (stated as maximization)";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [](double) { return Vec{0.0}; }, [](double) { return Vec{0.0}; },
      [](double) { return Vec{0.0}; });
  PontryaginData pd;
  pd.lambda0 = 0.0;
  pd.p = SampledFn::scalar(grid, [](double t) { return -std::exp(-t); },
                           [](double t) { return std::exp(-t); });
  inst.reference_multipliers = pd;
  return inst;
}

namespace detail {

inline CatalogInstance nash_player(int player, const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params(
      {{"c1", 1.0}, {"c2", 2.0}, {"r", 0.5}, {"alpha", 1.0}, {"rho", 1.0}, {"z0", 1.0},
       {"a", 1.0}},
      overrides);
  double c1 = p.at("c1"), c2 = p.at("c2"), r = p.at("r"), al = p.at("alpha");
  double rho = p.at("rho"), z0 = p.at("z0"), a = p.at("a");
  double S = c1 + c2;
  detail::require(c1 > 0.0 && c2 > 0.0, "costs must be positive");
  detail::require(r > 0.0 && rho > 0.0, "rates must be positive");
  detail::require(al > 1.0 / S, "needs alpha > 1/(c1+c2)");
  detail::require(z0 > 0.0, "needs z0 > 0");
  detail::require(a > 0.0 && a < 2.0 * rho, "weight rate must satisfy 0 < a < 2 rho");
  double u1 = c2 / (S * S), u2 = c1 / (S * S);
  double own_cost = player == 1 ? c1 : c2;
  double u_opp = player == 1 ? u2 : u1;
  double u_own = player == 1 ? u1 : u2;
  double c0 = (al - 1.0 / S) / r;

  CatalogInstance inst;
  inst.name = player == 1 ? "nash_p1" : "nash_p2";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [own_cost, u_opp](double, const Vec&, const Vec& u) {
    double tot = u[0] + u_opp;
    return -((1.0 / tot - own_cost) * u[0]);
  };
  pb.f_x = [](double, const Vec&, const Vec&) { return Vec{0.0}; };
  pb.phi = [r, al, u_opp](double, const Vec& z, const Vec& u) {
    return Vec{-r * z[0] + al - u[0] - u_opp};
  };
  pb.phi_x = [r](double, const Vec&, const Vec&) { return Mat{-r}; };
  pb.U = ControlSet::half_line({0.0});
  pb.x0 = {z0};
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "open-loop equilibrium subproblem of a two-player extraction game, player " +
                   std::to_string(player) + " (opponent held at its equilibrium rate)";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [=](double t) { return Vec{(z0 - c0) * std::exp(-r * t) + c0}; },
      [=](double t) { return Vec{-r * (z0 - c0) * std::exp(-r * t)}; },
      [=](double) { return Vec{u_own}; });
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = SampledFn::scalar(grid, [](double) { return 0.0; }, [](double) { return 0.0; });
  inst.reference_multipliers = pd;
  return inst;
}

}  // namespace detail

// Resource extraction with an exhaustible stock and accumulated by-product:
// states (x, y), x' = -u, y' = c f(u), constraint x >= 0, f(u) = sqrt(u+1).
inline CatalogInstance catalog_resource(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params(
      {{"rho", 1.0}, {"r", 0.5}, {"c", 1.0}, {"q", 0.3}, {"x0", 1.0}, {"y0", 0.0}, {"a", 1.0}},
      overrides);
  double rho = p.at("rho"), r = p.at("r"), c = p.at("c"), q = p.at("q");
  double x0 = p.at("x0"), y0 = p.at("y0"), a = p.at("a");
  detail::require(rho > 0.0 && r > 0.0 && c > 0.0 && q > 0.0, "rates must be positive");
  detail::require(x0 > 0.0 && y0 >= 0.0, "needs x0 > 0, y0 >= 0");
  detail::require(a > 0.0 && a < 2.0 * rho, "weight rate must satisfy 0 < a < 2 rho");
  double d = (rho - r * c) / rho;
  detail::require(d > 0.0, "needs rho > r*c");

  auto fprod = [](double u) { return std::sqrt(u + 1.0); };
  CatalogInstance inst;
  inst.name = "resource";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = 2;
  pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [r, q, fprod](double, const Vec& x, const Vec& u) {
    return -(fprod(u[0]) - r * x[1] - q * u[0]);
  };
  pb.f_x = [r](double, const Vec&, const Vec&) { return Vec{0.0, r}; };
  pb.phi = [c, fprod](double, const Vec&, const Vec& u) { return Vec{-u[0], c * fprod(u[0])}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{0.0, 0.0, 0.0, 0.0}; };
  pb.g.push_back([](double, const Vec& x) { return -x[0]; });
  pb.g_x.push_back([](double, const Vec&) { return Vec{-1.0, 0.0}; });
  pb.U = ControlSet::half_line({0.0});
  pb.x0 = {x0, y0};
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "exhaustible stock extraction with by-product accumulation "
                   "(stated as maximization)";

  const double fp0 = 0.5;  // f'(0)
  ConstrainedMultipliers cm;
  cm.lambda0 = 1.0;
  cm.measures.resize(1);
  if (d * fp0 <= q) {
    // never extract: stock untouched, measure vanishes
    inst.reference = detail::closed_form_candidate(
        grid, 2, 1, [=](double t) { return Vec{x0, y0 + c * t}; },
        [=](double) { return Vec{0.0, c}; }, [](double) { return Vec{0.0}; });
    cm.p = SampledFn::from_function(
        grid, 2, [=](double t) { return Vec{0.0, -(r / rho) * std::exp(-rho * t)}; },
        [=](double t) { return Vec{0.0, r * std::exp(-rho * t)}; });
  } else {
    // extraction until exhaustion at t', then the constraint carries a
    // density that freezes the stock multiplier
    double A = d * fp0 - q;
    auto u_of = [=](double t, double tp) {
      if (t >= tp) return 0.0;
      double w = (q + A * std::exp(rho * (t - tp))) / d;
      return 1.0 / (4.0 * w * w) - 1.0;
    };
    auto spent = [&](double tp) {
      return detail::smooth_integral([&](double s) { return u_of(s, tp); }, 0.0, tp, 4096);
    };
    double lo = 1e-6, hi = 1.0;
    while (spent(hi) < x0 && hi < 1e4) hi *= 2.0;
    detail::require(hi < 1e4, "cannot exhaust the stock: x0 too large for these rates");
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (spent(mid) < x0 ? lo : hi) = mid;
    }
    double tp = 0.5 * (lo + hi);
    // state has no elementary closed form; accumulate both components on
    // the grid once and interpolate off-node
    CandidateProcess cand;
    cand.u = SampledFn::scalar(grid, [=](double t) { return u_of(t, tp); });
    cand.x.grid = grid;
    cand.x.dim = 2;
    cand.x.values.resize(grid.size() * 2);
    cand.x.derivatives = std::vector<double>(grid.size() * 2);
    {
      std::vector<double> us(grid.size()), fu(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        us[i] = u_of(grid.nodes[i], tp);
        fu[i] = c * fprod(us[i]);
      }
      auto ucum = cumulative_head(grid.nodes, us);
      auto ycum = cumulative_head(grid.nodes, fu);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid.nodes[i];
        cand.x.values[i * 2] = t >= tp ? 0.0 : std::max(0.0, x0 - ucum[i]);
        cand.x.values[i * 2 + 1] = y0 + ycum[i];
        (*cand.x.derivatives)[i * 2] = -us[i];
        (*cand.x.derivatives)[i * 2 + 1] = fu[i];
      }
    }
    cand.u_of_t = [=](double t) { return Vec{u_of(t, tp)}; };
    inst.reference = cand;
    cm.p = SampledFn::from_function(
        grid, 2,
        [=](double t) {
          return Vec{A * std::exp(-rho * std::max(t, tp)), -(r / rho) * std::exp(-rho * t)};
        },
        [=](double t) {
          return Vec{t > tp ? -rho * A * std::exp(-rho * t) : 0.0, r * std::exp(-rho * t)};
        });
    WeightSpec nu_copy = pb.nu;
    cm.measures[0].density = SampledFn::scalar(grid, [=](double t) {
      return t >= tp ? rho * A * std::exp(-rho * t) / nu_copy(t) : 0.0;
    });
    inst.params["t_exhaust"] = tp;
  }
  inst.reference_constrained = cm;
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = cm.p;
  inst.reference_multipliers = pd;
  return inst;
}

inline CatalogInstance catalog_fishing(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params(
      {{"rho", 0.1}, {"r", 0.5}, {"K", 1.0}, {"umax", 1.0}, {"c", 0.2}, {"a", 0.15}}, overrides);
  double rho = p.at("rho"), r = p.at("r"), K = p.at("K"), umax = p.at("umax"), c = p.at("c");
  double a = p.at("a");
  detail::require(rho > 0.0 && rho < r && r < umax, "needs 0 < rho < r < umax");
  detail::require(K > 0.0, "carrying capacity must be positive");
  detail::require(c >= 0.0 && c < K * (r - rho) / (2.0 * r), "cost bound violated");
  detail::require(a > 0.0 && a < 2.0 * rho, "weight rate must satisfy 0 < a < 2 rho");
  double xbar = K * (r - rho) / (2.0 * r);
  double ubar = 0.5 * (r + rho);

  CatalogInstance inst;
  inst.name = "fishing";
  inst.params = p;
  inst.params["xbar"] = xbar;
  inst.params["ubar"] = ubar;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [c](double, const Vec& x, const Vec& u) { return -((x[0] - c) * u[0]); };
  pb.f_x = [](double, const Vec&, const Vec& u) { return Vec{-u[0]}; };
  pb.phi = [r, K](double, const Vec& x, const Vec& u) {
    return Vec{r * x[0] * (1.0 - x[0] / K) - u[0] * x[0]};
  };
  pb.phi_x = [r, K](double, const Vec& x, const Vec& u) {
    return Mat{r - 2.0 * r * x[0] / K - u[0]};
  };
  pb.U = ControlSet::box({0.0}, {umax});
  pb.x0 = {xbar};
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "sustained harvesting of a logistic stock at its steady state "
                   "(stated as maximization)";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [=](double) { return Vec{xbar}; }, [](double) { return Vec{0.0}; },
      [=](double) { return Vec{ubar}; });
  return inst;
}

inline CatalogInstance catalog_investment(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params(
      {{"rho", 0.1}, {"gamma", 1.0}, {"delta", 0.3}, {"a", 0.15}}, overrides);
  double rho = p.at("rho"), ga = p.at("gamma"), de = p.at("delta"), a = p.at("a");
  detail::require(rho > 0.0 && ga > 0.0 && de > 0.0, "rates must be positive");
  detail::require(a > 0.0 && a < 2.0 * rho, "weight rate must satisfy 0 < a < 2 rho");
  double xbar = ga * ga / (4.0 * (rho + de) * (rho + de));
  double ubar = de / (2.0 * (rho + de));

  CatalogInstance inst;
  inst.name = "investment";
  inst.params = p;
  inst.params["xbar"] = xbar;
  inst.params["ubar"] = ubar;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [](double, const Vec& x, const Vec& u) { return -((1.0 - u[0]) * std::sqrt(x[0])); };
  pb.f_x = [](double, const Vec& x, const Vec& u) {
    return Vec{-(1.0 - u[0]) * 0.5 / std::sqrt(x[0])};
  };
  pb.phi = [ga, de](double, const Vec& x, const Vec& u) {
    return Vec{ga * u[0] * std::sqrt(x[0]) - de * x[0]};
  };
  pb.phi_x = [ga, de](double, const Vec& x, const Vec& u) {
    return Mat{ga * u[0] * 0.5 / std::sqrt(x[0]) - de};
  };
  pb.U = ControlSet::box({0.0}, {1.0});
  pb.x0 = {xbar};
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "capital accumulation with reinvested output share at its steady state "
                   "(stated as maximization)";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [=](double) { return Vec{xbar}; }, [](double) { return Vec{0.0}; },
      [=](double) { return Vec{ubar}; });
  return inst;
}

inline CatalogInstance catalog_terror(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({{"rho", 1.0},
                                       {"cost", 1.0},
                                       {"tau", 0.1},
                                       {"kappa", 0.5},
                                       {"eps", 0.1},
                                       {"mu", 0.5},
                                       {"eta", 0.5},
                                       {"alpha", 0.5},
                                       {"a", 1.0}},
                                      overrides);
  double rho = p.at("rho"), cc = p.at("cost"), tau = p.at("tau"), ka = p.at("kappa");
  double ep = p.at("eps"), mu = p.at("mu"), eta = p.at("eta"), al = p.at("alpha");
  double a = p.at("a");
  detail::require(rho > 0.0 && cc > 0.0 && ka > 0.0 && ep > 0.0 && mu > 0.0 && eta > 0.0,
                  "rates must be positive");
  detail::require(tau >= 0.0, "inflow must be nonnegative");
  detail::require(al > 0.0 && al < 1.0, "exponent must lie in (0,1)");
  detail::require(a > 0.0 && a < 2.0 * rho, "weight rate must satisfy 0 < a < 2 rho");

  CatalogInstance inst;
  inst.name = "terror";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.f = [cc](double, const Vec& x, const Vec& u) { return cc * x[0] + u[0]; };
  pb.f_x = [cc](double, const Vec&, const Vec&) { return Vec{cc}; };
  pb.phi = [=](double, const Vec& x, const Vec& u) {
    return Vec{tau + (ka + ep * u[0]) * std::pow(x[0], al) - (mu + eta * u[0]) * x[0]};
  };
  pb.phi_x = [=](double, const Vec& x, const Vec& u) {
    return Mat{(ka + ep * u[0]) * al * std::pow(x[0], al - 1.0) - (mu + eta * u[0])};
  };
  pb.U = ControlSet::half_line({0.0});
  pb.omega = DistributionSpec::exponential(rho);
  pb.nu = WeightSpec::exponential(a);
  pb.description = "organization suppression model with concave recruitment";

  // uncontrolled equilibrium: tau + kappa x^alpha - mu x = 0
  double lo = 1e-9, hi = 1.0;
  auto eq = [&](double x) { return tau + ka * std::pow(x, al) - mu * x; };
  while (eq(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (eq(mid) > 0.0 ? lo : hi) = mid;
  }
  double xbar = 0.5 * (lo + hi);
  pb.x0 = {xbar};
  inst.params["xbar"] = xbar;
  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [=](double) { return Vec{xbar}; }, [](double) { return Vec{0.0}; },
      [](double) { return Vec{0.0}; });
  return inst;
}

inline CatalogInstance catalog_weibull_harvest(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({{"k", 0.5}, {"a", 2.0}, {"p", 3.0}}, overrides);
  double k = p.at("k"), a = p.at("a"), pexp = p.at("p");
  detail::require(k > 0.0 && k < 1.0, "shape must lie in (0,1)");
  detail::require(a > 1.0, "power-law weight needs a > 1");
  detail::require(pexp > 1.0 / k, "needs exponent p > 1/k");
  CatalogInstance inst;
  inst.name = "weibull_harvest";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [](double, const Vec&, const Vec& u) { return -(u[0] / (1.0 + u[0] * u[0])); };
  pb.f_x = [](double, const Vec&, const Vec&) { return Vec{0.0}; };
  pb.phi = [](double, const Vec& x, const Vec& u) { return Vec{-x[0] + u[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{-1.0}; };
  pb.U = ControlSet::half_line({0.0});
  pb.x0 = {2.0};
  pb.omega = DistributionSpec::weibull(k);
  pb.nu = WeightSpec::power_law(a);
  pb.p_exp = pexp;
  pb.description = "saturating yield under a heavy-tailed planning density "
                   "(stated as maximization)";

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [](double t) { return Vec{1.0 + std::exp(-t)}; },
      [](double t) { return Vec{-std::exp(-t)}; }, [](double) { return Vec{1.0}; });
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = SampledFn::scalar(grid, [](double) { return 0.0; }, [](double) { return 0.0; });
  inst.reference_multipliers = pd;
  return inst;
}

inline CatalogInstance catalog_pathology(const ParamMap& overrides, const Grid& grid) {
  ParamMap p = detail::resolve_params({}, overrides);
  CatalogInstance inst;
  inst.name = "pathology";
  inst.params = p;
  ControlProblem& pb = inst.problem;
  pb.state_dim = pb.control_dim = 1;
  pb.original_sense_max = true;
  pb.f = [](double, const Vec& x, const Vec& u) { return -((1.0 - u[0]) * x[0]); };
  pb.f_x = [](double, const Vec&, const Vec& u) { return Vec{-(1.0 - u[0])}; };
  pb.phi = [](double, const Vec& x, const Vec& u) { return Vec{u[0] * x[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec& u) { return Mat{u[0]}; };
  pb.U = ControlSet::box({0.0}, {1.0});
  pb.x0 = {1.0};
  pb.omega = DistributionSpec::exponential(0.0);  // deliberately undiscounted
  pb.nu = WeightSpec::exponential(1.0);
  pb.description = "undiscounted growth-or-harvest model whose truncated optima diverge "
                   "from the limiting process (stated as maximization)";
  SwitchingModel sm;
  sm.u_lo = 0.0;
  sm.u_hi = 1.0;
  sm.alpha = [](double u) { return u; };
  sm.beta = [](double) { return 0.0; };
  sm.c0 = [](double) { return 0.0; };
  sm.c1 = [](double u) { return 1.0 - u; };
  sm.rho = 0.0;
  sm.x0 = 1.0;
  sm.maximize = true;
  pb.switching = sm;

  inst.reference = detail::closed_form_candidate(
      grid, 1, 1, [](double t) { return Vec{std::exp(t)}; },
      [](double t) { return Vec{std::exp(t)}; }, [](double) { return Vec{1.0}; });
  return inst;
}

inline std::vector<CatalogSummary> catalog_list() {
  return {
      {"regulator", "scalar linear-quadratic regulator, unstable drift", {{"a", 3.0}}},
      {"regulator2", "linear-quadratic regulator held at a steady state", {{"a", 3.0}}},
      {"regulator3", "regulator with a never-binding nonnegativity constraint", {{"a", 3.0}}},
      {"halkin", "abnormal single-process problem", {{"rho", 0.5}, {"a", 0.5}}},
      {"nash_p1",
       "two-player extraction game, player 1 subproblem",
       {{"c1", 1.0}, {"c2", 2.0}, {"r", 0.5}, {"alpha", 1.0}, {"rho", 1.0}, {"z0", 1.0},
        {"a", 1.0}}},
      {"nash_p2",
       "two-player extraction game, player 2 subproblem",
       {{"c1", 1.0}, {"c2", 2.0}, {"r", 0.5}, {"alpha", 1.0}, {"rho", 1.0}, {"z0", 1.0},
        {"a", 1.0}}},
      {"resource",
       "exhaustible stock extraction with by-product accumulation",
       {{"rho", 1.0}, {"r", 0.5}, {"c", 1.0}, {"q", 0.3}, {"x0", 1.0}, {"y0", 0.0}, {"a", 1.0}}},
      {"fishing",
       "sustained harvesting of a logistic stock",
       {{"rho", 0.1}, {"r", 0.5}, {"K", 1.0}, {"umax", 1.0}, {"c", 0.2}, {"a", 0.15}}},
      {"investment",
       "capital accumulation with reinvested output share",
       {{"rho", 0.1}, {"gamma", 1.0}, {"delta", 0.3}, {"a", 0.15}}},
      {"terror",
       "organization suppression model with concave recruitment",
       {{"rho", 1.0}, {"cost", 1.0}, {"tau", 0.1}, {"kappa", 0.5}, {"eps", 0.1}, {"mu", 0.5},
        {"eta", 0.5}, {"alpha", 0.5}, {"a", 1.0}}},
      {"weibull_harvest",
       "saturating yield under a heavy-tailed planning density",
       {{"k", 0.5}, {"a", 2.0}, {"p", 3.0}}},
      {"pathology", "truncated optima diverging from the limiting process", {}},
  };
}

inline CatalogInstance catalog_get(const std::string& name, const ParamMap& params = {},
                                   const Grid& grid = make_default_grid()) {
  if (name == "regulator") return catalog_regulator(params, grid);
  if (name == "regulator2") return catalog_regulator2(params, grid);
  if (name == "regulator3") return catalog_regulator3(params, grid);
  if (name == "halkin") return catalog_halkin(params, grid);
  if (name == "nash" || name == "nash_p1") return detail::nash_player(1, params, grid);
  if (name == "nash_p2") return detail::nash_player(2, params, grid);
  if (name == "resource") return catalog_resource(params, grid);
  if (name == "fishing") return catalog_fishing(params, grid);
  if (name == "investment") return catalog_investment(params, grid);
  if (name == "terror") return catalog_terror(params, grid);
  if (name == "weibull_harvest") return catalog_weibull_harvest(params, grid);
  if (name == "pathology") return catalog_pathology(params, grid);
  throw UnknownEntry("unknown catalog entry: " + name);
}

}  // namespace ihoc
