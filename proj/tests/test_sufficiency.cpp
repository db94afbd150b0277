#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/sufficiency.hpp"

using namespace ihoc;

TEST_CASE("pointwise maximized hamiltonian") {
  auto inst = catalog_get("regulator");
  // max_u -w(x^2+u^2)/2 + p(2x+u) = -w x^2/2 + 2px + p^2/(2w), at u = p/w
  double t = 1.0, x = 0.7, p = -0.4;
  double w = std::exp(-2.0 * t);
  double exact = -0.5 * w * x * x + 2.0 * p * x + p * p / (2.0 * w);
  double got = hamiltonian_sup(inst.problem, t, {x}, {p}, 1.0, {p / w});
  CHECK(got == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("maximized hamiltonian is concave in the state") {
  auto inst = catalog_get("regulator");
  Tube tube{inst.reference->x, 0.5};
  const auto& pd = *inst.reference_multipliers;
  CHECK(concavity_check(inst.problem, *inst.reference, pd, tube,
                        ConcavityMode::Midpoint)
            .verdict == Verdict::Pass);
  CHECK(concavity_check(inst.problem, *inst.reference, pd, tube,
                        ConcavityMode::Hessian)
            .verdict == Verdict::Pass);
}

TEST_CASE("convex-in-state hamiltonians are rejected") {
  ControlProblem pb;
  pb.state_dim = pb.control_dim = 1;
  pb.f = [](double, const Vec& x, const Vec&) { return -x[0] * x[0]; };
  pb.f_x = [](double, const Vec& x, const Vec&) { return Vec{-2.0 * x[0]}; };
  pb.phi = [](double, const Vec& x, const Vec&) { return Vec{-x[0]}; };
  pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{-1.0}; };
  pb.U = ControlSet::finite({{0.0}});
  pb.x0 = {1.0};
  pb.omega = DistributionSpec::exponential(1.0);
  pb.nu = WeightSpec::exponential(2.0);

  Grid grid = make_default_grid(40.0, 1024);
  CandidateProcess cand;
  cand.x = SampledFn::scalar(grid, [](double t) { return std::exp(-t); },
                             [](double t) { return -std::exp(-t); });
  cand.u = SampledFn::scalar(grid, [](double) { return 0.0; });
  PontryaginData pd;
  pd.lambda0 = 1.0;
  pd.p = SampledFn::scalar(grid, [](double) { return 0.0; });
  Tube tube{cand.x, 0.5};
  CHECK(concavity_check(pb, cand, pd, tube).verdict == Verdict::Fail);
}

TEST_CASE("strict growth holds at the exact modulus") {
  auto inst = catalog_get("regulator");
  Tube tube{inst.reference->x, 0.5};
  const auto& pd = *inst.reference_multipliers;
  // H*(x*) - H*(x) - <p', x - x*> equals exactly e^{-2t} |x - x*|^2 / 2
  auto r = strict_growth_check(inst.problem, *inst.reference, pd, tube,
                               [](double t) { return 0.5 * std::exp(-2.0 * t); });
  CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("strict growth fails beyond the exact modulus") {
  auto inst = catalog_get("regulator");
  Tube tube{inst.reference->x, 0.5};
  const auto& pd = *inst.reference_multipliers;
  auto r = strict_growth_check(inst.problem, *inst.reference, pd, tube,
                               [](double t) { return std::exp(-2.0 * t); });
  CHECK(r.verdict == Verdict::Fail);
}

TEST_CASE("affine state constraints are convex over the tube") {
  auto inst = catalog_get("regulator3");
  Tube tube{inst.reference->x, 0.5};
  auto rep = constraint_convexity_check(inst.problem, tube);
  CHECK(rep.overall() == Verdict::Pass);
}
