#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/constraints.hpp"
#include "ihoc/extremal.hpp"

using namespace ihoc;

namespace {

// Fixture with constant H_x = -1 along the candidate: f = x, phi = 0,
// omega = 1, constraint -x <= 0 active along x = 0. Every piece of the
// decomposition is then exactly representable on the grid.
struct Fixture {
  ControlProblem pb;
  CandidateProcess cand;

  Fixture() {
    pb.state_dim = pb.control_dim = 1;
    pb.f = [](double, const Vec& x, const Vec&) { return x[0]; };
    pb.f_x = [](double, const Vec&, const Vec&) { return Vec{1.0}; };
    pb.phi = [](double, const Vec&, const Vec&) { return Vec{0.0}; };
    pb.phi_x = [](double, const Vec&, const Vec&) { return Mat{0.0}; };
    pb.U = ControlSet::whole_space(1);
    pb.x0 = {0.0};
    pb.omega = DistributionSpec::exponential(0.0);
    pb.nu = WeightSpec::exponential(1.0);
    pb.g.push_back([](double, const Vec& x) { return -x[0]; });
    pb.g_x.push_back([](double, const Vec&) { return Vec{-1.0}; });

    Grid grid = make_uniform_grid(40.0, 2048);
    cand.x = SampledFn::scalar(grid, [](double) { return 0.0; });
    cand.u = cand.x;
  }
};

ConstraintMeasure density_measure(const Grid& grid, const WeightSpec& nu) {
  ConstraintMeasure mu;
  // lambda(t) = 2 / nu(t), so lambda nu g_x = -2 exactly
  mu.density = SampledFn::scalar(grid, [&](double t) { return 2.0 / nu(t); });
  return mu;
}

}  // namespace

TEST_CASE("measure support validation") {
  Fixture fx;
  ConstrainedMultipliers cm;
  cm.p = SampledFn::scalar(fx.cand.x.grid, [](double) { return 0.0; });
  cm.measures.push_back(density_measure(fx.cand.x.grid, fx.pb.nu));
  cm.measures[0].atoms.push_back({10.0, 1.0});
  CHECK(support_check(fx.pb, fx.cand, cm).overall() == Verdict::Pass);

  // move the state off the boundary: the same measure is now unsupported
  CandidateProcess off = fx.cand;
  for (auto& v : off.x.values) v = 1.0;
  CHECK(support_check(fx.pb, off, cm).overall() == Verdict::Fail);

  // signed measures are rejected
  ConstrainedMultipliers neg = cm;
  neg.measures[0].atoms[0].beta = -1.0;
  CHECK(support_check(fx.pb, fx.cand, neg).overall() == Verdict::Fail);
}

TEST_CASE("adjoint decomposition, single atom") {
  Fixture fx;
  const Grid& grid = fx.cand.x.grid;
  double tau = 10.0, beta = 2.0 * std::exp(10.0);
  double jump = beta * fx.pb.nu(tau) * (-1.0);  // = -2
  ConstrainedMultipliers cm;
  cm.lambda0 = 1.0;
  cm.measures.resize(1);
  cm.measures[0].atoms.push_back({tau, beta});
  // H_x = -1, no density: q(t) = t, r jumps by -2 after tau
  cm.p = SampledFn::scalar(
      grid, [&](double t) { return 5.0 + t + (t > tau ? jump : 0.0); });
  auto dec = decompose_adjoint(fx.pb, fx.cand, cm);
  CHECK(dec.residual <= 1e-10);
  CHECK(dec.q.values[0] == 0.0);
  // left-continuity: the node at tau itself carries no jump yet
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    if (grid.nodes[i] <= tau) CHECK(dec.r.values[i] == 0.0);
  CHECK(dec.r.values.back() == doctest::Approx(jump).epsilon(1e-14));
}

TEST_CASE("adjoint decomposition, density only") {
  Fixture fx;
  const Grid& grid = fx.cand.x.grid;
  ConstrainedMultipliers cm;
  cm.lambda0 = 1.0;
  cm.measures.push_back(density_measure(grid, fx.pb.nu));
  // integrand H_x - lambda nu g_x = -1 + 2 = 1: q(t) = -t, no jumps
  cm.p = SampledFn::scalar(grid, [](double t) { return 5.0 - t; });
  auto dec = decompose_adjoint(fx.pb, fx.cand, cm);
  CHECK(dec.residual <= 1e-10);
  for (double v : dec.r.values) CHECK(v == 0.0);
}

TEST_CASE("adjoint decomposition flags an inconsistent adjoint") {
  Fixture fx;
  ConstrainedMultipliers cm;
  cm.lambda0 = 1.0;
  cm.measures.resize(1);
  cm.p = SampledFn::scalar(fx.cand.x.grid, [](double t) { return std::cos(t); });
  auto dec = decompose_adjoint(fx.pb, fx.cand, cm);
  CHECK(dec.residual > 1e-2);
}

TEST_CASE("integration by parts across jumps") {
  Fixture fx;
  const Grid& grid = fx.cand.x.grid;
  ConstrainedMultipliers cm;
  cm.p = SampledFn::scalar(grid, [](double) { return 0.0; });
  cm.measures.resize(1);
  cm.measures[0].atoms.push_back({5.0, 1.0});
  cm.measures[0].atoms.push_back({15.0, 3.0});
  auto y = SampledFn::scalar(grid, [](double t) { return t * std::exp(-0.2 * t); });
  auto r = jump_integration_by_parts_check(fx.pb, fx.cand, cm, y);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.value <= 1e-12);
}

TEST_CASE("inactive constraints reduce to the unconstrained conditions") {
  auto inst = catalog_get("regulator3");
  REQUIRE(inst.reference_constrained.has_value());
  const auto& cm = *inst.reference_constrained;
  const auto& pd = *inst.reference_multipliers;

  auto cmc = constrained_max_condition(inst.problem, *inst.reference, cm);
  auto umc = max_condition_check(inst.problem, *inst.reference, pd);
  CHECK(cmc.verdict == umc.verdict);
  CHECK(cmc.verdict == Verdict::Pass);

  CHECK(integral_adjoint_residual(inst.problem, *inst.reference, cm).verdict == Verdict::Pass);
  CHECK(constrained_transversality(inst.problem, cm).verdict == Verdict::Pass);
  CHECK(support_check(inst.problem, *inst.reference, cm).overall() == Verdict::Pass);

  // with no mass anywhere the decomposition collapses to p(0) + q
  auto dec = decompose_adjoint(inst.problem, *inst.reference, cm);
  for (double v : dec.r.values) CHECK(v == 0.0);
  CHECK(dec.residual <= 1e-5);
}
