#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/problem.hpp"

using namespace ihoc;

TEST_CASE("control set membership") {
  auto box = ControlSet::box({0.0}, {1.0});
  CHECK(box.contains({0.5}, 1e-9));
  CHECK(!box.contains({1.5}, 1e-9));
  auto half = ControlSet::half_line({0.0});
  CHECK(half.contains({100.0}, 1e-9));
  CHECK(!half.contains({-1.0}, 1e-9));
  auto fin = ControlSet::finite({{0.0}, {1.0}});
  CHECK(fin.contains({1.0}, 1e-9));
  CHECK(!fin.contains({0.5}, 1e-9));
}

TEST_CASE("probe points cover references") {
  auto box = ControlSet::box({0.0}, {1.0});
  auto pts = box.probe_points({0.3});
  bool has_ref = false, has_ends = false, has_hi = false;
  for (const auto& u : pts) {
    if (std::abs(u[0] - 0.3) < 1e-15) has_ref = true;
    if (u[0] == 0.0) has_ends = true;
    if (u[0] == 1.0) has_hi = true;
  }
  CHECK(has_ref);
  CHECK(has_ends);
  CHECK(has_hi);
}

TEST_CASE("regulator reference is admissible") {
  auto inst = catalog_get("regulator");
  auto rep = check_admissible(inst.problem, *inst.reference);
  CHECK(rep.overall() == Verdict::Pass);
  CHECK(check_dynamics_residual(inst.problem, *inst.reference).value < 1e-12);
}

TEST_CASE("initial value violations are detected") {
  auto inst = catalog_get("regulator");
  CandidateProcess cand = *inst.reference;
  cand.x.values[0] += 0.01;
  auto rep = check_admissible(inst.problem, cand);
  CHECK(rep.find("initial_value")->verdict == Verdict::Fail);
}

TEST_CASE("control region violations are detected") {
  auto inst = catalog_get("halkin");
  CandidateProcess cand = *inst.reference;
  for (auto& v : cand.u.values) v = 2.0;  // outside [0,1]
  cand.u_of_t = [](double) { return Vec{2.0}; };
  auto rep = check_admissible(inst.problem, cand);
  CHECK(rep.find("control_region")->verdict == Verdict::Fail);
}

TEST_CASE("diverging cost is flagged") {
  auto inst = catalog_get("halkin");
  Grid g = inst.reference->x.grid;
  // x' = 1 + x from 0 gives x = e^t - 1; the discounted cost of this
  // process grows without bound
  CandidateProcess cand;
  cand.x = SampledFn::scalar(g, [](double t) { return std::exp(t) - 1.0; },
                             [](double t) { return std::exp(t); });
  cand.u = SampledFn::scalar(g, [](double) { return 1.0; });
  auto rep = check_admissible(inst.problem, cand);
  CHECK(rep.find("dynamics_residual")->verdict == Verdict::Pass);
  CHECK(rep.find("cost_finite")->verdict == Verdict::Fail);
}

TEST_CASE("state constraint violations are detected") {
  auto inst = catalog_get("regulator3");
  CandidateProcess cand = *inst.reference;
  for (auto& v : cand.x.values) v -= 10.0;
  cand.x_of_t = nullptr;
  auto rep = check_admissible(inst.problem, cand);
  CHECK(rep.find("state_constraint_1")->verdict == Verdict::Fail);
}

TEST_CASE("active indices and the interior point condition") {
  auto inst = catalog_get("regulator3");
  // the reference decays to the boundary, so the constraint is active in
  // the asymptotic sense yet strictly inactive at finite times
  auto act = active_indices(inst.problem, *inst.reference);
  REQUIRE(act.size() == 1);
  CHECK(act[0] == 0);
  CHECK(check_condition_F(inst.problem, *inst.reference).verdict == Verdict::Pass);

  // a process glued to the boundary has no strictly interior time
  ControlProblem pb = inst.problem;
  CandidateProcess flat;
  flat.x = SampledFn::scalar(inst.reference->x.grid, [](double) { return 0.0; });
  flat.u = flat.x;
  CHECK(check_condition_F(pb, flat).verdict == Verdict::Fail);
}

TEST_CASE("growth bound over a tube") {
  auto inst = catalog_get("fishing");
  Tube tube{inst.reference->x, 0.2};
  auto r = check_A2_growth(inst.problem, tube);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.value > 0.0);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("tube leaving the model domain raises") {
  auto inst = catalog_get("terror");
  double xbar = inst.params.at("xbar");
  Tube tube{inst.reference->x, xbar + 1.0};  // crosses x < 0
  CHECK_THROWS_AS(check_A2_growth(inst.problem, tube), EvaluationDomainError);
}

TEST_CASE("deterministic rng is platform independent") {
  DetRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  DetRng c(0);
  double v = c.uniform();
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
}
