#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ihoc/catalog.hpp"
#include "ihoc/horizonlab.hpp"

using namespace ihoc;

namespace {
const double SQ2 = std::sqrt(2.0);

// regulator closed-orbit truncated cost: (2 sqrt2 + 2)(1 - e^{-2 sqrt2 T})
double regulator_JT(double T) { return (2.0 * SQ2 + 2.0) * (1.0 - std::exp(-2.0 * SQ2 * T)); }
}  // namespace

TEST_CASE("switching evaluation matches the closed form") {
  auto inst = catalog_get("pathology");
  REQUIRE(inst.problem.switching.has_value());
  const auto& sm = *inst.problem.switching;
  // growth until s, then harvest: J = (T - s) e^s
  for (double T : {2.0, 3.0}) {
    for (double s : {0.5, 1.0, 1.7}) {
      auto ev = detail::eval_switching(sm, T, {s}, true);
      CHECK(ev.value == doctest::Approx((T - s) * std::exp(s)).epsilon(1e-12));
      CHECK(ev.x_end == doctest::Approx(std::exp(s)).epsilon(1e-12));
    }
    // never switching harvests nothing
    CHECK(detail::eval_switching(sm, T, {}, true).value == doctest::Approx(0.0));
    // harvesting from the start gives J = T at x = 1
    CHECK(detail::eval_switching(sm, T, {}, false).value == doctest::Approx(T).epsilon(1e-12));
  }
}

TEST_CASE("truncated switching optimum finds the interior switch") {
  auto inst = catalog_get("pathology");
  for (double T : {2.0, 3.0, 4.0}) {
    auto sol = solve_truncated_switching(inst.problem, T, 2);
    double exact = std::exp(T - 1.0);  // optimum of (T - s) e^s at s = T - 1
    CHECK(std::abs(sol.value - exact) <= 1e-6 * exact);
    // the optimizer may report the orbit as {T-1} starting high or as
    // {0, T-1} starting low; the final switch is the informative one
    REQUIRE(sol.switch_times.size() >= 1);
    CHECK(sol.switch_times.back() == doctest::Approx(T - 1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(solve_truncated_switching(inst.problem, 2.0, 7), UnsupportedProblem);
  auto reg = catalog_get("regulator");
  CHECK_THROWS_AS(solve_truncated_switching(reg.problem, 2.0, 2), UnsupportedProblem);
}

TEST_CASE("truncated cost against the closed form") {
  auto inst = catalog_get("regulator");
  for (double T : {5.0, 10.0, 20.0}) {
    double got = truncated_cost(inst.problem, *inst.reference, T);
    CHECK(std::abs(got - regulator_JT(T)) <= 1e-6);
  }
}

TEST_CASE("defect series of a competitor") {
  auto inst = catalog_get("pathology");
  // limit candidate grows forever and never harvests: J_T = 0
  // the all-harvest competitor sits at x = 1 and collects T
  Grid grid = inst.reference->x.grid;
  CandidateProcess competitor;
  competitor.x = SampledFn::scalar(grid, [](double) { return 1.0; });
  competitor.u = SampledFn::scalar(grid, [](double) { return 0.0; });
  auto s = defect_series(inst.problem, *inst.reference, competitor, {5.0, 10.0, 20.0});
  // stored in minimization form, so the competitor improves by -T
  for (std::size_t i = 0; i < s.horizons.size(); ++i)
    CHECK(s.values[i] == doctest::Approx(-s.horizons[i]).epsilon(1e-6));
}

TEST_CASE("well-posed truncation passes the approximation hypothesis") {
  auto inst = catalog_get("regulator");
  TruncationSweep sweep;
  for (double T : {10.0, 20.0, 30.0, 40.0, 50.0}) {
    sweep.horizons.push_back(T);
    sweep.values.push_back(regulator_JT(T));
  }
  auto r = hypothesis_H_check(inst.problem, sweep, *inst.reference);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(!r.pathology);
  CHECK(r.gap <= 1e-3);
}

TEST_CASE("diverging truncations raise the pathology flag") {
  auto inst = catalog_get("pathology");
  TruncationSweep sweep;
  for (double T : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    sweep.horizons.push_back(T);
    sweep.values.push_back(solve_truncated_switching(inst.problem, T, 2).value);
  }
  auto r = hypothesis_H_check(inst.problem, sweep, *inst.reference);
  CHECK(r.pathology);
  CHECK(r.verdict == Verdict::Fail);
  // the limit candidate itself is worthless: J = 0 in the original sense
  CHECK(std::abs(r.limit_value) <= 1e-9);
  CHECK(r.sweep_final == doctest::Approx(std::exp(5.0)).epsilon(1e-6));
}

TEST_CASE("settled sweep at the wrong value is also pathological") {
  auto inst = catalog_get("regulator");
  TruncationSweep sweep;
  for (double T : {10.0, 20.0, 30.0, 40.0}) {
    sweep.horizons.push_back(T);
    sweep.values.push_back(regulator_JT(T) + 1.0);
  }
  auto r = hypothesis_H_check(inst.problem, sweep, *inst.reference);
  CHECK(r.pathology);
}

TEST_CASE("sweep csv output") {
  auto inst = catalog_get("regulator");
  TruncationSweep sweep;
  sweep.horizons = {1.0, 2.0};
  sweep.values = {regulator_JT(1.0), regulator_JT(2.0)};
  const char* path = "sweep_test.csv";
  write_sweep_csv(path, sweep, 2.0 * (1.0 + SQ2));
  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "T,J_T,gap");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
  in.close();
  std::remove(path);
}
