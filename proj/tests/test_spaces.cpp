#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ihoc/csv.hpp"
#include "ihoc/problem.hpp"
#include "ihoc/spaces.hpp"

using namespace ihoc;

TEST_CASE("grid construction") {
  auto g = make_default_grid(60.0, 4096);
  CHECK(g.size() == 4096);
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes.back() == 60.0);
  g.validate();
  CHECK_THROWS_AS(make_default_grid(-1.0, 4096), GridError);
  Grid bad;
  bad.nodes = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), GridError);
}

TEST_CASE("finite differences are high order") {
  auto g = make_default_grid(10.0, 1024);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(g.nodes[i]);
  auto d = finite_difference(g, v, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(d[i] - std::cos(g.nodes[i])));
  CHECK(worst < 1e-7);
}

TEST_CASE("weighted norm oracles") {
  auto g = make_default_grid(60.0, 4096);
  auto nu = WeightSpec::exponential(1.0);
  auto one = SampledFn::scalar(g, [](double) { return 1.0; });
  // ||1||_{L2(e^{-t})} = 1
  CHECK(weighted_Lp_norm(one, nu, 2.0) == doctest::Approx(1.0).epsilon(1e-4));
  // ||1||_{L3(e^{-t})} = 1
  CHECK(weighted_Lp_norm(one, nu, 3.0) == doctest::Approx(1.0).epsilon(1e-4));
  // ||e^{-t}||_{W12(e^{-t})} = 2/sqrt(3)
  auto decay = SampledFn::scalar(g, [](double t) { return std::exp(-t); },
                                 [](double t) { return -std::exp(-t); });
  CHECK(weighted_W1p_norm(decay, nu, 2.0) ==
        doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-4));
  // finite differences fall back when no derivative samples exist
  auto nodfv = SampledFn::scalar(g, [](double t) { return std::exp(-t); });
  CHECK(weighted_W1p_norm(nodfv, nu, 2.0) ==
        doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-4));
  CHECK_THROWS(weighted_Lp_norm(one, nu, 0.5));
}

TEST_CASE("weighted pairing dominance") {
  // int |x| omega <= ||x||_{L2(nu)} * (int omega^2 / nu)^{1/2}
  auto g = make_default_grid(60.0, 4096);
  auto nu = WeightSpec::exponential(1.5);
  auto om = DistributionSpec::exponential(1.0);
  double coupling = std::sqrt(improper_integral([&](double t) {
                                return std::exp(2.0 * om.log_eval(t) - nu.log_eval(t));
                              }).value);
  DetRng rng(7);
  for (int k = 0; k < 10; ++k) {
    double amp = rng.uniform(0.2, 2.0), freq = rng.uniform(0.5, 3.0),
           rate = rng.uniform(0.0, 0.3);
    auto x = SampledFn::scalar(g, [&](double t) {
      return amp * (1.0 + 0.5 * std::sin(freq * t)) * std::exp(-rate * t);
    });
    std::vector<double> weighted(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      weighted[i] = std::abs(x.values[i]) * om(g.nodes[i]);
    double lhs = trapezoid(g.nodes, weighted);
    double rhs = weighted_Lp_norm(x, nu, 2.0) * coupling;
    CHECK(lhs <= rhs * (1.0 + 1e-6));
  }
}

TEST_CASE("decay lemma checks") {
  auto g = make_default_grid(60.0, 4096);
  auto nu = WeightSpec::exponential(3.0);
  auto x = SampledFn::scalar(g, [](double t) { return std::exp(-0.4 * t); });
  auto y = SampledFn::scalar(g, [](double t) { return std::exp(-2.0 * t); });
  auto rep = check_decay_lemmas(x, y, nu);
  CHECK(rep.overall() == Verdict::Pass);
  // a dual element that fails to decay against 1/nu
  auto flat = SampledFn::scalar(g, [](double) { return 1.0; });
  auto bad = check_decay_lemmas(x, flat, nu);
  CHECK(bad.overall() == Verdict::Fail);
}

TEST_CASE("sampled function CSV round trip") {
  auto g = make_uniform_grid(2.0, 21);
  SampledFn s = SampledFn::from_function(
      g, 2, [](double t) { return std::vector<double>{std::sin(t), std::cos(t)}; },
      [](double t) { return std::vector<double>{std::cos(t), -std::sin(t)}; });
  std::string path = "roundtrip_test.csv";
  write_sampled_csv(path, s);
  SampledFn r = read_sampled_csv(path);
  REQUIRE(r.dim == 2);
  REQUIRE(r.size() == s.size());
  REQUIRE(bool(r.derivatives));
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(r.grid.nodes[i] == s.grid.nodes[i]);
    CHECK(r.value(i, 0) == s.value(i, 0));
    CHECK(r.deriv(i, 1) == s.deriv(i, 1));
  }
  std::remove(path.c_str());
}

TEST_CASE("CSV validation") {
  CHECK_THROWS_AS(read_sampled_csv("does_not_exist.csv"), CsvError);
  {
    std::ofstream f("bad_header.csv");
    f << "time,v_1\n0,1\n1,2\n";
  }
  CHECK_THROWS_AS(read_sampled_csv("bad_header.csv"), CsvError);
  std::remove("bad_header.csv");
  {
    std::ofstream f("ragged.csv");
    f << "t,v_1\n0,1\n1\n";
  }
  CHECK_THROWS_AS(read_sampled_csv("ragged.csv"), CsvError);
  std::remove("ragged.csv");
  {
    std::ofstream f("nonmono.csv");
    f << "t,v_1\n0,1\n0,2\n";
  }
  CHECK_THROWS_AS(read_sampled_csv("nonmono.csv"), CsvError);
  std::remove("nonmono.csv");
}
