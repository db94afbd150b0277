#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ihoc/catalog.hpp"
#include "ihoc/extremal.hpp"

using namespace ihoc;

namespace {
const double SQ2 = std::sqrt(2.0);
}

TEST_CASE("hamiltonian evaluation") {
  auto inst = catalog_get("regulator");
  // H(t,x,u,p) = -e^{-2t} (x^2+u^2)/2 + p (2x + u)
  double h = hamiltonian(inst.problem, 0.0, {2.0}, {1.0}, {3.0}, 1.0);
  CHECK(h == doctest::Approx(-2.5 + 3.0 * 5.0).epsilon(1e-14));
  // lambda0 = 0 drops the running cost
  double h0 = hamiltonian(inst.problem, 0.0, {2.0}, {1.0}, {3.0}, 0.0);
  CHECK(h0 == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("fundamental matrices satisfy duality") {
  auto inst = catalog_get("regulator");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  CHECK(fm.duality_defect <= 1e-8);
  // phi_x = 2 constant, so Y(t) = e^{2t}, Z(t) = e^{-2t}
  const auto& t = fm.grid.nodes;
  std::size_t mid = t.size() / 2;
  CHECK(fm.Y_at(mid)[0] == doctest::Approx(std::exp(2.0 * t[mid])).epsilon(1e-7));
  CHECK(fm.Z_at(mid)[0] == doctest::Approx(std::exp(-2.0 * t[mid])).epsilon(1e-7));
}

TEST_CASE("representation adjoint matches the closed form") {
  auto inst = catalog_get("regulator");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  auto pd = adjoint_via_representation(inst.problem, *inst.reference, fm);
  double p0_exact = -2.0 * (1.0 + SQ2);
  CHECK(std::abs(pd.p.values[0] - p0_exact) <= 1e-6);
  double worst = 0.0;
  const auto& t = pd.p.grid.nodes;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double exact = -2.0 * (1.0 + SQ2) * std::exp(-(1.0 + SQ2) * t[i]);
    worst = std::max(worst, std::abs(pd.p.values[i] - exact));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("adjoint residual and maximum condition on the regulator") {
  auto inst = catalog_get("regulator");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  auto pd = adjoint_via_representation(inst.problem, *inst.reference, fm);
  CHECK(adjoint_residual(inst.problem, *inst.reference, pd).verdict == Verdict::Pass);
  CHECK(max_condition_check(inst.problem, *inst.reference, pd).verdict == Verdict::Pass);
}

TEST_CASE("maximum condition rejects a wrong adjoint") {
  auto inst = catalog_get("regulator");
  PontryaginData pd = *inst.reference_multipliers;
  for (auto& v : pd.p.values) v = -v;  // flipped sign favors other controls
  auto mc = max_condition_check(inst.problem, *inst.reference, pd);
  CHECK(mc.verdict == Verdict::Fail);
}

TEST_CASE("transversality and the asymptotic stationarity condition") {
  auto inst = catalog_get("regulator");
  const auto& pd = *inst.reference_multipliers;
  auto tv = transversality_check(inst.problem, *inst.reference, pd);
  CHECK(tv.overall() == Verdict::Pass);
  auto mi = michel_check(inst.problem, *inst.reference, pd);
  CHECK(mi.overall() == Verdict::Pass);
}

TEST_CASE("transversality fails for a non-decaying adjoint") {
  auto inst = catalog_get("regulator");
  PontryaginData pd;
  pd.lambda0 = 1.0;
  // |p|^2 / nu = e^{2t}/e^{-3t} grows
  pd.p = SampledFn::scalar(inst.reference->x.grid, [](double t) { return std::exp(t); });
  auto tv = transversality_check(inst.problem, *inst.reference, pd);
  CHECK(tv.overall() == Verdict::Fail);
}

TEST_CASE("steady-state regulator adjoint") {
  auto inst = catalog_get("regulator2");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  auto pd = adjoint_via_representation(inst.problem, *inst.reference, fm);
  const auto& t = pd.p.grid.nodes;
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    worst = std::max(worst, std::abs(pd.p.values[i] + std::exp(-2.0 * t[i])));
  CHECK(worst <= 1e-6);
  CHECK(max_condition_check(inst.problem, *inst.reference, pd).verdict == Verdict::Pass);
}

TEST_CASE("restart stability certificate for normality") {
  auto inst = catalog_get("regulator2");
  SConditionSpec spec;
  spec.b = 1.0;  // restarts drift like e^t under the frozen control
  spec.C_s = 1.0;
  auto rep = normality_check_S(inst.problem, *inst.reference, spec);
  CHECK(rep.overall() == Verdict::Pass);
  CHECK(rep.find("mu_in_L2_nu")->verdict == Verdict::Pass);
}

TEST_CASE("restart certificate fails when mu leaves the weighted space") {
  auto inst = catalog_get("regulator2", {{"a", 1.5}});  // 2b = 2 > a
  SConditionSpec spec;
  spec.b = 1.0;
  auto rep = normality_check_S(inst.problem, *inst.reference, spec);
  CHECK(rep.find("mu_in_L2_nu")->verdict == Verdict::Fail);
}

TEST_CASE("normal problems keep lambda0 = 1") {
  auto inst = catalog_get("regulator");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  auto out = abnormality_probe(inst.problem, *inst.reference, fm);
  CHECK(out.normal_feasible);
  CHECK(out.lambda0 == 1.0);
}

TEST_CASE("abnormal certificate with lambda0 = 0") {
  auto inst = catalog_get("halkin");
  auto fm = fundamental_matrices(inst.problem, *inst.reference);
  CHECK_THROWS_AS(adjoint_via_representation(inst.problem, *inst.reference, fm), TailNotSettled);
  auto out = abnormality_probe(inst.problem, *inst.reference, fm);
  CHECK(!out.normal_feasible);
  CHECK(out.abnormal_found);
  CHECK(out.lambda0 == 0.0);
  CHECK(out.certificate.p.values[0] < 0.0);
  CHECK(out.gap <= 1e-8);
  // the certificate matches the closed form p(t) = -e^{-t} up to scaling
  const auto& t = out.certificate.p.grid.nodes;
  double scale = -out.certificate.p.values[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    worst = std::max(worst,
                     std::abs(out.certificate.p.values[i] + scale * std::exp(-t[i])));
  CHECK(worst <= 1e-6 * scale);
}
