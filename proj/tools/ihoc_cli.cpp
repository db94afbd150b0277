// Command-line front end: verification suites, weight property checks,
// truncation-horizon experiments and the example catalog.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ihoc/ihoc.hpp"

namespace {

using namespace ihoc;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ParamMap parse_params(const std::vector<std::string>& kvs) {
  ParamMap out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("expected k=v, got: " + kv);
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad parameter value in: " + kv);
    }
  }
  return out;
}

WeightSpec parse_weight(const std::string& s) {
  auto colon = s.find(':');
  std::string fam = s.substr(0, colon);
  double v = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
  if (fam == "exponential") return WeightSpec::exponential(v);
  if (fam == "powerlaw") return WeightSpec::power_law(v);
  throw ConfigError("unknown weight family: " + fam);
}

DistributionSpec parse_distribution(const std::string& s) {
  auto colon = s.find(':');
  std::string fam = s.substr(0, colon);
  double v = colon == std::string::npos ? 0.0 : std::stod(s.substr(colon + 1));
  if (fam == "exponential") return DistributionSpec::exponential(v);
  if (fam == "weibull") return DistributionSpec::weibull(v);
  throw ConfigError("unknown distribution family: " + fam);
}

void emit(const ordered_json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text += "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cannot open " + out_path);
    f << text;
  }
}

double default_tmax() {
  if (const char* env = std::getenv("HORIZON_PMP_TMAX")) return std::stod(env);
  return 60.0;
}

struct CommonOpts {
  std::string problem;
  std::vector<std::string> params;
  std::string candidate_x, candidate_u;
  double tmax = default_tmax();
  std::size_t grid_n = 4096;
  std::string out;
  std::uint64_t seed = 0;
  double tol_residual = 1e-6;
  double tol_gap = 1e-6;
  double tol_admissible = 1e-6;
  double tol_constrained = 1e-5;
  double gamma = 0.5;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--problem", o.problem, "problem address, e.g. catalog:regulator")
      ->required();
  cmd->add_option("--param", o.params, "parameter override k=v (repeatable)");
  cmd->add_option("--candidate-x", o.candidate_x, "state samples CSV");
  cmd->add_option("--candidate-u", o.candidate_u, "control samples CSV");
  cmd->add_option("--tmax", o.tmax, "grid horizon");
  cmd->add_option("--grid-n", o.grid_n, "grid node count");
  cmd->add_option("--out", o.out, "write the JSON report here instead of stdout");
  cmd->add_option("--seed", o.seed, "seed for tube sampling");
  cmd->add_option("--tol-residual", o.tol_residual, "residual tolerance");
  cmd->add_option("--tol-gap", o.tol_gap, "maximum-condition gap tolerance");
  cmd->add_option("--tol-admissible", o.tol_admissible, "admissibility tolerance");
  cmd->add_option("--tol-constrained", o.tol_constrained, "constrained residual tolerance");
  cmd->add_option("--gamma", o.gamma, "tube radius for sampling checks");
}

CatalogInstance resolve_problem(const CommonOpts& o) {
  if (o.problem.rfind("catalog:", 0) != 0)
    throw ConfigError("only catalog: addresses are supported, got: " + o.problem);
  Grid grid = make_default_grid(o.tmax, o.grid_n);
  return catalog_get(o.problem.substr(8), parse_params(o.params), grid);
}

CandidateProcess resolve_candidate(const CommonOpts& o, const CatalogInstance& inst) {
  if (!o.candidate_x.empty() || !o.candidate_u.empty()) {
    if (o.candidate_x.empty() || o.candidate_u.empty())
      throw ConfigError("--candidate-x and --candidate-u must be given together");
    CandidateProcess c;
    c.x = read_sampled_csv(o.candidate_x);
    c.u = read_sampled_csv(o.candidate_u);
    return c;
  }
  if (!inst.reference) throw ConfigError("no reference candidate; supply --candidate-x/u");
  return *inst.reference;
}

int run_verify(const CommonOpts& o, const std::string& suite) {
  CatalogInstance inst = resolve_problem(o);
  const ControlProblem& pb = inst.problem;
  CandidateProcess cand = resolve_candidate(o, inst);
  bool star = pb.omega.family == DistributionSpec::Family::Weibull ||
              pb.nu.family == WeightSpec::Family::PowerLaw;

  ordered_json rep;
  rep["command"] = "verify";
  rep["problem"] = inst.name;
  ordered_json jp;
  for (const auto& [k, v] : inst.params) jp[k] = v;
  rep["params"] = jp;
  rep["suite"] = suite;
  rep["seed"] = o.seed;

  CheckReport all;
  auto want = [&](const std::string& s) { return suite == "all" || suite == s; };

  if (want("admissible")) {
    auto a = check_admissible(pb, cand, o.tol_admissible);
    for (auto& c : a.items) all.items.push_back(c);
    if (!pb.g.empty()) all.items.push_back(check_condition_F(pb, cand, o.tol_admissible));
  }

  PontryaginData pd;
  bool have_pd = false;
  if (want("pmp") || want("transversality") || want("michel") || want("sufficiency")) {
    if (inst.reference_multipliers) {
      pd = *inst.reference_multipliers;
      have_pd = true;
    } else {
      try {
        auto fm = fundamental_matrices(pb, cand);
        pd = adjoint_via_representation(pb, cand, fm);
        have_pd = true;
      } catch (const TailNotSettled& e) {
        all.items.push_back({"adjoint_representation", Verdict::Inconclusive, 0.0, e.what()});
      }
    }
  }

  if (want("pmp") && have_pd) {
    auto fm = fundamental_matrices(pb, cand);
    all.items.push_back({"fundamental_duality", fm.duality_defect <= 1e-8 ? Verdict::Pass
                                                                          : Verdict::Fail,
                         fm.duality_defect, "max ||Z^T Y - I||"});
    all.items.push_back(adjoint_residual(pb, cand, pd, o.tol_residual));
    all.items.push_back(max_condition_check(pb, cand, pd, o.tol_gap));
    double p0 = 0.0;
    for (std::size_t c = 0; c < pd.p.dim; ++c) p0 = std::max(p0, std::abs(pd.p.value(0, c)));
    double triv = std::abs(pd.lambda0) + p0;
    all.items.push_back({"nontriviality", triv >= 1e-12 ? Verdict::Pass : Verdict::Fail, triv,
                         "|lambda0| + ||p(0)||"});
  }
  if (want("transversality") && have_pd) {
    auto t = transversality_check(pb, cand, pd, star);
    for (auto& c : t.items) all.items.push_back(c);
  }
  if (want("michel") && have_pd) {
    auto m = michel_check(pb, cand, pd, star);
    for (auto& c : m.items) all.items.push_back(c);
  }
  if (want("normality")) {
    auto fm = fundamental_matrices(pb, cand);
    auto ab = abnormality_probe(pb, cand, fm, o.tol_gap, o.seed);
    all.items.push_back({"normal_feasible",
                         ab.normal_feasible ? Verdict::Pass : Verdict::Fail,
                         ab.normal_feasible ? 1.0 : 0.0, ab.note});
    rep["normality"] = {{"normal_feasible", ab.normal_feasible},
                        {"abnormal_found", ab.abnormal_found},
                        {"lambda0", ab.lambda0},
                        {"gap", ab.gap}};
    if (ab.abnormal_found) rep["normality"]["p0"] = ab.certificate.p.value(0, 0);
  }
  if (want("constrained") && !pb.g.empty()) {
    if (inst.reference_constrained) {
      const auto& cm = *inst.reference_constrained;
      auto s = support_check(pb, cand, cm, o.tol_admissible);
      for (auto& c : s.items) all.items.push_back(c);
      all.items.push_back(integral_adjoint_residual(pb, cand, cm, o.tol_constrained));
      all.items.push_back(constrained_transversality(pb, cm));
      all.items.push_back(constrained_max_condition(pb, cand, cm, o.tol_gap));
      auto dec = decompose_adjoint(pb, cand, cm);
      all.items.push_back({"adjoint_decomposition",
                           dec.residual <= o.tol_constrained ? Verdict::Pass : Verdict::Fail,
                           dec.residual, "max ||p - p(0) - q - r||"});
    } else {
      all.items.push_back({"constrained_multipliers", Verdict::Inconclusive, 0.0,
                           "no reference multiplier measures for this entry"});
    }
  }
  if (want("sufficiency") && have_pd) {
    Tube tube{cand.x, o.gamma};
    all.items.push_back(
        concavity_check(pb, cand, pd, tube, ConcavityMode::Midpoint, o.seed));
    if (!pb.g.empty()) {
      auto cc = constraint_convexity_check(pb, tube, o.seed);
      for (auto& c : cc.items) all.items.push_back(c);
    }
  }

  rep["checks"] = to_json(all);
  rep["overall"] = to_string(all.overall());
  emit(rep, o.out);
  return exit_code(all.overall());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for infinite-horizon optimal control"};
  app.require_subcommand(1);

  CommonOpts vo;
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run a verification suite on a problem");
  add_common(verify, vo);
  verify->add_option("--suite", suite,
                     "all|admissible|pmp|transversality|michel|normality|constrained|sufficiency");

  std::string w_nu = "exponential:1", w_omega = "exponential:1", w_out;
  double w_p = 2.0;
  bool w_star = false;
  auto* weights = app.add_subcommand("weights", "check weight pair properties");
  weights->add_option("--nu", w_nu, "state weight, family:param");
  weights->add_option("--omega", w_omega, "objective weight, family:param");
  weights->add_option("--p", w_p, "integrability exponent for the star variant");
  weights->add_flag("--star", w_star, "use the heavy-tail variant of the checks");
  weights->add_option("--out", w_out, "write the JSON report here");

  CommonOpts ho;
  std::string h_horizons = "2,4,8,16,32", h_csv;
  int h_switches = 1;
  auto* horizon = app.add_subcommand("horizon", "truncation sweep and limit comparison");
  add_common(horizon, ho);
  horizon->add_option("--horizons", h_horizons, "comma-separated horizons");
  horizon->add_option("--switches", h_switches, "switch count for the bang-bang search");
  horizon->add_option("--sweep-csv", h_csv, "write the sweep as CSV here");

  std::string l_out;
  auto* list = app.add_subcommand("catalog-list", "list catalog entries");
  list->add_option("--out", l_out, "write the JSON list here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 3;
  }

  try {
    if (verify->parsed()) return run_verify(vo, suite);
    if (weights->parsed()) {
      WeightSpec nu = parse_weight(w_nu);
      DistributionSpec om = parse_distribution(w_omega);
      PropertyReport pr =
          w_star ? check_properties_star(nu, om, w_p) : check_properties_p2(nu, om);
      ordered_json rep;
      rep["command"] = "weights";
      rep["nu"] = nu.describe();
      rep["omega"] = om.describe();
      if (w_star) rep["p"] = w_p;
      rep["checks"] = to_json(pr);
      rep["overall"] = to_string(pr.overall());
      emit(rep, w_out);
      return exit_code(pr.overall());
    }
    if (horizon->parsed()) {
      CatalogInstance inst = resolve_problem(ho);
      std::vector<double> horizons;
      std::stringstream ss(h_horizons);
      std::string tok;
      while (std::getline(ss, tok, ',')) horizons.push_back(std::stod(tok));
      if (horizons.size() < 3) throw ConfigError("need at least 3 horizons");
      TruncationSweep sweep;
      for (double T : horizons) {
        sweep.horizons.push_back(T);
        sweep.values.push_back(solve_truncated_switching(inst.problem, T, h_switches).value);
      }
      CandidateProcess cand = resolve_candidate(ho, inst);
      auto hres = hypothesis_H_check(inst.problem, sweep, cand);
      if (!h_csv.empty()) write_sweep_csv(h_csv, sweep, hres.limit_value);
      ordered_json rep;
      rep["command"] = "horizon";
      rep["problem"] = inst.name;
      rep["horizons"] = sweep.horizons;
      rep["values"] = sweep.values;
      rep["limit_value"] = hres.limit_value;
      rep["gap"] = hres.gap;
      rep["pathology"] = hres.pathology;
      rep["verdict"] = to_string(hres.verdict);
      if (!hres.note.empty()) rep["note"] = hres.note;
      emit(rep, ho.out);
      return exit_code(hres.verdict);
    }
    if (list->parsed()) {
      ordered_json arr = ordered_json::array();
      for (const auto& e : catalog_list()) {
        ordered_json j;
        j["name"] = e.name;
        j["description"] = e.description;
        ordered_json d;
        for (const auto& [k, v] : e.defaults) d[k] = v;
        j["defaults"] = d;
        arr.push_back(j);
      }
      ordered_json rep;
      rep["command"] = "catalog-list";
      rep["entries"] = arr;
      emit(rep, l_out);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const ParameterConstraintViolated& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const UnknownEntry& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const CsvError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const UnsupportedProblem& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 3;
}
