#include "rlap/commands.hpp"

#include "rlap/acceptance.hpp"
#include "rlap/radial.hpp"
#include "rlap/rayleigh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rlap {

namespace {

json comparison(const std::string& name, double value, double expected, double tol,
                const std::string& reference) {
  return json{{"name", name},
              {"value", value},
              {"expected", expected},
              {"tolerance", tol},
              {"passed", std::abs(value - expected) <= tol},
              {"reference", reference}};
}

json header(const RunConfig& cfg, const std::string& claim) {
  return json{{"schema", kSchemaVersion},
              {"command", cfg.command},
              {"claim", claim},
              {"params", cfg.to_json()}};
}

std::vector<double> to_vector(const Vec& v) { return {v.data(), v.data() + v.size()}; }

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json cmd_spectrum(const RunConfig& cfg) {
  const SphereModel m(cfg.n, cfg.k);
  const double k2 = cfg.k * cfg.k;
  const QuadratureRule rule = make_rule(cfg, m, cfg.degree);

  std::string claim = "sphere-infimum";
  json results{{"rule", rule.describe()}};
  json comparisons = json::array();
  SpectralResult r;

  if (cfg.restrict_to == "hopf") {
    claim = "hopf-gap";
    const std::vector<AmbientPolyField> hopf{AmbientPolyField::hopf(m, 'i'),
                                             AmbientPolyField::hopf(m, 'j'),
                                             AmbientPolyField::hopf(m, 'k')};
    r = ritz(hopf, rule);
    const double full = min_energy(m, cfg.degree, rule);
    results["subspace"] = "hopf";
    results["full_minimum"] = full;
    comparisons.push_back(comparison("invariant minimum", r.eigenvalues(0), 2.0 * k2, 1e-8,
                                     "closed_form"));
    comparisons.push_back(comparison("full minimum", full, k2, 1e-6, "closed_form"));
  } else {
    const Dictionary d = build_dictionary(m, cfg.degree, rule);
    results["dictionary"] = json{{"candidates", d.candidate_count}, {"retained", d.size()}};
    if (cfg.restrict_to.rfind("zero-mean:", 0) == 0) {
      claim = "zero-mean-bound";
      Vec v = parse_vector(cfg.restrict_to.substr(10), "restrict");
      if (v.size() != m.ambient_dim() || !(v.norm() > 0.0)) {
        throw ConfigError("restrict", "center needs " + std::to_string(m.ambient_dim()) +
                                          " coordinates, not all zero");
      }
      v *= m.radius() / v.norm();
      r = zero_mean_spectrum(d, {v}, rule);
      results["subspace"] = "zero-mean";
      results["center"] = to_vector(v);
      const double bound = (cfg.n - 1) * k2;
      comparisons.push_back(json{{"name", "min F - (n-1)k^2"},
                                 {"value", r.eigenvalues(0) - bound},
                                 {"relation", ">="},
                                 {"bound", -1e-4},
                                 {"passed", r.eigenvalues(0) - bound >= -1e-4},
                                 {"reference", "closed_form"}});
    } else {
      r = ritz(d.fields, rule);
      comparisons.push_back(comparison("delta1", r.eigenvalues(0), k2, 1e-6, "closed_form"));
    }
  }
  results["eigenvalues"] = to_vector(r.eigenvalues);
  results["residuals"] = to_vector(r.residuals);
  results["multiplicities"] = json{{"k^2", multiplicity_report(r, k2, 1e-4 * k2)},
                                   {"(n-1)k^2", multiplicity_report(r, (cfg.n - 1) * k2, 1e-4 * k2)}};

  json out = header(cfg, claim);
  out["results"] = std::move(results);
  out["comparisons"] = std::move(comparisons);
  return out;
}

json cmd_radial(const RunConfig& cfg) {
  const WarpedProfile w = parse_profile(cfg.profile, cfg.n);
  const RadialResult res = solve_smallest(RadialProblem(w, cfg.grid, cfg.k), cfg.eigs);

  json pairs = json::array();
  for (const auto& p : res.pairs) {
    pairs.push_back(json{{"eigenvalue", p.eigenvalue},
                         {"quotient", p.quotient},
                         {"residual", p.residual}});
  }
  json results{{"profile", w.describe()}, {"length", w.length()}, {"pairs", pairs}};
  json comparisons = json::array();
  try {
    const RigidityReport rep = rigidity_experiment(w, cfg.k, cfg.grid);
    results["rigidity"] = json{{"ricci_margin", rep.ric_margin},
                               {"lambda1", rep.lambda1},
                               {"gap", rep.gap},
                               {"round", rep.round},
                               {"reilly_min", rep.reilly_min},
                               {"consistent", rep.consistent}};
    if (rep.round) {
      comparisons.push_back(comparison("lambda1", rep.lambda1, cfg.k * cfg.k, kRadialGapTol,
                                       "closed_form"));
    } else {
      comparisons.push_back(json{{"name", "lambda1 - k^2"},
                                 {"value", rep.gap},
                                 {"relation", ">"},
                                 {"bound", kRadialGapTol},
                                 {"passed", rep.gap > kRadialGapTol},
                                 {"reference", "closed_form"}});
    }
  } catch (const PreconditionError& e) {
    results["rigidity"] = json{{"refused", e.what()}, {"ricci_margin", e.measured()}};
  }
  if (!cfg.csv.empty()) {
    std::ofstream os(cfg.csv);
    if (!os) throw ConfigError("csv", "cannot open " + cfg.csv);
    write_radial_csv(os, cfg);
    results["csv"] = cfg.csv;
  }

  json out = header(cfg, "radial-rigidity");
  out["results"] = std::move(results);
  out["comparisons"] = std::move(comparisons);
  return out;
}

void write_radial_csv(std::ostream& os, const RunConfig& cfg) {
  const WarpedProfile w = parse_profile(cfg.profile, cfg.n);
  const RadialResult res = solve_smallest(RadialProblem(w, cfg.grid, cfg.k), cfg.eigs);
  const ReillyReport reilly = reilly_defect(res.pairs[0].h, w, cfg.k);
  os << "s";
  for (std::size_t i = 0; i < res.pairs.size(); ++i) os << ",h" << i + 1;
  os << ",phi,dphi,d2phi,defect,umbilic,laplacian\n";
  for (int j = 0; j < res.nodes.size(); ++j) {
    os << fmt17(res.nodes(j));
    for (const auto& p : res.pairs) os << ',' << fmt17(p.h(j));
    for (const Vec* col : {&reilly.phi, &reilly.dphi, &reilly.d2phi, &reilly.defect,
                           &reilly.umbilic, &reilly.laplacian}) {
      os << ',' << fmt17((*col)(j));
    }
    os << '\n';
  }
}

json cmd_symmetrize(const RunConfig& cfg) {
  const SphereModel m(cfg.n, cfg.k);
  const AmbientPolyField x = parse_field(cfg.field, m);
  const GroupSpec g = parse_group(cfg.group, m);
  const QuadratureRule rule = make_rule(cfg, m, x.degree());
  const Mat points = random_points(m, cfg.samples, cfg.seed);

  const SymmetrizedField xg = symmetrize(x, g);
  const auto xf = [&](const Vec& p) { return x.eval(p); };
  const auto gf = [&](const Vec& p) { return xg.eval(p); };
  const double base = l2_norm(xf, rule);
  const double sym = l2_norm(gf, rule);
  const double tol = precondition_tolerance(g);

  json results{{"group", g.describe()},
               {"mode", g.exact() ? "exact" : "sampled"},
               {"elements", g.elements().size()},
               {"rule", rule.describe()},
               {"norm", base},
               {"symmetrized_norm", sym},
               {"annihilated", sym <= std::max(tol, 1e-8) * base},
               {"invariance_defect", invariance_check(xg, cfg.samples, cfg.seed)}};
  if (sym <= std::max(tol, 1e-8) * base) results["note"] = "symmetrization annihilates this field";
  json comparisons = json::array();
  comparisons.push_back(json{{"name", "norm non-increase"},
                             {"value", sym - base},
                             {"relation", "<="},
                             {"bound", 1e-9 * std::max(1.0, base)},
                             {"passed", sym - base <= 1e-9 * std::max(1.0, base)},
                             {"reference", "closed_form"}});
  if (g.exact()) {
    const double comm = commutation_defect(x, g, points);
    results["commutation_defect"] = comm;
    comparisons.push_back(comparison("commutation defect", comm, 0.0, 1e-9, "oracle"));
  }
  if (const auto* iso = std::get_if<IsotropyAt>(&g.variant())) {
    const OrbitReport orbit = orbit_orthogonality_check(gf, m, iso->v, points);
    results["orbit"] = json{{"max_defect", orbit.max_defect},
                            {"checked", orbit.checked},
                            {"skipped", orbit.skipped}};
    try {
      results["zero_mean"] = zero_mean_function_check(x, iso->v, g, rule);
    } catch (const PreconditionError& e) {
      results["zero_mean"] = json{{"precondition", e.what()}, {"measured", e.measured()}};
    }
  }

  json out = header(cfg, "symmetrization");
  out["results"] = std::move(results);
  out["comparisons"] = std::move(comparisons);
  return out;
}

json cmd_verify(const RunConfig& cfg) {
  json crit = json::array();
  bool all = true;
  for (const CriterionResult& r : run_acceptance(cfg.criteria)) {
    json ms = json::array();
    for (const auto& mm : r.measurements) {
      ms.push_back(json{{"name", mm.name},
                        {"value", mm.value},
                        {"relation", mm.relation},
                        {"bound", mm.bound},
                        {"reference", mm.reference},
                        {"passed", mm.passed()}});
    }
    json entry{{"id", r.id},
               {"title", r.title},
               {"claim", r.claim},
               {"passed", r.passed()},
               {"measurements", ms}};
    if (!r.error.empty()) entry["error"] = r.error;
    all = all && r.passed();
    crit.push_back(std::move(entry));
  }
  json out = header(cfg, "acceptance");
  out["criteria"] = std::move(crit);
  out["passed"] = all;
  return out;
}

json error_record(const std::string& kind, const std::string& message, const RunConfig& cfg) {
  return json{{"schema", kSchemaVersion},
              {"command", cfg.command},
              {"params", cfg.to_json()},
              {"error", json{{"kind", kind}, {"message", message}}}};
}

json run_command(const RunConfig& cfg) {
  cfg.validate();
  try {
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "radial") return cmd_radial(cfg);
    if (cfg.command == "symmetrize") return cmd_symmetrize(cfg);
    return cmd_verify(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    json rec = error_record("precondition", e.what(), cfg);
    rec["error"]["measured"] = e.measured();
    return rec;
  } catch (const NumericalError& e) {
    return error_record("numerical", e.what(), cfg);
  } catch (const DomainError& e) {
    return error_record("domain", e.what(), cfg);
  }
}

}  // namespace rlap
