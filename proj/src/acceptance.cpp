#include "rlap/acceptance.hpp"

#include "rlap/radial.hpp"
#include "rlap/rayleigh.hpp"
#include "rlap/symmetrize.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

namespace rlap {

bool Measurement::passed() const {
  if (relation == "<") return value < bound;
  if (relation == ">") return value > bound;
  return true;
}

bool CriterionResult::passed() const {
  if (!error.empty()) return false;
  for (const auto& m : measurements) {
    if (!m.passed()) return false;
  }
  return true;
}

namespace {

Measurement below(std::string name, double value, double bound,
                  std::string reference = "closed_form") {
  return {std::move(name), value, "<", bound, std::move(reference)};
}

Measurement above(std::string name, double value, double bound,
                  std::string reference = "closed_form") {
  return {std::move(name), value, ">", bound, std::move(reference)};
}

Measurement info(std::string name, double value) { return {std::move(name), value, "info", 0.0, ""}; }

Vec unit(int dim, int i, double scale = 1.0) {
  Vec e = Vec::Zero(dim);
  e(i) = scale;
  return e;
}

std::string tag(const SphereModel& m) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "S%d(1/%g)", m.n(), m.k());
  return buf;
}

AmbientPolyField random_field(const SphereModel& m, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto basis = MonomialBasis::get(m.ambient_dim(), degree);
  Mat c(basis->size(), m.ambient_dim());
  for (int j = 0; j < c.cols(); ++j)
    for (int i = 0; i < c.rows(); ++i) c(i, j) = normal(rng);
  return {m, degree, c};
}

FieldFn as_fn(const AmbientPolyField& x) {
  return [&x](const Vec& p) { return x.eval(p); };
}

// Ritz fields whose values lie within tol of lambda.
std::vector<AmbientPolyField> cluster(const Dictionary& d, const SpectralResult& r, double lambda,
                                      double tol) {
  std::vector<AmbientPolyField> out;
  for (int j = 0; j < r.eigenvalues.size(); ++j) {
    if (std::abs(r.eigenvalues(j) - lambda) <= tol) out.push_back(ritz_field(d.fields, r.vectors.col(j)));
  }
  return out;
}

// ---------------------------------------------------------------------------

CriterionResult sphere_infimum() {
  CriterionResult c{1, "infimum on round spheres is k^2, attained by projection fields",
                    "sphere-infimum", {}, {}};
  const std::vector<std::pair<SphereModel, int>> cases{
      {SphereModel(2, 1.0), 3}, {SphereModel(3, 1.0), 2}, {SphereModel(3, 2.0), 2}};
  for (const auto& [m, degree] : cases) {
    const double k2 = m.k() * m.k();
    const QuadratureRule rule = default_rule(m, degree);
    const Dictionary d = build_dictionary(m, degree, rule);
    const SpectralResult r = ritz(d.fields, rule);
    const double lowest = r.eigenvalues(0);
    c.measurements.push_back(below(tag(m) + " |delta1 - k^2|", std::abs(lowest - k2), 1e-6));
    const auto low = cluster(d, r, lowest, 1e-4 * k2);
    double worst = 0.0;
    for (int l = 0; l < m.ambient_dim(); ++l) {
      const auto v = AmbientPolyField::projection(m, unit(m.ambient_dim(), l));
      worst = std::max(worst, subspace_angle(v, low, rule));
    }
    c.measurements.push_back(below(tag(m) + " projection angle to minimizing eigenspace", worst,
                                   1e-4, "oracle"));
    std::vector<AmbientPolyField> projections;
    for (int l = 0; l < m.ambient_dim(); ++l) {
      projections.push_back(AmbientPolyField::projection(m, unit(m.ambient_dim(), l)));
    }
    const double first = subspace_angle(ritz_field(d.fields, r.vectors.col(0)), projections, rule);
    if (m.n() >= 3) {
      c.measurements.push_back(
          below(tag(m) + " minimizing Ritz field angle to projections", first, 1e-4, "oracle"));
    } else {
      // on S^2 the k^2 eigenspace also contains the Killing fields
      c.measurements.push_back(info(tag(m) + " minimizing Ritz field angle to projections", first));
    }
  }
  return c;
}

CriterionResult eigenfield_certificates() {
  CriterionResult c{2, "projection and Killing fields are rough-Laplacian eigenfields",
                    "eigenfield-certificates", {}, {}};
  const std::vector<std::pair<int, double>> cases{{2, 1.0}, {3, 1.0}, {3, 2.0}, {4, 1.0}};
  for (const auto& [n, k] : cases) {
    const SphereModel m(n, k);
    const int dim = m.ambient_dim();
    const double k2 = k * k;
    const Mat points = random_points(m, 200, 11 + n);
    std::mt19937_64 rng(101 + n);
    std::normal_distribution<double> normal;

    std::vector<AmbientPolyField> proj;
    for (int l = 0; l < dim; ++l) proj.push_back(AmbientPolyField::projection(m, unit(dim, l)));
    Vec w(dim);
    for (int l = 0; l < dim; ++l) w(l) = normal(rng);
    proj.push_back(AmbientPolyField::projection(m, w));
    double pw = 0.0;
    for (const auto& x : proj) pw = std::max(pw, eigen_defect(x, k2, points));
    c.measurements.push_back(below(tag(m) + " projection eigen-defect", pw, 1e-8));

    std::vector<AmbientPolyField> kill;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) kill.push_back(AmbientPolyField::killing_plane(m, i, j));
    Mat a(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) a(i, j) = normal(rng);
    kill.push_back(AmbientPolyField::killing(m, a - a.transpose()));
    double kw = 0.0;
    for (const auto& x : kill) kw = std::max(kw, eigen_defect(x, (n - 1) * k2, points));
    c.measurements.push_back(below(tag(m) + " Killing eigen-defect", kw, 1e-8));
  }
  return c;
}

CriterionResult hopf_gap() {
  CriterionResult c{3, "left-invariant fields on S^3 have energy 2 and miss the infimum",
                    "hopf-gap", {}, {}};
  const SphereModel m(3, 1.0);
  const QuadratureRule rule = product_rule(3, 1.0, 8);
  for (char axis : {'i', 'j', 'k'}) {
    const double f = energy(AmbientPolyField::hopf(m, axis), rule);
    c.measurements.push_back(below(std::string("|F(hopf ") + axis + ") - 2|", std::abs(f - 2.0), 1e-8));
  }
  const InvariantGap gap = invariant_subspace_min(m, rule, 2);
  c.measurements.push_back(info("full minimum", gap.full));
  c.measurements.push_back(info("invariant minimum", gap.invariant));
  c.measurements.push_back(above("invariant - full", gap.invariant - gap.full, 0.999));
  return c;
}

CriterionResult killing_dichotomy() {
  CriterionResult c{4, "Killing fields attain the infimum only on S^2", "killing-dichotomy", {}, {}};
  const std::vector<std::pair<int, double>> cases{{2, 1.0}, {3, 1.0}, {3, 2.0}, {4, 1.0}};
  for (const auto& [n, k] : cases) {
    const SphereModel m(n, k);
    const int degree = n <= 3 ? 2 : 1;
    const QuadratureRule rule = default_rule(m, degree);
    const double lowest = min_energy(m, degree, rule);
    const double fk = energy(AmbientPolyField::killing_plane(m, 0, 1), rule);
    if (n == 2) {
      c.measurements.push_back(below(tag(m) + " |F(Killing) - delta1|", std::abs(fk - lowest), 1e-6));
    } else {
      c.measurements.push_back(above(tag(m) + " F(Killing) - delta1", fk - lowest, 0.9 * k * k));
    }
  }
  return c;
}

CriterionResult bochner_yano() {
  CriterionResult c{5, "integral Bochner-Yano identity", "bochner-yano", {}, {}};
  const std::vector<std::pair<SphereModel, int>> cases{{SphereModel(2, 1.0), 20},
                                                       {SphereModel(3, 1.0), 10}};
  for (const auto& [m, count] : cases) {
    // degree 3 fields: integrands have ambient degree <= 10
    const QuadratureRule rule = product_rule(m.n(), m.k(), 8);
    std::mt19937_64 rng(500 + m.n());
    double worst = 0.0;
    for (int t = 0; t < count; ++t) {
      worst = std::max(worst, std::abs(bochner_yano_residual(random_field(m, 3, rng), rule)));
    }
    c.measurements.push_back(below(tag(m) + " max |residual| over " + std::to_string(count) +
                                       " random fields",
                                   worst, 1e-6, "oracle"));
  }
  return c;
}

CriterionResult symmetrization_laws() {
  CriterionResult c{6, "symmetrization laws", "symmetrization", {}, {}};
  const SphereModel m(2, 1.0);
  const int dim = 3;
  const int count = 100000;
  const double sampled_tol = 5.0 / std::sqrt(static_cast<double>(count));
  const QuadratureRule rule = product_rule(2, 1.0, 8);
  const Mat points = random_points(m, 50, 61);
  const Vec v = unit(dim, 2);
  std::mt19937_64 rng(62);

  // commutation with the rough Laplacian, exact groups
  Vec w(dim);
  w << 0.3, -0.7, 0.5;
  double comm = commutation_defect(AmbientPolyField::projection(m, w), GroupSpec::reflection(dim, 2),
                                   points);
  comm = std::max(comm, commutation_defect(AmbientPolyField::killing_plane(m, 1, 2),
                                           GroupSpec::planar_rotations(dim, 0, 1, 16), points));
  comm = std::max(comm, commutation_defect(random_field(m, 3, rng),
                                           GroupSpec::planar_rotations(dim, 0, 1, 16), points));
  c.measurements.push_back(below("commutation defect", comm, 1e-9));

  const GroupSpec iso = GroupSpec::isotropy(m, v, count, 7);

  // product lemma: W_G = 0 and V invariant give int <W, V> = 0
  const auto wperp = AmbientPolyField::projection(m, unit(dim, 0));
  const auto vproj = AmbientPolyField::projection(m, v);
  double pair = std::abs(product_orthogonality(wperp, vproj, iso, rule));
  const GroupSpec circle = GroupSpec::planar_rotations(dim, 0, 1, 16);
  const auto vw = AmbientPolyField::projection(m, w);
  const auto vwg = symmetrize(vw, circle).field;
  pair = std::max(pair, std::abs(product_orthogonality(vw - vwg, vwg, circle, rule)));
  c.measurements.push_back(below("product pairing", pair, 1e-6));

  // zero mean of <X, v> for fields of zero isotropy mean
  double zero = std::abs(zero_mean_function_check(wperp, v, iso, rule));
  zero = std::max(zero, std::abs(zero_mean_function_check(AmbientPolyField::killing_plane(m, 0, 2),
                                                          v, iso, rule)));
  c.measurements.push_back(below("zero mean", zero, 1e-6));

  // transitive average
  const double r2 = m.radius() * m.radius();
  const double trans = std::abs(transitive_average(m, v, v, count, 7));
  c.measurements.push_back(
      below("transitive average", trans, 5.0 * m.volume() * r2 / std::sqrt(1.0 * count), "oracle"));
  c.measurements.push_back(info("transitive average / (5 r^2/sqrt(count))",
                                trans / (5.0 * r2 / std::sqrt(1.0 * count))));

  // invariant fields are meridional; random field scaled to unit RMS
  AmbientPolyField x = random_field(m, 2, rng);
  x *= 1.0 / std::sqrt(integrate_pairing(as_fn(x), as_fn(x), rule) / m.volume());
  const SymmetrizedField xg = symmetrize(x, iso);
  const OrbitReport orbit = orbit_orthogonality_check(as_fn(xg.field), m, v, points);
  c.measurements.push_back(below("meridional defect", orbit.max_defect, sampled_tol, "oracle"));

  // closed form of the symmetrized projection field
  Vec wu = w.normalized();
  const auto sym = symmetrize(AmbientPolyField::projection(m, wu), iso).field;
  const auto expected = AmbientPolyField::projection(m, m.k() * m.k() * wu.dot(v) * v);
  double closed = 0.0;
  for (int i = 0; i < points.cols(); ++i) {
    closed = std::max(closed, (sym.eval(points.col(i)) - expected.eval(points.col(i))).norm());
  }
  c.measurements.push_back(below("closed-form symmetrized projection", closed, sampled_tol, "oracle"));
  return c;
}

CriterionResult zero_mean_bound() {
  CriterionResult c{7, "fields of zero isotropy mean have energy >= (n-1)k^2", "zero-mean-bound",
                    {}, {}};
  const std::vector<std::pair<SphereModel, int>> cases{{SphereModel(2, 1.0), 3},
                                                       {SphereModel(3, 1.0), 2}};
  for (const auto& [m, degree] : cases) {
    const double bound = (m.n() - 1) * m.k() * m.k();
    const QuadratureRule rule = default_rule(m, degree);
    const Dictionary d = build_dictionary(m, degree, rule);
    const Vec v = unit(m.ambient_dim(), m.n(), m.radius());
    const double lowest = zero_mean_spectrum(d, {v}, rule).eigenvalues(0);
    c.measurements.push_back(above(tag(m) + " min F on zero-mean subspace", lowest, bound - 1e-4));
    // zero isotropy mean at every coordinate center
    std::vector<Vec> centers;
    for (int l = 0; l < m.ambient_dim(); ++l) centers.push_back(unit(m.ambient_dim(), l, m.radius()));
    c.measurements.push_back(info(tag(m) + " min F, zero mean at all coordinate centers",
                                  zero_mean_spectrum(d, centers, rule).eigenvalues(0)));
  }
  return c;
}

CriterionResult radial_ground_truth() {
  CriterionResult c{8, "radial eigenproblem on round profiles", "radial-ground-truth", {}, {}};
  double worst_err = 0.0;
  double worst_ratio = 0.0;
  double worst_corr = 1.0;
  double min_ratio = 1e300;
  double max_ratio = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (double k : {1.0, 2.0}) {
      const WarpedProfile w = WarpedProfile::round(n, k);
      const RadialResult fine = solve_smallest(RadialProblem(w, 2000, k), 1);
      const RadialResult coarse = solve_smallest(RadialProblem(w, 1000, k), 1);
      const double e2 = fine.pairs[0].eigenvalue - k * k;
      const double e1 = coarse.pairs[0].eigenvalue - k * k;
      worst_err = std::max(worst_err, std::abs(e2));
      const double ratio = e1 / e2;
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 4.0));
      const Vec& h = fine.pairs[0].h;
      Vec ref(h.size());
      for (int j = 0; j < h.size(); ++j) ref(j) = std::sin(k * fine.nodes(j));
      const Vec hc = h.array() - h.mean();
      const Vec rc = ref.array() - ref.mean();
      worst_corr = std::min(worst_corr, hc.dot(rc) / (hc.norm() * rc.norm()));
    }
  }
  c.measurements.push_back(below("max |lambda1 - k^2| at N=2000", worst_err, 5e-4));
  c.measurements.push_back(below("max |error ratio N=1000/N=2000 - 4|", worst_ratio, 0.5, "oracle"));
  c.measurements.push_back(info("min error ratio", min_ratio));
  c.measurements.push_back(info("max error ratio", max_ratio));
  c.measurements.push_back(above("min correlation with sin(ks)", worst_corr, 0.9999));
  return c;
}

CriterionResult rigidity() {
  CriterionResult c{9, "spectral gap is strict off the round profile", "radial-rigidity", {}, {}};
  const int grid = 2000;
  struct Case {
    int n;
    double eps;
  };
  const std::vector<Case> cases{{2, 0.05}, {2, -0.05}, {3, 0.03}, {3, -0.03}, {4, 0.02}};
  for (const auto& cs : cases) {
    const WarpedProfile w = WarpedProfile::perturbed(cs.n, 1.0, cs.eps);
    const double k = largest_admissible_k(w, grid) * (1.0 - 1e-12);
    const RigidityReport rep = rigidity_experiment(w, k, grid);
    char name[96];
    std::snprintf(name, sizeof name, "n=%d eps=%+.2f (k=%.6f) lambda1 - k^2", cs.n, cs.eps, k);
    c.measurements.push_back(above(name, rep.gap, kRadialGapTol));
  }
  const WarpedProfile round = WarpedProfile::round(2, 1.0);
  const RigidityReport rep = rigidity_experiment(round, 1.0, grid);
  c.measurements.push_back(below("round |lambda1 - k^2|", std::abs(rep.gap), kRadialGapTol + 1e-15));
  const RadialResult res = solve_smallest(RadialProblem(round, grid, 1.0), 1);
  const ReillyReport reilly = reilly_defect(res.pairs[0].h, round, 1.0);
  c.measurements.push_back(below("round max |phi'' + H phi'|", reilly.umbilic_max, 1e-3));
  c.measurements.push_back(below("round max |Delta f + n k^2 f|", reilly.eigen_defect_max, 1e-3));
  return c;
}

CriterionResult invariant_instances() {
  CriterionResult c{10, "symmetrized eigenfields stay eigenfields", "invariant-eigenfield", {}, {}};
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = product_rule(2, 1.0, 8);
  const Mat points = random_points(m, 200, 71);
  const auto x = AmbientPolyField::projection(m, unit(3, 0));
  const EigenfieldInstance inst =
      invariant_eigenfield_instance(GroupSpec::reflection(3, 2), x, 1.0, rule, points);
  c.measurements.push_back(below("reflection eigen-defect", inst.eigen_defect, 1e-9));
  c.measurements.push_back(above("reflection ||X_G||", inst.symmetrized_norm, 0.0));

  // two planar circles compose to an average with no fixed direction
  const auto twice = symmetrize(symmetrize(x, GroupSpec::planar_rotations(3, 0, 1, 8)).field,
                                GroupSpec::planar_rotations(3, 1, 2, 8))
                         .field;
  c.measurements.push_back(info("two-circle ||X_G||", l2_norm(as_fn(twice), rule)));

  // Haar averaging of O(3): RMS norm over seeds against count
  const std::vector<int> counts{1000, 4000, 16000};
  std::vector<double> rms;
  for (int count : counts) {
    double acc = 0.0;
    const int seeds = 32;
    for (int s = 0; s < seeds; ++s) {
      const auto xg = symmetrize(x, GroupSpec::haar(3, count, 1000 + s)).field;
      const double nrm = l2_norm(as_fn(xg), rule);
      acc += nrm * nrm;
    }
    rms.push_back(std::sqrt(acc / seeds));
    c.measurements.push_back(info("RMS ||X_G|| at count " + std::to_string(count), rms.back()));
  }
  const double slope = std::log(rms.back() / rms.front()) / std::log(1.0 * counts.back() / counts.front());
  c.measurements.push_back(below("|log-log slope + 1/2|", std::abs(slope + 0.5), 0.1, "oracle"));
  return c;
}

CriterionResult multiplicity_floor() {
  CriterionResult c{11, "eigenvalue 1 on S^2 has multiplicity at least 6", "multiplicity-floor", {}, {}};
  const SphereModel m(2, 1.0);
  const QuadratureRule rule = default_rule(m, 3);
  const Dictionary d = build_dictionary(m, 3, rule);
  const int mult = multiplicity_report(ritz(d.fields, rule), 1.0, 1e-4);
  c.measurements.push_back(above("multiplicity of 1", mult, 5.5));
  return c;
}

}  // namespace

CriterionResult run_criterion(int id) {
  static const std::vector<std::function<CriterionResult()>> table{
      sphere_infimum,      eigenfield_certificates, hopf_gap, killing_dichotomy,
      bochner_yano,        symmetrization_laws,     zero_mean_bound,
      radial_ground_truth, rigidity,                invariant_instances,
      multiplicity_floor};
  if (id < 1 || id > kCriterionCount) throw DomainError("criterion id out of range");
  try {
    return table[id - 1]();
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), "", {}, e.what()};
  }
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_criterion(i));
  } else {
    for (int i : ids) out.push_back(run_criterion(i));
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  std::string line = std::string(r.passed() ? "PASS" : "FAIL") + " " +
                     (r.id < 10 ? " " : "") + std::to_string(r.id) + "  " + r.title;
  if (!r.error.empty()) return line + "  [error: " + r.error + "]";
  for (const auto& m : r.measurements) {
    if (!m.passed()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g %s %.6g", m.value, m.relation.c_str(), m.bound);
      line += "  [violated: " + m.name + " = " + buf + "]";
    }
  }
  return line;
}

}  // namespace rlap
