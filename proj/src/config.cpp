#include "rlap/config.hpp"

#include "rlap/rayleigh.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rlap {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError(field, "not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(field, "not a number: '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw ConfigError(field, "not an integer: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(field, "not an integer: '" + s + "'");
  }
}

// key=value pairs separated by commas
double keyed(const std::string& body, const std::string& key, const std::string& field) {
  for (const auto& part : split(body, ',')) {
    const auto eq = part.find('=');
    if (eq != std::string::npos && part.substr(0, eq) == key) {
      return parse_double(part.substr(eq + 1), field);
    }
  }
  throw ConfigError(field, "missing '" + key + "='");
}

std::uint64_t optional_seed(const std::vector<std::string>& parts, std::size_t at,
                            const std::string& field) {
  if (parts.size() <= at) return 1;
  const std::string& s = parts[at];
  if (s.rfind("seed=", 0) != 0) throw ConfigError(field, "expected seed=S, got '" + s + "'");
  const long long v = parse_int(s.substr(5), field);
  if (v < 0) throw ConfigError(field, "seed must be non-negative");
  return static_cast<std::uint64_t>(v);
}

int coordinate(const std::string& s, int dim, const std::string& field) {
  if (s.size() == 1 && std::isalpha(static_cast<unsigned char>(s[0]))) {
    static const std::string letters = "xyzw";
    const auto pos = letters.find(s[0]);
    if (pos == std::string::npos || static_cast<int>(pos) >= dim) {
      throw ConfigError(field, "unknown axis '" + s + "'");
    }
    return static_cast<int>(pos);
  }
  const long long c = parse_int(s, field);
  if (c < 1 || c > dim) throw ConfigError(field, "coordinate out of range: " + s);
  return static_cast<int>(c - 1);
}

Vec on_sphere(const Vec& v, const SphereModel& m, const std::string& field) {
  if (v.size() != m.ambient_dim()) {
    throw ConfigError(field, "expected " + std::to_string(m.ambient_dim()) + " coordinates");
  }
  if (!(v.norm() > 0.0)) throw ConfigError(field, "center must be nonzero");
  return v * (m.radius() / v.norm());
}

}  // namespace

json RunConfig::to_json() const {
  return json{{"command", command}, {"n", n},
              {"k", k},             {"degree", degree},
              {"quad", quad},       {"res", res},
              {"count", count},     {"seed", seed},
              {"restrict", restrict_to},
              {"profile", profile}, {"grid", grid},
              {"eigs", eigs},       {"field", field},
              {"group", group},     {"samples", samples},
              {"criteria", criteria},
              {"output", output},   {"csv", csv}};
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  auto get = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(dst);
    } catch (const json::exception& e) {
      throw ConfigError(key, e.what());
    }
  };
  get("command", c.command);
  get("n", c.n);
  get("k", c.k);
  get("degree", c.degree);
  get("quad", c.quad);
  get("res", c.res);
  get("count", c.count);
  get("seed", c.seed);
  get("restrict", c.restrict_to);
  get("profile", c.profile);
  get("grid", c.grid);
  get("eigs", c.eigs);
  get("field", c.field);
  get("group", c.group);
  get("samples", c.samples);
  get("criteria", c.criteria);
  get("output", c.output);
  get("csv", c.csv);
  return c;
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"spectrum", "radial", "symmetrize", "verify"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw ConfigError("command", "unknown command '" + command + "'");
  }
  if (n < 2) throw ConfigError("n", "must be >= 2");
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("k", "must be positive");
  if (degree < 1 || degree > kMaxFieldDegree) throw ConfigError("degree", "must be in [1, 6]");
  if (quad != "auto" && quad != "product" && quad != "mc") {
    throw ConfigError("quad", "must be auto, product or mc");
  }
  if (quad == "product") {
    if (n > 3) throw ConfigError("quad", "product rules exist for n = 2, 3 only; use mc");
    if (res != 0 && res < 8) throw ConfigError("res", "must be >= 8");
  }
  if (quad == "mc" && count < 1000) throw ConfigError("count", "must be >= 1000");
  if (grid < 64) throw ConfigError("grid", "must be >= 64");
  if (eigs < 1 || eigs > 10) throw ConfigError("eigs", "must be in [1, 10]");
  if (samples < 1) throw ConfigError("samples", "must be positive");
  if (!restrict_to.empty() && restrict_to != "hopf" && restrict_to.rfind("zero-mean:", 0) != 0) {
    throw ConfigError("restrict", "must be hopf or zero-mean:v");
  }
  if (restrict_to == "hopf" && n != 3) throw ConfigError("restrict", "hopf requires n = 3");
  if (command == "radial" && profile.empty()) throw ConfigError("profile", "required");
  if (command == "symmetrize") {
    if (field.empty()) throw ConfigError("field", "required");
    if (group.empty()) throw ConfigError("group", "required");
  }
  for (int c : criteria) {
    if (c < 1 || c > 11) throw ConfigError("criteria", "criterion ids are 1..11");
  }
}

Vec parse_vector(const std::string& text, const std::string& field) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw ConfigError(field, "empty vector");
  Vec v(static_cast<int>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<int>(i)) = parse_double(parts[i], field);
  return v;
}

WarpedProfile parse_profile(const std::string& text, int n) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("profile", "expected kind:params");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  try {
    if (kind == "round") return WarpedProfile::round(n, keyed(body, "k", "profile"));
    if (kind == "perturbed") {
      return WarpedProfile::perturbed(n, keyed(body, "k", "profile"), keyed(body, "eps", "profile"));
    }
    if (kind == "file") return WarpedProfile::from_csv(n, body);
  } catch (const DomainError& e) {
    throw ConfigError("profile", e.what());
  }
  throw ConfigError("profile", "unknown profile kind '" + kind + "'");
}

AmbientPolyField parse_field(const std::string& text, const SphereModel& m) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("field", "expected kind:params");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  const int dim = m.ambient_dim();
  try {
    if (kind == "proj") {
      const Vec w = parse_vector(body, "field");
      if (w.size() != dim) {
        throw ConfigError("field", "expected " + std::to_string(dim) + " coordinates");
      }
      return AmbientPolyField::projection(m, w);
    }
    if (kind == "killing") {
      std::vector<std::string> axes = split(body, ',');
      if (axes.size() == 1 && body.size() == 2) axes = {body.substr(0, 1), body.substr(1, 1)};
      if (axes.size() != 2) throw ConfigError("field", "killing expects a plane like xy or 1,2");
      return AmbientPolyField::killing_plane(m, coordinate(axes[0], dim, "field"),
                                             coordinate(axes[1], dim, "field"));
    }
    if (kind == "hopf") {
      if (body.size() != 1) throw ConfigError("field", "hopf axis must be i, j or k");
      return AmbientPolyField::hopf(m, body[0]);
    }
    if (kind == "poly") return AmbientPolyField::from_csv(m, body);
  } catch (const DomainError& e) {
    throw ConfigError("field", e.what());
  }
  throw ConfigError("field", "unknown field kind '" + kind + "'");
}

GroupSpec parse_group(const std::string& text, const SphereModel& m) {
  const auto parts = split(text, ':');
  const int dim = m.ambient_dim();
  if (parts.empty()) throw ConfigError("group", "empty group");
  const std::string& kind = parts[0];
  try {
    if (kind == "finite") {
      if (parts.size() != 3 || parts[1] != "reflect") {
        throw ConfigError("group", "expected finite:reflect:C");
      }
      return GroupSpec::reflection(dim, coordinate(parts[2], dim, "group"));
    }
    if (kind == "rot") {
      if (parts.size() != 3) throw ConfigError("group", "expected rot:I,J:M");
      const auto plane = split(parts[1], ',');
      if (plane.size() != 2) throw ConfigError("group", "rotation plane needs two coordinates");
      const long long count = parse_int(parts[2], "group");
      if (count < 1 || count > 1000000) throw ConfigError("group", "count out of range");
      return GroupSpec::planar_rotations(dim, coordinate(plane[0], dim, "group"),
                                         coordinate(plane[1], dim, "group"),
                                         static_cast<int>(count));
    }
    if (kind == "isotropy") {
      if (parts.size() < 3 || parts.size() > 4) {
        throw ConfigError("group", "expected isotropy:v:COUNT[:seed=S]");
      }
      const Vec v = on_sphere(parse_vector(parts[1], "group"), m, "group");
      const long long count = parse_int(parts[2], "group");
      if (count < 1 || count > 10000000) throw ConfigError("group", "count out of range");
      return GroupSpec::isotropy(m, v, static_cast<int>(count), optional_seed(parts, 3, "group"));
    }
    if (kind == "haar") {
      if (parts.size() < 2 || parts.size() > 3) {
        throw ConfigError("group", "expected haar:COUNT[:seed=S]");
      }
      const long long count = parse_int(parts[1], "group");
      if (count < 1 || count > 10000000) throw ConfigError("group", "count out of range");
      return GroupSpec::haar(dim, static_cast<int>(count), optional_seed(parts, 2, "group"));
    }
    if (kind == "design") {
      if (parts.size() != 3) throw ConfigError("group", "expected design:v:DEGREE");
      const Vec v = on_sphere(parse_vector(parts[1], "group"), m, "group");
      return GroupSpec::isotropy_design(m, v, static_cast<int>(parse_int(parts[2], "group")));
    }
  } catch (const DomainError& e) {
    throw ConfigError("group", e.what());
  }
  throw ConfigError("group", "unknown group kind '" + kind + "'");
}

QuadratureRule make_rule(const RunConfig& cfg, const SphereModel& m, int degree) {
  if (cfg.quad == "product") {
    return product_rule(m.n(), m.k(), cfg.res > 0 ? cfg.res : std::max(8, 2 * degree + 4));
  }
  if (cfg.quad == "mc") return monte_carlo_rule(m.n(), m.k(), cfg.count, cfg.seed);
  return default_rule(m, degree);
}

}  // namespace rlap
