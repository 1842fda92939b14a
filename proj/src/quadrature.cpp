#include "rlap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace rlap {

namespace {

// P_count(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre(int count, double x) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= count; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, count * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 2) throw DomainError("gauss_legendre: count must be >= 2");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(count, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(count, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
}

std::string QuadratureRule::describe() const {
  std::ostringstream os;
  if (kind == RuleKind::Product) {
    os << "product:res=" << resolution;
  } else {
    os << "mc:count=" << size() << ",seed=" << seed;
  }
  return os.str();
}

QuadratureRule product_rule(int n, double k, int res) {
  if (n != 2 && n != 3) {
    throw DomainError("product_rule supports n in {2, 3}; use monte_carlo_rule for n = " +
                      std::to_string(n));
  }
  if (res < 8) throw DomainError("product_rule: res must be >= 8");
  SphereModel sphere(n, k);
  const double r = sphere.radius();
  const double rn = std::pow(r, n);

  std::vector<double> zt, wt;
  gauss_legendre(res, zt, wt);
  const int naz = 2 * res;
  const double daz = 2.0 * std::numbers::pi / naz;

  QuadratureRule rule{sphere, Mat(), Vec(), RuleKind::Product, res, 0};
  if (n == 2) {
    rule.nodes.resize(3, res * naz);
    rule.weights.resize(res * naz);
    int q = 0;
    for (int i = 0; i < res; ++i) {
      const double z = zt[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < naz; ++j) {
        const double phi = j * daz;
        rule.nodes.col(q) << r * rho * std::cos(phi), r * rho * std::sin(phi), r * z;
        rule.weights(q) = rn * wt[i] * daz;
        ++q;
      }
    }
  } else {
    // x4 = r cos(psi); density sin^2(psi) d(psi) = sqrt(1 - t^2) dt with
    // t = cos(psi), integrated exactly by Gauss-Chebyshev of the second kind.
    std::vector<double> tp(res), wp(res);
    for (int i = 0; i < res; ++i) {
      const double a = std::numbers::pi * (i + 1) / (res + 1);
      tp[i] = std::cos(a);
      const double sa = std::sin(a);
      wp[i] = std::numbers::pi / (res + 1) * sa * sa;
    }
    rule.nodes.resize(4, res * res * naz);
    rule.weights.resize(res * res * naz);
    int q = 0;
    for (int a = 0; a < res; ++a) {
      const double t = tp[a];
      const double sp = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int i = 0; i < res; ++i) {
        const double z = zt[i];
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < naz; ++j) {
          const double phi = j * daz;
          rule.nodes.col(q) << r * sp * rho * std::cos(phi), r * sp * rho * std::sin(phi),
              r * sp * z, r * t;
          rule.weights(q) = rn * wp[a] * wt[i] * daz;
          ++q;
        }
      }
    }
  }
  // Node norms are r to roundoff; snap them so the on-sphere invariant holds
  // at 1e-12 for every resolution.
  for (int q = 0; q < rule.size(); ++q) rule.nodes.col(q) *= r / rule.nodes.col(q).norm();
  return rule;
}

QuadratureRule monte_carlo_rule(int n, double k, int count, std::uint64_t seed) {
  if (count < 1000) throw DomainError("monte_carlo_rule: count must be >= 1000");
  SphereModel sphere(n, k);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  QuadratureRule rule{sphere, Mat(n + 1, count), Vec::Constant(count, sphere.volume() / count),
                      RuleKind::MonteCarlo, 0, seed};
  for (int q = 0; q < count; ++q) {
    Vec v(n + 1);
    do {
      for (int i = 0; i <= n; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-12);
    rule.nodes.col(q) = v * (sphere.radius() / v.norm());
  }
  return rule;
}

double tree_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = 1;
  if (const char* env = std::getenv("RLAP_WORKERS")) workers = std::max(1, std::atoi(env));
  workers = std::min(workers, std::max(1, count / 64));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> map_nodes(int count, const std::function<double(int)>& fn) {
  std::vector<double> out(static_cast<std::size_t>(count));
  parallel_for(count, [&](int i) { out[i] = fn(i); });
  return out;
}

namespace {

double weighted_sum(const QuadratureRule& rule, const std::function<double(int)>& integrand) {
  std::vector<double> terms = map_nodes(rule.size(), [&](int q) {
    const double v = integrand(q);
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite integrand at quadrature node " + std::to_string(q));
    }
    return rule.weights(q) * v;
  });
  return tree_sum(terms);
}

}  // namespace

double integrate_scalar(const ScalarFn& g, const QuadratureRule& rule) {
  return weighted_sum(rule, [&](int q) { return g(rule.nodes.col(q)); });
}

double integrate_pairing(const FieldFn& x, const FieldFn& y, const QuadratureRule& rule) {
  return weighted_sum(rule, [&](int q) {
    const Vec p = rule.nodes.col(q);
    return x(p).dot(y(p));
  });
}

}  // namespace rlap
