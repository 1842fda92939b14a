#include "rlap/polynomial.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace rlap {

namespace {

void compositions(int vars, int total, int pos, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == vars - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int a = total; a >= 0; --a) {
    cur[pos] = a;
    compositions(vars, total - a, pos + 1, cur, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree) {
  if (vars < 1 || degree < 0) throw DomainError("MonomialBasis: invalid shape");
  for (int d = 0; d <= degree; ++d) {
    offsets_.push_back(static_cast<int>(exponents_.size()));
    Exponent cur(vars, 0);
    compositions(vars, d, 0, cur, exponents_);
  }
  offsets_.push_back(static_cast<int>(exponents_.size()));
  std::map<Exponent, int> lookup;
  for (int i = 0; i < size(); ++i) {
    lookup.emplace(exponents_[i], i);
    int t = 0;
    for (int a : exponents_[i]) t += a;
    total_.push_back(t);
  }
  times_.assign(static_cast<std::size_t>(size()) * vars, -1);
  divided_.assign(static_cast<std::size_t>(size()) * vars, -1);
  for (int i = 0; i < size(); ++i) {
    for (int v = 0; v < vars; ++v) {
      Exponent up = exponents_[i];
      ++up[v];
      if (auto it = lookup.find(up); it != lookup.end()) times_[i * vars + v] = it->second;
      if (exponents_[i][v] > 0) {
        Exponent down = exponents_[i];
        --down[v];
        divided_[i * vars + v] = lookup.at(down);
      }
    }
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int vars, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{vars, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(vars, degree);
  return slot;
}

int MonomialBasis::index(const Exponent& a) const {
  if (static_cast<int>(a.size()) != vars_) return -1;
  int t = 0;
  for (int x : a) {
    if (x < 0) return -1;
    t += x;
  }
  if (t > degree_) return -1;
  for (int i = offsets_[t]; i < offsets_[t + 1]; ++i) {
    if (exponents_[i] == a) return i;
  }
  return -1;
}

Vec MonomialBasis::values(const Vec& x) const {
  Vec v(size());
  v(0) = 1.0;
  for (int i = 1; i < size(); ++i) {
    // graded order: some x^a / x_j always precedes x^a
    int j = 0;
    while (exponents_[i][j] == 0) ++j;
    v(i) = v(divided_[i * vars_ + j]) * x(j);
  }
  return v;
}

MonomialBasis::Jet MonomialBasis::jet(const Vec& x, bool with_hessian) const {
  Jet out;
  out.value = values(x);
  const int m = size();
  out.grad = Mat::Zero(m, vars_);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < vars_; ++j) {
      const int lo = divided_[i * vars_ + j];
      if (lo >= 0) out.grad(i, j) = exponents_[i][j] * out.value(lo);
    }
  }
  if (with_hessian) {
    out.hess = Mat::Zero(m, vars_ * vars_);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < vars_; ++j) {
        const int lo = divided_[i * vars_ + j];
        if (lo < 0) continue;
        for (int l = 0; l < vars_; ++l) {
          const int lo2 = divided_[lo * vars_ + l];
          if (lo2 < 0) continue;
          out.hess(i, j * vars_ + l) =
              exponents_[i][j] * exponents_[lo][l] * out.value(lo2);
        }
      }
    }
  }
  return out;
}

Mat substitute_linear(const MonomialBasis& basis, const Mat& coeffs, const Mat& g) {
  const int vars = basis.vars();
  const int m = basis.size();
  if (g.rows() != vars || g.cols() != vars || coeffs.rows() != m) {
    throw DomainError("substitute_linear: shape mismatch");
  }
  // Column a of `sub` holds the coefficients of prod_i (g x)_i^{a_i}, which is
  // homogeneous of degree |a|; only that degree block is ever touched.
  Mat sub = Mat::Zero(m, m);
  sub(0, 0) = 1.0;
  for (int a = 1; a < m; ++a) {
    const Exponent& e = basis.exponent(a);
    int i = 0;
    while (e[i] == 0) ++i;
    const int parent = basis.divided_by(a, i);
    const int d = basis.total_degree(parent);
    for (int b = basis.degree_offset(d); b < basis.degree_offset(d + 1); ++b) {
      const double c = sub(b, parent);
      if (c == 0.0) continue;
      for (int j = 0; j < vars; ++j) {
        const double gij = g(i, j);
        if (gij != 0.0) sub(basis.times_var(b, j), a) += c * gij;
      }
    }
  }
  return sub * coeffs;
}

Mat promote(const MonomialBasis& from, const MonomialBasis& to, const Mat& coeffs) {
  if (from.vars() != to.vars() || to.degree() < from.degree()) {
    throw DomainError("promote: incompatible bases");
  }
  Mat out = Mat::Zero(to.size(), coeffs.cols());
  // graded order is prefix-stable across degrees
  out.topRows(from.size()) = coeffs;
  return out;
}

}  // namespace rlap
