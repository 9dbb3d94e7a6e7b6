#include "liesym/liealg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace liesym {

void StructureTensor::set_bracket(std::size_t a, std::size_t b, std::size_t g, const Rational& v) {
  Rational q = v;
  q.canonicalize();
  c_[idx(a, b, g)] = q;
  c_[idx(b, a, g)] = -q;
}

bool StructureTensor::is_antisymmetric() const {
  for (std::size_t a = 0; a < r_; ++a) {
    for (std::size_t b = 0; b < r_; ++b) {
      for (std::size_t g = 0; g < r_; ++g) {
        if ((*this)(a, b, g) != -(*this)(b, a, g)) return false;
      }
    }
  }
  return true;
}

bool StructureTensor::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

std::string StructureTensor::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t a = 0; a < r_; ++a) {
    for (std::size_t b = a + 1; b < r_; ++b) {
      std::string rhs;
      for (std::size_t g = 0; g < r_; ++g) {
        const Rational& q = (*this)(a, b, g);
        if (q == 0) continue;
        std::string term = "X" + std::to_string(g + 1);
        if (q == 1) {
          rhs += rhs.empty() ? term : " + " + term;
        } else if (q == -1) {
          rhs += rhs.empty() ? "-" + term : " - " + term;
        } else if (q < 0) {
          rhs += (rhs.empty() ? "-" : " - ") + Rational(-q).get_str() + "*" + term;
        } else {
          rhs += (rhs.empty() ? "" : " + ") + q.get_str() + "*" + term;
        }
      }
      if (rhs.empty()) continue;
      if (any) os << ", ";
      any = true;
      os << "[X" << a + 1 << ",X" << b + 1 << "]=" << rhs;
    }
  }
  if (!any) os << "abelian";
  return os.str();
}

StructureTensor sl2_tensor() {
  StructureTensor c(3);
  c.set_bracket(0, 1, 0, 1);
  c.set_bracket(0, 2, 1, 2);
  c.set_bracket(1, 2, 2, 1);
  return c;
}

StructureTensor aff_tensor() {
  StructureTensor c(2);
  c.set_bracket(0, 1, 0, 1);
  return c;
}

namespace {

std::vector<Symbol> unknowns(std::size_t r) { return make_symbols("__lin_u", r); }

void check_common(const std::vector<VectorField>& basis) {
  if (basis.empty()) throw Error(ErrorKind::DimensionMismatch, "empty basis");
  for (const auto& x : basis) {
    if (x.vars() != basis.front().vars()) throw Error(ErrorKind::DimensionMismatch, "basis fields on different variables");
  }
}

// Rows of "target - sum_g u_g basis_g == 0" over all components.
RMatrix combination_rows(const std::vector<VectorField>& basis, const VectorField* target) {
  auto u = unknowns(basis.size());
  RMatrix rows;
  for (std::size_t i = 0; i < basis.front().dim(); ++i) {
    Expr e = target ? (*target)[i] : Expr();
    for (std::size_t g = 0; g < basis.size(); ++g) e -= Expr(u[g]) * basis[g][i];
    auto part = linear_rows(e, u);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::optional<std::vector<Rational>> exact_coordinates(const std::vector<VectorField>& basis, const VectorField& target) {
  RMatrix rows = combination_rows(basis, &target);
  std::size_t r = basis.size();
  RMatrix a;
  std::vector<Rational> rhs;
  for (auto& row : rows) {
    // row: const + sum coef_g u_g = 0  ->  sum coef_g u_g = -const
    rhs.push_back(-row[0]);
    a.emplace_back(row.begin() + 1, row.end());
  }
  return solve(a, rhs, r);
}

struct Sampler {
  std::vector<Symbol> syms;
  std::vector<Env> points;
};

Sampler sample_points(const std::vector<VectorField>& basis, std::size_t count, std::uint64_t seed) {
  std::set<Symbol> syms;
  for (const auto& x : basis) {
    for (const auto& c : x.components()) {
      for (Symbol s : c.free_symbols()) syms.insert(s);
    }
  }
  Sampler out;
  out.syms.assign(syms.begin(), syms.end());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.25, 1.75);
  while (out.points.size() < count) {
    Env p;
    for (Symbol s : out.syms) p[s] = dist(rng);
    out.points.push_back(std::move(p));
  }
  return out;
}

std::vector<double> eval_field(const VectorField& x, const Env& p) {
  std::vector<double> out;
  for (const auto& c : x.components()) out.push_back(eval(c, p));
  return out;
}

std::optional<std::vector<Rational>> numeric_coordinates(const std::vector<VectorField>& basis, const VectorField& target,
                                                         const Sampler& s, double* residual) {
  std::size_t n = basis.front().dim();
  std::size_t r = basis.size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(s.points.size() * n), static_cast<Eigen::Index>(r));
  Eigen::VectorXd b(a.rows());
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    auto tv = eval_field(target, s.points[k]);
    for (std::size_t g = 0; g < r; ++g) {
      auto v = eval_field(basis[g], s.points[k]);
      for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(k * n + i), static_cast<Eigen::Index>(g)) = v[i];
    }
    for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(k * n + i)) = tv[i];
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  double res = (a * x - b).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (residual) *residual = res;
  if (res > 1e-9 * scale) return std::nullopt;
  std::vector<Rational> out;
  for (Eigen::Index g = 0; g < x.size(); ++g) out.push_back(rationalize(x(g)));
  return out;
}

}  // namespace

void check_independent(const std::vector<VectorField>& basis) {
  check_common(basis);
  RMatrix rows = combination_rows(basis, nullptr);
  RMatrix a;
  for (auto& row : rows) a.emplace_back(row.begin() + 1, row.end());
  if (rank(a, basis.size()) == basis.size()) return;
  auto ns = nullspace(a, basis.size());
  std::ostringstream os;
  os << "fields are linearly dependent, relation:";
  for (std::size_t g = 0; g < basis.size(); ++g) os << ' ' << ns.front()[g];
  throw Error(ErrorKind::DependentBasis, os.str());
}

StructureTensor extract_structure_constants(const std::vector<VectorField>& basis) {
  check_common(basis);
  check_independent(basis);
  std::size_t r = basis.size();
  StructureTensor c(r);
  bool opaque = std::any_of(basis.begin(), basis.end(), [](const VectorField& x) { return x.has_opaque(); });
  std::optional<Sampler> sampler;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      VectorField br = lie_bracket(basis[a], basis[b]);
      auto coords = exact_coordinates(basis, br);
      if (!coords && opaque) {
        if (!sampler) sampler = sample_points(basis, 64, 0x5eedULL);
        double res = 0.0;
        coords = numeric_coordinates(basis, br, *sampler, &res);
        if (coords) c.numerical = true;
      }
      if (!coords) {
        throw Error(ErrorKind::NotClosed, "[X" + std::to_string(a + 1) + ",X" + std::to_string(b + 1) +
                                              "] = " + br.to_string() + " is outside the span");
      }
      for (std::size_t g = 0; g < r; ++g) c.set_bracket(a, b, g, (*coords)[g]);
    }
  }
  return c;
}

VectorField closure_residual(const std::vector<VectorField>& basis, const StructureTensor& c, std::size_t a,
                             std::size_t b) {
  VectorField out = lie_bracket(basis[a], basis[b]);
  for (std::size_t g = 0; g < c.dim(); ++g) {
    if (c(a, b, g) != 0) out = out - Expr(c(a, b, g)) * basis[g];
  }
  return out;
}

Rational jacobi_residual(const StructureTensor& c) {
  std::size_t r = c.dim();
  Rational worst = 0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t n = 0; n < r; ++n) {
          Rational s = 0;
          for (std::size_t m = 0; m < r; ++m) {
            s += c(i, a, m) * c(m, b, n) + c(a, b, m) * c(m, i, n) + c(b, i, m) * c(m, a, n);
          }
          if (abs(s) > worst) worst = abs(s);
        }
      }
    }
  }
  return worst;
}

RMatrix center(const StructureTensor& c) {
  std::size_t r = c.dim();
  RMatrix rows;
  for (std::size_t b = 0; b < r; ++b) {
    for (std::size_t g = 0; g < r; ++g) {
      std::vector<Rational> row(r);
      for (std::size_t a = 0; a < r; ++a) row[a] = c(a, b, g);
      rows.push_back(std::move(row));
    }
  }
  return nullspace(rows, r);
}

StructureTensor change_basis(const StructureTensor& c, const RMatrix& p) {
  std::size_t r = c.dim();
  RMatrix q = inverse(p);
  StructureTensor out(r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      // [X'_a, X'_b] = sum_{i,j,k} p_ai p_bj c_ijk X_k, and X_k = sum_g q_kg X'_g
      std::vector<Rational> in_old(r, Rational(0));
      for (std::size_t i = 0; i < r; ++i) {
        if (p[a][i] == 0) continue;
        for (std::size_t j = 0; j < r; ++j) {
          if (p[b][j] == 0) continue;
          for (std::size_t k = 0; k < r; ++k) in_old[k] += p[a][i] * p[b][j] * c(i, j, k);
        }
      }
      for (std::size_t g = 0; g < r; ++g) {
        Rational v = 0;
        for (std::size_t k = 0; k < r; ++k) v += in_old[k] * q[k][g];
        out.set_bracket(a, b, g, v);
      }
    }
  }
  return out;
}

}  // namespace liesym
