#include "liesym/vectorfield.hpp"

#include <algorithm>
#include <sstream>

namespace liesym {

VectorField::VectorField(std::vector<Symbol> vars, std::vector<Expr> components)
    : vars_(std::move(vars)), comps_(std::move(components)) {
  if (vars_.size() != comps_.size()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(vars_.size()) + " variables but " +
                                                  std::to_string(comps_.size()) + " components");
  }
}

VectorField VectorField::zero(std::vector<Symbol> vars) {
  std::vector<Expr> comps(vars.size());
  return VectorField(std::move(vars), std::move(comps));
}

VectorField VectorField::partial(std::vector<Symbol> vars, std::size_t i) {
  std::vector<Expr> comps(vars.size());
  comps.at(i) = Expr(1);
  return VectorField(std::move(vars), std::move(comps));
}

Expr VectorField::apply(const Expr& g) const {
  Expr out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (comps_[i].is_structurally_zero() || !g.depends_on(vars_[i])) continue;
    out += comps_[i] * differentiate(g, vars_[i]);
  }
  return out;
}

bool VectorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.is_structurally_zero(); });
}

bool VectorField::has_opaque() const {
  return std::any_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.has_opaque(); });
}

VectorField VectorField::embed(const std::vector<Symbol>& vars) const {
  std::vector<Expr> comps(vars.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), vars_[i]);
    if (it == vars.end()) {
      throw Error(ErrorKind::DimensionMismatch, "variable " + vars_[i].name() + " missing from embedding");
    }
    comps[static_cast<std::size_t>(it - vars.begin())] = comps_[i];
  }
  return VectorField(vars, std::move(comps));
}

std::string VectorField::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (comps_[i].is_structurally_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << comps_[i] << ")*d/d" << vars_[i].name();
  }
  if (first) os << '0';
  return os.str();
}

namespace {

void check_same(const VectorField& a, const VectorField& b) {
  if (a.vars() != b.vars()) throw Error(ErrorKind::DimensionMismatch, "vector fields live on different variables");
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  check_same(a, b);
  std::vector<Expr> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + b[i];
  return VectorField(a.vars(), std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  check_same(a, b);
  std::vector<Expr> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] - b[i];
  return VectorField(a.vars(), std::move(c));
}

VectorField operator-(const VectorField& a) {
  std::vector<Expr> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = -a[i];
  return VectorField(a.vars(), std::move(c));
}

VectorField operator*(const Expr& g, const VectorField& a) {
  std::vector<Expr> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = g * a[i];
  return VectorField(a.vars(), std::move(c));
}

bool identical(const VectorField& a, const VectorField& b) {
  if (a.vars() != b.vars()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!identical(a[i], b[i])) return false;
  }
  return true;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  check_same(x, y);
  std::vector<Expr> c(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = x.apply(y[i]) - y.apply(x[i]);
  return VectorField(x.vars(), std::move(c));
}

VectorField autonomize(const VectorField& x, Symbol time) {
  std::vector<Symbol> vars{time};
  std::vector<Expr> comps{Expr(1)};
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x.vars()[i] == time) throw Error(ErrorKind::DimensionMismatch, "field already has a time component");
    vars.push_back(x.vars()[i]);
    comps.push_back(x[i]);
  }
  return VectorField(std::move(vars), std::move(comps));
}

std::vector<Symbol> JetSpace::coordinates() const {
  std::vector<Symbol> out = times;
  out.insert(out.end(), deps.begin(), deps.end());
  for (const auto& row : jets) out.insert(out.end(), row.begin(), row.end());
  return out;
}

JetSpace make_jet_space(const std::vector<Symbol>& times, const std::vector<Symbol>& deps) {
  JetSpace s;
  s.times = times;
  s.deps = deps;
  for (Symbol x : deps) {
    std::vector<Symbol> row;
    for (Symbol t : times) row.emplace_back(x.name() + "_" + t.name());
    s.jets.push_back(std::move(row));
  }
  return s;
}

Expr total_derivative(const JetSpace& space, const Expr& g, std::size_t l) {
  Expr out = differentiate(g, space.times.at(l));
  for (std::size_t j = 0; j < space.deps.size(); ++j) {
    if (!g.depends_on(space.deps[j])) continue;
    out += Expr(space.jets[j][l]) * differentiate(g, space.deps[j]);
  }
  return out;
}

VectorField JetVectorField::project() const {
  std::vector<Symbol> base = space.times;
  base.insert(base.end(), space.deps.begin(), space.deps.end());
  std::vector<Expr> comps(field.components().begin(), field.components().begin() + static_cast<std::ptrdiff_t>(base.size()));
  return VectorField(std::move(base), std::move(comps));
}

JetVectorField prolong_first(const VectorField& y, const std::vector<Symbol>& times) {
  std::vector<Symbol> deps;
  std::vector<Expr> eta;
  for (std::size_t i = 0; i < y.dim(); ++i) {
    Symbol v = y.vars()[i];
    if (std::find(times.begin(), times.end(), v) != times.end()) {
      if (!y[i].is_structurally_zero()) {
        throw Error(ErrorKind::NotVertical, "field has a d/d" + v.name() + " component");
      }
      continue;
    }
    deps.push_back(v);
    eta.push_back(y[i]);
  }
  JetVectorField out;
  out.space = make_jet_space(times, deps);
  std::vector<Expr> comps(times.size());
  comps.insert(comps.end(), eta.begin(), eta.end());
  for (std::size_t k = 0; k < deps.size(); ++k) {
    for (std::size_t q = 0; q < times.size(); ++q) comps.push_back(total_derivative(out.space, eta[k], q));
  }
  out.field = VectorField(out.space.coordinates(), std::move(comps));
  return out;
}

}  // namespace liesym
