#include "liesym/catalog.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "liesym/parse.hpp"

namespace liesym {
namespace {

class ParamReader {
 public:
  ParamReader(std::string entry, const CatalogParams& p) : entry_(std::move(entry)), p_(p) {}

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }

  bool has(const std::string& key) const { return p_.count(key) != 0; }

  Expr expr(const std::string& key, const std::string& fallback, const ParseContext& ctx = {}) {
    return parse_expr(text(key, fallback), ctx);
  }

  Rational rational(const std::string& key, const std::string& fallback) {
    Expr e = expr(key, fallback);
    auto v = e.constant_value();
    if (!v) throw Error(ErrorKind::BadParams, entry_ + ": parameter " + key + " must be a rational constant");
    return *v;
  }

  // Unknown keys are a usage error rather than silently ignored.
  void finish() const {
    for (const auto& [k, v] : p_) {
      if (!used_.count(k)) throw Error(ErrorKind::BadParams, entry_ + " does not take parameter '" + k + "'");
    }
  }

 private:
  std::string entry_;
  const CatalogParams& p_;
  std::set<std::string> used_;
};

VectorField field(const std::vector<Symbol>& vars, std::initializer_list<const char*> comps,
                  const ParseContext& ctx = {}) {
  std::vector<Expr> out;
  for (const char* c : comps) out.push_back(parse_expr(c, ctx));
  return VectorField(vars, std::move(out));
}

std::vector<Symbol> symbols(std::initializer_list<const char*> names) {
  std::vector<Symbol> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

LieSystemDef lie_system(std::vector<VectorField> basis, std::vector<Expr> coeffs,
                        std::vector<std::pair<double, double>> box) {
  LieSystemDef s;
  s.basis = std::move(basis);
  s.coeffs = std::move(coeffs);
  s.sample_box = std::move(box);
  return s;
}

KnownFamily self_family(const LieSystemDef& sys) {
  SymmetryCandidate c;
  c.time = sys.time;
  c.label = "self";
  c.f.push_back(Expr(1));
  for (const auto& b : sys.coeffs) c.f.push_back(b);
  return {"self", c, true};
}

std::vector<std::pair<double, double>> box(std::size_t n, double lo, double hi) { return std::vector(n, std::pair{lo, hi}); }

CatalogEntry sl2_realization(const std::string& name, std::vector<VectorField> basis, std::vector<Expr> coeffs,
                             std::vector<std::pair<double, double>> sample) {
  CatalogEntry e;
  e.name = name;
  e.family = "sl(2,R)";
  e.expected = sl2_tensor();
  e.system = lie_system(std::move(basis), std::move(coeffs), std::move(sample));
  return e;
}

std::vector<Expr> generic_b(ParamReader& pr) {
  return {pr.expr("b1", "@b1(t)"), pr.expr("b2", "@b2(t)"), pr.expr("b3", "@b3(t)")};
}

}  // namespace

const std::vector<CatalogInfo>& catalog_info() {
  static const std::vector<CatalogInfo> info{
      {"riccati", "sl(2,R)", "dx/dt = eta(t) + x^2", "eta=@eta(t)"},
      {"cayley_klein", "sl(2,R)", "Riccati equation over complex, dual or split-complex numbers",
       "iota2 in {-1,0,1} (default -1), b1=@b1(t), b2=@b2(t), b3=@b3(t)"},
      {"quaternionic", "sl(2,R)", "quaternionic Riccati equation with real coefficients",
       "b1=@b1(t), b2=@b2(t), b3=@b3(t)"},
      {"dbh", "sl(2,R)", "generalized Darboux-Brioschi-Halphen system",
       "tau2=0, or alpha1..alpha3 and omega1..omega3"},
      {"kummer_schwarz", "sl(2,R)", "second-order Kummer-Schwarz equation as a first-order system",
       "c0=1, eta=@eta(t)"},
      {"buchdahl", "Aff(R)", "Buchdahl equation as a first-order system", "f=@f(x), a2=@a2(t)"},
      {"aff_generic", "Aff(R)", "a(t) d/dx + b(t) x d/dx", "a=@a(t), b=@b(t)"},
      {"painleve_ince", "sl(3,R)", "Painleve-Ince equation as a first-order system", ""},
      {"partial_riccati", "sl(2,R) PDE", "partial Riccati equation in (t1,t2), proportional-ansatz coefficients",
       "lambda=1/2, perturb=0"},
      {"sl2_generic", "sl(2,R)", "b1 X1 + b2 X2 + b3 X3 in the Riccati realization",
       "b1=@b1(t), b2=@b2(t), b3=@b3(t)"},
  };
  return info;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& i : catalog_info()) out.push_back(i.name);
  return out;
}

StructureTensor painleve_ince_tensor() {
  struct Entry {
    int a, b, g;
    long p, q;
  };
  static const Entry table[] = {
      {0, 1, 2, 1, 1},  {0, 2, 3, -3, 1}, {0, 3, 4, 1, 1},  {0, 4, 5, 1, 1},  {0, 6, 7, 1, 2},  {0, 7, 0, -2, 1},
      {1, 4, 6, 1, 1},  {1, 5, 7, 1, 1},  {1, 7, 1, 4, 1},  {2, 3, 6, -1, 1}, {2, 4, 7, -1, 2}, {2, 5, 0, -2, 1},
      {2, 6, 1, -2, 1}, {2, 7, 2, 2, 1},  {3, 4, 0, -1, 1}, {3, 6, 2, 1, 1},  {4, 6, 3, -3, 1}, {4, 7, 4, -2, 1},
      {5, 6, 4, -2, 1}, {5, 7, 5, -4, 1}, {6, 7, 6, 2, 1},
  };
  StructureTensor c(8);
  for (const auto& e : table) c.set_bracket(e.a, e.b, e.g, Rational(e.p, e.q));
  return c;
}

PDELieSystemDef partial_riccati(const Rational& lambda, const std::array<std::array<Rational, 3>, 3>& profile,
                                const Rational& perturb) {
  Symbol t1("t1"), t2("t2");
  auto x = symbols({"x"});
  PDELieSystemDef p;
  p.label = "partial_riccati";
  p.times = {t1, t2};
  p.basis = {field(x, {"1"}), field(x, {"x"}), field(x, {"x^2"})};
  p.tensor = sl2_tensor();
  Expr u = Expr(t1) + Expr(lambda) * Expr(t2);
  for (std::size_t a = 0; a < 3; ++a) {
    Expr pa = Expr(profile[a][0]) + Expr(profile[a][1]) * u + Expr(profile[a][2]) * u * u;
    p.coeffs.push_back({pa, Expr(lambda) * pa});
  }
  if (perturb != 0) p.coeffs[0][1] += Expr(perturb) * Expr(t1);
  p.time_box = {{0.0, 1.0}, {0.0, 1.0}};
  p.sample_box = {{-0.5, 0.5}};
  return p;
}

CatalogEntry make_entry(const std::string& name, const CatalogParams& params) {
  ParamReader pr(name, params);
  CatalogEntry e;
  if (name == "riccati") {
    auto x = symbols({"x"});
    e = sl2_realization(name, {field(x, {"1"}), field(x, {"x"}), field(x, {"x^2"})},
                        {pr.expr("eta", "@eta(t)"), Expr(0), Expr(1)}, box(1, -1.0, 1.0));
  } else if (name == "cayley_klein") {
    Rational iota2 = pr.rational("iota2", "-1");
    if (iota2 != -1 && iota2 != 0 && iota2 != 1) throw Error(ErrorKind::BadParams, "iota2 must be -1, 0 or 1");
    ParseContext ctx;
    ctx.params["iota2"] = iota2;
    auto xy = symbols({"x", "y"});
    e = sl2_realization(name,
                        {field(xy, {"1", "0"}, ctx), field(xy, {"x", "y"}, ctx),
                         field(xy, {"x^2 + iota2*y^2", "2*x*y"}, ctx)},
                        generic_b(pr), box(2, -1.0, 1.0));
  } else if (name == "quaternionic") {
    auto q = symbols({"q0", "q1", "q2", "q3"});
    e = sl2_realization(name,
                        {field(q, {"1", "0", "0", "0"}), field(q, {"q0", "q1", "q2", "q3"}),
                         field(q, {"q0^2 - q1^2 - q2^2 - q3^2", "2*q0*q1", "2*q0*q2", "2*q0*q3"})},
                        generic_b(pr), box(4, -1.0, 1.0));
  } else if (name == "dbh") {
    Rational tau2;
    bool by_alpha = pr.has("alpha1") || pr.has("alpha2") || pr.has("alpha3") || pr.has("omega1") ||
                    pr.has("omega2") || pr.has("omega3");
    if (by_alpha && pr.has("tau2")) throw Error(ErrorKind::BadParams, "give tau2 or alpha/omega, not both");
    if (by_alpha) {
      Rational a1 = pr.rational("alpha1", "0"), a2 = pr.rational("alpha2", "0"), a3 = pr.rational("alpha3", "0");
      Rational w1 = pr.rational("omega1", "0"), w2 = pr.rational("omega2", "0"), w3 = pr.rational("omega3", "0");
      tau2 = a1 * a1 * (w1 - w2) * (w3 - w1) + a2 * a2 * (w2 - w3) * (w1 - w2) + a3 * a3 * (w3 - w1) * (w2 - w3);
    } else {
      tau2 = pr.rational("tau2", "0");
    }
    auto w = symbols({"w1", "w2", "w3"});
    e.name = name;
    e.family = "sl(2,R)";
    e.expected = sl2_tensor();
    // X3 is the quadratic part of minus the drift; the tau^2 term rides on X1.
    e.system = lie_system({field(w, {"1", "1", "1"}), field(w, {"w1", "w2", "w3"}),
                           field(w, {"-(w3*w2 - w1*(w3 + w2))", "-(w1*w3 - w2*(w1 + w3))", "-(w2*w1 - w3*(w2 + w1))"})},
                          {Expr(tau2), Expr(0), Expr(-1)}, box(3, 1.0, 2.0));
    if (tau2 == 0) {
      DbhFamilyParams p{1, 1, 1, 1, 1};
      e.families.push_back({"b0_zero", dbh_symmetry_family(DbhMode::B0Zero, p), true});
      e.families.push_back({"b0_const", dbh_symmetry_family(DbhMode::B0Const, p), true});
      e.families.push_back({"b0_linear", dbh_symmetry_family(DbhMode::B0Linear, p), true});
    }
  } else if (name == "kummer_schwarz") {
    Rational c0 = pr.rational("c0", "1");
    ParseContext ctx;
    ctx.params["c0"] = c0;
    auto xv = symbols({"x", "v"});
    e = sl2_realization(name,
                        {field(xv, {"0", "2*x"}, ctx), field(xv, {"x", "2*v"}, ctx),
                         field(xv, {"v", "3/2*v^2/x - 2*c0*x^3"}, ctx)},
                        {pr.expr("eta", "@eta(t)"), Expr(0), Expr(1)}, {{0.5, 1.5}, {-1.0, 1.0}});
    e.excluded = "x = 0";
    e.system->excluded = e.excluded;
    e.system->in_excluded = [](std::span<const double> s) { return std::abs(s[0]) < 1e-12; };
  } else if (name == "buchdahl") {
    auto xv = symbols({"x", "v"});
    Expr f = pr.expr("f", "@f(x)");
    Expr a2 = pr.expr("a2", "@a2(t)");
    if (f.depends_on(Symbol("v")) || f.depends_on(Symbol("t"))) throw Error(ErrorKind::BadParams, "f must depend on x only");
    Expr v(xv[1]);
    e.name = name;
    e.family = "Aff(R)";
    e.expected = aff_tensor();
    e.system = lie_system({VectorField(xv, {v, f * v * v}), VectorField(xv, {Expr(0), -v})}, {Expr(1), -a2},
                          box(2, -1.0, 1.0));
  } else if (name == "aff_generic") {
    auto x = symbols({"x"});
    e.name = name;
    e.family = "Aff(R)";
    e.expected = aff_tensor();
    e.system = lie_system({field(x, {"1"}), field(x, {"x"})}, {pr.expr("a", "@a(t)"), pr.expr("b", "@b(t)")},
                          box(1, -1.0, 1.0));
  } else if (name == "painleve_ince") {
    auto xv = symbols({"x", "v"});
    e.name = name;
    e.family = "sl(3,R)";
    e.expected = painleve_ince_tensor();
    std::vector<Expr> coeffs(8, Expr(0));
    coeffs[0] = Expr(1);
    e.system = lie_system({field(xv, {"v", "-(3*x*v + x^3)"}), field(xv, {"0", "1"}), field(xv, {"-1", "3*x"}),
                           field(xv, {"x", "-2*x^2"}), field(xv, {"v + 2*x^2", "-x*(v + 3*x^2)"}),
                           field(xv, {"2*x*(v + x^2)", "2*(v^2 - x^4)"}), field(xv, {"1", "-x"}),
                           field(xv, {"2*x", "4*v"})},
                          std::move(coeffs), box(2, -1.0, 1.0));
    SymmetryCandidate x6;
    x6.label = "X6";
    x6.f.assign(9, Expr(0));
    x6.f[6] = Expr(1);
    e.families.push_back({"X6", x6, true});
  } else if (name == "partial_riccati") {
    Rational lambda = pr.rational("lambda", "1/2");
    Rational perturb = pr.rational("perturb", "0");
    std::array<std::array<Rational, 3>, 3> profile{{{Rational(-1, 2), Rational(0), Rational(1, 4)},
                                                    {Rational(1, 3), Rational(1, 2), Rational(0)},
                                                    {Rational(1, 5), Rational(-1, 4), Rational(0)}}};
    e.name = name;
    e.family = "sl(2,R)";
    e.expected = sl2_tensor();
    e.pde = partial_riccati(lambda, profile, perturb);
  } else if (name == "sl2_generic") {
    auto x = symbols({"x"});
    e = sl2_realization(name, {field(x, {"1"}), field(x, {"x"}), field(x, {"x^2"})}, generic_b(pr),
                        box(1, -1.0, 1.0));
  } else {
    throw Error(ErrorKind::UnknownName, "no catalog entry named '" + name + "'");
  }
  pr.finish();
  for (const auto& i : catalog_info()) {
    if (i.name == name) e.description = i.description;
  }
  if (e.system) {
    e.system->tensor = e.expected;
    e.families.insert(e.families.begin(), self_family(*e.system));
  }
  return e;
}

SymmetryCandidate dbh_symmetry_family(DbhMode mode, const DbhFamilyParams& p, Symbol time) {
  Expr t(time);
  SymmetryCandidate c;
  c.time = time;
  Expr f3 = Expr(p.l1) * t * t - Expr(p.l2) * t + Expr(p.l3);
  switch (mode) {
    case DbhMode::B0Zero:
      c.label = "b0_zero";
      c.f.push_back(Expr(p.t0));
      break;
    case DbhMode::B0Const:
      c.label = "b0_const";
      c.f.push_back(Expr(p.c0) * t + Expr(p.t0));
      f3 = f3 - Expr(p.c0) * t;
      break;
    case DbhMode::B0Linear:
      c.label = "b0_linear";
      c.f.push_back(Expr(p.t0) + Expr(p.c0 / 2) * t * t);
      f3 = f3 - Expr(p.c0 / 2) * t * t;
      break;
  }
  c.f.push_back(Expr(p.l1));
  c.f.push_back(-(Expr(2 * p.l1) * t - Expr(p.l2)));
  c.f.push_back(f3);
  return c;
}

DbhMode parse_dbh_mode(const std::string& text) {
  if (text == "b0_zero") return DbhMode::B0Zero;
  if (text == "b0_const") return DbhMode::B0Const;
  if (text == "b0_linear") return DbhMode::B0Linear;
  throw Error(ErrorKind::BadParams, "unknown DBH mode '" + text + "'");
}

namespace {

OpaqueFunctionPtr fixture(const Table1Params& p, const char* name) {
  OpaqueFunctionPtr f = p.registry ? p.registry->find(name) : nullptr;
  if (!f) throw Error(ErrorKind::FixtureMissing, std::string("special function '") + name + "' is not registered");
  return f;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

void check_row(Table1Row row, const Table1Params& p) {
  if (p.a == 0) throw Error(ErrorKind::BadParams, "Table 1 rows need a != 0");
  if (row == Table1Row::RationalPoleSq && p.b == 0) throw Error(ErrorKind::BadParams, "power-law row needs b != 0");
  if (row == Table1Row::RationalPole && p.k <= 0) throw Error(ErrorKind::BadParams, "Bessel row needs k > 0");
}

}  // namespace

std::optional<std::array<Rational, 2>> table1_rational_exponents(const Table1Params& p) {
  auto root = rational_sqrt(p.a * p.a - 4 * p.k);
  if (!root) return std::nullopt;
  return std::array<Rational, 2>{(p.a + *root) / p.a, (p.a - *root) / p.a};
}

Expr table1_eta(Table1Row row, const Table1Params& p, Symbol time) {
  check_row(row, p);
  Expr lin = Expr(p.a) * Expr(time) + Expr(p.b);
  switch (row) {
    case Table1Row::RationalPole: return Expr(p.k) / lin;
    case Table1Row::RationalPoleSq: return Expr(p.k) / (lin * lin);
    case Table1Row::Linear: return lin;
  }
  return Expr(0);
}

Expr table1_f3(Table1Row row, const Table1Params& p, Symbol time) {
  check_row(row, p);
  Expr t(time);
  Expr lin = Expr(p.a) * t + Expr(p.b);
  double a = p.a.get_d();
  double b = p.b.get_d();
  switch (row) {
    case Table1Row::RationalPole: {
      // z = 2 sqrt(k (at+b)) / a, built as J(alpha * sqrt(at+b))
      double alpha = 2.0 * std::sqrt(p.k.get_d()) / a;
      Expr root = sqrt(lin);
      Expr j = call(fn::affine(fixture(p, "J1"), alpha, 0.0), root);
      Expr y = call(fn::affine(fixture(p, "Y1"), alpha, 0.0), root);
      return Expr(p.k) + lin * (Expr(p.c1) * j * j + Expr(p.c2) * y * y + Expr(p.c3) * j * y);
    }
    case Table1Row::RationalPoleSq: {
      Expr u = lin / Expr(p.a);
      Expr out = -(Expr(p.k * p.a / p.b) * t) + Expr(p.c3) * lin;
      if (auto ex = table1_rational_exponents(p)) {
        out += Expr(p.c1) * power(u, (*ex)[0]) + Expr(p.c2) * power(u, (*ex)[1]);
      } else {
        double disc = a * a - 4.0 * p.k.get_d();
        if (disc < 0) throw Error(ErrorKind::BadParams, "power-law row needs a^2 >= 4k");
        double root = std::sqrt(disc);
        out += Expr(p.c1) * call(fn::power_real((a + root) / a), u) + Expr(p.c2) * call(fn::power_real((a - root) / a), u);
      }
      return out;
    }
    case Table1Row::Linear: {
      // z = -(at+b)/a^(2/3) = alpha t + beta
      double alpha = -std::cbrt(a);
      double beta = -b / std::cbrt(a * a);
      Expr ai = call(fn::affine(fixture(p, "AiryA"), alpha, beta), t);
      Expr bi = call(fn::affine(fixture(p, "AiryB"), alpha, beta), t);
      return Expr(p.k) + Expr(p.c1) * ai * ai + Expr(p.c2) * bi * bi + Expr(p.c3) * ai * bi;
    }
  }
  return Expr(0);
}

SymmetryCandidate table1_candidate(Table1Row row, const Table1Params& p, Symbol time) {
  Expr f3 = table1_f3(row, p, time);
  Expr eta = table1_eta(row, p, time);
  Expr f2 = differentiate(f3, time);
  Expr f1 = Expr(Rational(1, 2)) * differentiate(f2, time) + eta * f3;
  SymmetryCandidate c;
  c.time = time;
  c.label = "table1";
  c.f = {Expr(p.k), f1, f2, f3};
  return c;
}

Table1Substituted table1_power_law_substituted(const Table1Params& p, Symbol s) {
  check_row(Table1Row::RationalPoleSq, p);
  auto ex = table1_rational_exponents(p);
  if (!ex) throw Error(ErrorKind::BadParams, "exponents are irrational for these a, k");
  mpz_class q = 1;
  for (const auto& e : *ex) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), e.get_den().get_mpz_t());
  long ql = q.get_si();
  Expr sv(s);
  auto spow = [&](const Rational& e) {
    Rational n = e * Rational(q);
    return sv.pow(static_cast<int>(n.get_num().get_si()));
  };
  Table1Substituted out;
  out.s = s;
  out.q = ql;
  Expr u = sv.pow(static_cast<int>(ql));
  Expr t = (Expr(p.a) * u - Expr(p.b)) / Expr(p.a);
  Expr lin = Expr(p.a) * u;
  out.f0 = Expr(p.k);
  out.eta = Expr(p.k) / (lin * lin);
  out.f3 = -(Expr(p.k * p.a / p.b) * t) + Expr(p.c1) * spow((*ex)[0]) + Expr(p.c2) * spow((*ex)[1]) + Expr(p.c3) * lin;
  out.d = Derivation{s, Expr(1) / (Expr(ql) * sv.pow(static_cast<int>(ql - 1)))};
  return out;
}

}  // namespace liesym
