#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "liesym/parse.hpp"
#include "liesym/vectorfield.hpp"

using namespace liesym;

namespace {

VectorField F(const std::vector<Symbol>& vars, std::initializer_list<const char*> comps) {
  std::vector<Expr> e;
  for (const char* c : comps) e.push_back(parse_expr(c));
  return VectorField(vars, std::move(e));
}

Expr random_poly(std::mt19937_64& rng, const std::vector<Symbol>& vars, int max_degree) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  Expr out(0);
  for (int k = 0; k < 4; ++k) {
    Expr term(coef(rng));
    int d = deg(rng);
    for (int i = 0; i < d; ++i) term *= Expr(vars[pick(rng)]);
    out += term;
  }
  return out;
}

VectorField random_field(std::mt19937_64& rng, const std::vector<Symbol>& vars, int max_degree) {
  std::vector<Expr> c;
  for (std::size_t i = 0; i < vars.size(); ++i) c.push_back(random_poly(rng, vars, max_degree));
  return VectorField(vars, std::move(c));
}

}  // namespace

TEST_CASE("lie_bracket examples") {
  std::vector<Symbol> x{Symbol("x")};
  CHECK(identical(lie_bracket(F(x, {"1"}), F(x, {"x"})), F(x, {"1"})));
  CHECK(identical(lie_bracket(F(x, {"x^2"}), F(x, {"x"})), F(x, {"-x^2"})));

  std::vector<Symbol> xv{Symbol("x"), Symbol("v")};
  VectorField x1 = F(xv, {"v", "-(3*x*v + x^3)"});
  VectorField x6 = F(xv, {"2*x*(v + x^2)", "2*(v^2 - x^4)"});
  CHECK(lie_bracket(x1, x6).is_zero());
}

TEST_CASE("lie_bracket needs matching variables") {
  VectorField a = F({Symbol("x")}, {"1"});
  VectorField b = F({Symbol("y")}, {"1"});
  try {
    lie_bracket(a, b);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("autonomize") {
  Symbol t("t");
  std::vector<Symbol> xv{Symbol("x"), Symbol("v")};
  VectorField a = autonomize(F(xv, {"v", "0"}), t);
  CHECK(a.vars() == std::vector<Symbol>{t, xv[0], xv[1]});
  CHECK(identical(a, F({t, xv[0], xv[1]}, {"1", "v", "0"})));

  std::vector<Symbol> x{Symbol("x")};
  VectorField ric = autonomize(F(x, {"@eta(t) + x^2"}), t);
  CHECK(identical(ric, F({t, x[0]}, {"1", "@eta(t) + x^2"})));
  CHECK(identical(autonomize(VectorField::zero(x), t), F({t, x[0]}, {"1", "0"})));
}

TEST_CASE("prolong_first examples") {
  Symbol t("t"), x("x");
  JetVectorField p = prolong_first(F({x}, {"x"}), {t});
  const Symbol xt = p.space.jets[0][0];
  CHECK(identical(p.field, F({t, x, xt}, {"0", "x", xt.name().c_str()})));
  CHECK(identical(p.project(), F({t, x}, {"0", "x"})));

  JetVectorField q = prolong_first(F({x}, {"@f(t)"}), {t});
  CHECK(identical(q.field, F({t, x, xt}, {"0", "@f(t)", "@f'(t)"})));
}

TEST_CASE("prolong_first rejects fields with a time component") {
  Symbol t("t"), x("x");
  try {
    prolong_first(F({t, x}, {"1", "x"}), {t});
    FAIL("expected NotVertical");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotVertical);
  }
}

TEST_CASE("prolongation preserves brackets on random sl(2) pairs", "[property]") {
  Symbol t("t"), x("x");
  std::vector<Symbol> vars{x};
  std::vector<VectorField> sl2{F(vars, {"1"}), F(vars, {"x"}), F(vars, {"x^2"})};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    VectorField a = VectorField::zero(vars), b = VectorField::zero(vars);
    for (const auto& f : sl2) {
      // t-dependent coefficients exercise the d/dt part of the prolongation
      a = a + (Expr(c(rng)) + Expr(c(rng)) * Expr(t)) * f;
      b = b + (Expr(c(rng)) * Expr(t) * Expr(t) + Expr(c(rng))) * f;
    }
    JetVectorField pa = prolong_first(a, {t}), pb = prolong_first(b, {t});
    // [a,b] over (t,x) treats t as a parameter: both fields are vertical.
    VectorField ab = lie_bracket(a.embed({t, x}), b.embed({t, x}));
    std::vector<Expr> comps(ab.components().begin() + 1, ab.components().end());
    JetVectorField pab = prolong_first(VectorField(vars, comps), {t});
    VectorField lhs = lie_bracket(pa.field, pb.field);
    CHECK(identical(lhs, pab.field));
  }
}

TEST_CASE("bracket properties on random polynomial fields", "[property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 3;
    std::vector<Symbol> vars = make_symbols("y", n);
    VectorField X = random_field(rng, vars, 2), Y = random_field(rng, vars, 2), Z = random_field(rng, vars, 2);

    // antisymmetry
    CHECK(identical(lie_bracket(X, Y), -lie_bracket(Y, X)));

    // bilinearity over rationals
    Expr a(Rational(trial + 1, 3)), b(Rational(-2, trial + 1));
    CHECK(identical(lie_bracket(a * X + b * Y, Z), a * lie_bracket(X, Z) + b * lie_bracket(Y, Z)));

    // Jacobi
    VectorField jac = lie_bracket(lie_bracket(X, Y), Z) + lie_bracket(lie_bracket(Y, Z), X) +
                      lie_bracket(lie_bracket(Z, X), Y);
    CHECK(jac.is_zero());

    // Leibniz
    Expr g = random_poly(rng, vars, 2);
    CHECK(identical(lie_bracket(X, g * Y), X.apply(g) * Y + g * lie_bracket(X, Y)));
  }
}

TEST_CASE("total derivative on the jet space") {
  Symbol t1("t1"), t2("t2"), x("x");
  JetSpace js = make_jet_space({t1, t2}, {x});
  Expr g = parse_expr("t1*x^2");
  Expr d1 = total_derivative(js, g, 0);
  CHECK(identical(d1, parse_expr("x^2") + Expr(2) * Expr(t1) * Expr(x) * Expr(js.jets[0][0])));
  Expr d2 = total_derivative(js, g, 1);
  CHECK(identical(d2, Expr(2) * Expr(t1) * Expr(x) * Expr(js.jets[0][1])));
}
