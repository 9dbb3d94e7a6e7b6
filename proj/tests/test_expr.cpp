#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "liesym/functions.hpp"
#include "liesym/parse.hpp"

using namespace liesym;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Expr P(const char* s) { return parse_expr(s); }

bool same(const Expr& a, const Expr& b) { return identical(a, b); }

// Random polynomial in the given symbols with small integer coefficients.
Expr random_poly(std::mt19937_64& rng, const std::vector<Symbol>& vars, int max_degree) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  Expr out(0);
  for (int k = 0; k < 5; ++k) {
    Expr term(coef(rng));
    int d = deg(rng);
    for (int i = 0; i < d; ++i) term *= Expr(vars[pick(rng)]);
    out += term;
  }
  return out;
}

}  // namespace

TEST_CASE("differentiate: power, product and sum rules") {
  Symbol x("x"), y("y"), t("t");
  CHECK(same(differentiate(P("x^2"), x), P("2*x")));
  CHECK(same(differentiate(P("x^2*y + y^3"), y), P("x^2 + 3*y^2")));

  Expr e = P("@eta(t)*t");
  Expr d = differentiate(e, t);
  CHECK(same(d, P("@eta(t) + t*@eta'(t)")));
}

TEST_CASE("differentiate: rational functions stay in normal form") {
  Symbol x("x");
  CHECK(same(differentiate(P("1/x"), x), P("-1/x^2")));
  CHECK(same(differentiate(P("3/2*v^2/x - 2*c0*x^3"), x), P("-3/2*v^2/x^2 - 6*c0*x^2")));
}

TEST_CASE("differentiate: opaque leaf without derivatives") {
  OpaqueFunction f;
  f.name = "frozen";
  f.max_order = 0;
  f.evaluate = [](std::span<const int>, std::span<const double> a) { return a[0]; };
  auto fp = std::make_shared<const OpaqueFunction>(f);
  Symbol t("t");
  Expr e = Expr::apply(fp, {Expr(t)});
  CHECK_THROWS_MATCHES(differentiate(e, t), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& err) {
                         return err.kind() == ErrorKind::OpaqueNoDerivative;
                       }));
  // Differentiating in a variable the leaf does not depend on is fine.
  CHECK(differentiate(e, Symbol("x")).is_structurally_zero());
}

TEST_CASE("eval") {
  Symbol x("x"), y("y");
  CHECK(eval(P("x^2 + y^2"), {{x, 3.0}, {y, 4.0}}) == 25.0);
  CHECK_THROWS_AS(eval(P("1/x"), {{x, 0.0}}), Error);
  try {
    eval(P("1/x"), {{x, 0.0}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
  try {
    eval(P("x + y"), {{x, 1.0}});
    FAIL("expected UnboundSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundSymbol);
  }
  Symbol q0("q0"), q1("q1"), q2("q2"), q3("q3");
  CHECK(eval(P("q0^2 - q1^2 - q2^2 - q3^2"), {{q0, 1}, {q1, 1}, {q2, 0}, {q3, 0}}) == 0.0);
}

TEST_CASE("eval converts exact subtrees once") {
  Symbol x("x");
  // 1/3 + 1/3 + 1/3 is exactly 1 before conversion
  CHECK(eval(P("1/3*x + 1/3*x + 1/3*x"), {{x, 1.0}}) == 1.0);
}

TEST_CASE("is_zero tri-state") {
  CHECK(is_zero(P("x*y - y*x")).state == ZeroState::Zero);
  CHECK(is_zero(P("x^2 - x")).state == ZeroState::NonZero);
  CHECK(is_zero(P("@eta(t)*0")).state == ZeroState::Zero);
  CHECK(is_zero(P("(x+1)^2 - x^2 - 2*x - 1")).state == ZeroState::Zero);
  CHECK(is_zero(P("1/(x-1) - 1/(x+1) - 2/(x^2-1)")).state == ZeroState::Zero);

  // sin^2 + cos^2 - 1 is zero but the core cannot decide it symbolically.
  ZeroTest z = is_zero(P("sin(t)^2 + cos(t)^2 - 1"));
  CHECK(z.state == ZeroState::Unknown);
  CHECK(z.evidence_samples == 32);
  CHECK(z.evidence_max_abs < 1e-12);

  ZeroTest nz = is_zero(P("@eta(t) + 5"));
  CHECK(nz.state == ZeroState::Unknown);
  CHECK(nz.evidence_max_abs > 1.0);
}

TEST_CASE("parser") {
  Symbol x("x");
  CHECK(same(P("2^3"), Expr(8)));
  CHECK(same(P("-x^2"), -(Expr(x) * Expr(x))));
  CHECK(same(P("0.25*x"), Expr(Rational(1, 4)) * Expr(x)));
  ParseContext ctx;
  ctx.params["c0"] = Rational(1, 2);
  CHECK(same(parse_expr("c0*x", ctx), P("x/2")));
  CHECK_THROWS_AS(P("x +"), Error);
  CHECK_THROWS_AS(P("@nosuch(t)"), Error);
  CHECK_THROWS_AS(P("foo(t)"), Error);
  CHECK_THROWS_AS(P("(x"), Error);
}

TEST_CASE("sqrt and rational powers are opaque power leaves") {
  Symbol t("t");
  Expr s = sqrt(P("t + 1"));
  CHECK(s.has_opaque());
  CHECK_THAT(eval(s, {{t, 3.0}}), WithinRel(2.0, 1e-15));
  CHECK_THAT(eval(differentiate(s, t), {{t, 3.0}}), WithinRel(0.25, 1e-15));
  CHECK(same(power(P("t"), Rational(2)), P("t^2")));
  // integer exponents never leave the polynomial fragment
  CHECK_FALSE(power(P("t + 1"), Rational(-2)).has_opaque());
}

TEST_CASE("special function fixtures") {
  auto& reg = FunctionRegistry::builtin();
  for (const char* n : {"J1", "Y1", "AiryA", "AiryB", "sin", "cos", "exp", "log"}) CHECK(reg.contains(n));
  Symbol t("t");
  CHECK_THAT(eval(P("@J1(t)"), {{t, 1.0}}), WithinAbs(0.44005058574493355, 1e-14));
  CHECK_THAT(eval(P("@Y1(t)"), {{t, 1.0}}), WithinAbs(-0.7812128213002887, 1e-14));
  CHECK_THAT(eval(P("@AiryA(t)"), {{t, 0.0}}), WithinAbs(0.3550280538878172, 1e-14));
  CHECK_THAT(eval(P("@AiryB(t)"), {{t, 0.0}}), WithinAbs(0.6149266274460007, 1e-14));
  // Airy equation y'' = t y holds for the evaluators
  for (double v : {-2.0, -0.5, 0.7}) {
    CHECK_THAT(eval(P("@AiryA''(t)"), {{t, v}}), WithinAbs(v * eval(P("@AiryA(t)"), {{t, v}}), 1e-13));
  }
}

TEST_CASE("compiled evaluation agrees with eval") {
  Symbol x("x"), t("t");
  Expr e = P("(3/2*x^2 + @eta(t)*x)/(x + 2)");
  std::vector<Symbol> slots{t, x};
  CompiledExpr c(e, slots);
  for (double tv : {0.0, 0.3, 1.7}) {
    for (double xv : {-1.0, 0.5, 3.0}) {
      double vals[] = {tv, xv};
      CHECK_THAT(c(vals), WithinRel(eval(e, {{t, tv}, {x, xv}}), 1e-14));
    }
  }
}

TEST_CASE("linear_rows extracts coefficient equations") {
  Symbol x("x"), a("a"), b("b");
  std::vector<Symbol> unk{a, b};
  auto rows = linear_rows(P("a*x^2 + b*x + 3*x - a"), unk);
  // x^2: a ; x: b + 3 ; 1: -a
  CHECK(rows.size() == 3);
  CHECK_THROWS_AS(linear_rows(P("a*b"), unk), Error);
}

TEST_CASE("property: derivative matches central finite difference", "[property]") {
  std::mt19937_64 rng(11);
  Symbol x("x"), y("y"), z("z");
  std::vector<Symbol> vars{x, y, z};
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Expr p = random_poly(rng, vars, 4);
    Env pt{{x, u(rng)}, {y, u(rng)}, {z, u(rng)}};
    double h = 1e-5;
    Env lo = pt, hi = pt;
    lo[x] -= h;
    hi[x] += h;
    double fd = (eval(p, hi) - eval(p, lo)) / (2 * h);
    double exact = eval(differentiate(p, x), pt);
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("property: normal form soundness and linearity", "[property]") {
  std::mt19937_64 rng(12);
  Symbol x("x"), y("y");
  std::vector<Symbol> vars{x, y};
  for (int trial = 0; trial < 50; ++trial) {
    Expr p = random_poly(rng, vars, 3), q = random_poly(rng, vars, 3);
    CHECK(is_zero(p * q - q * p).state == ZeroState::Zero);
    Expr alpha(Rational(static_cast<long>(trial) - 25, 7)), beta(Rational(3, static_cast<long>(trial) + 1));
    Expr lhs = differentiate(alpha * p + beta * q, x);
    Expr rhs = alpha * differentiate(p, x) + beta * differentiate(q, x);
    CHECK(identical(lhs, rhs));
  }
}

TEST_CASE("property: differentiation lowers polynomial degree", "[property]") {
  Symbol x("x");
  Expr p(0);
  for (int d = 0; d <= 6; ++d) p += Expr(d + 1) * Expr(x).pow(d);
  Expr q = p;
  for (int k = 0; k <= 7; ++k) q = differentiate(q, x);
  CHECK(q.is_structurally_zero());
}
