// Acceptance report: one PASS/FAIL line per criterion. argv[1] overrides the
// CLI binary used by the determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <sys/wait.h>

#include "liesym/catalog.hpp"
#include "test_support.hpp"

using namespace liesym;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Expr P(const char* s) { return parse_expr(s); }

Outcome ac1() {
  Outcome o;
  auto t0 = Clock::now();
  std::vector<std::pair<std::string, CatalogParams>> sl2{
      {"riccati", {}},      {"cayley_klein", {{"iota2", "-1"}}}, {"cayley_klein", {{"iota2", "0"}}},
      {"cayley_klein", {{"iota2", "1"}}}, {"quaternionic", {}}, {"dbh", {}},
      {"kummer_schwarz", {}}, {"sl2_generic", {}}};
  for (const auto& [name, params] : sl2) {
    auto basis = make_entry(name, params).basis();
    StructureTensor c = extract_structure_constants(basis);
    bool closed = true;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) closed = closed && closure_residual(basis, c, a, b).is_zero();
    o.require(c == sl2_tensor() && !c.numerical && closed, name);
  }
  for (const char* name : {"aff_generic", "buchdahl"}) {
    StructureTensor c = extract_structure_constants(make_entry(name).basis());
    o.require(c == aff_tensor() && !c.numerical, name);
  }
  auto pi = make_entry("painleve_ince").basis();
  StructureTensor c = extract_structure_constants(pi);
  o.require(c.dim() == 8 && !c.numerical && jacobi_residual(c) == 0, "painleve_ince closed with Jacobi 0");
  o.require(lie_bracket(pi[0], pi[5]).is_zero(), "[X1,X6] = 0");
  double s = seconds_since(t0);
  o.require(s < 5.0, "runtime");
  o.detail << "12 bases exact, painleve_ince r=8, " << s << " s";
  return o;
}

Outcome ac2() {
  Outcome o;
  auto t0 = Clock::now();
  auto rhs = [](const std::string& name, CatalogParams params = {}) {
    LieSystemDef sys = *make_entry(name, params).system;
    sys.gauge_b0 = P("@b0(t)");
    return build_symmetry_system(sys).field().components();
  };
  auto eq = [&](const Expr& got, const char* want, const std::string& what) {
    o.require((got - P(want)).is_structurally_zero(), what);
  };
  auto sl = rhs("sl2_generic");
  eq(sl[0], "@b0(t)", "sl2 f0");
  eq(sl[1], "f0*@b1'(t) + f1*@b2(t) - f2*@b1(t) + @b0(t)*@b1(t)", "sl2 f1");
  eq(sl[2], "f0*@b2'(t) + 2*f1*@b3(t) - 2*f3*@b1(t) + @b0(t)*@b2(t)", "sl2 f2");
  eq(sl[3], "f0*@b3'(t) + f2*@b3(t) - f3*@b2(t) + @b0(t)*@b3(t)", "sl2 f3");
  auto ric = rhs("riccati");
  eq(ric[0], "@b0(t)", "riccati f0");
  eq(ric[1], "f0*@eta'(t) - @eta(t)*f2 + @b0(t)*@eta(t)", "riccati f1");
  eq(ric[2], "2*f1 - 2*@eta(t)*f3", "riccati f2");
  eq(ric[3], "f2 + @b0(t)", "riccati f3");
  auto aff = rhs("aff_generic");
  eq(aff[0], "@b0(t)", "aff f0");
  eq(aff[1], "f0*@a'(t) + @a(t)*@b0(t) + @b(t)*f1 - @a(t)*f2", "aff f1");
  eq(aff[2], "f0*@b'(t) + @b(t)*@b0(t)", "aff f2");
  double s = seconds_since(t0);
  o.require(s < 1.0, "runtime");
  o.detail << "sl2_generic, riccati, aff_generic term-by-term, " << s << " s";
  return o;
}

std::size_t span_dim(const SymmetryBasis& sb) {
  std::size_t r = sb.y.size();
  RMatrix m;
  for (const auto& y : sb.y) {
    std::vector<Rational> row;
    for (std::size_t g = 0; g <= r; ++g)
      for (std::size_t b = 0; b <= r; ++b) row.push_back(*differentiate(y[g], sb.f[b]).constant_value());
    m.push_back(std::move(row));
  }
  return rank(m, (r + 1) * (r + 1));
}

Outcome ac3() {
  Outcome o;
  std::size_t checked = 0;
  auto br = [&](const VectorField& a, const VectorField& b, const VectorField& want, const std::string& what) {
    ++checked;
    o.require(identical(lie_bracket(a, b), want), what);
  };
  {
    SymmetryBasis sb = symmetry_system_basis(sl2_tensor());
    const auto &Y = sb.y, &Z = sb.z, &W = sb.w;
    VectorField zero = VectorField::zero(sb.f);
    br(Y[0], Y[1], Y[0], "[Y1,Y2]");
    br(Y[0], Y[2], Expr(2) * Y[1], "[Y1,Y3]");
    br(Y[1], Y[2], Y[2], "[Y2,Y3]");
    std::vector<std::vector<VectorField>> yz{{zero, zero, Z[1], Expr(2) * Z[2]},
                                             {zero, -Z[1], zero, Z[3]},
                                             {zero, Expr(-2) * Z[2], -Z[3], zero}};
    std::vector<std::vector<VectorField>> yw{
        {zero, W[0], Expr(2) * W[1]}, {-W[0], zero, W[2]}, {Expr(-2) * W[1], -W[2], zero}};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 4; ++j) br(Y[i], Z[j], yz[i][j], "sl2 [Y,Z]");
      for (std::size_t j = 0; j < 3; ++j) br(Y[i], W[j], yw[i][j], "sl2 [Y,W]");
    }
    for (std::size_t j = 0; j < 3; ++j) {
      br(Z[0], W[j], Z[j + 1], "[Z0,W]");
      for (std::size_t i = 1; i < 4; ++i) br(Z[i], W[j], zero, "[Zi,Wj]");
      for (std::size_t i = 0; i < 3; ++i) br(W[i], W[j], zero, "[Wi,Wj]");
    }
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) br(Z[a], Z[b], zero, "[Za,Zb]");
  }
  {
    SymmetryBasis sb = symmetry_system_basis(aff_tensor());
    const auto &Y = sb.y, &Z = sb.z, &W = sb.w;
    VectorField zero = VectorField::zero(sb.f);
    br(Y[0], Y[1], Y[0], "aff [Y1,Y2]");
    br(Z[0], W[0], Z[1], "aff [Z0,W1]");
    br(Z[0], W[1], Z[2], "aff [Z0,W2]");
    for (std::size_t i = 1; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) br(Z[i], W[j], zero, "aff [Zi,Wj]");
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) br(Z[a], Z[b], zero, "aff [Za,Zb]");
    br(Y[0], W[0], zero, "aff [Y1,W1]");
    br(Y[0], W[1], W[0], "aff [Y1,W2]");
    br(Y[0], Z[0], zero, "aff [Y1,Z0]");
    br(Y[0], Z[1], zero, "aff [Y1,Z1]");
    br(Y[0], Z[2], Z[1], "aff [Y1,Z2]");
    br(Y[1], W[0], -W[0], "aff [Y2,W1]");
    br(Y[1], W[1], zero, "aff [Y2,W2]");
    br(Y[1], Z[0], zero, "aff [Y2,Z0]");
    br(Y[1], Z[1], -Z[1], "aff [Y2,Z1]");
    br(Y[1], Z[2], zero, "aff [Y2,Z2]");
  }
  std::mt19937_64 rng(42);
  std::ostringstream dims;
  for (int trial = 0; trial < 5; ++trial) {
    auto alg = liesym::testing::random_algebra(rng);
    o.require(jacobi_residual(alg.c) == 0, "random tensor Jacobi");
    std::size_t got = span_dim(symmetry_system_basis(alg.c));
    std::size_t want = alg.c.dim() - alg.center_dim;
    o.require(got == want, "dim V_L for " + alg.name);
    o.require(center(alg.c).size() == alg.center_dim, "center of " + alg.name);
    dims << (trial ? ", " : "") << alg.name << ":" << got;
  }
  o.detail << checked << " brackets exact; dim V_L " << dims.str();
  return o;
}

Outcome ac4() {
  Outcome o;
  auto t0 = Clock::now();
  LieSystemDef sys = *make_entry("dbh").system;
  ResidualGrid g = make_grid(sys, 0.0, 1.0, 20, 20, 42);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  auto q = [&] { return Rational(num(rng), den(rng)); };
  double worst = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    DbhFamilyParams p{q(), q(), q(), q(), q()};
    for (DbhMode m : {DbhMode::B0Zero, DbhMode::B0Const, DbhMode::B0Linear}) {
      ResidualReport r = symmetry_residual(dbh_symmetry_family(m, p), sys, g);
      worst = std::max(worst, r.max_abs);
      o.require(m == DbhMode::B0Zero ? r.exact_zero : (r.exact_zero || r.max_abs <= 1e-9), "DBH family residual");
    }
  }
  double s = seconds_since(t0);
  o.require(s < 10.0, "runtime");
  o.detail << "30 family draws, max residual " << worst << ", " << s << " s";
  return o;
}

Outcome ac5() {
  Outcome o;
  Table1Params p;
  p.a = 1;
  p.b = 1;
  p.k = Rational(3, 16);
  p.c1 = 2;
  p.c2 = -1;
  p.c3 = 3;
  o.require(p.a * p.a - 4 * p.k == Rational(1, 4), "a^2 - 4k = 1/4");
  auto ex = table1_rational_exponents(p);
  o.require(ex && (*ex)[0] == Rational(3, 2) && (*ex)[1] == Rational(1, 2), "exponents 3/2, 1/2");
  Table1Substituted sub = table1_power_law_substituted(p);
  o.require(riccati_f3_ode_residual(sub.f0, sub.f3, sub.eta, Expr(0), sub.d).is_structurally_zero(),
            "power-law residual exactly 0");
  o.detail << "power-law residual 0 (exact)";
  for (Table1Row row : {Table1Row::RationalPole, Table1Row::Linear}) {
    Table1Params q;
    q.c1 = Rational(1, 2);
    q.c2 = Rational(1, 3);
    q.c3 = Rational(1, 5);
    SymmetryCandidate y = table1_candidate(row, q);
    LieSystemDef sys = *make_entry("riccati", {{"eta", table1_eta(row, q).to_string()}}).system;
    LieSystemDef sym = build_symmetry_system(sys);
    std::vector<double> f0;
    for (const auto& e : y.f) f0.push_back(eval(e, {{sys.time, 0.1}}));
    Trajectory tr = integrate(sym, f0, 0.1, 1.0, 1e-3);
    double sup = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k)
      for (std::size_t i = 0; i < 4; ++i) sup = std::max(sup, std::abs(tr.y[k][i] - eval(y.f[i], {{sys.time, tr.t[k]}})));
    o.require(sup <= 1e-5, row == Table1Row::Linear ? "Airy row" : "Bessel row");
    o.detail << (row == Table1Row::Linear ? "; Airy" : "; Bessel") << " sup " << sup;
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  LieSystemDef sys = *make_entry("riccati", {{"eta", "t"}}).system;
  Symbol t = sys.time;
  std::vector<Symbol> s = make_symbols("s", 3);
  Expr s0(s[0]), s1(s[1]), s2(s[2]);
  // f0''' + 4 b0 eta + 2 eta' f0 = 0 with eta = t and b0 = f0'
  std::vector<Expr> gamma{s1, s2, Expr(-4) * Expr(t) * s1 - Expr(2) * s0};
  std::vector<Symbol> slots{t, s[0], s[1], s[2]};
  std::vector<CompiledExpr> cg;
  for (const auto& g : gamma) cg.emplace_back(g, slots);
  RhsFn rhs = [&cg](double tv, std::span<const double> y, std::span<double> dy) {
    double buf[] = {tv, y[0], y[1], y[2]};
    for (std::size_t i = 0; i < 3; ++i) dy[i] = cg[i](buf);
  };
  Trajectory tr = integrate_rk4(rhs, {1.0, 0.0, 0.5}, 0.0, 1.0, 1e-3);
  auto F = tabulated_state("f0", tr, gamma, s, t, 2);
  SymmetryCandidate y;
  y.time = t;
  y.sampled = true;
  y.f = {F[0], Expr(Rational(-1, 2)) * F[2], -F[1], Expr(0)};
  ResidualReport r = symmetry_residual(y, sys, make_grid(sys, 0.0, 1.0, 20, 20, 42));
  o.require(r.max_abs <= 1e-6, "corollary residual");
  o.detail << "eta=t, b0=f0' (see README), residual " << r.max_abs;
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> c(-3, 3);
  Symbol t("t");
  double worst = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    Expr a = Expr(c(rng)) + Expr(c(rng)) * Expr(t) + Expr(c(rng)) * Expr(t) * Expr(t);
    Expr b = Expr(c(rng)) + Expr(c(rng)) * Expr(t) + Expr(c(rng)) * Expr(t) * Expr(t);
    LieSystemDef sys = *make_entry("aff_generic", {{"a", a.to_string()}, {"b", b.to_string()}}).system;
    SymmetryCandidate y = aff_closed_form(a, b, Rational(c(rng)), Rational(c(rng)), Rational(c(rng)), 1.0);
    ResidualReport r = symmetry_residual(y, sys, make_grid(sys, 0.0, 1.0, 20, 5, 42 + draw));
    worst = std::max(worst, r.max_abs);
    o.require(r.max_abs <= 1e-6, "aff closed form draw " + std::to_string(draw));
  }
  o.detail << "10 draws, max residual " << worst;
  return o;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double path_spread(const PDELieSystemDef& sys) {
  std::vector<TimePath> paths{{{{0, 0}, {1, 1}}, 400}, {{{0, 0}, {1, 0}, {1, 1}}, 400}, {{{0, 0}, {0, 1}, {1, 1}}, 400}};
  std::vector<std::vector<double>> ends;
  for (const auto& p : paths) ends.push_back(integrate_along_path(sys, {0.1}, p).back());
  return std::max({max_diff(ends[0], ends[1]), max_diff(ends[0], ends[2]), max_diff(ends[1], ends[2])});
}

Outcome ac8() {
  Outcome o;
  PDELieSystemDef sys = *make_entry("partial_riccati").pde;
  o.require(curvature_residual(sys).exact_zero, "fixture curvature 0");
  double spread = path_spread(sys);
  o.require(spread <= 1e-6, "3-path agreement");
  PDELieSystemDef sym = build_pde_symmetry_system(sys);
  o.require(curvature_residual(sym).integrable(), "symmetry-system curvature");

  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> lam(1, 6), num(-2, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::array<std::array<Rational, 3>, 3> prof;
    Rational lambda(lam(rng), 3);
    for (auto& row : prof)
      for (auto& v : row) v = Rational(num(rng), 4);
    PDELieSystemDef inst = partial_riccati(lambda, prof);
    o.require(curvature_residual(inst).exact_zero, "random instance integrable");
    PDELieSystemDef isym = build_pde_symmetry_system(inst);
    std::vector<Expr> f = sampled_pde_candidate(isym, {0.0, 0.0}, {1.0, 0.5, -0.25});
    PDESymmetryReport rep = pde_symmetry_residual(pde_candidate_field(f, inst), inst, make_pde_grid(inst, 3, 4, 42 + trial));
    worst = std::max(worst, rep.agreement);
    o.require(rep.agreement <= 1e-9, "oracle agreement");
  }
  PDELieSystemDef pert = *make_entry("partial_riccati", {{"perturb", "1/2"}}).pde;
  double pspread = path_spread(pert);
  o.require(pspread >= 1e-3, "non-integrable control disagrees");
  o.detail << "spread " << spread << ", oracle agreement " << worst << ", control spread " << pspread;
  return o;
}

Outcome ac9() {
  Outcome o;
  std::vector<Symbol> x{Symbol("x")};
  LieSystemDef lin;
  lin.basis = {liesym::testing::field(x, {"x"})};
  lin.coeffs = {Expr(1)};
  double e1 = std::abs(integrate(lin, {1.0}, 0.0, 1.0, 0.1).back()[0] - std::exp(1.0));
  double e2 = std::abs(integrate(lin, {1.0}, 0.0, 1.0, 0.05).back()[0] - std::exp(1.0));
  double ratio = e1 / e2;
  o.require(ratio >= 12.0 && ratio <= 20.0, "ratio in [12,20]");
  o.detail << "dx/dt = x, h = 0.1 -> 0.05, ratio " << ratio;
  return o;
}

Outcome ac10() {
  Outcome o;
  LieSystemDef sys = *make_entry("dbh").system;
  Trajectory sol = integrate(sys, {1.2, 1.5, 1.8}, 0.0, 0.05, 1e-3);
  SymmetryCandidate y = dbh_symmetry_family(DbhMode::B0Const, {1, 2, 1, 1, Rational(1, 2)});
  TransportReport good = flow_transport_check(sys, y, sol, 1e-3);
  o.require(good.ratio >= 3.2 && good.ratio <= 4.8 && !good.flagged, "exact family ratio");
  SymmetryCandidate bad = y;
  bad.f[1] = bad.f[1] + Expr(Rational(1, 10));
  TransportReport rep = flow_transport_check(sys, bad, sol, 1e-3);
  o.require(rep.ratio <= 2.6 && rep.flagged, "corrupted candidate flagged");
  o.detail << "exact ratio " << good.ratio << ", corrupted ratio " << rep.ratio;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome ac11(const std::string& cli_arg) {
  Outcome o;
  fs::path cli = cli_arg.empty() ? fs::path() : fs::absolute(cli_arg);
  if (cli.empty() || !fs::exists(cli)) {
    o.require(false, "CLI binary not found: '" + cli_arg + "'");
    return o;
  }
  struct Cmd {
    std::string args;
    int rc;
    std::vector<std::string> files;
  };
  std::vector<Cmd> suite{
      {"list", 0, {}},
      {"show riccati", 0, {}},
      {"check-algebra --catalog painleve_ince", 0, {}},
      {"symmetrize --catalog riccati --param eta=t --csv ric.csv --report ric.json --gnuplot ric.gp", 0,
       {"ric.csv", "ric.json", "ric.gp"}},
      {"symmetrize --catalog kummer_schwarz --param eta=t --t1 0.5 --report ks.json", 0, {"ks.json"}},
      {"verify --catalog dbh --x0 1.2,1.5,1.8 --report dbh.json", 0, {"dbh.json"}},
      {"integrate --catalog riccati --param eta=1 --x0 0 --csv int.csv", 0, {"int.csv"}},
      {"pde --catalog partial_riccati --report pde.json --csv pde.csv", 0, {"pde.json", "pde.csv"}},
      {"pde --catalog partial_riccati --param perturb=1/2", 1, {}},
  };
  fs::path root = fs::temp_directory_path() / "liesym_acceptance";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    fs::path dir = root / run;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < suite.size(); ++k) {
      std::string out = "out" + std::to_string(k) + ".txt";
      std::string cmd = "cd \"" + dir.string() + "\" && LIESYM_SEED=42 \"" + cli.string() + "\" " + suite[k].args +
                        " > " + out + " 2>&1";
      int status = std::system(cmd.c_str());
      int rc = status != -1 && WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      o.require(rc == suite[k].rc, suite[k].args + " exited " + std::to_string(rc));
      for (const auto& f : suite[k].files) o.require(fs::exists(dir / f), f + " written");
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    fs::path other = root / "b" / entry.path().filename();
    ++files;
    o.require(fs::exists(other) && slurp(entry.path()) == slurp(other), entry.path().filename().string());
  }
  for (const auto& entry : fs::directory_iterator(root / "b")) {
    o.require(fs::exists(root / "a" / entry.path().filename()), entry.path().filename().string() + " only in one run");
  }
  o.detail << suite.size() << " commands, " << files << " files byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : LIESYM_CLI_PATH;
  std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"AC1 structure constants", ac1},
      {"AC2 symmetry-system identity", ac2},
      {"AC3 symmetry-system brackets and dim V_L", ac3},
      {"AC4 DBH families", ac4},
      {"AC5 Table 1 rows", ac5},
      {"AC6 Riccati f3 = 0 symmetries", ac6},
      {"AC7 Aff(R) closed form", ac7},
      {"AC8 PDE suite", ac8},
      {"AC9 RK4 order", ac9},
      {"AC10 flow transport", ac10},
      {"AC11 determinism", [&] { return ac11(cli); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
