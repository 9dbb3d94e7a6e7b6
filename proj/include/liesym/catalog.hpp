#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/functions.hpp"
#include "liesym/liesys.hpp"
#include "liesym/pdesys.hpp"

namespace liesym {

// Raw parameter text, e.g. {"eta", "@eta(t)"} or {"c0", "1/2"}.
using CatalogParams = std::map<std::string, std::string, std::less<>>;

struct KnownFamily {
  std::string name;
  SymmetryCandidate candidate;
  bool exact = true;  // expected to pass symmetry_residual symbolically
};

struct CatalogEntry {
  std::string name;
  std::string family;  // algebra tag, e.g. "sl(2,R)"
  std::string description;
  std::string excluded;  // empty when the system is regular everywhere
  std::optional<LieSystemDef> system;
  std::optional<PDELieSystemDef> pde;
  StructureTensor expected;
  std::vector<KnownFamily> families;

  const std::vector<VectorField>& basis() const { return system ? system->basis : pde->basis; }
};

struct CatalogInfo {
  std::string name;
  std::string family;
  std::string description;
  std::string params;  // accepted parameters with defaults
};

const std::vector<CatalogInfo>& catalog_info();
std::vector<std::string> catalog_names();

// Throws UnknownName for an unknown entry and BadParams for parameters the
// entry does not accept or cannot use.
CatalogEntry make_entry(const std::string& name, const CatalogParams& params = {});

StructureTensor painleve_ince_tensor();

enum class DbhMode { B0Zero, B0Const, B0Linear };

struct DbhFamilyParams {
  Rational l1, l2, l3, t0, c0;
};

// Closed-form symmetries of the classical DBH system for b0 = 0, c0, c0 t.
SymmetryCandidate dbh_symmetry_family(DbhMode mode, const DbhFamilyParams& p, Symbol time = Symbol("t"));
DbhMode parse_dbh_mode(const std::string& text);

// Riccati rows eta = k/(at+b), k/(at+b)^2, at+b with f0 = k.
enum class Table1Row { RationalPole, RationalPoleSq, Linear };

struct Table1Params {
  Rational a{1}, b{1}, k{1}, c1, c2, c3;
  const FunctionRegistry* registry = &FunctionRegistry::builtin();
};

Expr table1_eta(Table1Row row, const Table1Params& p, Symbol time = Symbol("t"));
// Special functions are looked up in p.registry (J1, Y1, AiryA, AiryB);
// absent ones raise FixtureMissing.
Expr table1_f3(Table1Row row, const Table1Params& p, Symbol time = Symbol("t"));
// f0 = k, f2 = f3', f1 = f3''/2 + eta f3.
SymmetryCandidate table1_candidate(Table1Row row, const Table1Params& p, Symbol time = Symbol("t"));

// The power-law row written in s with u = (at+b)/a = s^q, so rational
// exponents become integer powers. BadParams when sqrt(a^2-4k) is irrational.
struct Table1Substituted {
  Symbol s;
  Expr f0, f3, eta;
  Derivation d;  // d/dt in terms of s
  long q = 1;
};
Table1Substituted table1_power_law_substituted(const Table1Params& p, Symbol s = Symbol("s"));

// Exponents (a +- sqrt(a^2-4k))/a of the power-law row, if rational.
std::optional<std::array<Rational, 2>> table1_rational_exponents(const Table1Params& p);

// Partial Riccati with b_{a,2} = lambda p_a(u), b_{a,1} = p_a(u), u = t1 + lambda t2
// and p_a(u) = sum_k profile[a][k] u^k; perturb adds perturb * t1 to b_{1,2}.
PDELieSystemDef partial_riccati(const Rational& lambda, const std::array<std::array<Rational, 3>, 3>& profile,
                                const Rational& perturb = 0);

}  // namespace liesym
