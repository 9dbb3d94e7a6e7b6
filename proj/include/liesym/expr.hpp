#pragma once

// Exact symbolic core. Expressions are kept in a rational normal form:
// a multivariate polynomial numerator with exact rational coefficients over a
// shared denominator stored as a product of monic polynomial factors. Symbols
// and opaque function leaves are the atoms of the polynomial ring.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liesym/error.hpp"

namespace liesym {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Interned variable name. Two symbols with the same name are the same symbol.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }
  friend bool operator<(Symbol a, Symbol b) { return a.id_ < b.id_; }

 private:
  friend class Expr;
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

std::vector<Symbol> make_symbols(std::string_view prefix, std::size_t count, std::size_t first = 0);

/// A scalar function known only through numeric evaluation. `evaluate`
/// receives the partial-derivative multi-index (one entry per argument) and
/// the argument values. `max_order` bounds the total derivative order the
/// evaluator supports; -1 means unlimited.
struct OpaqueFunction {
  std::string name;
  std::size_t arity = 1;
  int max_order = -1;
  std::function<double(std::span<const int> orders, std::span<const double> args)> evaluate;
};
using OpaqueFunctionPtr = std::shared_ptr<const OpaqueFunction>;

namespace detail {
struct RatFun;
}

using Env = std::map<Symbol, double>;

class Expr {
 public:
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expr(Symbol symbol);  // NOLINT(google-explicit-constructor)

  /// Opaque leaf fn(args...) with the given derivative multi-index.
  static Expr apply(const OpaqueFunctionPtr& fn, std::vector<Expr> args, std::vector<int> orders = {});

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& other) { return *this = *this + other; }
  Expr& operator-=(const Expr& other) { return *this = *this - other; }
  Expr& operator*=(const Expr& other) { return *this = *this * other; }

  Expr pow(int exponent) const;

  /// True when the normal form numerator is empty.
  bool is_structurally_zero() const;
  bool is_constant() const;
  std::optional<Rational> constant_value() const;
  bool has_opaque() const;
  bool is_polynomial() const;
  bool depends_on(Symbol v) const;
  std::vector<Symbol> free_symbols() const;

  std::string to_string() const;

  /// Identical normal forms.
  friend bool identical(const Expr& a, const Expr& b);

  const detail::RatFun& rep() const { return *rep_; }
  explicit Expr(std::shared_ptr<const detail::RatFun> rep) : rep_(std::move(rep)) {}

 private:
  std::shared_ptr<const detail::RatFun> rep_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

Expr differentiate(const Expr& e, Symbol v);
Expr substitute(const Expr& e, Symbol v, const Expr& replacement);

double eval(const Expr& e, const Env& point);

enum class ZeroState { Zero, NonZero, Unknown };
const char* to_string(ZeroState state);

struct ZeroTest {
  ZeroState state = ZeroState::Zero;
  // Populated only for Unknown: max |e| over the random evaluations that
  // succeeded, and how many did.
  double evidence_max_abs = 0.0;
  int evidence_samples = 0;
};

ZeroTest is_zero(const Expr& e, std::uint64_t seed = 0x5eedULL);

/// Rows of the linear system obtained by requiring every numerator
/// coefficient of `e` to vanish, where `e` is affine in `unknowns`.
/// Each row is [constant, coeff(unknown_0), ..., coeff(unknown_{k-1})].
/// Throws BadParams when an unknown appears nonlinearly or in a denominator.
std::vector<std::vector<Rational>> linear_rows(const Expr& e, std::span<const Symbol> unknowns);

/// Flattened evaluator for repeated numeric evaluation with a fixed slot order.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, std::span<const Symbol> slots);

  double operator()(std::span<const double> values) const;

 private:
  struct Atom {
    int slot = -1;  // symbol slot, or -1 for opaque
    OpaqueFunctionPtr fn;
    std::vector<int> orders;
    std::vector<CompiledExpr> args;
  };
  struct Term {
    double coef = 0.0;
    std::vector<std::pair<int, int>> factors;  // (atom index, exponent)
  };
  struct PolyCode {
    std::vector<Term> terms;
  };
  std::vector<Atom> atoms_;
  PolyCode num_;
  std::vector<std::pair<PolyCode, int>> den_;
  std::string text_;

  double eval_poly(const PolyCode& p, std::span<const double> atom_values) const;
};

}  // namespace liesym
