#include "liesym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace liesym {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  };
  trim(s);
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty rational literal");
  try {
    auto dot = s.find('.');
    auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
      Rational q(s, 10);
      q.canonicalize();
      return q;
    }
    // Decimal literal: read exactly as digits / 10^k, then apply exponent.
    std::string mantissa = s.substr(0, exp);
    long exponent = 0;
    if (exp != std::string::npos) exponent = std::stol(s.substr(exp + 1));
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa.erase(mantissa.begin());
    }
    std::string digits;
    long scale = 0;
    if (auto d = mantissa.find('.'); d != std::string::npos) {
      digits = mantissa.substr(0, d) + mantissa.substr(d + 1);
      scale = static_cast<long>(mantissa.size() - d - 1);
    } else {
      digits = mantissa;
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorKind::ParseError, "bad numeric literal '" + s + "'");
    }
    mpz_class num(digits, 10);
    long shift = exponent - scale;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::ParseError, "bad rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace detail {

using AtomId = std::uint32_t;
using Monomial = std::vector<std::pair<AtomId, std::uint32_t>>;

namespace {

std::uint32_t degree(const Monomial& m) {
  std::uint32_t d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

}  // namespace

// Graded lexicographic order; atoms with smaller id rank as larger variables.
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto da = degree(a);
    auto db = degree(b);
    if (da != db) return da < db;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].first == b[j].first) {
        if (a[i].second != b[j].second) return a[i].second < b[j].second;
        ++i;
        ++j;
      } else {
        return a[i].first > b[j].first;
      }
    }
    return i == a.size() && j < b.size();
  }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

struct RatFun {
  Poly num;
  std::vector<std::pair<Poly, int>> den;
};

// ---------------------------------------------------------------- atoms

struct AtomInfo {
  bool opaque = false;
  std::string name;
  OpaqueFunctionPtr fn;
  std::vector<int> orders;
  std::vector<Expr> args;
  std::vector<AtomId> free_syms;
};

class AtomTable {
 public:
  AtomId intern_symbol(std::string_view name) {
    std::string key = "s:" + std::string(name);
    {
      std::shared_lock lock(mu_);
      if (auto it = index_.find(key); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms_.size());
    AtomInfo info;
    info.name = std::string(name);
    info.free_syms = {id};
    atoms_.push_back(std::move(info));
    index_.emplace(std::move(key), id);
    return id;
  }

  AtomId intern_leaf(const OpaqueFunctionPtr& fn, std::vector<Expr> args, std::vector<int> orders) {
    std::ostringstream key;
    key << "o:" << static_cast<const void*>(fn.get()) << '|' << fn->name << '|';
    for (int o : orders) key << o << ',';
    key << '|';
    for (const auto& a : args) key << a.to_string() << ';';
    std::string k = key.str();
    {
      std::shared_lock lock(mu_);
      if (auto it = index_.find(k); it != index_.end()) return it->second;
    }
    std::set<AtomId> syms;
    for (const auto& a : args) {
      for (Symbol s : a.free_symbols()) syms.insert(s.id());
    }
    AtomInfo info;
    info.opaque = true;
    info.fn = fn;
    info.orders = std::move(orders);
    info.args = std::move(args);
    info.free_syms.assign(syms.begin(), syms.end());
    info.name = display(info);
    std::unique_lock lock(mu_);
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(std::move(info));
    index_.emplace(std::move(k), id);
    return id;
  }

  const AtomInfo& get(AtomId id) const {
    std::shared_lock lock(mu_);
    return atoms_.at(id);
  }

 private:
  static std::string display(const AtomInfo& info) {
    std::ostringstream os;
    os << info.fn->name;
    int total = 0;
    for (int o : info.orders) total += o;
    if (total > 0) {
      if (info.orders.size() == 1) {
        if (total <= 3) {
          os << std::string(static_cast<std::size_t>(total), '\'');
        } else {
          os << "^(" << total << ")";
        }
      } else {
        os << "_d[";
        for (std::size_t i = 0; i < info.orders.size(); ++i) os << (i ? "," : "") << info.orders[i];
        os << "]";
      }
    }
    os << '(';
    for (std::size_t i = 0; i < info.args.size(); ++i) os << (i ? ", " : "") << info.args[i].to_string();
    os << ')';
    return os.str();
  }

  mutable std::shared_mutex mu_;
  std::deque<AtomInfo> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

AtomTable& atoms() {
  static auto* table = new AtomTable();
  return *table;
}

// ---------------------------------------------------------------- polynomials

namespace {

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

bool mono_divides(const Monomial& d, const Monomial& m) {
  std::size_t j = 0;
  for (const auto& [a, e] : d) {
    while (j < m.size() && m[j].first < a) ++j;
    if (j == m.size() || m[j].first != a || m[j].second < e) return false;
  }
  return true;
}

Monomial mono_div(const Monomial& m, const Monomial& d) {
  Monomial out;
  std::size_t j = 0;
  for (const auto& [a, e] : m) {
    std::uint32_t sub = 0;
    if (j < d.size() && d[j].first == a) sub = d[j++].second;
    if (e > sub) out.emplace_back(a, e - sub);
  }
  return out;
}

Poly poly_constant(const Rational& c) {
  Poly p;
  Rational q = c;
  q.canonicalize();
  add_term(p, {}, q);
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  }
  return out;
}

Poly poly_add(const Poly& a, const Poly& b, const Rational& scale_b = 1) {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(out, m, c * scale_b);
  return out;
}

Poly poly_pow(const Poly& p, int e) {
  Poly result = poly_constant(1);
  for (int i = 0; i < e; ++i) result = poly_mul(result, p);
  return result;
}

bool poly_is_constant(const Poly& p) { return p.empty() || (p.size() == 1 && p.begin()->first.empty()); }

// Exact division by a single polynomial; returns false if g does not divide n.
bool poly_divide_exact(const Poly& n, const Poly& g, Poly& quotient) {
  quotient.clear();
  if (g.empty()) return false;
  const auto& [lm, lc] = *g.rbegin();
  Poly rest = n;
  while (!rest.empty()) {
    const auto& [m, c] = *rest.rbegin();
    if (!mono_divides(lm, m)) return false;
    Monomial qm = mono_div(m, lm);
    Rational qc = c / lc;
    add_term(quotient, qm, qc);
    for (const auto& [gm, gc] : g) add_term(rest, mono_mul(qm, gm), -qc * gc);
  }
  return true;
}

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    MonoLess ml;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
      if (ml(ia->first, ib->first)) return true;
      if (ml(ib->first, ia->first)) return false;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return false;
  }
};

using Factors = std::vector<std::pair<Poly, int>>;

void merge_factor(Factors& out, Poly p, int e) {
  for (auto& [q, k] : out) {
    if (q == p) {
      k += e;
      return;
    }
  }
  out.emplace_back(std::move(p), e);
}

// Splits p^e into monic factors, pulling the leading coefficient and the
// monomial content into `scale` and per-atom factors.
void normalize_factor(const Poly& p, int e, Rational& scale, Factors& out) {
  if (p.empty()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  Monomial content = p.begin()->first;
  for (const auto& [m, c] : p) {
    Monomial common;
    std::size_t j = 0;
    for (const auto& [a, k] : content) {
      while (j < m.size() && m[j].first < a) ++j;
      if (j < m.size() && m[j].first == a) common.emplace_back(a, std::min(k, m[j].second));
    }
    content = std::move(common);
  }
  for (const auto& [a, k] : content) {
    Poly atom;
    add_term(atom, Monomial{{a, 1}}, 1);
    merge_factor(out, std::move(atom), static_cast<int>(k) * e);
  }
  Poly rest;
  for (const auto& [m, c] : p) add_term(rest, mono_div(m, content), c);
  Rational lc = rest.rbegin()->second;
  for (int i = 0; i < e; ++i) scale /= lc;
  if (poly_is_constant(rest)) return;
  Poly monic;
  for (const auto& [m, c] : rest) add_term(monic, m, c / lc);
  merge_factor(out, std::move(monic), e);
}

Poly expand_factors(const Factors& f) {
  Poly out = poly_constant(1);
  for (const auto& [p, e] : f) out = poly_mul(out, poly_pow(p, e));
  return out;
}

std::shared_ptr<const RatFun> finish(Poly num, Factors den) {
  auto r = std::make_shared<RatFun>();
  if (num.empty()) return r;
  Factors kept;
  for (auto& [g, e] : den) {
    Poly q;
    while (e > 0 && poly_divide_exact(num, g, q)) {
      num = std::move(q);
      --e;
    }
    if (e > 0) kept.emplace_back(std::move(g), e);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return PolyLess{}(a.first, b.first); });
  r->num = std::move(num);
  r->den = std::move(kept);
  return r;
}

std::shared_ptr<const RatFun> make_ratfun(Poly num, const Factors& raw_den) {
  Rational scale = 1;
  Factors den;
  for (const auto& [p, e] : raw_den) normalize_factor(p, e, scale, den);
  if (scale != 1) {
    for (auto& [m, c] : num) c *= scale;
  }
  return finish(std::move(num), std::move(den));
}

std::shared_ptr<const RatFun> from_poly(Poly p) {
  auto r = std::make_shared<RatFun>();
  r->num = std::move(p);
  return r;
}

int exponent_of(const Factors& f, const Poly& p) {
  for (const auto& [q, e] : f) {
    if (q == p) return e;
  }
  return 0;
}

std::string format_mono(const Monomial& m) {
  std::string s;
  for (const auto& [a, e] : m) {
    if (!s.empty()) s += '*';
    const auto& info = atoms().get(a);
    s += info.name;
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string format_poly(const Poly& p) {
  if (p.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    const auto& [m, c] = *it;
    bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (m.empty()) {
      s += mag.get_str();
    } else if (mag == 1) {
      s += format_mono(m);
    } else {
      s += mag.get_str() + '*' + format_mono(m);
    }
  }
  return s;
}

std::string format_factor(const Poly& p, int e) {
  std::string body = format_poly(p);
  bool single = p.size() == 1 && p.begin()->second == 1 && p.begin()->first.size() == 1 &&
                p.begin()->first[0].second == 1;
  std::string s = single ? body : "(" + body + ")";
  if (e > 1) s += "^" + std::to_string(e);
  return s;
}

void collect_atoms(const Poly& p, std::set<AtomId>& out) {
  for (const auto& [m, c] : p) {
    for (const auto& [a, e] : m) out.insert(a);
  }
}

std::set<AtomId> all_atoms(const RatFun& r) {
  std::set<AtomId> out;
  collect_atoms(r.num, out);
  for (const auto& [p, e] : r.den) collect_atoms(p, out);
  return out;
}

double ipow(double x, std::uint32_t e) {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

}  // namespace
}  // namespace detail

using detail::AtomId;
using detail::Factors;
using detail::Monomial;
using detail::Poly;
using detail::RatFun;

// ---------------------------------------------------------------- Symbol

Symbol::Symbol(std::string_view name) : id_(detail::atoms().intern_symbol(name)) {}

const std::string& Symbol::name() const {
  static const std::string invalid = "<invalid>";
  if (!valid()) return invalid;
  return detail::atoms().get(id_).name;
}

std::vector<Symbol> make_symbols(std::string_view prefix, std::size_t count, std::size_t first) {
  std::vector<Symbol> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(std::string(prefix) + std::to_string(first + i));
  return out;
}

// ---------------------------------------------------------------- Expr

Expr::Expr() : rep_(std::make_shared<RatFun>()) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}
Expr::Expr(const Rational& value) : rep_(detail::from_poly(detail::poly_constant(value))) {}
Expr::Expr(Symbol symbol) {
  if (!symbol.valid()) throw Error(ErrorKind::UnboundSymbol, "invalid symbol");
  Poly p;
  detail::add_term(p, Monomial{{symbol.id(), 1}}, 1);
  rep_ = detail::from_poly(std::move(p));
}

Expr Expr::apply(const OpaqueFunctionPtr& fn, std::vector<Expr> args, std::vector<int> orders) {
  if (!fn) throw Error(ErrorKind::BadParams, "null opaque function");
  if (args.size() != fn->arity) {
    throw Error(ErrorKind::BadParams, "opaque function " + fn->name + " expects " + std::to_string(fn->arity) +
                                          " argument(s), got " + std::to_string(args.size()));
  }
  if (orders.empty()) orders.assign(args.size(), 0);
  if (orders.size() != args.size()) throw Error(ErrorKind::BadParams, "derivative multi-index size mismatch");
  AtomId id = detail::atoms().intern_leaf(fn, std::move(args), std::move(orders));
  Poly p;
  detail::add_term(p, Monomial{{id, 1}}, 1);
  return Expr(detail::from_poly(std::move(p)));
}

Expr operator+(const Expr& a, const Expr& b) {
  const RatFun& x = a.rep();
  const RatFun& y = b.rep();
  if (x.num.empty()) return b;
  if (y.num.empty()) return a;
  if (x.den.empty() && y.den.empty()) return Expr(detail::from_poly(detail::poly_add(x.num, y.num)));
  // lcm of the factored denominators
  Factors lcm = x.den;
  for (const auto& [p, e] : y.den) {
    bool found = false;
    for (auto& [q, k] : lcm) {
      if (q == p) {
        k = std::max(k, e);
        found = true;
      }
    }
    if (!found) lcm.emplace_back(p, e);
  }
  auto lift = [&](const RatFun& r) {
    Factors missing;
    for (const auto& [p, e] : lcm) {
      int have = detail::exponent_of(r.den, p);
      if (e > have) missing.emplace_back(p, e - have);
    }
    return detail::poly_mul(r.num, detail::expand_factors(missing));
  };
  Poly num = detail::poly_add(lift(x), lift(y));
  return Expr(detail::finish(std::move(num), std::move(lcm)));
}

Expr operator-(const Expr& a) {
  auto r = std::make_shared<RatFun>(a.rep());
  for (auto& [m, c] : r->num) c = -c;
  return Expr(std::shared_ptr<const RatFun>(std::move(r)));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  const RatFun& x = a.rep();
  const RatFun& y = b.rep();
  if (x.num.empty() || y.num.empty()) return Expr();
  Poly num = detail::poly_mul(x.num, y.num);
  if (x.den.empty() && y.den.empty()) return Expr(detail::from_poly(std::move(num)));
  Factors den = x.den;
  for (const auto& [p, e] : y.den) detail::merge_factor(den, p, e);
  return Expr(detail::finish(std::move(num), std::move(den)));
}

namespace {

Expr reciprocal(const Expr& a) {
  const RatFun& x = a.rep();
  if (x.num.empty()) throw Error(ErrorKind::DivisionByZero, "division by the zero expression");
  Poly num = detail::expand_factors(x.den);
  return Expr(detail::make_ratfun(std::move(num), Factors{{x.num, 1}}));
}

}  // namespace

Expr operator/(const Expr& a, const Expr& b) { return a * reciprocal(b); }

Expr Expr::pow(int exponent) const {
  if (exponent < 0) return reciprocal(*this).pow(-exponent);
  Expr result(1);
  Expr base = *this;
  unsigned e = static_cast<unsigned>(exponent);
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

bool Expr::is_structurally_zero() const { return rep_->num.empty(); }

bool Expr::is_constant() const { return rep_->den.empty() && detail::poly_is_constant(rep_->num); }

std::optional<Rational> Expr::constant_value() const {
  if (!is_constant()) return std::nullopt;
  if (rep_->num.empty()) return Rational(0);
  return rep_->num.begin()->second;
}

bool Expr::has_opaque() const {
  for (AtomId a : detail::all_atoms(*rep_)) {
    if (detail::atoms().get(a).opaque) return true;
  }
  return false;
}

bool Expr::is_polynomial() const { return rep_->den.empty(); }

std::vector<Symbol> Expr::free_symbols() const {
  std::set<AtomId> ids;
  for (AtomId a : detail::all_atoms(*rep_)) {
    for (AtomId s : detail::atoms().get(a).free_syms) ids.insert(s);
  }
  std::vector<Symbol> out;
  out.reserve(ids.size());
  for (AtomId id : ids) out.push_back(Symbol(id));
  return out;
}

bool Expr::depends_on(Symbol v) const {
  for (AtomId a : detail::all_atoms(*rep_)) {
    const auto& fs = detail::atoms().get(a).free_syms;
    if (std::find(fs.begin(), fs.end(), v.id()) != fs.end()) return true;
  }
  return false;
}

std::string Expr::to_string() const {
  const RatFun& r = *rep_;
  if (r.den.empty()) return detail::format_poly(r.num);
  std::string den;
  for (const auto& [p, e] : r.den) {
    if (!den.empty()) den += '*';
    den += detail::format_factor(p, e);
  }
  std::string num = detail::format_poly(r.num);
  bool simple_num = r.num.size() == 1;
  bool simple_den = r.den.size() == 1;
  return (simple_num ? num : "(" + num + ")") + "/" + (simple_den ? den : "(" + den + ")");
}

bool identical(const Expr& a, const Expr& b) {
  return a.rep_->num == b.rep_->num && a.rep_->den == b.rep_->den;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_string(); }

// ---------------------------------------------------------------- calculus

namespace {

Expr poly_expr(Poly p) { return Expr(detail::from_poly(std::move(p))); }

Expr leaf_derivative(AtomId a, Symbol v) {
  const auto& info = detail::atoms().get(a);
  Expr out;
  int total = 0;
  for (int o : info.orders) total += o;
  for (std::size_t j = 0; j < info.args.size(); ++j) {
    if (!info.args[j].depends_on(v)) continue;
    if (info.fn->max_order >= 0 && total + 1 > info.fn->max_order) {
      throw Error(ErrorKind::OpaqueNoDerivative,
                  info.fn->name + " has no derivative of order " + std::to_string(total + 1));
    }
    std::vector<int> orders = info.orders;
    ++orders[j];
    out += Expr::apply(info.fn, info.args, std::move(orders)) * differentiate(info.args[j], v);
  }
  return out;
}

Expr diff_poly(const Poly& p, Symbol v) {
  Poly simple;
  Expr extra;
  std::map<AtomId, Expr> leaf_cache;
  for (const auto& [m, c] : p) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto [a, e] = m[i];
      const auto& info = detail::atoms().get(a);
      Monomial reduced = m;
      if (e == 1) {
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        reduced[i].second = e - 1;
      }
      Rational coef = c * static_cast<long>(e);
      if (!info.opaque) {
        if (a == v.id()) detail::add_term(simple, reduced, coef);
        continue;
      }
      if (std::find(info.free_syms.begin(), info.free_syms.end(), v.id()) == info.free_syms.end()) continue;
      auto it = leaf_cache.find(a);
      if (it == leaf_cache.end()) it = leaf_cache.emplace(a, leaf_derivative(a, v)).first;
      Poly term;
      detail::add_term(term, reduced, coef);
      extra += poly_expr(std::move(term)) * it->second;
    }
  }
  return poly_expr(std::move(simple)) + extra;
}

}  // namespace

Expr differentiate(const Expr& e, Symbol v) {
  const RatFun& r = e.rep();
  Expr dnum = diff_poly(r.num, v);
  if (r.den.empty()) return dnum;
  // d(N/D) = N'/D - (N/D) * sum_i e_i g_i'/g_i
  Expr inv_den = Expr(detail::make_ratfun(detail::poly_constant(1), r.den));
  Expr log_deriv;
  for (const auto& [g, k] : r.den) {
    Expr dg = diff_poly(g, v);
    if (dg.is_structurally_zero()) continue;
    log_deriv += Expr(Rational(k)) * dg / poly_expr(g);
  }
  return dnum * inv_den - e * log_deriv;
}

namespace {

Expr rebuild_poly(const Poly& p, const std::function<Expr(AtomId)>& atom_value) {
  Expr out;
  std::map<AtomId, Expr> cache;
  for (const auto& [m, c] : p) {
    Expr term(c);
    for (const auto& [a, e] : m) {
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, atom_value(a)).first;
      term *= it->second.pow(static_cast<int>(e));
    }
    out += term;
  }
  return out;
}

}  // namespace

Expr substitute(const Expr& e, Symbol v, const Expr& replacement) {
  if (!e.depends_on(v)) return e;
  std::function<Expr(AtomId)> value = [&](AtomId a) -> Expr {
    const auto& info = detail::atoms().get(a);
    if (!info.opaque) {
      if (a == v.id()) return replacement;
      Poly p;
      detail::add_term(p, Monomial{{a, 1}}, 1);
      return poly_expr(std::move(p));
    }
    std::vector<Expr> args;
    args.reserve(info.args.size());
    for (const auto& arg : info.args) args.push_back(substitute(arg, v, replacement));
    return Expr::apply(info.fn, std::move(args), info.orders);
  };
  const RatFun& r = e.rep();
  Expr out = rebuild_poly(r.num, value);
  for (const auto& [g, k] : r.den) out = out / rebuild_poly(g, value).pow(k);
  return out;
}

// ---------------------------------------------------------------- numerics

namespace {

double eval_atom(AtomId a, const Env& point);

double eval_poly_env(const Poly& p, const Env& point, std::map<AtomId, double>& cache) {
  double sum = 0.0;
  for (const auto& [m, c] : p) {
    double term = c.get_d();
    for (const auto& [a, e] : m) {
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, eval_atom(a, point)).first;
      term *= detail::ipow(it->second, e);
    }
    sum += term;
  }
  return sum;
}

double eval_atom(AtomId a, const Env& point) {
  const auto& info = detail::atoms().get(a);
  if (!info.opaque) {
    auto it = point.find(Symbol(std::string_view(info.name)));
    if (it == point.end()) throw Error(ErrorKind::UnboundSymbol, "symbol '" + info.name + "' is not bound");
    return it->second;
  }
  std::vector<double> args;
  args.reserve(info.args.size());
  for (const auto& arg : info.args) args.push_back(eval(arg, point));
  return info.fn->evaluate(info.orders, args);
}

}  // namespace

double eval(const Expr& e, const Env& point) {
  const RatFun& r = e.rep();
  std::map<AtomId, double> cache;
  double num = eval_poly_env(r.num, point, cache);
  double den = 1.0;
  for (const auto& [g, k] : r.den) {
    double v = eval_poly_env(g, point, cache);
    if (v == 0.0) throw Error(ErrorKind::DivisionByZero, "denominator of " + e.to_string() + " vanishes");
    den *= detail::ipow(v, static_cast<std::uint32_t>(k));
  }
  return num / den;
}

const char* to_string(ZeroState state) {
  switch (state) {
    case ZeroState::Zero: return "Zero";
    case ZeroState::NonZero: return "NonZero";
    case ZeroState::Unknown: return "Unknown";
  }
  return "?";
}

ZeroTest is_zero(const Expr& e, std::uint64_t seed) {
  ZeroTest out;
  if (e.is_structurally_zero()) return out;
  if (!e.has_opaque()) {
    out.state = ZeroState::NonZero;
    return out;
  }
  out.state = ZeroState::Unknown;
  auto syms = e.free_symbols();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.25, 1.75);
  for (int i = 0; i < 32; ++i) {
    Env point;
    for (Symbol s : syms) point[s] = dist(rng);
    try {
      double v = eval(e, point);
      if (!std::isfinite(v)) continue;
      out.evidence_max_abs = std::max(out.evidence_max_abs, std::abs(v));
      ++out.evidence_samples;
    } catch (const Error&) {
    }
  }
  return out;
}

std::vector<std::vector<Rational>> linear_rows(const Expr& e, std::span<const Symbol> unknowns) {
  std::map<AtomId, std::size_t> column;
  for (std::size_t i = 0; i < unknowns.size(); ++i) column[unknowns[i].id()] = i + 1;
  const RatFun& r = e.rep();
  for (const auto& [g, k] : r.den) {
    for (const auto& [m, c] : g) {
      for (const auto& [a, x] : m) {
        if (column.count(a)) throw Error(ErrorKind::BadParams, "unknown appears in a denominator");
      }
    }
  }
  std::map<Monomial, std::vector<Rational>, detail::MonoLess> rows;
  for (const auto& [m, c] : r.num) {
    Monomial rest;
    std::size_t col = 0;
    for (const auto& [a, x] : m) {
      auto it = column.find(a);
      if (it == column.end()) {
        rest.emplace_back(a, x);
        continue;
      }
      if (col != 0 || x != 1) throw Error(ErrorKind::BadParams, "expression is not affine in the unknowns");
      col = it->second;
    }
    auto& row = rows[rest];
    if (row.empty()) row.assign(unknowns.size() + 1, Rational(0));
    row[col] += c;
  }
  std::vector<std::vector<Rational>> out;
  out.reserve(rows.size());
  for (auto& [m, row] : rows) out.push_back(std::move(row));
  return out;
}

// ---------------------------------------------------------------- compiled

CompiledExpr::CompiledExpr(const Expr& e, std::span<const Symbol> slots) : text_(e.to_string()) {
  std::map<AtomId, int> index;
  auto atom_index = [&](AtomId a) -> int {
    if (auto it = index.find(a); it != index.end()) return it->second;
    const auto& info = detail::atoms().get(a);
    Atom atom;
    if (!info.opaque) {
      auto it = std::find_if(slots.begin(), slots.end(), [&](Symbol s) { return s.id() == a; });
      if (it == slots.end()) throw Error(ErrorKind::UnboundSymbol, "symbol '" + info.name + "' has no slot");
      atom.slot = static_cast<int>(it - slots.begin());
    } else {
      atom.fn = info.fn;
      atom.orders = info.orders;
      for (const auto& arg : info.args) atom.args.emplace_back(arg, slots);
    }
    atoms_.push_back(std::move(atom));
    int idx = static_cast<int>(atoms_.size() - 1);
    index.emplace(a, idx);
    return idx;
  };
  auto compile_poly = [&](const Poly& p) {
    PolyCode code;
    for (const auto& [m, c] : p) {
      Term t;
      t.coef = c.get_d();
      for (const auto& [a, x] : m) t.factors.emplace_back(atom_index(a), static_cast<int>(x));
      code.terms.push_back(std::move(t));
    }
    return code;
  };
  num_ = compile_poly(e.rep().num);
  for (const auto& [g, k] : e.rep().den) den_.emplace_back(compile_poly(g), k);
}

double CompiledExpr::eval_poly(const PolyCode& p, std::span<const double> atom_values) const {
  double sum = 0.0;
  for (const auto& t : p.terms) {
    double v = t.coef;
    for (const auto& [a, x] : t.factors) v *= detail::ipow(atom_values[static_cast<std::size_t>(a)], static_cast<std::uint32_t>(x));
    sum += v;
  }
  return sum;
}

double CompiledExpr::operator()(std::span<const double> values) const {
  if (num_.terms.empty()) return 0.0;
  std::vector<double> atom_values(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (a.slot >= 0) {
      atom_values[i] = values[static_cast<std::size_t>(a.slot)];
    } else {
      std::vector<double> args;
      args.reserve(a.args.size());
      for (const auto& arg : a.args) args.push_back(arg(values));
      atom_values[i] = a.fn->evaluate(a.orders, args);
    }
  }
  double num = eval_poly(num_, atom_values);
  double den = 1.0;
  for (const auto& [g, k] : den_) {
    double v = eval_poly(g, atom_values);
    if (v == 0.0) throw Error(ErrorKind::DivisionByZero, "denominator of " + text_ + " vanishes");
    den *= detail::ipow(v, static_cast<std::uint32_t>(k));
  }
  return num / den;
}

}  // namespace liesym
