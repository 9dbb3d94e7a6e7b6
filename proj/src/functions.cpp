#include "liesym/functions.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <numeric>

namespace liesym {

void FunctionRegistry::add(OpaqueFunctionPtr fn) {
  std::string key = fn->name;
  fns_[key] = std::move(fn);
}

OpaqueFunctionPtr FunctionRegistry::find(std::string_view name) const {
  auto it = fns_.find(name);
  return it == fns_.end() ? nullptr : it->second;
}

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fns_) out.push_back(k);
  return out;
}

namespace fn {
namespace {

OpaqueFunctionPtr make(std::string name, std::function<double(int, double)> f) {
  auto out = std::make_shared<OpaqueFunction>();
  out->name = std::move(name);
  out->arity = 1;
  out->evaluate = [f = std::move(f)](std::span<const int> orders, std::span<const double> args) {
    return f(orders[0], args[0]);
  };
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// n-th derivative of J_1 or Y_1 through
// C_nu^(n) = 2^-n sum_k (-1)^k C(n,k) C_{nu-n+2k}; negative integer orders map
// through C_{-m} = (-1)^m C_m.
double bessel_derivative(bool first_kind, int n, double x) {
  auto c = [&](int order) {
    double sign = 1.0;
    if (order < 0) {
      sign = (order % 2 == 0) ? 1.0 : -1.0;
      order = -order;
    }
    double v = first_kind ? std::cyl_bessel_j(static_cast<double>(order), x)
                          : std::cyl_neumann(static_cast<double>(order), x);
    return sign * v;
  };
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += ((k % 2) ? -1.0 : 1.0) * binomial(n, k) * c(1 - n + 2 * k);
  return std::ldexp(sum, -n);
}

// Ai^(n) = p_n(x) Ai + q_n(x) Ai' from Ai'' = x Ai; same recursion for Bi.
double airy_derivative(bool ai, int n, double x) {
  std::vector<double> p{1.0};
  std::vector<double> q{0.0};
  auto deriv = [](const std::vector<double>& v) {
    std::vector<double> d(std::max<std::size_t>(v.size(), 2) - 1, 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) d[i - 1] = static_cast<double>(i) * v[i];
    return d;
  };
  auto add = [](std::vector<double> a, const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
  };
  for (int i = 0; i < n; ++i) {
    std::vector<double> xq(q.size() + 1, 0.0);
    for (std::size_t j = 0; j < q.size(); ++j) xq[j + 1] = q[j];
    auto np = add(deriv(p), xq);
    auto nq = add(p, deriv(q));
    p = std::move(np);
    q = std::move(nq);
  }
  auto horner = [x](const std::vector<double>& v) {
    double r = 0.0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) r = r * x + *it;
    return r;
  };
  double f = ai ? boost::math::airy_ai(x) : boost::math::airy_bi(x);
  double fp = ai ? boost::math::airy_ai_prime(x) : boost::math::airy_bi_prime(x);
  return horner(p) * f + horner(q) * fp;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

OpaqueFunctionPtr sin() {
  static auto f = make("sin", [](int n, double x) { return std::sin(x + n * std::numbers::pi / 2); });
  return f;
}

OpaqueFunctionPtr cos() {
  static auto f = make("cos", [](int n, double x) { return std::cos(x + n * std::numbers::pi / 2); });
  return f;
}

OpaqueFunctionPtr exp() {
  static auto f = make("exp", [](int, double x) { return std::exp(x); });
  return f;
}

OpaqueFunctionPtr log() {
  static auto f = make("log", [](int n, double x) {
    if (x <= 0.0) throw Error(ErrorKind::DivisionByZero, "log of a non-positive value");
    if (n == 0) return std::log(x);
    double fact = std::tgamma(static_cast<double>(n));
    return ((n % 2) ? 1.0 : -1.0) * fact / std::pow(x, n);
  });
  return f;
}

OpaqueFunctionPtr bessel_j1() {
  static auto f = make("J1", [](int n, double x) { return bessel_derivative(true, n, x); });
  return f;
}

OpaqueFunctionPtr bessel_y1() {
  static auto f = make("Y1", [](int n, double x) {
    if (x <= 0.0) throw Error(ErrorKind::DivisionByZero, "Y1 needs a positive argument");
    return bessel_derivative(false, n, x);
  });
  return f;
}

OpaqueFunctionPtr airy_ai() {
  static auto f = make("AiryA", [](int n, double x) { return airy_derivative(true, n, x); });
  return f;
}

OpaqueFunctionPtr airy_bi() {
  static auto f = make("AiryB", [](int n, double x) { return airy_derivative(false, n, x); });
  return f;
}

OpaqueFunctionPtr power(const Rational& p) {
  static std::mutex mu;
  static std::map<std::string, OpaqueFunctionPtr> cache;
  std::string key = p.get_str();
  std::lock_guard lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  double pd = p.get_d();
  auto f = make("pow[" + key + "]", [pd](int n, double x) {
    if (x <= 0.0) throw Error(ErrorKind::DivisionByZero, "fractional power of a non-positive value");
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= pd - i;
    return c * std::pow(x, pd - n);
  });
  cache.emplace(key, f);
  return f;
}

OpaqueFunctionPtr power_real(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "pow[%.17g]", p);
  return make(buf, [p](int n, double x) {
    if (x <= 0.0) throw Error(ErrorKind::DivisionByZero, "real power of a non-positive value");
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= p - i;
    return c * std::pow(x, p - n);
  });
}

OpaqueFunctionPtr affine(const OpaqueFunctionPtr& f, double alpha, double beta) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s[%.17g*_%+.17g]", f->name.c_str(), alpha, beta);
  auto out = std::make_shared<OpaqueFunction>();
  out->name = buf;
  out->arity = 1;
  out->max_order = f->max_order;
  out->evaluate = [f, alpha, beta](std::span<const int> orders, std::span<const double> args) {
    double x = alpha * args[0] + beta;
    return std::pow(alpha, orders[0]) * f->evaluate(orders, std::span<const double>(&x, 1));
  };
  return out;
}

OpaqueFunctionPtr placeholder(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, OpaqueFunctionPtr, std::less<>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  std::uint64_t h = fnv1a(name);
  auto unit = [&h]() {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
  };
  double amp = 0.5 + unit();
  double freq = 0.5 + 1.5 * unit();
  double phase = 2.0 * std::numbers::pi * unit();
  double offset = 2.0 * unit() - 1.0;
  auto f = make(std::string(name), [=](int n, double t) {
    double v = amp * std::pow(freq, n) * std::sin(freq * t + phase + n * std::numbers::pi / 2);
    return n == 0 ? v + offset : v;
  });
  cache.emplace(std::string(name), f);
  return f;
}

}  // namespace fn

const FunctionRegistry& FunctionRegistry::builtin() {
  static const FunctionRegistry reg = [] {
    FunctionRegistry r;
    for (auto f : {fn::sin(), fn::cos(), fn::exp(), fn::log(), fn::bessel_j1(), fn::bessel_y1(), fn::airy_ai(),
                   fn::airy_bi()}) {
      r.add(f);
    }
    for (const char* name : {"eta", "b0", "b1", "b2", "b3", "a", "b", "a2", "f", "g", "h"}) r.add(fn::placeholder(name));
    return r;
  }();
  return reg;
}

Expr power(const Expr& base, const Rational& exponent) {
  if (exponent.get_den() == 1) return base.pow(static_cast<int>(exponent.get_num().get_si()));
  return Expr::apply(fn::power(exponent), {base});
}

Expr sqrt(const Expr& base) { return power(base, Rational(1, 2)); }

Expr call(const OpaqueFunctionPtr& f, const Expr& arg) { return Expr::apply(f, {arg}); }

}  // namespace liesym
