#include "liesym/parse.hpp"

#include <cctype>

namespace liesym {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : s_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        Expr d = unary();
        if (d.is_structurally_zero()) fail("division by zero");
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power_expr();
  }

  Expr power_expr() {
    Expr base = primary();
    if (!accept('^')) return base;
    Expr ex = unary();
    auto q = ex.constant_value();
    if (!q) fail("exponent must be a rational constant");
    if (q->get_den() == 1 && base.is_structurally_zero() && *q < 0) fail("division by zero");
    return liesym::power(base, *q);
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    expect('(');
    if (accept(')')) return args;
    do {
      args.push_back(expr());
    } while (accept(','));
    expect(')');
    return args;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      return Expr(parse_rational(s_.substr(start, pos_ - start)));
    }
    if (c == '@') {
      ++pos_;
      std::string name = identifier();
      if (name.empty()) fail("expected a function name after '@'");
      int order = 0;
      while (pos_ < s_.size() && s_[pos_] == '\'') {
        ++order;
        ++pos_;
      }
      auto f = ctx_.registry ? ctx_.registry->find(name) : nullptr;
      if (!f) fail("unknown function '@" + name + "'");
      auto args = arguments();
      if (args.size() != f->arity) fail("wrong number of arguments for '@" + name + "'");
      std::vector<int> orders(args.size(), 0);
      if (order > 0) {
        if (args.size() != 1) fail("primes are only allowed on single-argument functions");
        orders[0] = order;
      }
      return Expr::apply(f, std::move(args), std::move(orders));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = identifier();
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        auto args = arguments();
        if (args.size() != 1) fail("'" + name + "' takes one argument");
        if (name == "sqrt") return liesym::sqrt(args[0]);
        if (name == "sin") return call(fn::sin(), args[0]);
        if (name == "cos") return call(fn::cos(), args[0]);
        if (name == "exp") return call(fn::exp(), args[0]);
        if (name == "log") return call(fn::log(), args[0]);
        fail("unknown function '" + name + "' (opaque functions are written @name)");
      }
      if (auto it = ctx_.params.find(name); it != ctx_.params.end()) return Expr(it->second);
      return Expr(Symbol(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

}  // namespace liesym
