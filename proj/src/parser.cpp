#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "pseudospec/errors.hpp"
#include "pseudospec/expr.hpp"

namespace pseudospec {

namespace {

struct FunctionEntry {
  const char* name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"exp", Op::Exp},   {"sin", Op::Sin},   {"cos", Op::Cos},
    {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"tanh", Op::Tanh},
    {"sqrt", Op::Sqrt}, {"ln", Op::Ln},
};

// Recursive-descent parser. Positions handed to errors are 1-based columns.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(pos_ + 1, expected);
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("\"") + c + "\"");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + parse_term();
      else if (accept('-'))
        lhs = lhs - parse_term();
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = lhs * parse_unary();
      else if (accept('/'))
        lhs = lhs / parse_unary();
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (!accept('^')) return base;
    skip_ws();
    std::size_t exponent_pos = pos_;
    Expr exponent = parse_exponent();
    if (exponent.depends_on_x() || !exponent.is_constant()) {
      pos_ = exponent_pos;
      fail("constant exponent");
    }
    return pow(base, exponent.value());
  }

  Expr parse_exponent() {
    if (accept('-')) return -parse_exponent();
    if (accept('+')) return parse_exponent();
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("number, x, function or \"(\"");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      if (name == "x") return Expr::variable();
      for (const auto& fn : kFunctions) {
        if (name == fn.name) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return Expr::unary(fn.op, arg);
        }
      }
      throw UnknownFunction(start + 1, name);
    }
    fail("number, x, function or \"(\"");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_,
                                     src_.data() + src_.size(), value,
                                     std::chars_format::general);
    if (ec != std::errc() || !std::isfinite(value)) fail("number");
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    if (pos_ == start) fail("number");
    return Expr::constant(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace pseudospec
