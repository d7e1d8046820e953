#include "jetcartan/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace jetcartan {

namespace {

class Parser {
 public:
  Parser(const std::string& src, int n) : src_(src), n_(n) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+')) {
        e = Expr::sum({e, parse_term()});
      } else if (eat('-')) {
        e = Expr::sum({e, Expr::neg(parse_term())});
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (eat('*')) {
        e = Expr::product({e, parse_unary()});
      } else if (eat('/')) {
        e = Expr::product({e, Expr::inv(parse_unary())});
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (eat('-')) return Expr::neg(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      ++pos_;
      std::size_t at = pos_;
      Expr ex = parse_unary();  // right-associative, allows x^-2 and x^(1/2)
      Expr folded = simplify(ex);
      if (folded.kind() != ExprKind::Const || !folded.value().exact) {
        throw ParseError("exponent must be a rational constant", at);
      }
      return Expr::power(base, folded.value().rat);
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected expression");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    std::int64_t int_part = 0;
    bool int_overflow = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      if (int_part > (INT64_MAX - 9) / 10) int_overflow = true;
      if (!int_overflow) int_part = int_part * 10 + (src_[pos_] - '0');
      ++pos_;
    }
    std::int64_t frac_digits = 0;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        if (int_part > (INT64_MAX - 9) / 10 || frac_digits > 17) int_overflow = true;
        if (!int_overflow) {
          int_part = int_part * 10 + (src_[pos_] - '0');
          ++frac_digits;
        }
        ++pos_;
      }
    }
    std::int64_t exp10 = 0;
    bool has_exp = false;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        neg = src_[pos_] == '-';
        ++pos_;
      }
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        has_exp = true;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          exp10 = exp10 * 10 + (src_[pos_] - '0');
          if (exp10 > 400) exp10 = 400;
          ++pos_;
        }
        if (neg) exp10 = -exp10;
      } else {
        pos_ = save;  // not an exponent, e.g. "2e" would be "2 * e"? no: rewind, error later
      }
    }
    if (pos_ == start) fail("expected number");

    // literals become exact rationals; fall back to double on overflow
    std::int64_t net10 = exp10 - frac_digits;
    if (!int_overflow && std::llabs(net10) <= 18) {
      std::int64_t scale = 1;
      bool ok = true;
      for (std::int64_t i = 0; i < std::llabs(net10); ++i) {
        if (scale > INT64_MAX / 10) {
          ok = false;
          break;
        }
        scale *= 10;
      }
      if (ok) {
        if (net10 >= 0) {
          if (int_part <= INT64_MAX / scale) return Expr::rational(int_part * scale);
        } else {
          return Expr::rational(int_part, scale);
        }
      }
    }
    (void)has_exp;
    return Expr::real(std::strtod(src_.substr(start, pos_ - start).c_str(), nullptr));
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name = src_.substr(start, pos_ - start);

    if (name == "t") return Expr::var(Coordinate::time());
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        int idx = std::atoi(name.c_str() + 1);
        if (idx < 1 || idx > n_) {
          pos_ = start;
          fail("coordinate index out of range for dimension " + std::to_string(n_) + ": " + name);
        }
        return Expr::var(name[0] == 'x' ? Coordinate::space(idx) : Coordinate::fiber(idx));
      }
    }

    static const std::pair<const char*, FuncKind> fns[] = {
        {"sin", FuncKind::Sin}, {"cos", FuncKind::Cos}, {"exp", FuncKind::Exp},
        {"log", FuncKind::Log}, {"sqrt", FuncKind::Sqrt}};
    for (const auto& [fname, fk] : fns) {
      if (name == fname) {
        if (!eat('(')) fail("expected '(' after function name");
        Expr arg = parse_sum();
        if (!eat(')')) fail("expected ')'");
        return Expr::call(fk, arg);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  const std::string& src_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& src, int n) {
  if (n < 1) throw ParseError("chart dimension must be >= 1", 0);
  return Parser(src, n).run();
}

}  // namespace jetcartan
