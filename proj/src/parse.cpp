#include "engelkit/parse.hpp"

#include <algorithm>
#include <cctype>

#include "engelkit/error.hpp"

namespace engelkit {
namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  Expr run() {
    Expr e = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr sum() {
    std::vector<Expr> terms{signed_term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(signed_term());
      } else if (accept('-')) {
        terms.push_back(Expr::negate(signed_term()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr signed_term() {
    if (accept('-')) return Expr::negate(signed_term());
    return product();
  }

  Expr product() {
    std::vector<Expr> factors{power()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(power());
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr num = Expr::product(std::move(factors));
        Expr den = power();
        if (den.is_zero_literal()) throw ParseError("division by zero", at);
        factors = {Expr::quotient(std::move(num), std::move(den))};
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 6) fail("exponent too large");
    int n = std::stoi(digits);
    if (base.is_zero_literal() && negative) fail("negative power of zero");
    return Expr::power(std::move(base), negative ? -n : n);
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      try {
        return Expr::rational(parse_rational(text_.substr(start, pos_ - start)));
      } catch (const ParseError&) {
        throw ParseError("malformed number", start);
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      std::size_t start = pos_;
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "sin" || name == "cos" || name == "exp" || name == "ln") {
        expect('(');
        Expr arg = sum();
        expect(')');
        if (name == "sin") return Expr::sin(arg);
        if (name == "cos") return Expr::cos(arg);
        if (name == "exp") return Expr::exp(arg);
        return Expr::ln(arg);
      }
      if (name == "pi") return Expr::pi();
      if (auto it = symbols_.substitutions.find(name); it != symbols_.substitutions.end())
        return it->second;
      if (contains(symbols_.coordinates, name) || contains(symbols_.basis, name))
        return Expr::coord(name);
      if (contains(symbols_.parameters, name)) return Expr::named(name);
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& symbols) {
  return Parser(text, symbols).run();
}

}  // namespace engelkit
