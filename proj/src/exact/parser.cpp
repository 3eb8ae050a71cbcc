#include "pstruct/exact/parser.hpp"

#include <cctype>
#include <optional>

namespace pstruct::exact {

namespace {

class Parser {
public:
  Parser(const std::string& text, const RootSystemPtr& sys) : s_(text), sys_(sys) {}

  RootExtElem run() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    RootExtElem e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  RootExtElem expr() {
    RootExtElem acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RootExtElem term() {
    RootExtElem acc = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        RootExtElem d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        try {
          acc /= d;
        } catch (const std::domain_error&) {
          throw ParseError("division by an element with zero norm", at);
        }
      } else {
        return acc;
      }
    }
  }

  RootExtElem unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  std::string integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected integer", pos_);
    return s_.substr(start, pos_ - start);
  }

  /// Returns twice the exponent (so half-integers are representable).
  long exponent_twice() {
    skip_ws();
    if (accept('(')) {
      const bool neg = accept('-');
      long n = std::stol(integer());
      long twice = 2 * n;
      if (accept('/')) {
        const std::size_t at = pos_;
        if (integer() != "2") throw ParseError("only half-integer fractional exponents", at);
        twice = n;
      }
      expect(')');
      return neg ? -twice : twice;
    }
    const bool neg = accept('-');
    if (pos_ >= s_.size()) throw ParseError("expected exponent", pos_);
    long n = std::stol(integer());
    return neg ? -2 * n : 2 * n;
  }

  std::optional<std::size_t> matching_root(const RootExtElem& e) const {
    if (!e.is_rational()) return std::nullopt;
    const RatFunc r = e.as_rational();
    for (std::size_t j = 0; j < sys_->nroots(); ++j)
      if (r == RatFunc(sys_->roots[j].radicand)) return j;
    return std::nullopt;
  }

  RootExtElem power() {
    skip_ws();
    const std::size_t base_at = pos_;
    RootExtElem base = atom();
    skip_ws();
    if (!accept('^')) return base;
    const long twice = exponent_twice();
    if (twice % 2 == 0) {
      try {
        return base.pow(static_cast<int>(twice / 2));
      } catch (const std::domain_error&) {
        throw ParseError("negative power of zero", base_at);
      }
    }
    auto j = matching_root(base);
    if (!j) throw ParseError("half-integer power of an expression that is not a declared root polynomial", base_at);
    // D^(k/2) = s^k with s^2 = D.
    return RootExtElem::root(sys_, *j).pow(static_cast<int>(twice));
  }

  RootExtElem atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)))
      return RootExtElem::constant(sys_, Scalar::from_integer_string(integer()));
    if (c == '(') {
      ++pos_;
      RootExtElem e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "i") return RootExtElem::constant(sys_, Scalar::imag_unit());
      if (name == "sqrt") {
        expect('(');
        RootExtElem arg = expr();
        expect(')');
        auto j = matching_root(arg);
        if (!j) throw ParseError("sqrt of an expression that is not a declared root polynomial", start);
        return RootExtElem::root(sys_, *j);
      }
      const auto& vars = *sys_->vars;
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (vars[k] == name) return RootExtElem::variable(sys_, k);
      for (std::size_t j = 0; j < sys_->nroots(); ++j)
        if (sys_->roots[j].symbol == name) return RootExtElem::root(sys_, j);
      throw ParseError("undeclared identifier '" + name + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  const std::string& s_;
  const RootSystemPtr& sys_;
  std::size_t pos_ = 0;
};

}  // namespace

RootExtElem parse_expr(const std::string& text, const RootSystemPtr& sys) {
  return Parser(text, sys).run();
}

RatFunc parse_rational(const std::string& text, const VarList& vars) {
  return parse_expr(text, make_root_system(vars)).as_rational();
}

}  // namespace pstruct::exact
