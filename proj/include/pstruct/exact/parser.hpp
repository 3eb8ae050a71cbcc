#pragma once

#include <stdexcept>
#include <string>

#include "pstruct/exact/rootext.hpp"

namespace pstruct::exact {

/// Syntax or name-resolution failure; offset() is the 0-based character
/// position in the input where the problem was detected.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Parses an expression over the system's variables and root symbols.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' exponent)?
///   exponent := ['-'] INT | '(' ['-'] INT ['/' '2'] ')'
///   atom   := INT | 'i' | IDENT | 'sqrt' '(' expr ')' | '(' expr ')'
///
/// sqrt(e) and half-integer powers are accepted only when e equals a
/// declared radicand exactly; they resolve to the declared root symbol.
RootExtElem parse_expr(const std::string& text, const RootSystemPtr& sys);

/// Root-free convenience overload over a bare variable list.
RatFunc parse_rational(const std::string& text, const VarList& vars);

}  // namespace pstruct::exact
