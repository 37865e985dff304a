#pragma once

// Endpoint expressions over the variables t1..tm and the level r.
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]          (right associative)
//   primary := number | variable | call | "(" expr ")"
//   call    := ("abs" | "exp") "(" expr ")"
//            | ("min" | "max") "(" expr "," expr { "," expr } ")"
//   variable:= "r" | "t1" .. "tm" | "t" (only when m = 1)
//
// So "-t^2" is -(t^2) and "2^-1" is 0.5. Whitespace is ignored.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fno/error.hpp"

namespace fno {

class ExprProgram {
 public:
  enum class Op {
    Constant,
    Level,     // r
    Variable,  // t_{index+1}
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Abs,
    Exp,
    Min,  // arity stored in `index`
    Max,
  };

  struct Node {
    Op op = Op::Constant;
    double value = 0.0;
    std::size_t index = 0;
  };

  /// Parses `text` for a domain of dimension `m`. Throws ParseError with
  /// kind ParseError or UnknownIdentifier.
  static ExprProgram parse(std::string_view text, std::size_t m);

  double evaluate(std::span<const double> t, double r) const;

  std::size_t domain_dim() const noexcept { return m_; }
  const std::string& source() const noexcept { return source_; }
  /// Postfix node sequence; evaluating it left to right with a stack is the
  /// program semantics.
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  /// Fully parenthesized rendering, e.g. "(1 + (2 * 3))".
  std::string to_string() const;

 private:
  std::size_t m_ = 0;
  std::string source_;
  std::vector<Node> nodes_;
  std::size_t max_depth_ = 0;
};

}  // namespace fno
