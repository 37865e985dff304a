#include "fno/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace fno {

namespace {

using Op = ExprProgram::Op;
using Node = ExprProgram::Node;

class Parser {
 public:
  Parser(std::string_view text, std::size_t m) : text_(text), m_(m) {}

  std::vector<Node> run() {
    parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ErrorKind::ParseError, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  void emit(Op op, double value = 0.0, std::size_t index = 0) {
    out_.push_back(Node{op, value, index});
  }

  void parse_expr() {
    parse_term();
    for (;;) {
      if (accept('+')) {
        parse_term();
        emit(Op::Add);
      } else if (accept('-')) {
        parse_term();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::Mul);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::Negate);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_primary();
    if (accept('^')) {
      parse_unary();
      emit(Op::Pow);
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      parse_expr();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      parse_identifier();
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto res = std::from_chars(first, last, value, std::chars_format::general);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    emit(Op::Constant, value);
  }

  void parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "abs" || name == "exp" || name == "min" || name == "max") {
      expect('(');
      std::size_t arity = 1;
      parse_expr();
      while (accept(',')) {
        parse_expr();
        ++arity;
      }
      expect(')');
      const bool unary = name == "abs" || name == "exp";
      if (unary && arity != 1) {
        throw ParseError(ErrorKind::ParseError, start, std::string(name) + " takes one argument");
      }
      if (!unary && arity < 2) {
        throw ParseError(ErrorKind::ParseError, start, std::string(name) + " takes at least two arguments");
      }
      if (name == "abs") emit(Op::Abs);
      else if (name == "exp") emit(Op::Exp);
      else emit(name == "min" ? Op::Min : Op::Max, 0.0, arity);
      return;
    }
    if (name == "r") {
      emit(Op::Level);
      return;
    }
    if (name == "t" && m_ == 1) {
      emit(Op::Variable, 0.0, 0);
      return;
    }
    if (name.size() >= 2 && name[0] == 't') {
      std::size_t index = 0;
      auto digits = name.substr(1);
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (res.ec == std::errc() && res.ptr == digits.data() + digits.size() && index >= 1 &&
          index <= m_ && digits[0] != '0') {
        emit(Op::Variable, 0.0, index - 1);
        return;
      }
    }
    throw ParseError(ErrorKind::UnknownIdentifier, start,
                     "unknown identifier '" + std::string(name) + "' (domain dimension " +
                         std::to_string(m_) + ")");
  }

  std::string_view text_;
  std::size_t m_;
  std::size_t pos_ = 0;
  std::vector<Node> out_;
};

std::size_t arity_of(const Node& n) {
  switch (n.op) {
    case Op::Constant:
    case Op::Level:
    case Op::Variable: return 0;
    case Op::Negate:
    case Op::Abs:
    case Op::Exp: return 1;
    case Op::Min:
    case Op::Max: return n.index;
    default: return 2;
  }
}

}  // namespace

ExprProgram ExprProgram::parse(std::string_view text, std::size_t m) {
  ExprProgram prog;
  prog.m_ = m;
  prog.source_ = std::string(text);
  prog.nodes_ = Parser(text, m).run();
  std::size_t depth = 0;
  for (const auto& n : prog.nodes_) {
    depth = depth + 1 - arity_of(n);
    prog.max_depth_ = std::max(prog.max_depth_, depth);
  }
  return prog;
}

double ExprProgram::evaluate(std::span<const double> t, double r) const {
  // Small programs dominate; keep the stack off the heap for them.
  double small[32] = {};
  std::vector<double> big;
  double* stack = small;
  if (max_depth_ > 32) {
    big.resize(max_depth_);
    stack = big.data();
  }
  std::size_t sp = 0;
  for (const auto& n : nodes_) {
    switch (n.op) {
      case Op::Constant: stack[sp++] = n.value; break;
      case Op::Level: stack[sp++] = r; break;
      case Op::Variable: stack[sp++] = t[n.index]; break;
      case Op::Negate: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::Abs: stack[sp - 1] = std::abs(stack[sp - 1]); break;
      case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
      case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::Div: --sp; stack[sp - 1] /= stack[sp]; break;
      case Op::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
      case Op::Min:
      case Op::Max: {
        const std::size_t k = n.index;
        double acc = stack[sp - k];
        for (std::size_t j = sp - k + 1; j < sp; ++j) {
          acc = n.op == Op::Min ? std::min(acc, stack[j]) : std::max(acc, stack[j]);
        }
        sp -= k;
        stack[sp++] = acc;
        break;
      }
    }
  }
  return stack[0];
}

std::string ExprProgram::to_string() const {
  std::vector<std::string> st;
  auto fmt = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const auto& n : nodes_) {
    switch (n.op) {
      case Op::Constant: st.push_back(fmt(n.value)); break;
      case Op::Level: st.push_back("r"); break;
      case Op::Variable: st.push_back("t" + std::to_string(n.index + 1)); break;
      case Op::Negate: st.back() = "(-" + st.back() + ")"; break;
      case Op::Abs: st.back() = "abs(" + st.back() + ")"; break;
      case Op::Exp: st.back() = "exp(" + st.back() + ")"; break;
      case Op::Min:
      case Op::Max: {
        std::string s = n.op == Op::Min ? "min(" : "max(";
        const std::size_t first = st.size() - n.index;
        for (std::size_t j = first; j < st.size(); ++j) {
          if (j > first) s += ", ";
          s += st[j];
        }
        s += ")";
        st.resize(first);
        st.push_back(std::move(s));
        break;
      }
      default: {
        std::string b = std::move(st.back());
        st.pop_back();
        const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - "
                        : n.op == Op::Mul ? " * " : n.op == Op::Div ? " / " : " ^ ";
        st.back() = "(" + st.back() + sym + b + ")";
        break;
      }
    }
  }
  return st.empty() ? std::string() : st.back();
}

}  // namespace fno
