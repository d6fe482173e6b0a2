#pragma once

// Minimal arithmetic-expression parser for CLI inputs: numbers, named
// variables, + - * / ^ (right-associative), unary minus, parentheses.
// Compiled to a small postfix program; evaluation is allocation-free.

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "nplap/core.hpp"

namespace nplap {

class parse_error : public error {
public:
  using error::error;
};

class Expr {
public:
  static Expr parse(const std::string& src,
                    const std::vector<std::string>& variables) {
    Parser p{src, 0, variables, {}};
    p.expr();
    p.skip_ws();
    if (p.pos != src.size())
      throw parse_error("expression: unexpected trailing input at '" +
                        src.substr(p.pos) + "'");
    Expr e;
    e.prog_ = std::move(p.prog);
    e.nvars_ = variables.size();
    return e;
  }

  double eval(const std::vector<double>& vars) const {
    if (vars.size() != nvars_)
      throw error("expression: wrong number of variable values");
    double stack[64];
    int top = -1;
    for (const Step& s : prog_) {
      switch (s.op) {
        case OpCode::num: stack[++top] = s.value; break;
        case OpCode::var: stack[++top] = vars[static_cast<size_t>(s.index)]; break;
        case OpCode::neg: stack[top] = -stack[top]; break;
        case OpCode::add: --top; stack[top] += stack[top + 1]; break;
        case OpCode::sub: --top; stack[top] -= stack[top + 1]; break;
        case OpCode::mul: --top; stack[top] *= stack[top + 1]; break;
        case OpCode::div: --top; stack[top] /= stack[top + 1]; break;
        case OpCode::pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      }
    }
    return stack[0];
  }

private:
  enum class OpCode { num, var, neg, add, sub, mul, div, pow };
  struct Step {
    OpCode op;
    double value = 0.0;
    int index = 0;
  };

  struct Parser {
    const std::string& src;
    size_t pos;
    const std::vector<std::string>& vars;
    std::vector<Step> prog;

    void skip_ws() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
      skip_ws();
      if (pos < src.size() && src[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    void expr() {
      term();
      for (;;) {
        if (eat('+')) {
          term();
          prog.push_back({OpCode::add});
        } else if (eat('-')) {
          term();
          prog.push_back({OpCode::sub});
        } else {
          return;
        }
      }
    }
    void term() {
      unary();
      for (;;) {
        if (eat('*')) {
          unary();
          prog.push_back({OpCode::mul});
        } else if (eat('/')) {
          unary();
          prog.push_back({OpCode::div});
        } else {
          return;
        }
      }
    }
    void unary() {
      if (eat('-')) {
        unary();
        prog.push_back({OpCode::neg});
        return;
      }
      power();
    }
    void power() {
      atom();
      if (eat('^')) {
        unary();  // right-associative; exponent may carry its own sign
        prog.push_back({OpCode::pow});
      }
    }
    void atom() {
      skip_ws();
      if (pos >= src.size()) throw parse_error("expression: unexpected end of input");
      const char c = src[pos];
      if (c == '(') {
        ++pos;
        expr();
        if (!eat(')')) throw parse_error("expression: missing ')'");
        return;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        char* end = nullptr;
        const double v = std::strtod(src.c_str() + pos, &end);
        if (end == src.c_str() + pos) throw parse_error("expression: bad number");
        pos = static_cast<size_t>(end - src.c_str());
        prog.push_back({OpCode::num, v, 0});
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t end = pos;
        while (end < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
          ++end;
        const std::string name = src.substr(pos, end - pos);
        for (size_t k = 0; k < vars.size(); ++k) {
          if (vars[k] == name) {
            pos = end;
            prog.push_back({OpCode::var, 0.0, static_cast<int>(k)});
            return;
          }
        }
        throw parse_error("expression: unknown variable '" + name + "'");
      }
      throw parse_error(std::string("expression: unexpected character '") + c + "'");
    }
  };

  std::vector<Step> prog_;
  size_t nvars_ = 0;
};

}  // namespace nplap
