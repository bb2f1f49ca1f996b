#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nhj/types.hpp"

namespace nhj {

// Arithmetic expressions over chart coordinates q1..qn.
//
// Grammar: numbers, the constant `pi`, variables q1..qn, binary + - * / ^
// (^ is right-associative and binds tighter than unary minus), unary
// + and -, parentheses, and the functions sin, cos, exp and sqrt.
// Parsing compiles to a postfix program; evaluation is allocation-free
// apart from a small stack.
class Expression {
 public:
  /// Throws ParseError with the offending column.
  static Expression parse(std::string_view text, int dimension);

  double evaluate(const Vec& q) const;

  /// True when no coordinate occurs in the expression.
  bool is_constant() const noexcept;
  const std::string& source() const noexcept { return source_; }

  enum class Op { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, sqrt };
  struct Instr {
    Op op;
    double value = 0.0;
    int index = 0;
  };

 private:
  std::string source_;
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
};

}  // namespace nhj
