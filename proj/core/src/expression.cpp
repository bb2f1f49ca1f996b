#include "nhj/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nhj/errors.hpp"

namespace nhj {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

  std::vector<Expression::Instr> run() {
    parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (out_.empty()) fail("empty expression");
    return std::move(out_);
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << what << " at column " << pos_ + 1 << " in '" << text_ << "'";
    throw Error(ErrorCode::ParseError, os.str());
  }

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

  void emit(Op op, double value = 0.0, int index = 0) { out_.push_back({op, value, index}); }

  void parse_sum() {
    parse_product();
    for (;;) {
      if (accept('+')) {
        parse_product();
        emit(Op::add);
      } else if (accept('-')) {
        parse_product();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::mul);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::neg);
    } else if (accept('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  void parse_power() {
    parse_primary();
    if (accept('^')) {
      parse_unary();
      emit(Op::pow);
    }
  }

  void parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      parse_sum();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* begin = text_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      emit(Op::constant, value);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "pi") {
        emit(Op::constant, std::numbers::pi);
        return;
      }
      if (name.size() > 1 && name[0] == 'q' &&
          std::all_of(name.begin() + 1, name.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        int index = 0;
        std::from_chars(name.data() + 1, name.data() + name.size(), index);
        if (index < 1 || index > dimension_) {
          pos_ = start;
          fail("coordinate '" + std::string(name) + "' outside q1..q" + std::to_string(dimension_));
        }
        emit(Op::variable, 0.0, index - 1);
        return;
      }
      Op fn;
      if (name == "sin") fn = Op::sin;
      else if (name == "cos") fn = Op::cos;
      else if (name == "exp") fn = Op::exp;
      else if (name == "sqrt") fn = Op::sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      parse_sum();
      if (!accept(')')) fail("expected ')'");
      emit(fn);
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int dimension_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr> out_;
};

}  // namespace

Expression Expression::parse(std::string_view text, int dimension) {
  Expression e;
  e.source_ = std::string(text);
  e.program_ = Parser(text, dimension).run();
  std::size_t depth = 0;
  for (const Instr& ins : e.program_) {
    switch (ins.op) {
      case Op::constant:
      case Op::variable: ++depth; break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow: --depth; break;
      default: break;
    }
    e.max_depth_ = std::max(e.max_depth_, depth);
  }
  return e;
}

bool Expression::is_constant() const noexcept {
  return std::none_of(program_.begin(), program_.end(),
                      [](const Instr& i) { return i.op == Op::variable; });
}

double Expression::evaluate(const Vec& q) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    stack = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::constant: stack[top++] = ins.value; break;
      case Op::variable: stack[top++] = q[ins.index]; break;
      case Op::add: --top; stack[top - 1] += stack[top]; break;
      case Op::sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::div: --top; stack[top - 1] /= stack[top]; break;
      case Op::pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
    }
  }
  return stack[0];
}

}  // namespace nhj
