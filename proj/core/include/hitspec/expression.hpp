#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace hitspec {

// A compiled real function of one variable `x`.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'x' | 'pi' | 'e'
//            | ('exp' | 'ln' | 'abs' | 'sqrt' | 'sin' | 'cos' | 'tanh') '(' expr ')'
//            | '(' expr ')'
//
// `-x^2` parses as `-(x^2)`. Malformed input throws InputError with the
// offending column.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace hitspec
