#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pps {

/// Arithmetic expression over named variables. Supports + - * / ^, unary
/// minus, parentheses, numeric literals, the constant pi and the functions
/// sin, cos, exp, tanh, abs.
class Expression {
 public:
  Expression();

  /// Throws ConfigError on syntax errors or unknown identifiers.
  static Expression parse(const std::string& text,
                          const std::vector<std::string>& variables);

  /// values[i] is the value of variables[i].
  double eval(std::span<const double> values) const;

  bool uses(std::size_t variable) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::vector<bool> used_;
  std::string text_;
};

}  // namespace pps
