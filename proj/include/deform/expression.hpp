#pragma once

#include <memory>
#include <string>

namespace deform {

/// Real expression in one variable `x`, e.g. "x^2 + x^4/20".
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, constants pi and
/// e, and the functions exp log sqrt sin cos tan tanh cosh sinh abs.
/// Parse failures throw ConfigError.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace deform
