#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace specgap {

/// Arithmetic expression in one variable `i`: numbers, `i`, binary + - * ^
/// (also U+00D7 for multiplication), unary minus and parentheses. `^` binds
/// tightest and associates to the right.
class Expression {
 public:
  /// Throws DomainError with the offending byte offset on syntax errors.
  static Expression parse(std::string_view text);

  double operator()(double i) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace specgap
