#include "specgap/expression.hpp"

#include <cctype>
#include <cmath>
#include <charconv>

#include "specgap/errors.hpp"

namespace specgap {

struct Expression::Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Pow } kind;
  double number = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double i) const {
    switch (kind) {
      case Kind::Number:
        return number;
      case Kind::Variable:
        return i;
      case Kind::Negate:
        return -lhs->eval(i);
      case Kind::Add:
        return lhs->eval(i) + rhs->eval(i);
      case Kind::Sub:
        return lhs->eval(i) - rhs->eval(i);
      case Kind::Mul:
        return lhs->eval(i) * rhs->eval(i);
      case Kind::Pow:
        return std::pow(lhs->eval(i), rhs->eval(i));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression", what + " at offset " + std::to_string(pos_) + " in '" +
                                        std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind kind, NodePtr a, NodePtr b) {
    return std::make_shared<const Node>(Node{kind, 0.0, std::move(a), std::move(b)});
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept("+")) {
        lhs = binary(Node::Kind::Add, lhs, product());
      } else if (accept("-")) {
        lhs = binary(Node::Kind::Sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    while (accept("*") || accept("\xC3\x97")) lhs = binary(Node::Kind::Mul, lhs, unary());
    return lhs;
  }

  NodePtr unary() {
    if (accept("-")) return std::make_shared<const Node>(Node{Node::Kind::Negate, 0.0, unary(), {}});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return binary(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      NodePtr inner = sum();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (text_[pos_] == 'i') {
      ++pos_;
      return std::make_shared<const Node>(Node{Node::Kind::Variable, 0.0, nullptr, nullptr});
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      const std::string_view literal = text_.substr(start, pos_ - start);
      double value = 0.0;
      const auto [end, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
      if (ec != std::errc() || end != literal.data() + literal.size()) {
        pos_ = start;
        fail("malformed number");
      }
      return std::make_shared<const Node>(Node{Node::Kind::Number, value, nullptr, nullptr});
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  NodePtr root = parser.parse();
  return Expression(std::string(text), std::move(root));
}

double Expression::operator()(double i) const { return root_->eval(i); }

}  // namespace specgap
