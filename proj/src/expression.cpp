#include "pps/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "pps/errors.hpp"

namespace pps {

struct Expression::Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  enum class Fn { Sin, Cos, Exp, Tanh, Abs };

  Kind kind = Kind::Number;
  double value = 0.0;
  std::size_t index = 0;
  Fn fn = Fn::Sin;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(std::span<const double> v) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::Variable: return v[index];
      case Kind::Negate: return -lhs->eval(v);
      case Kind::Add: return lhs->eval(v) + rhs->eval(v);
      case Kind::Sub: return lhs->eval(v) - rhs->eval(v);
      case Kind::Mul: return lhs->eval(v) * rhs->eval(v);
      case Kind::Div: return lhs->eval(v) / rhs->eval(v);
      case Kind::Pow: return std::pow(lhs->eval(v), rhs->eval(v));
      case Kind::Call: {
        const double a = lhs->eval(v);
        switch (fn) {
          case Fn::Sin: return std::sin(a);
          case Fn::Cos: return std::cos(a);
          case Fn::Exp: return std::exp(a);
          case Fn::Tanh: return std::tanh(a);
          case Fn::Abs: return std::abs(a);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars,
         std::vector<bool>& used)
      : s_(s), vars_(vars), used_(used) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at column " +
                      std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (accept('+')) e = binary(Node::Kind::Add, e, term());
      else if (accept('-')) e = binary(Node::Kind::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) e = binary(Node::Kind::Mul, e, unary());
      else if (accept('/')) e = binary(Node::Kind::Div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Negate;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') return call(id);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == id) {
          used_[i] = true;
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::Variable;
          n->index = i;
          return n;
        }
      if (id == "pi") {
        auto n = std::make_shared<Node>();
        n->value = std::numbers::pi;
        return n;
      }
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr call(const std::string& id) {
    Node::Fn fn;
    if (id == "sin") fn = Node::Fn::Sin;
    else if (id == "cos") fn = Node::Fn::Cos;
    else if (id == "exp") fn = Node::Fn::Exp;
    else if (id == "tanh") fn = Node::Fn::Tanh;
    else if (id == "abs") fn = Node::Fn::Abs;
    else fail("unknown function '" + id + "'");
    accept('(');
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->fn = fn;
    n->lhs = expr();
    if (!accept(')')) fail("expected ')'");
    return n;
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::vector<bool>& used_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() {
  auto n = std::make_shared<Node>();
  root_ = n;
}

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = text;
  e.used_.assign(variables.size(), false);
  Parser p(text, variables, e.used_);
  e.root_ = p.parse();
  return e;
}

double Expression::eval(std::span<const double> values) const {
  return root_->eval(values);
}

bool Expression::uses(std::size_t variable) const {
  return variable < used_.size() && used_[variable];
}

}  // namespace pps
