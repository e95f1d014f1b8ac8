#pragma once

// Arithmetic expressions in x1..xn: + - * / ^, unary minus, parentheses and
// the functions sqrt, sin, cos, exp.

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gbk/error.hpp"
#include "gbk/graph.hpp"

namespace gbk {

class Expression {
 public:
  static Expression parse(std::string_view text, int variables) {
    Parser p{text, variables, 0};
    Expression e;
    e.text_ = std::string(text);
    e.variables_ = variables;
    e.root_ = p.expression();
    p.skip_space();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return e;
  }

  double operator()(const Vector& x) const {
    if (x.size() != variables_) throw InvalidInput("expression expects " + std::to_string(variables_) + " variables");
    return root_->eval(x);
  }

  const std::string& text() const { return text_; }
  int variables() const { return variables_; }

 private:
  enum class Kind { constant, variable, add, sub, mul, div, pow, neg, sqrt, sin, cos, exp };

  struct Node {
    Kind kind;
    double value = 0.0;
    int index = 0;
    std::shared_ptr<const Node> a, b;

    double eval(const Vector& x) const {
      switch (kind) {
        case Kind::constant: return value;
        case Kind::variable: return x(index);
        case Kind::add: return a->eval(x) + b->eval(x);
        case Kind::sub: return a->eval(x) - b->eval(x);
        case Kind::mul: return a->eval(x) * b->eval(x);
        case Kind::div: return a->eval(x) / b->eval(x);
        case Kind::pow: return std::pow(a->eval(x), b->eval(x));
        case Kind::neg: return -a->eval(x);
        case Kind::sqrt: return std::sqrt(a->eval(x));
        case Kind::sin: return std::sin(a->eval(x));
        case Kind::cos: return std::cos(a->eval(x));
        case Kind::exp: return std::exp(a->eval(x));
      }
      return 0.0;
    }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    return std::make_shared<const Node>(Node{k, 0.0, 0, std::move(a), std::move(b)});
  }

  struct Parser {
    std::string_view s;
    int variables;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& what) const {
      throw InvalidInput("expression column " + std::to_string(pos + 1) + ": " + what);
    }

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool accept(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr expression() {
      NodePtr left = term();
      for (;;) {
        if (accept('+')) left = make(Kind::add, left, term());
        else if (accept('-')) left = make(Kind::sub, left, term());
        else return left;
      }
    }

    NodePtr term() {
      NodePtr left = unary();
      for (;;) {
        if (accept('*')) left = make(Kind::mul, left, unary());
        else if (accept('/')) left = make(Kind::div, left, unary());
        else return left;
      }
    }

    NodePtr unary() {
      if (accept('-')) return make(Kind::neg, unary());
      if (accept('+')) return unary();
      return power();
    }

    NodePtr power() {
      NodePtr base = primary();
      if (accept('^')) return make(Kind::pow, base, unary());
      return base;
    }

    NodePtr primary() {
      skip_space();
      if (pos >= s.size()) fail("unexpected end of expression");
      const char c = s[pos];
      if (accept('(')) {
        NodePtr inner = expression();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
      fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
      const std::string rest(s.substr(pos));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos += used;
      auto node = std::make_shared<Node>(Node{Kind::constant, v, 0, nullptr, nullptr});
      return node;
    }

    NodePtr identifier() {
      const std::size_t start = pos;
      while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
      const std::string name(s.substr(start, pos - start));
      if (name.size() > 1 && name[0] == 'x' &&
          name.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int index = std::stoi(name.substr(1));
        if (index < 1 || index > variables) {
          pos = start;
          fail("variable " + name + " out of range x1..x" + std::to_string(variables));
        }
        return std::make_shared<Node>(Node{Kind::variable, 0.0, index - 1, nullptr, nullptr});
      }
      Kind k;
      if (name == "sqrt") k = Kind::sqrt;
      else if (name == "sin") k = Kind::sin;
      else if (name == "cos") k = Kind::cos;
      else if (name == "exp") k = Kind::exp;
      else {
        pos = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = expression();
      if (!accept(')')) fail("expected ')'");
      return make(k, arg);
    }
  };

  std::string text_;
  int variables_ = 0;
  NodePtr root_;
};

// Graph of f = (e1, ..., em) given as expressions separated by ';'.
inline GraphMap expression_graph(std::string_view text, int n, double h = 1e-4) {
  if (n < 1) throw InvalidInput("expression graphs need n >= 1");
  std::vector<Expression> comps;
  std::size_t start = 0;
  for (;;) {
    const auto semi = text.find(';', start);
    comps.push_back(Expression::parse(text.substr(start, semi == std::string_view::npos ? semi : semi - start), n));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  const int m = static_cast<int>(comps.size());
  return GraphMap::finite_difference(
      n, m,
      [comps](const Vector& x) {
        Vector f(comps.size());
        for (std::size_t a = 0; a < comps.size(); ++a) f(a) = comps[a](x);
        return f;
      },
      h, std::string(text));
}

}  // namespace gbk
