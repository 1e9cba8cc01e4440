#include "wbflux/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "wbflux/errors.hpp"

namespace wbflux {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Op {
    constant, variable,
    add, sub, mul, div, pow, neg,
    lt, gt, le, ge,
    call1, call2, call3,
  };
  Op op;
  double value = 0.0;
  double (*fn1)(double) = nullptr;
  double (*fn2)(double, double) = nullptr;
  NodePtr a, b, c;
};

double eval(const Node& n, double x) {
  switch (n.op) {
    case Node::Op::constant: return n.value;
    case Node::Op::variable: return x;
    case Node::Op::add: return eval(*n.a, x) + eval(*n.b, x);
    case Node::Op::sub: return eval(*n.a, x) - eval(*n.b, x);
    case Node::Op::mul: return eval(*n.a, x) * eval(*n.b, x);
    case Node::Op::div: return eval(*n.a, x) / eval(*n.b, x);
    case Node::Op::pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
    case Node::Op::neg: return -eval(*n.a, x);
    case Node::Op::lt: return eval(*n.a, x) < eval(*n.b, x) ? 1.0 : 0.0;
    case Node::Op::gt: return eval(*n.a, x) > eval(*n.b, x) ? 1.0 : 0.0;
    case Node::Op::le: return eval(*n.a, x) <= eval(*n.b, x) ? 1.0 : 0.0;
    case Node::Op::ge: return eval(*n.a, x) >= eval(*n.b, x) ? 1.0 : 0.0;
    case Node::Op::call1: return n.fn1(eval(*n.a, x));
    case Node::Op::call2: return n.fn2(eval(*n.a, x), eval(*n.b, x));
    case Node::Op::call3:
      return eval(*n.a, x) != 0.0 ? eval(*n.b, x) : eval(*n.c, x);
  }
  return 0.0;
}

struct Parser {
  const std::string& text;
  const std::string& var;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + text + "': " + what + " at position " +
                      std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  NodePtr make(Node n) { return std::make_shared<Node>(std::move(n)); }
  NodePtr binary(Node::Op op, NodePtr a, NodePtr b) {
    Node n;
    n.op = op;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
  }

  NodePtr parse() {
    NodePtr e = comparison();
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return e;
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    skip_ws();
    if (pos < text.size() && (text[pos] == '<' || text[pos] == '>')) {
      const char op = text[pos++];
      const bool eq = (pos < text.size() && text[pos] == '=');
      if (eq) ++pos;
      NodePtr rhs = additive();
      if (op == '<') return binary(eq ? Node::Op::le : Node::Op::lt, lhs, rhs);
      return binary(eq ? Node::Op::ge : Node::Op::gt, lhs, rhs);
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+')) lhs = binary(Node::Op::add, lhs, term());
      else if (consume('-')) lhs = binary(Node::Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (consume('*')) lhs = binary(Node::Op::mul, lhs, unary());
      else if (consume('/')) lhs = binary(Node::Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (consume('-')) {
      Node n;
      n.op = Node::Op::neg;
      n.a = unary();
      return make(std::move(n));
    }
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) return binary(Node::Op::pow, base, unary());  // right assoc
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = comparison();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    size_t used = 0;
    double v;
    try {
      v = std::stod(text.substr(pos), &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos += used;
    Node n;
    n.op = Node::Op::constant;
    n.value = v;
    return make(std::move(n));
  }

  NodePtr constant(double v) {
    Node n;
    n.op = Node::Op::constant;
    n.value = v;
    return make(std::move(n));
  }

  NodePtr identifier() {
    const size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    const std::string name = text.substr(start, pos - start);
    if (!peek('(')) {
      if (name == var) {
        Node n;
        n.op = Node::Op::variable;
        return make(std::move(n));
      }
      if (name == "pi") return constant(std::numbers::pi);
      if (name == "e") return constant(std::numbers::e);
      fail("unknown identifier '" + name + "' (variable is '" + var + "')");
    }
    consume('(');
    std::vector<NodePtr> args;
    if (!peek(')')) {
      args.push_back(comparison());
      while (consume(',')) args.push_back(comparison());
    }
    if (!consume(')')) fail("missing ')' after arguments of " + name);
    return call(name, std::move(args));
  }

  NodePtr call(const std::string& name, std::vector<NodePtr> args) {
    static const struct { const char* name; double (*fn)(double); } unary_fns[] = {
        {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
        {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
        {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
        {"abs", std::fabs},  {"atan", std::atan},
    };
    Node n;
    for (const auto& u : unary_fns) {
      if (name == u.name) {
        if (args.size() != 1) fail(name + " takes one argument");
        n.op = Node::Op::call1;
        n.fn1 = u.fn;
        n.a = args[0];
        return make(std::move(n));
      }
    }
    if (name == "sign") {
      if (args.size() != 1) fail("sign takes one argument");
      n.op = Node::Op::call1;
      n.fn1 = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
      n.a = args[0];
      return make(std::move(n));
    }
    if (name == "min" || name == "max" || name == "pow") {
      if (args.size() != 2) fail(name + " takes two arguments");
      n.op = Node::Op::call2;
      n.fn2 = (name == "min") ? static_cast<double (*)(double, double)>(
                                    [](double a, double b) { return std::fmin(a, b); })
              : (name == "max") ? static_cast<double (*)(double, double)>(
                                      [](double a, double b) { return std::fmax(a, b); })
                                : static_cast<double (*)(double, double)>(
                                      [](double a, double b) { return std::pow(a, b); });
      n.a = args[0];
      n.b = args[1];
      return make(std::move(n));
    }
    if (name == "if") {
      if (args.size() != 3) fail("if takes three arguments");
      n.op = Node::Op::call3;
      n.a = args[0];
      n.b = args[1];
      n.c = args[2];
      return make(std::move(n));
    }
    fail("unknown function '" + name + "'");
  }
};

}  // namespace

RealFn compile_expression(const std::string& text, const std::string& variable) {
  Parser p{text, variable};
  NodePtr root = p.parse();
  return [root](double x) { return eval(*root, x); };
}

}  // namespace wbflux
