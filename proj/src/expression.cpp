#include "roughfem/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "roughfem/report.hpp"

namespace roughfem {

struct Expression::Node {
  enum class Kind { Number, X, Y, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}, std::string name = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->name = std::move(name);
  n->value = value;
  return n;
}

int arity_of(const std::string& name) {
  if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" || name == "abs" || name == "log") return 1;
  if (name == "min" || name == "max") return 2;
  if (name == "norm") return -1;
  return 0;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("malformed expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Kind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Node::Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Kind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Node::Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Node::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Node::Kind::Number, {}, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Node::Kind::X);
      if (id == "y") return make(Node::Kind::Y);
      if (id == "pi") return make(Node::Kind::Number, {}, {}, std::numbers::pi);
      const int arity = arity_of(id);
      if (arity == 0) {
        pos_ = start;
        fail("unknown identifier '" + id + "'");
      }
      expect('(');
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      expect(')');
      const bool ok = arity > 0 ? static_cast<int>(args.size()) == arity : (args.size() == 1 || args.size() == 2);
      if (!ok) fail("wrong number of arguments to " + id);
      return make(Node::Kind::Call, std::move(args), id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double x, double y) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::X:
      return x;
    case Node::Kind::Y:
      return y;
    case Node::Kind::Neg:
      return -eval(*n.args[0], x, y);
    case Node::Kind::Add:
      return eval(*n.args[0], x, y) + eval(*n.args[1], x, y);
    case Node::Kind::Sub:
      return eval(*n.args[0], x, y) - eval(*n.args[1], x, y);
    case Node::Kind::Mul:
      return eval(*n.args[0], x, y) * eval(*n.args[1], x, y);
    case Node::Kind::Div:
      return eval(*n.args[0], x, y) / eval(*n.args[1], x, y);
    case Node::Kind::Pow:
      return std::pow(eval(*n.args[0], x, y), eval(*n.args[1], x, y));
    case Node::Kind::Call: {
      const double a = eval(*n.args[0], x, y);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "sqrt") return std::sqrt(a);
      if (n.name == "abs") return std::abs(a);
      if (n.name == "log") return std::log(a);
      if (n.name == "norm") return n.args.size() == 1 ? std::abs(a) : std::hypot(a, eval(*n.args[1], x, y));
      const double b = eval(*n.args[1], x, y);
      return n.name == "min" ? std::min(a, b) : std::max(a, b);
    }
  }
  return 0.0;
}

void print(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.args[0], out);
    out += op;
    print(*n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case Node::Kind::Number:
      out += format_number(n.value);
      return;
    case Node::Kind::X:
      out += 'x';
      return;
    case Node::Kind::Y:
      out += 'y';
      return;
    case Node::Kind::Neg:
      out += "(-";
      print(*n.args[0], out);
      out += ')';
      return;
    case Node::Kind::Add:
      return binary(" + ");
    case Node::Kind::Sub:
      return binary(" - ");
    case Node::Kind::Mul:
      return binary(" * ");
    case Node::Kind::Div:
      return binary(" / ");
    case Node::Kind::Pow:
      return binary(" ^ ");
    case Node::Kind::Call:
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

bool depends_on_xy(const Node& n) {
  if (n.kind == Node::Kind::X || n.kind == Node::Kind::Y) return true;
  for (const auto& a : n.args) {
    if (depends_on_xy(*a)) return true;
  }
  return false;
}

}  // namespace

Expression::Expression() : root_(make(Node::Kind::Number)) {}

Expression Expression::parse(const std::string& text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(make(Node::Kind::Number, {}, {}, value)); }

double Expression::operator()(double x, double y) const { return eval(*root_, x, y); }

std::string Expression::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expression::is_constant() const { return !depends_on_xy(*root_); }

double Expression::constant_value() const {
  if (!is_constant()) throw ExpressionError("expression '" + str() + "' depends on x or y");
  return eval(*root_, 0.0, 0.0);
}

}  // namespace roughfem
