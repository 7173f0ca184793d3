#pragma once

// Small arithmetic language for user-supplied fields and warping functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative, binds tighter than '*'
//   primary := number | 'r' | 'x' digits | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sqrt | sin | cos | sinh | cosh | abs

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "polelab/errors.hpp"

namespace polelab::expr {

enum class NodeKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

enum class Function { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Abs };

/// Variable slot 0 is r; slot i >= 1 is the normal coordinate x_i.
inline constexpr int kMaxCoordinates = 8;

struct Node {
  NodeKind kind = NodeKind::Number;
  double value = 0.0;
  int variable = 0;
  Function function = Function::Exp;
  std::vector<std::shared_ptr<const Node>> children;
};

using NodePtr = std::shared_ptr<const Node>;

inline constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"abs", Function::Abs},
    {"cos", Function::Cos},
    {"cosh", Function::Cosh},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sin", Function::Sin},
    {"sinh", Function::Sinh},
    {"sqrt", Function::Sqrt},
}};

inline std::string_view function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Number:
      if (a.value != b.value) return false;
      break;
    case NodeKind::Variable:
      if (a.variable != b.variable) return false;
      break;
    case NodeKind::Call:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

inline double apply(Function f, double x) {
  switch (f) {
    case Function::Exp: return std::exp(x);
    case Function::Log: return std::log(x);
    case Function::Sqrt: return std::sqrt(x);
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Sinh: return std::sinh(x);
    case Function::Cosh: return std::cosh(x);
    case Function::Abs: return std::abs(x);
  }
  return x;
}

/// Values for variable slots: [0] = r, [i] = x_i.
using Bindings = std::array<double, kMaxCoordinates + 1>;

inline double evaluate(const Node& node, const Bindings& vars) {
  switch (node.kind) {
    case NodeKind::Number: return node.value;
    case NodeKind::Variable: return vars[node.variable];
    case NodeKind::Negate: return -evaluate(*node.children[0], vars);
    case NodeKind::Add: return evaluate(*node.children[0], vars) + evaluate(*node.children[1], vars);
    case NodeKind::Subtract:
      return evaluate(*node.children[0], vars) - evaluate(*node.children[1], vars);
    case NodeKind::Multiply:
      return evaluate(*node.children[0], vars) * evaluate(*node.children[1], vars);
    case NodeKind::Divide:
      return evaluate(*node.children[0], vars) / evaluate(*node.children[1], vars);
    case NodeKind::Power: {
      const double base = evaluate(*node.children[0], vars);
      const Node& exponent = *node.children[1];
      // small integer powers stay exact and defined for negative bases
      if (exponent.kind == NodeKind::Number && exponent.value == std::round(exponent.value) &&
          std::abs(exponent.value) <= 16) {
        const int k = static_cast<int>(exponent.value);
        double acc = 1.0;
        for (int i = 0; i < std::abs(k); ++i) acc *= base;
        return k < 0 ? 1.0 / acc : acc;
      }
      return std::pow(base, evaluate(exponent, vars));
    }
    case NodeKind::Call: return apply(node.function, evaluate(*node.children[0], vars));
  }
  return 0.0;
}

/// Highest coordinate index referenced (0 when the expression depends on r only).
inline int max_coordinate(const Node& node) {
  int best = node.kind == NodeKind::Variable ? node.variable : 0;
  for (const auto& c : node.children) best = std::max(best, max_coordinate(*c));
  return best;
}

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

/// Canonical, fully parenthesized text form; parse(unparse(ast)) is structurally equal to ast.
inline std::string unparse(const Node& node) {
  auto bin = [&](const char* op) {
    return "(" + unparse(*node.children[0]) + op + unparse(*node.children[1]) + ")";
  };
  switch (node.kind) {
    case NodeKind::Number: return format_number(node.value);
    case NodeKind::Variable: return node.variable == 0 ? "r" : "x" + std::to_string(node.variable);
    case NodeKind::Negate: return "(-" + unparse(*node.children[0]) + ")";
    case NodeKind::Add: return bin("+");
    case NodeKind::Subtract: return bin("-");
    case NodeKind::Multiply: return bin("*");
    case NodeKind::Divide: return bin("/");
    case NodeKind::Power: return bin("^");
    case NodeKind::Call:
      return std::string(function_name(node.function)) + "(" + unparse(*node.children[0]) + ")";
  }
  return {};
}

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ != text_.size())
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
  static NodePtr make(NodeKind kind, std::vector<NodePtr> children = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(NodeKind::Add, {lhs, parse_term()});
      else if (accept('-'))
        lhs = make(NodeKind::Subtract, {lhs, parse_term()});
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(NodeKind::Multiply, {lhs, parse_unary()});
      else if (accept('/'))
        lhs = make(NodeKind::Divide, {lhs, parse_unary()});
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(NodeKind::Negate, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(NodeKind::Power, {base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc() || end == text_.data() + pos_) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(end - text_.data());
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->value = value;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);

    if (ident == "r") {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Variable;
      n->variable = 0;
      return n;
    }
    if (ident.size() >= 2 && ident[0] == 'x' &&
        ident.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
      if (index < 1 || index > dim_ || index > kMaxCoordinates)
        throw ParseError("coordinate '" + std::string(ident) + "' not available in dimension " +
                             std::to_string(dim_),
                         start);
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Variable;
      n->variable = index;
      return n;
    }
    for (const auto& [name, fn] : kFunctions) {
      if (ident != name) continue;
      expect('(');
      NodePtr arg = parse_expr();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',')
        throw ParseError(std::string(name) + " takes exactly one argument", pos_);
      expect(')');
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Call;
      n->function = fn;
      n->children = {arg};
      return n;
    }
    throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parsed expression. Immutable and cheap to copy.
class Expression {
 public:
  Expression() = default;

  const Node& root() const { return *root_; }
  const std::string& text() const { return text_; }
  int dim() const { return dim_; }
  bool depends_on_direction() const { return max_coordinate(*root_) > 0; }

  double operator()(const Bindings& vars) const { return evaluate(*root_, vars); }

  double at_radius(double r) const {
    Bindings vars{};
    vars[0] = r;
    return evaluate(*root_, vars);
  }

  friend bool operator==(const Expression& a, const Expression& b) {
    return structurally_equal(*a.root_, *b.root_);
  }

  friend Expression parse(std::string_view text, int dim);

 private:
  NodePtr root_;
  std::string text_;
  int dim_ = 0;
};

/// Parses text over the variables r and x1..x{dim}. dim = 0 admits r only.
inline Expression parse(std::string_view text, int dim) {
  Expression e;
  e.root_ = detail::Parser(text, dim).parse();
  e.text_ = std::string(text);
  e.dim_ = dim;
  return e;
}

inline std::string unparse(const Expression& e) { return unparse(e.root()); }

}  // namespace polelab::expr
