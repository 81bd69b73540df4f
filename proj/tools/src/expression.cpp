#include "lgp_runner/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace lgp::runner {

struct Expression::Node {
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Sign, Step, Abs, Min, Max } op = Op::Const;
  double value = 0.0;
  int var = 0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(std::span<const double> x) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Var: return x[static_cast<std::size_t>(var)];
      case Op::Neg: return -args[0]->eval(x);
      case Op::Add: return args[0]->eval(x) + args[1]->eval(x);
      case Op::Sub: return args[0]->eval(x) - args[1]->eval(x);
      case Op::Mul: return args[0]->eval(x) * args[1]->eval(x);
      case Op::Div: return args[0]->eval(x) / args[1]->eval(x);
      case Op::Sign: {
        const double a = args[0]->eval(x);
        return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
      }
      case Op::Step: return args[0]->eval(x) > 0 ? 1.0 : 0.0;
      case Op::Abs: return std::abs(args[0]->eval(x));
      case Op::Min: return std::min(args[0]->eval(x), args[1]->eval(x));
      case Op::Max: return std::max(args[0]->eval(x), args[1]->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

class Parser {
 public:
  Parser(std::string_view s, int n) : s_(s), n_(n) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }
  int max_coord() const { return max_coord_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError("expression \"" + std::string(s_) + "\": " + what + " at column " + std::to_string(pos_ + 1));
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
  static NodePtr make(Op op, std::vector<NodePtr> args, double value = 0.0, int var = 0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->args = std::move(args);
    n->value = value;
    n->var = var;
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return primary();
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }
  NodePtr number() {
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) fail("bad number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return make(Op::Const, {}, v);
  }
  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    if (id.size() >= 2 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int k = 0;
      std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (k < 1 || k > n_) {
        pos_ = start;
        fail("coordinate " + std::string(id) + " outside x1..x" + std::to_string(n_));
      }
      max_coord_ = std::max(max_coord_, k);
      return make(Op::Var, {}, 0.0, k - 1);
    }
    struct Fn {
      std::string_view name;
      Op op;
      int arity;
    };
    static constexpr Fn kFns[] = {{"sign", Op::Sign, 1}, {"step", Op::Step, 1}, {"abs", Op::Abs, 1},
                                  {"min", Op::Min, 2},   {"max", Op::Max, 2}};
    for (const auto& f : kFns) {
      if (f.name != id) continue;
      expect('(');
      std::vector<NodePtr> args{expr()};
      for (int a = 1; a < f.arity; ++a) {
        expect(',');
        args.push_back(expr());
      }
      expect(')');
      return make(f.op, std::move(args));
    }
    pos_ = start;
    fail("unknown name '" + std::string(id) + "'");
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
  int max_coord_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, int dimension) {
  Parser p(text, dimension);
  Expression e;
  e.root_ = p.run();
  e.text_ = std::string(text);
  e.max_coord_ = p.max_coord();
  return e;
}

double Expression::operator()(std::span<const double> x) const { return root_->eval(x); }

}  // namespace lgp::runner
