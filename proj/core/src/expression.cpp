#include "phidual/expression.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "phidual/errors.hpp"
#include "phidual/report_io.hpp"

namespace phidual {
namespace detail {

enum class NodeKind { number, variable, negate, add, sub, mul, div, power, call };
enum class Func { abs, min, max, sin, cos, exp, sqrt };

struct Node {
  NodeKind kind = NodeKind::number;
  double number = 0.0;
  std::size_t variable = 0;
  int exponent = 0;
  Func func = Func::abs;
  std::vector<std::shared_ptr<const Node>> children;
};

enum class Op : std::uint8_t {
  push_const, push_var, negate, add, sub, mul, div, pow_int,
  abs, sin, cos, exp, sqrt, min_n, max_n
};

struct Instr {
  Op op;
  std::size_t index = 0;  // variable index or argument count
  double value = 0.0;     // constant
  int exponent = 0;
};

struct Program {
  std::vector<Instr> code;
  std::size_t max_depth = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FuncInfo {
  std::string_view name;
  Func func;
  std::size_t min_args;
  std::size_t max_args;
};

constexpr std::array<FuncInfo, 7> kFunctions{{
    {"abs", Func::abs, 1, 1},
    {"min", Func::min, 2, static_cast<std::size_t>(-1)},
    {"max", Func::max, 2, static_cast<std::size_t>(-1)},
    {"sin", Func::sin, 1, 1},
    {"cos", Func::cos, 1, 1},
    {"exp", Func::exp, 1, 1},
    {"sqrt", Func::sqrt, 1, 1},
}};

std::string_view func_name(Func f) {
  for (const auto& info : kFunctions) {
    if (info.func == f) return info.name;
  }
  return "?";
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
 public:
  Parser(std::string_view src, std::size_t n) : src_(src), n_(n) {}

  NodePtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(NodeKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(NodeKind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(NodeKind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      Node n;
      n.kind = NodeKind::negate;
      n.children.push_back(unary());
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    bool negative = accept('-');
    skip_ws();
    if (pos_ >= src_.size() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                 src_[pos_] == '.')) {
      fail_at("exponent of '^' must be a constant integer", at);
    }
    const double e = number_literal();
    if (e != std::floor(e) || e > 1e6) fail_at("exponent of '^' must be a constant integer", at);
    Node n;
    n.kind = NodeKind::power;
    n.exponent = static_cast<int>(negative ? -e : e);
    n.children.push_back(base);
    return make(std::move(n));
  }

  double number_literal() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    // strtod needs a terminated buffer; copy the candidate span.
    std::string buf;
    std::size_t j = pos_;
    while (j < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.' ||
            src_[j] == 'e' || src_[j] == 'E' ||
            ((src_[j] == '+' || src_[j] == '-') && j > pos_ &&
             (src_[j - 1] == 'e' || src_[j - 1] == 'E')))) {
      ++j;
    }
    buf.assign(begin, j - pos_);
    const double v = std::strtod(buf.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - buf.c_str());
    if (used == 0) fail("malformed number");
    pos_ += used;
    return v;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      Node n;
      n.kind = NodeKind::number;
      n.number = number_literal();
      return make(std::move(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      const unsigned long idx = std::strtoul(std::string(name.substr(1)).c_str(), nullptr, 10);
      if (idx < 1 || idx > n_) {
        fail_at("unknown identifier '" + std::string(name) + "' (variables are x1..x" +
                    std::to_string(n_) + ")",
                start);
      }
      Node n;
      n.kind = NodeKind::variable;
      n.variable = idx - 1;
      return make(std::move(n));
    }

    for (const auto& info : kFunctions) {
      if (info.name != name) continue;
      expect('(');
      Node n;
      n.kind = NodeKind::call;
      n.func = info.func;
      n.children.push_back(expr());
      while (accept(',')) n.children.push_back(expr());
      expect(')');
      if (n.children.size() < info.min_args || n.children.size() > info.max_args) {
        fail_at("arity mismatch: " + std::string(name) + " does not take " +
                    std::to_string(n.children.size()) + " argument(s)",
                start);
      }
      return make(std::move(n));
    }
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  static NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    Node n;
    n.kind = kind;
    n.children = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
  }

  std::string_view src_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

void compile(const Node& node, Program& prog, std::size_t depth) {
  auto emit = [&](Instr ins, std::size_t d) {
    prog.code.push_back(ins);
    prog.max_depth = std::max(prog.max_depth, d);
  };
  switch (node.kind) {
    case NodeKind::number: emit({Op::push_const, 0, node.number, 0}, depth + 1); return;
    case NodeKind::variable: emit({Op::push_var, node.variable, 0.0, 0}, depth + 1); return;
    case NodeKind::negate:
      compile(*node.children[0], prog, depth);
      emit({Op::negate}, depth + 1);
      return;
    case NodeKind::power:
      compile(*node.children[0], prog, depth);
      emit({Op::pow_int, 0, 0.0, node.exponent}, depth + 1);
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      compile(*node.children[0], prog, depth);
      compile(*node.children[1], prog, depth + 1);
      const Op op = node.kind == NodeKind::add   ? Op::add
                    : node.kind == NodeKind::sub ? Op::sub
                    : node.kind == NodeKind::mul ? Op::mul
                                                 : Op::div;
      emit({op}, depth + 1);
      return;
    }
    case NodeKind::call: {
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        compile(*node.children[i], prog, depth + i);
      }
      Op op = Op::abs;
      switch (node.func) {
        case Func::abs: op = Op::abs; break;
        case Func::sin: op = Op::sin; break;
        case Func::cos: op = Op::cos; break;
        case Func::exp: op = Op::exp; break;
        case Func::sqrt: op = Op::sqrt; break;
        case Func::min: op = Op::min_n; break;
        case Func::max: op = Op::max_n; break;
      }
      emit({op, node.children.size(), 0.0, 0}, depth + 1);
      return;
    }
  }
}

double pow_int(double base, int exponent) {
  unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  double result = 1.0;
  double b = base;
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return exponent < 0 ? 1.0 / result : result;
}

void print(const Node& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::number: out += format_number(node.number); return;
    case NodeKind::variable: out += "x" + std::to_string(node.variable + 1); return;
    case NodeKind::negate:
      out += "(-";
      print(*node.children[0], out);
      out += ")";
      return;
    case NodeKind::power:
      out += "(";
      print(*node.children[0], out);
      out += "^" + std::to_string(node.exponent) + ")";
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      const char* op = node.kind == NodeKind::add   ? " + "
                       : node.kind == NodeKind::sub ? " - "
                       : node.kind == NodeKind::mul ? " * "
                                                    : " / ";
      out += "(";
      print(*node.children[0], out);
      out += op;
      print(*node.children[1], out);
      out += ")";
      return;
    }
    case NodeKind::call:
      out += func_name(node.func);
      out += "(";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += ", ";
        print(*node.children[i], out);
      }
      out += ")";
      return;
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::number:
      if (a.number != b.number) return false;
      break;
    case NodeKind::variable:
      if (a.variable != b.variable) return false;
      break;
    case NodeKind::power:
      if (a.exponent != b.exponent) return false;
      break;
    case NodeKind::call:
      if (a.func != b.func) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

void collect_vars(const Node& node, std::set<std::size_t>& out) {
  if (node.kind == NodeKind::variable) out.insert(node.variable);
  for (const auto& c : node.children) collect_vars(*c, out);
}

}  // namespace
}  // namespace detail

Expression::Expression(std::shared_ptr<const detail::Node> root, std::size_t n)
    : root_(std::move(root)), dim_(n) {
  auto prog = std::make_shared<detail::Program>();
  detail::compile(*root_, *prog, 0);
  program_ = std::move(prog);
}

Expression Expression::parse(std::string_view source, std::size_t n) {
  if (n == 0) throw ValidationError("expression dimension must be at least 1");
  detail::Parser parser(source, n);
  return Expression(parser.parse(), n);
}

Expression Expression::constant(double value, std::size_t n) {
  detail::Node num;
  num.kind = detail::NodeKind::number;
  num.number = std::abs(value);
  auto node = detail::make(std::move(num));
  if (std::signbit(value)) {
    detail::Node neg;
    neg.kind = detail::NodeKind::negate;
    neg.children.push_back(node);
    node = detail::make(std::move(neg));
  }
  return Expression(std::move(node), n);
}

double Expression::operator()(std::span<const double> x) const {
  using detail::Op;
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (program_->max_depth > kInline) {
    heap_stack.resize(program_->max_depth);
    stack = heap_stack.data();
  }
  std::size_t sp = 0;
  for (const auto& ins : program_->code) {
    switch (ins.op) {
      case Op::push_const: stack[sp++] = ins.value; break;
      case Op::push_var: stack[sp++] = x[ins.index]; break;
      case Op::negate: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::div: --sp; stack[sp - 1] /= stack[sp]; break;
      case Op::pow_int: stack[sp - 1] = detail::pow_int(stack[sp - 1], ins.exponent); break;
      case Op::abs: stack[sp - 1] = std::abs(stack[sp - 1]); break;
      case Op::sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
      case Op::cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
      case Op::exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
      case Op::sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
      case Op::min_n:
      case Op::max_n: {
        const std::size_t k = ins.index;
        double r = stack[sp - k];
        for (std::size_t i = sp - k + 1; i < sp; ++i) {
          r = ins.op == Op::min_n ? std::min(r, stack[i]) : std::max(r, stack[i]);
        }
        sp -= k;
        stack[sp++] = r;
        break;
      }
    }
  }
  return stack[0];
}

std::string Expression::to_string() const {
  std::string out;
  detail::print(*root_, out);
  return out;
}

std::vector<std::size_t> Expression::free_variables() const {
  std::set<std::size_t> vars;
  detail::collect_vars(*root_, vars);
  return {vars.begin(), vars.end()};
}

bool operator==(const Expression& lhs, const Expression& rhs) {
  return lhs.dim_ == rhs.dim_ && detail::equal(*lhs.root_, *rhs.root_);
}

}  // namespace phidual
