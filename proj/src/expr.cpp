#include "torusbie/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <vector>

#include "torusbie/green.hpp"

namespace torusbie {

namespace {

struct FnInfo {
    const char* name;
    int arity;
};

constexpr std::array<FnInfo, 7> kFns{{{"sin", 1},
                                      {"cos", 1},
                                      {"log", 1},
                                      {"exp", 1},
                                      {"atan2", 2},
                                      {"absG", 4},
                                      {"dnG", 4}}};

} // namespace

struct BoundaryExpr::Node {
    enum class Kind { Num, Var, Unary, Binary, Call };
    Kind kind = Kind::Num;
    double num = 0.0;
    char var = 0; // 'x' 'y' 't' 'j'
    char op = 0;  // '+' '-' '*' '/' '^'
    int fn = -1;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const BoundaryExpr::Node>;
using Node = BoundaryExpr::Node;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected input, expected operator or end of input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("parse error at byte " + std::to_string(pos_) + ": " + what, pos_);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            lhs = binary(c, lhs, term());
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            lhs = binary(c, lhs, factor());
        }
    }

    // unary minus binds looser than ^, so -x^2 is -(x^2) and 2^-3 is legal
    NodePtr factor() {
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Unary;
            n->op = '-';
            n->args.push_back(factor());
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (peek() == '^') {
            ++pos_;
            return binary('^', base, factor());
        }
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input, expected number, variable or '('");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))))
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail(std::string("unexpected '") + c + "', expected number, variable, function or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = mark;
                fail("malformed exponent, expected digits after 'e'");
            }
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Num;
        n->num = std::stod(s_.substr(start, pos_ - start));
        return n;
    }

    NodePtr ident() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '_'))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);

        if (peek() == '(') {
            int fn = -1;
            for (std::size_t k = 0; k < kFns.size(); ++k)
                if (name == kFns[k].name) fn = int(k);
            if (fn < 0) {
                pos_ = start;
                fail("unknown function '" + name +
                     "', expected sin, cos, log, exp, atan2, absG or dnG");
            }
            ++pos_; // '('
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Call;
            n->fn = fn;
            if (!eat(')')) {
                for (;;) {
                    n->args.push_back(expr());
                    if (eat(',')) continue;
                    if (eat(')')) break;
                    fail("expected ',' or ')'");
                }
            }
            if (int(n->args.size()) != kFns[fn].arity) {
                pos_ = start;
                fail("function '" + name + "' takes " + std::to_string(kFns[fn].arity) +
                     " argument(s), got " + std::to_string(n->args.size()));
            }
            return n;
        }

        if (name.size() == 1 && (name == "x" || name == "y" || name == "t" || name == "j")) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Var;
            n->var = name[0];
            return n;
        }
        pos_ = start;
        fail("unknown variable '" + name + "', expected x, y, t or j");
    }

    static NodePtr binary(char op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->op = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }
};

double eval_node(const Node& n, const ExprContext& ctx) {
    switch (n.kind) {
    case Node::Kind::Num:
        return n.num;
    case Node::Kind::Var:
        switch (n.var) {
        case 'x': return ctx.x;
        case 'y': return ctx.y;
        case 't': return ctx.t;
        default: return ctx.j;
        }
    case Node::Kind::Unary:
        return -eval_node(*n.args[0], ctx);
    case Node::Kind::Binary: {
        double a = eval_node(*n.args[0], ctx);
        double b = eval_node(*n.args[1], ctx);
        switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return std::pow(a, b);
        }
    }
    case Node::Kind::Call:
    default: {
        std::array<double, 4> a{};
        for (std::size_t i = 0; i < n.args.size(); ++i) a[i] = eval_node(*n.args[i], ctx);
        switch (n.fn) {
        case 0: return std::sin(a[0]);
        case 1: return std::cos(a[0]);
        case 2: return std::log(a[0]);
        case 3: return std::exp(a[0]);
        case 4: return std::atan2(a[0], a[1]);
        case 5:
        case 6: {
            if (!ctx.torus)
                throw std::logic_error("expression uses absG/dnG without a bound torus");
            cplx d{a[0] - a[2], a[1] - a[3]};
            if (n.fn == 5) return green(d, *ctx.torus);
            auto gr = green_gradient(d, *ctx.torus);
            return gr[0] * ctx.normal.real() + gr[1] * ctx.normal.imag();
        }
        default:
            throw std::logic_error("unreachable");
        }
    }
    }
}

} // namespace

BoundaryExpr BoundaryExpr::parse(const std::string& source) {
    BoundaryExpr e;
    e.src_ = source;
    e.root_ = Parser(source).run();
    return e;
}

double BoundaryExpr::eval(const ExprContext& ctx) const {
    return eval_node(*root_, ctx);
}

} // namespace torusbie
