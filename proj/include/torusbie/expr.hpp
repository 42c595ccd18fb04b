#pragma once

#include <memory>
#include <string>

#include "torusbie/elliptic.hpp"

namespace torusbie {

struct ParseError : std::runtime_error {
    std::size_t offset; // byte position in the source string
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg), offset(off) {}
};

/* Evaluation site for a boundary-data expression: node position (x, y), curve
 * parameter t, hole index j, unit normal (for dnG), and the torus (for absG/dnG). */
struct ExprContext {
    double x = 0.0, y = 0.0, t = 0.0;
    double j = 0.0;
    cplx normal{0.0, 0.0};
    const Torus* torus = nullptr;
};

/* Arithmetic over x, y, t, j with + - * / ^ (right-associative ^ binding tighter
 * than unary minus), calls sin, cos, log, exp, atan2(y, x), and the torus-aware
 * absG(x, y, ax, ay) = G(z - a) and dnG(x, y, ax, ay) = grad G(z - a) . normal. */
class BoundaryExpr {
public:
    static BoundaryExpr parse(const std::string& source);
    double eval(const ExprContext& ctx) const;
    const std::string& source() const { return src_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string src_;
};

} // namespace torusbie
