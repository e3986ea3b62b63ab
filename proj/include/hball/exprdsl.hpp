#pragma once

#include <memory>
#include <string>

#include "hball/hcalc.hpp"

namespace hball {

/// Parse error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression over x1..xn, y1..yn, t, r2 (=|z|^2), gauge (=N),
/// arithmetic, integer powers and sin/cos/exp/sqrt/log.
class Expr {
  public:
    Expr() = default;
    explicit Expr(ExprPtr root) : root_(std::move(root)) {}

    bool valid() const { return static_cast<bool>(root_); }

    double eval(const Point& p) const;
    Jet2 jet_eval(const Point& p) const;

    /// Maximum variable index used (1-based), 0 if none.
    int max_var_index() const;

    /// True when the expression only references circle-invariant
    /// quantities (t, r2, gauge, literals); such expressions are
    /// circular by construction.
    bool syntactically_circular() const;

    std::string pretty() const;

    ScalarFn as_fn() const {
        Expr e = *this;
        return [e](const Point& p) { return e.eval(p); };
    }
    JetField as_jet_field() const {
        Expr e = *this;
        return [e](const Point& p) { return e.jet_eval(p); };
    }

  private:
    ExprPtr root_;
};

Expr parse(const std::string& src);

/// Numeric circularity check over a fixed probe set, with the syntactic
/// fast path.
bool is_circular(const Expr& e, double tol = 1e-8, int n = 1);

}  // namespace hball
