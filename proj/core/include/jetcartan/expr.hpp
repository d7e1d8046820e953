#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetcartan/rational.hpp"

namespace jetcartan {

/// Chart coordinates on the 1-jet space: t, x1..xn, y1..yn.
enum class CoordKind { Time, Space, Fiber };

struct Coordinate {
  CoordKind kind = CoordKind::Time;
  int index = 0;  // 1..n for Space/Fiber, unused for Time

  static Coordinate time() { return {CoordKind::Time, 0}; }
  static Coordinate space(int i) { return {CoordKind::Space, i}; }
  static Coordinate fiber(int i) { return {CoordKind::Fiber, i}; }

  /// Dense code: 0 = t, 1..N = x_i, N+1.. = y_i (N = 64 reserved per band).
  int code() const {
    switch (kind) {
      case CoordKind::Time: return 0;
      case CoordKind::Space: return index;
      default: return 64 + index;
    }
  }
  std::string name() const;

  friend bool operator==(const Coordinate& a, const Coordinate& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

/// A sample point (t, x, y); x and y have the chart dimension.
struct Point {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;

  int dim() const { return static_cast<int>(x.size()); }
  std::string str() const;
};

enum class ExprKind : std::uint8_t { Const, Var, Sum, Product, Power, Neg, Inv, Func };
enum class FuncKind : std::uint8_t { Sin, Cos, Exp, Log, Sqrt };

const char* func_name(FuncKind f);

/// Immutable, hash-consed symbolic expression. Copying is cheap (an id into a
/// process-wide intern pool); structurally identical expressions share a node.
/// Construction and rewriting (diff/simplify/...) are serialized internally;
/// evaluation touches no shared mutable state and may run concurrently.
class Expr {
 public:
  Expr() : id_(0) {}  // the constant 0

  static Expr number(Number v);
  static Expr rational(std::int64_t num, std::int64_t den = 1);
  static Expr real(double v);
  static Expr var(Coordinate c);
  static Expr sum(std::vector<Expr> kids);
  static Expr product(std::vector<Expr> kids);
  static Expr power(Expr base, Rational exponent);
  static Expr neg(Expr e);
  static Expr inv(Expr e);
  static Expr call(FuncKind f, Expr arg);

  ExprKind kind() const;
  const Number& value() const;        // Const
  Coordinate coordinate() const;      // Var
  std::span<const Expr> kids() const; // Sum/Product; single-kid nodes too
  Rational exponent() const;          // Power
  FuncKind func() const;              // Func

  std::uint64_t hash() const;
  /// Bitmask of coordinates the expression can depend on (t -> bit 0,
  /// x_i -> bit i, y_i -> bit 16+i, anything past 15 collapses to bit 31).
  std::uint32_t depends_mask() const;
  bool depends_on(Coordinate c) const;

  bool is_zero() const;  // literal constant 0
  bool is_one() const;   // literal constant 1

  std::uint32_t id() const { return id_; }
  friend bool operator==(const Expr& a, const Expr& b) { return a.id_ == b.id_; }
  friend bool operator!=(const Expr& a, const Expr& b) { return a.id_ != b.id_; }

  // Convenience arithmetic with light constant folding; canonical form is
  // produced by simplify(), not by these.
  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr operator-(Expr a);

 private:
  friend class ExprPool;
  explicit Expr(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

/// Total structural order (independent of construction order). Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);

/// Exact partial derivative with respect to a coordinate.
Expr diff(const Expr& e, Coordinate v);

/// Thrown by eval on division by zero, log of a non-positive value, sqrt of a
/// negative value, fractional powers of negatives, or non-finite results.
struct EvalDomainError : std::runtime_error {
  explicit EvalDomainError(const std::string& what, Expr offending)
      : std::runtime_error(what), subtree(offending) {}
  Expr subtree;
};

double eval(const Expr& e, const Point& p);

/// Evaluation memo shared across several roots at one point: expressions with
/// common subtrees pay for each subtree once.
class EvalScratch {
 public:
  void reset() { memo_.clear(); }
  double eval(const Expr& e, const Point& p);

 private:
  std::unordered_map<std::uint32_t, double> memo_;
};

/// Best-effort normalization: constant folding, 0/1 identities, flattening of
/// sums/products, collection of identical terms and of powers of a common
/// base. Idempotent. Does not distribute products over sums.
Expr simplify(const Expr& e);

/// simplify + full distribution of products/integer powers over sums; the
/// polynomial-style normal form used for exact symbolic-zero checks.
Expr expand(const Expr& e);

/// simplify(expand(e)) is the literal constant 0.
bool is_symbolically_zero(const Expr& e);

/// Replace coordinates by expressions (simultaneous substitution).
Expr substitute(const Expr& e, const std::vector<std::pair<Coordinate, Expr>>& bindings);

/// Prints the DSL accepted by parse_expr; parse(print(e)) is eval-equal to e.
std::string to_dsl(const Expr& e);

// Shorthand used when assembling tensor formulas.
inline Expr sum_of(std::vector<Expr> kids) { return Expr::sum(std::move(kids)); }
Expr powi(Expr base, std::int64_t k);

}  // namespace jetcartan
