#include "jetcartan/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>

namespace jetcartan {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

std::uint32_t coord_mask(const Coordinate& c) {
  switch (c.kind) {
    case CoordKind::Time: return 1u;
    case CoordKind::Space: return c.index <= 15 ? (1u << c.index) : (1u << 31);
    default: return c.index <= 15 ? (1u << (16 + c.index - 1)) : (1u << 31);
  }
}

struct Node {
  ExprKind kind = ExprKind::Const;
  FuncKind func = FuncKind::Sin;
  Coordinate var;
  Number value;
  Rational exponent;
  std::vector<Expr> kids;
  std::uint64_t hash = 0;
  std::uint32_t mask = 0;
};

bool shallow_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.hash != b.hash) return false;
  switch (a.kind) {
    case ExprKind::Const:
      if (!(a.value == b.value)) return false;
      break;
    case ExprKind::Var:
      if (!(a.var == b.var)) return false;
      break;
    case ExprKind::Power:
      if (!(a.exponent == b.exponent)) return false;
      break;
    case ExprKind::Func:
      if (a.func != b.func) return false;
      break;
    default: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (a.kids[i] != b.kids[i]) return false;
  return true;
}

}  // namespace

// Process-wide intern pool. Nodes are immutable once created; the deque keeps
// references stable so lock-free readers (eval) stay valid while new
// expressions are built elsewhere.
class ExprPool {
 public:
  ExprPool() {
    intern_const(Number(Rational(0)));  // id 0: Expr() default
    intern_const(Number(Rational(1)));  // id 1
  }

  static ExprPool& get() {
    static ExprPool pool;
    return pool;
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  static Expr wrap(std::uint32_t id) { return Expr(id); }

  Expr intern(Node&& n) {
    finish(n);
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto range = interned_.equal_range(n.hash);
    for (auto it = range.first; it != range.second; ++it) {
      if (shallow_equal(nodes_[it->second], n)) return wrap(it->second);
    }
    nodes_.push_back(std::move(n));
    auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    interned_.emplace(nodes_.back().hash, id);
    return wrap(id);
  }

  std::recursive_mutex mu_;
  std::unordered_map<std::uint64_t, std::uint32_t> diff_cache;
  std::unordered_map<std::uint32_t, std::uint32_t> simplify_cache;
  std::unordered_map<std::uint32_t, std::uint32_t> expand_cache;

 private:
  void intern_const(Number v) {
    Node n;
    n.kind = ExprKind::Const;
    n.value = v;
    intern(std::move(n));
  }

  void finish(Node& n) {
    std::uint64_t h = mix64(0xa0761d6478bd642fULL + static_cast<std::uint64_t>(n.kind));
    std::uint32_t m = 0;
    switch (n.kind) {
      case ExprKind::Const: h = mix64(h ^ n.value.hash()); break;
      case ExprKind::Var:
        h = mix64(h ^ ((static_cast<std::uint64_t>(n.var.kind) << 32) ^
                       static_cast<std::uint64_t>(n.var.index)));
        m = coord_mask(n.var);
        break;
      case ExprKind::Power: h = mix64(h ^ Number(n.exponent).hash()); break;
      case ExprKind::Func: h = mix64(h ^ (0x1234 + static_cast<std::uint64_t>(n.func))); break;
      default: break;
    }
    for (const Expr& k : n.kids) {
      h = mix64(h ^ nodes_[k.id()].hash);
      m |= nodes_[k.id()].mask;
    }
    n.hash = h;
    n.mask = m;
  }

  std::deque<Node> nodes_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> interned_;
};

namespace {

const Node& nd(const Expr& e) { return ExprPool::get().node(e.id()); }

}  // namespace

std::string Coordinate::name() const {
  switch (kind) {
    case CoordKind::Time: return "t";
    case CoordKind::Space: return "x" + std::to_string(index);
    default: return "y" + std::to_string(index);
  }
}

std::string Point::str() const {
  std::string s = "t=" + Number(t).str();
  for (std::size_t i = 0; i < x.size(); ++i)
    s += " x" + std::to_string(i + 1) + "=" + Number(x[i]).str();
  for (std::size_t i = 0; i < y.size(); ++i)
    s += " y" + std::to_string(i + 1) + "=" + Number(y[i]).str();
  return s;
}

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    default: return "sqrt";
  }
}

Expr Expr::number(Number v) {
  Node n;
  n.kind = ExprKind::Const;
  n.value = v;
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::rational(std::int64_t num, std::int64_t den) {
  return number(Number(Rational(num, den)));
}

Expr Expr::real(double v) { return number(Number(v)); }

Expr Expr::var(Coordinate c) {
  Node n;
  n.kind = ExprKind::Var;
  n.var = c;
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::sum(std::vector<Expr> kids) {
  if (kids.empty()) return rational(0);
  if (kids.size() == 1) return kids[0];
  Node n;
  n.kind = ExprKind::Sum;
  n.kids = std::move(kids);
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::product(std::vector<Expr> kids) {
  if (kids.empty()) return rational(1);
  if (kids.size() == 1) return kids[0];
  Node n;
  n.kind = ExprKind::Product;
  n.kids = std::move(kids);
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::power(Expr base, Rational exponent) {
  Node n;
  n.kind = ExprKind::Power;
  n.exponent = exponent;
  n.kids = {base};
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::neg(Expr e) {
  Node n;
  n.kind = ExprKind::Neg;
  n.kids = {e};
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::inv(Expr e) {
  Node n;
  n.kind = ExprKind::Inv;
  n.kids = {e};
  return ExprPool::get().intern(std::move(n));
}

Expr Expr::call(FuncKind f, Expr arg) {
  Node n;
  n.kind = ExprKind::Func;
  n.func = f;
  n.kids = {arg};
  return ExprPool::get().intern(std::move(n));
}

ExprKind Expr::kind() const { return nd(*this).kind; }
const Number& Expr::value() const { return nd(*this).value; }
Coordinate Expr::coordinate() const { return nd(*this).var; }
std::span<const Expr> Expr::kids() const { return nd(*this).kids; }
Rational Expr::exponent() const { return nd(*this).exponent; }
FuncKind Expr::func() const { return nd(*this).func; }
std::uint64_t Expr::hash() const { return nd(*this).hash; }
std::uint32_t Expr::depends_mask() const { return nd(*this).mask; }

bool Expr::depends_on(Coordinate c) const {
  std::uint32_t bit = coord_mask(c);
  if (bit == (1u << 31)) return true;  // outside mask range: cannot rule out
  return (depends_mask() & (bit | (1u << 31))) != 0;
}

bool Expr::is_zero() const {
  const Node& n = nd(*this);
  return n.kind == ExprKind::Const && n.value.is_zero();
}

bool Expr::is_one() const {
  const Node& n = nd(*this);
  return n.kind == ExprKind::Const && n.value.is_one();
}

Expr operator+(Expr a, Expr b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.kind() == ExprKind::Const && b.kind() == ExprKind::Const)
    return Expr::number(Number::add(a.value(), b.value()));
  return Expr::sum({a, b});
}

Expr operator*(Expr a, Expr b) {
  if (a.is_zero() || b.is_zero()) return Expr::rational(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.kind() == ExprKind::Const && b.kind() == ExprKind::Const)
    return Expr::number(Number::mul(a.value(), b.value()));
  return Expr::product({a, b});
}

Expr operator-(Expr a) {
  if (a.kind() == ExprKind::Const) return Expr::number(Number::neg(a.value()));
  return Expr::neg(a);
}

Expr operator-(Expr a, Expr b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return a + (-b);
}

Expr operator/(Expr a, Expr b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return a;
  return a * Expr::inv(b);
}

Expr powi(Expr base, std::int64_t k) {
  if (k == 1) return base;
  return Expr::power(base, Rational(k));
}

int compare(const Expr& a, const Expr& b) {
  if (a == b) return 0;
  const Node& na = nd(a);
  const Node& nb = nd(b);
  if (na.hash != nb.hash) return na.hash < nb.hash ? -1 : 1;
  if (na.kind != nb.kind) return na.kind < nb.kind ? -1 : 1;
  switch (na.kind) {
    case ExprKind::Const: {
      double dx = na.value.to_double(), dy = nb.value.to_double();
      if (dx != dy) return dx < dy ? -1 : 1;
      if (na.value.exact != nb.value.exact) return na.value.exact ? -1 : 1;
      break;
    }
    case ExprKind::Var: {
      int ca = na.var.code(), cb = nb.var.code();
      if (ca != cb) return ca < cb ? -1 : 1;
      break;
    }
    case ExprKind::Power:
      if (!(na.exponent == nb.exponent)) return na.exponent < nb.exponent ? -1 : 1;
      break;
    case ExprKind::Func:
      if (na.func != nb.func) return na.func < nb.func ? -1 : 1;
      break;
    default: break;
  }
  if (na.kids.size() != nb.kids.size()) return na.kids.size() < nb.kids.size() ? -1 : 1;
  for (std::size_t i = 0; i < na.kids.size(); ++i) {
    int c = compare(na.kids[i], nb.kids[i]);
    if (c) return c;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

namespace {

Expr diff_uncached(const Expr& e, const Coordinate& v);

Expr diff_node(const Expr& e, const Coordinate& v) {
  if (!e.depends_on(v)) return Expr::rational(0);
  auto& pool = ExprPool::get();
  std::uint64_t key = static_cast<std::uint64_t>(e.id()) |
                      (static_cast<std::uint64_t>(v.code()) << 32);
  {
    std::lock_guard<std::recursive_mutex> lock(pool.mu_);
    auto it = pool.diff_cache.find(key);
    if (it != pool.diff_cache.end()) return ExprPool::wrap(it->second);
  }
  Expr r = diff_uncached(e, v);
  std::lock_guard<std::recursive_mutex> lock(pool.mu_);
  pool.diff_cache.emplace(key, r.id());
  return r;
}

Expr diff_uncached(const Expr& e, const Coordinate& v) {
  switch (e.kind()) {
    case ExprKind::Const: return Expr::rational(0);
    case ExprKind::Var:
      return e.coordinate() == v ? Expr::rational(1) : Expr::rational(0);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const Expr& k : e.kids()) {
        Expr d = diff_node(k, v);
        if (!d.is_zero()) terms.push_back(d);
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Product: {
      auto kids = e.kids();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr d = diff_node(kids[i], v);
        if (d.is_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(kids.size());
        for (std::size_t j = 0; j < kids.size(); ++j)
          factors.push_back(j == i ? d : kids[j]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Power: {
      Expr base = e.kids()[0];
      Rational r = e.exponent();
      Expr d = diff_node(base, v);
      if (d.is_zero()) return d;
      auto rm1 = Rational::sub(r, Rational(1));
      Expr lead = Expr::number(Number(r));
      return lead * Expr::power(base, rm1 ? *rm1 : Rational(0)) * d;
    }
    case ExprKind::Neg: return -diff_node(e.kids()[0], v);
    case ExprKind::Inv: {
      Expr u = e.kids()[0];
      Expr d = diff_node(u, v);
      if (d.is_zero()) return d;
      return -(d * Expr::power(u, Rational(-2)));
    }
    case ExprKind::Func: {
      Expr u = e.kids()[0];
      Expr d = diff_node(u, v);
      if (d.is_zero()) return d;
      switch (e.func()) {
        case FuncKind::Sin: return Expr::call(FuncKind::Cos, u) * d;
        case FuncKind::Cos: return -(Expr::call(FuncKind::Sin, u) * d);
        case FuncKind::Exp: return Expr::call(FuncKind::Exp, u) * d;
        case FuncKind::Log: return d * Expr::power(u, Rational(-1));
        default:  // sqrt
          return Expr::rational(1, 2) * d * Expr::power(u, Rational(-1, 2));
      }
    }
  }
  return Expr::rational(0);
}

}  // namespace

Expr diff(const Expr& e, Coordinate v) { return diff_node(e, v); }

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_rec(const Expr& e, const Point& p,
                std::unordered_map<std::uint32_t, double>& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  const Node& n = nd(e);
  double r = 0.0;
  switch (n.kind) {
    case ExprKind::Const: r = n.value.to_double(); break;
    case ExprKind::Var: {
      const Coordinate& c = n.var;
      if (c.kind == CoordKind::Time) {
        r = p.t;
      } else {
        const auto& vec = c.kind == CoordKind::Space ? p.x : p.y;
        if (c.index < 1 || c.index > static_cast<int>(vec.size()))
          throw EvalDomainError("coordinate index out of range for point: " + c.name(), e);
        r = vec[c.index - 1];
      }
      break;
    }
    case ExprKind::Sum:
      for (const Expr& k : n.kids) r += eval_rec(k, p, memo);
      break;
    case ExprKind::Product:
      r = 1.0;
      for (const Expr& k : n.kids) r *= eval_rec(k, p, memo);
      break;
    case ExprKind::Power: {
      double b = eval_rec(n.kids[0], p, memo);
      const Rational& ex = n.exponent;
      if (ex.is_integer()) {
        std::int64_t k = ex.num();
        if (b == 0.0 && k < 0) throw EvalDomainError("zero raised to a negative power", e);
        bool invert = k < 0;
        std::uint64_t kk = invert ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
        double acc = 1.0, base = b;
        while (kk) {
          if (kk & 1) acc *= base;
          base *= base;
          kk >>= 1;
        }
        r = invert ? 1.0 / acc : acc;
      } else {
        if (b < 0.0) throw EvalDomainError("fractional power of a negative value", e);
        if (b == 0.0 && ex.num() < 0) throw EvalDomainError("zero raised to a negative power", e);
        r = std::pow(b, ex.to_double());
      }
      break;
    }
    case ExprKind::Neg: r = -eval_rec(n.kids[0], p, memo); break;
    case ExprKind::Inv: {
      double v = eval_rec(n.kids[0], p, memo);
      if (v == 0.0) throw EvalDomainError("division by zero", e);
      r = 1.0 / v;
      break;
    }
    case ExprKind::Func: {
      double v = eval_rec(n.kids[0], p, memo);
      switch (n.func) {
        case FuncKind::Sin: r = std::sin(v); break;
        case FuncKind::Cos: r = std::cos(v); break;
        case FuncKind::Exp: r = std::exp(v); break;
        case FuncKind::Log:
          if (v <= 0.0) throw EvalDomainError("log of a non-positive value", e);
          r = std::log(v);
          break;
        default:
          if (v < 0.0) throw EvalDomainError("sqrt of a negative value", e);
          r = std::sqrt(v);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(r)) throw EvalDomainError("non-finite value", e);
  memo.emplace(e.id(), r);
  return r;
}

}  // namespace

double EvalScratch::eval(const Expr& e, const Point& p) { return eval_rec(e, p, memo_); }

double eval(const Expr& e, const Point& p) {
  std::unordered_map<std::uint32_t, double> memo;
  return eval_rec(e, p, memo);
}

// ---------------------------------------------------------------------------
// simplification
// ---------------------------------------------------------------------------

namespace {

Expr simplify_node(const Expr& e);

Expr power_nf(Expr base, Rational r);

Expr collect_sum(const std::vector<Expr>& kids);

// kids are in normal form; builds the collected, sorted product
Expr collect_product(const std::vector<Expr>& kids) {
  Number coeff((Rational(1)));
  std::vector<std::pair<Expr, Rational>> bases;
  std::unordered_map<std::uint32_t, std::size_t> pos;

  auto add_base = [&](Expr b, Rational r) {
    auto it = pos.find(b.id());
    if (it == pos.end()) {
      pos.emplace(b.id(), bases.size());
      bases.emplace_back(b, r);
    } else {
      auto s = Rational::add(bases[it->second].second, r);
      if (!s) throw std::overflow_error("exponent overflow in product collection");
      bases[it->second].second = *s;
    }
  };

  std::vector<Expr> stack(kids.rbegin(), kids.rend());
  while (!stack.empty()) {
    Expr f = stack.back();
    stack.pop_back();
    switch (f.kind()) {
      case ExprKind::Product:
        for (auto it = f.kids().rbegin(); it != f.kids().rend(); ++it) stack.push_back(*it);
        break;
      case ExprKind::Const: coeff = Number::mul(coeff, f.value()); break;
      case ExprKind::Power: add_base(f.kids()[0], f.exponent()); break;
      default: add_base(f, Rational(1)); break;
    }
  }

  if (coeff.is_zero()) return Expr::number(coeff);

  std::vector<Expr> factors;
  factors.reserve(bases.size() + 1);
  for (auto& [b, r] : bases) {
    if (r.is_zero()) continue;
    Expr f = power_nf(b, r);
    if (f.kind() == ExprKind::Const) {
      coeff = Number::mul(coeff, f.value());  // merged exponents can re-fold
      if (coeff.is_zero()) return Expr::number(coeff);
    } else {
      factors.push_back(f);
    }
  }
  // a constant times a lone sum distributes, so -(a - b) collects with b
  if (factors.size() == 1 && factors[0].kind() == ExprKind::Sum && !coeff.is_one()) {
    std::vector<Expr> terms;
    Expr c = Expr::number(coeff);
    for (const Expr& k : factors[0].kids()) terms.push_back(collect_product({c, k}));
    return collect_sum(terms);
  }
  std::sort(factors.begin(), factors.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (!coeff.is_one()) factors.insert(factors.begin(), Expr::number(coeff));
  if (factors.empty()) return Expr::rational(1);
  if (factors.size() == 1) return factors[0];
  return Expr::product(std::move(factors));
}

// splits a normal-form term into (coefficient, core)
std::pair<Number, Expr> split_coeff(const Expr& term) {
  if (term.kind() == ExprKind::Product) {
    auto kids = term.kids();
    if (!kids.empty() && kids[0].kind() == ExprKind::Const) {
      std::vector<Expr> rest(kids.begin() + 1, kids.end());
      Expr core = rest.size() == 1 ? rest[0] : Expr::product(std::move(rest));
      return {kids[0].value(), core};
    }
  }
  return {Number(Rational(1)), term};
}

Expr with_coeff(const Number& c, const Expr& core) {
  if (c.is_one()) return core;
  if (core.kind() == ExprKind::Product) {
    std::vector<Expr> kids{Expr::number(c)};
    kids.insert(kids.end(), core.kids().begin(), core.kids().end());
    return Expr::product(std::move(kids));
  }
  return Expr::product({Expr::number(c), core});
}

// kids are in normal form; builds the collected, sorted sum
Expr collect_sum(const std::vector<Expr>& kids) {
  Number cacc((Rational(0)));
  std::vector<std::pair<Expr, Number>> terms;
  std::unordered_map<std::uint32_t, std::size_t> pos;

  std::vector<Expr> stack(kids.rbegin(), kids.rend());
  while (!stack.empty()) {
    Expr t = stack.back();
    stack.pop_back();
    if (t.kind() == ExprKind::Sum) {
      for (auto it = t.kids().rbegin(); it != t.kids().rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (t.kind() == ExprKind::Const) {
      cacc = Number::add(cacc, t.value());
      continue;
    }
    auto [c, core] = split_coeff(t);
    auto it = pos.find(core.id());
    if (it == pos.end()) {
      pos.emplace(core.id(), terms.size());
      terms.emplace_back(core, c);
    } else {
      terms[it->second].second = Number::add(terms[it->second].second, c);
    }
  }

  std::vector<Expr> out;
  out.reserve(terms.size() + 1);
  for (auto& [core, c] : terms) {
    if (c.is_zero()) continue;
    out.push_back(with_coeff(c, core));
  }
  if (!cacc.is_zero()) out.push_back(Expr::number(cacc));
  std::sort(out.begin(), out.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (out.empty()) return Expr::rational(0);
  if (out.size() == 1) return out[0];
  return Expr::sum(std::move(out));
}

Expr power_nf(Expr base, Rational r) {
  if (r.is_zero()) return Expr::rational(1);
  if (r.is_one()) return base;
  if (base.kind() == ExprKind::Const) {
    const Number& v = base.value();
    if (r.is_integer()) {
      if (!(v.is_zero() && r.num() < 0)) return Expr::number(Number::pow_int(v, r.num()));
    } else if (!v.exact && v.real >= 0.0) {
      return Expr::real(std::pow(v.real, r.to_double()));
    }
    return Expr::power(base, r);
  }
  if (r.is_integer()) {
    if (base.kind() == ExprKind::Product) {
      std::vector<Expr> factors;
      for (const Expr& k : base.kids()) factors.push_back(power_nf(k, r));
      return collect_product(factors);
    }
    if (base.kind() == ExprKind::Power) {
      auto m = Rational::mul(base.exponent(), r);
      if (m) return power_nf(base.kids()[0], *m);
    }
  }
  return Expr::power(base, r);
}

Expr fold_func(FuncKind f, Expr a) {
  if (a.kind() == ExprKind::Const && a.value().exact) {
    const Rational& v = a.value().rat;
    switch (f) {
      case FuncKind::Sin:
        if (v.is_zero()) return Expr::rational(0);
        break;
      case FuncKind::Cos:
        if (v.is_zero()) return Expr::rational(1);
        break;
      case FuncKind::Exp:
        if (v.is_zero()) return Expr::rational(1);
        break;
      case FuncKind::Log:
        if (v.is_one()) return Expr::rational(0);
        break;
      case FuncKind::Sqrt: {
        if (v.num() >= 0) {
          // exact square roots of perfect-square rationals
          auto isq = [](std::int64_t x) -> std::int64_t {
            if (x < 0) return -1;
            auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(x))));
            for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
              if (c * c == x) return c;
            return -1;
          };
          std::int64_t sn = isq(v.num()), sd = isq(v.den());
          if (sn >= 0 && sd > 0) return Expr::rational(sn, sd);
        }
        break;
      }
    }
  }
  return Expr::call(f, a);
}

Expr simplify_uncached(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Var: return e;
    case ExprKind::Neg:
      return collect_product({Expr::rational(-1), simplify_node(e.kids()[0])});
    case ExprKind::Inv: return power_nf(simplify_node(e.kids()[0]), Rational(-1));
    case ExprKind::Func: return fold_func(e.func(), simplify_node(e.kids()[0]));
    case ExprKind::Power: return power_nf(simplify_node(e.kids()[0]), e.exponent());
    case ExprKind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(e.kids().size());
      for (const Expr& k : e.kids()) kids.push_back(simplify_node(k));
      return collect_sum(kids);
    }
    case ExprKind::Product: {
      std::vector<Expr> kids;
      kids.reserve(e.kids().size());
      for (const Expr& k : e.kids()) kids.push_back(simplify_node(k));
      return collect_product(kids);
    }
  }
  return e;
}

Expr simplify_node(const Expr& e) {
  auto& pool = ExprPool::get();
  {
    std::lock_guard<std::recursive_mutex> lock(pool.mu_);
    auto it = pool.simplify_cache.find(e.id());
    if (it != pool.simplify_cache.end()) return ExprPool::wrap(it->second);
  }
  Expr r = simplify_uncached(e);
  std::lock_guard<std::recursive_mutex> lock(pool.mu_);
  pool.simplify_cache.emplace(e.id(), r.id());
  pool.simplify_cache.emplace(r.id(), r.id());  // normal forms are fixed points
  return r;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_node(e); }

// ---------------------------------------------------------------------------
// expansion (distributes products and small integer powers over sums)
// ---------------------------------------------------------------------------

namespace {

Expr expand_node(const Expr& e);

std::vector<Expr> sum_terms(const Expr& e) {
  if (e.kind() == ExprKind::Sum) return {e.kids().begin(), e.kids().end()};
  return {e};
}

Expr expand_product_pair(const Expr& a, const Expr& b) {
  std::vector<Expr> out;
  for (const Expr& ta : sum_terms(a))
    for (const Expr& tb : sum_terms(b)) out.push_back(collect_product({ta, tb}));
  return collect_sum(out);
}

Expr expand_uncached(const Expr& raw) {
  Expr e = simplify_node(raw);
  switch (e.kind()) {
    case ExprKind::Sum: {
      std::vector<Expr> kids;
      for (const Expr& k : e.kids()) kids.push_back(expand_node(k));
      return collect_sum(kids);
    }
    case ExprKind::Product: {
      Expr acc = Expr::rational(1);
      for (const Expr& k : e.kids()) acc = expand_product_pair(acc, expand_node(k));
      return acc;
    }
    case ExprKind::Power: {
      Expr base = expand_node(e.kids()[0]);
      Rational r = e.exponent();
      if (base.kind() == ExprKind::Sum && r.is_integer() && r.num() >= 2 && r.num() <= 16) {
        Expr acc = base;
        for (std::int64_t i = 1; i < r.num(); ++i) acc = expand_product_pair(acc, base);
        return acc;
      }
      return power_nf(base, r);
    }
    case ExprKind::Func: return fold_func(e.func(), expand_node(e.kids()[0]));
    default: return e;
  }
}

Expr expand_node(const Expr& e) {
  auto& pool = ExprPool::get();
  {
    std::lock_guard<std::recursive_mutex> lock(pool.mu_);
    auto it = pool.expand_cache.find(e.id());
    if (it != pool.expand_cache.end()) return ExprPool::wrap(it->second);
  }
  Expr r = expand_uncached(e);
  std::lock_guard<std::recursive_mutex> lock(pool.mu_);
  pool.expand_cache.emplace(e.id(), r.id());
  pool.expand_cache.emplace(r.id(), r.id());
  return r;
}

}  // namespace

Expr expand(const Expr& e) { return expand_node(e); }

bool is_symbolically_zero(const Expr& e) { return expand(e).is_zero(); }

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

namespace {

Expr substitute_rec(const Expr& e, const std::vector<std::pair<Coordinate, Expr>>& b,
                    std::unordered_map<std::uint32_t, Expr>& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  Expr r = e;
  switch (e.kind()) {
    case ExprKind::Const: break;
    case ExprKind::Var: {
      for (const auto& [c, repl] : b) {
        if (c == e.coordinate()) {
          r = repl;
          break;
        }
      }
      break;
    }
    case ExprKind::Sum:
    case ExprKind::Product: {
      std::vector<Expr> kids;
      kids.reserve(e.kids().size());
      for (const Expr& k : e.kids()) kids.push_back(substitute_rec(k, b, memo));
      r = e.kind() == ExprKind::Sum ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
      break;
    }
    case ExprKind::Power:
      r = Expr::power(substitute_rec(e.kids()[0], b, memo), e.exponent());
      break;
    case ExprKind::Neg: r = Expr::neg(substitute_rec(e.kids()[0], b, memo)); break;
    case ExprKind::Inv: r = Expr::inv(substitute_rec(e.kids()[0], b, memo)); break;
    case ExprKind::Func: r = Expr::call(e.func(), substitute_rec(e.kids()[0], b, memo)); break;
  }
  memo.emplace(e.id(), r);
  return r;
}

}  // namespace

Expr substitute(const Expr& e, const std::vector<std::pair<Coordinate, Expr>>& bindings) {
  std::unordered_map<std::uint32_t, Expr> memo;
  return substitute_rec(e, bindings, memo);
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

// precedence classes for parenthesization: 1 sum, 2 product-like, 3 power, 5 atom
int prec(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Sum: return 1;
    case ExprKind::Product:
    case ExprKind::Neg:
    case ExprKind::Inv: return 2;
    case ExprKind::Power: return 3;
    case ExprKind::Const: {
      const Number& v = e.value();
      if (v.exact) return (v.rat.num() >= 0 && v.rat.den() == 1) ? 5 : 2;
      return v.real >= 0 ? 5 : 2;
    }
    default: return 5;
  }
}

void print_rec(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, int min_prec, std::string& out) {
  if (prec(e) < min_prec) {
    out += "(";
    print_rec(e, out);
    out += ")";
  } else {
    print_rec(e, out);
  }
}

bool negative_const_term(const Expr& t, Expr& positive) {
  if (t.kind() == ExprKind::Const) {
    const Number& v = t.value();
    if ((v.exact && v.rat.num() < 0) || (!v.exact && v.real < 0)) {
      positive = Expr::number(Number::neg(v));
      return true;
    }
    return false;
  }
  if (t.kind() == ExprKind::Product && !t.kids().empty() &&
      t.kids()[0].kind() == ExprKind::Const) {
    const Number& v = t.kids()[0].value();
    if ((v.exact && v.rat.num() < 0) || (!v.exact && v.real < 0)) {
      std::vector<Expr> kids(t.kids().begin(), t.kids().end());
      Expr c = Expr::number(Number::neg(v));
      if (c.is_one()) {
        kids.erase(kids.begin());
        positive = kids.size() == 1 ? kids[0] : Expr::product(std::move(kids));
      } else {
        kids[0] = c;
        positive = Expr::product(std::move(kids));
      }
      return true;
    }
  }
  return false;
}

void print_rec(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Const: out += e.value().str(); break;
    case ExprKind::Var: out += e.coordinate().name(); break;
    case ExprKind::Sum: {
      bool first = true;
      for (const Expr& k : e.kids()) {
        Expr positive = k;
        if (!first && negative_const_term(k, positive)) {
          out += " - ";
          print_wrapped(positive, 2, out);
        } else {
          if (!first) out += " + ";
          print_wrapped(k, 2, out);
        }
        first = false;
      }
      break;
    }
    case ExprKind::Product: {
      auto kids = e.kids();
      std::size_t start = 0;
      if (kids[0].kind() == ExprKind::Const && kids[0].value().exact &&
          kids[0].value().rat == Rational(-1) && kids.size() > 1) {
        out += "-";
        start = 1;
      }
      for (std::size_t i = start; i < kids.size(); ++i) {
        if (i > start) out += "*";
        print_wrapped(kids[i], 2, out);
      }
      break;
    }
    case ExprKind::Power: {
      print_wrapped(e.kids()[0], 4, out);
      out += "^";
      const Rational& r = e.exponent();
      if (r.den() == 1 && r.num() >= 0) {
        out += std::to_string(r.num());
      } else {
        out += "(" + r.str() + ")";
      }
      break;
    }
    case ExprKind::Neg:
      out += "-";
      print_wrapped(e.kids()[0], 3, out);
      break;
    case ExprKind::Inv:
      out += "1/";
      print_wrapped(e.kids()[0], 3, out);
      break;
    case ExprKind::Func:
      out += func_name(e.func());
      out += "(";
      print_rec(e.kids()[0], out);
      out += ")";
      break;
  }
}

}  // namespace

std::string to_dsl(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

}  // namespace jetcartan
