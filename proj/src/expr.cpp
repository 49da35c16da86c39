#include "audb/expr.hpp"

#include <algorithm>

namespace audb {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Const: return "const";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
    case Op::Eq: return "=";
    case Op::Leq: return "<=";
    case Op::Plus: return "+";
    case Op::Times: return "*";
    case Op::Recip: return "recip";
    case Op::If: return "if";
    case Op::MakeUncertain: return "mkuncert";
  }
  return "?";
}

namespace {

std::size_t arity(Op op) {
  switch (op) {
    case Op::Var:
    case Op::Const: return 0;
    case Op::Not:
    case Op::Recip: return 1;
    case Op::If:
    case Op::MakeUncertain: return 3;
    default: return 2;
  }
}

}  // namespace

Expr Expr::var(std::string name) {
  Expr e;
  e.n_ = std::make_shared<Node>(Node{Op::Var, std::move(name), {}, {}});
  return e;
}

Expr Expr::constant(Scalar v) {
  Expr e;
  e.n_ = std::make_shared<Node>(Node{Op::Const, {}, std::move(v), {}});
  return e;
}

Expr Expr::node(Op op, std::vector<Expr> args) {
  if (op == Op::Var || op == Op::Const || args.size() != arity(op))
    fail(Errc::InvalidArgument, "bad arity for " + std::string(op_name(op)));
  for (auto& a : args)
    if (!a.valid()) fail(Errc::InvalidArgument, "empty operand");
  Expr e;
  e.n_ = std::make_shared<Node>(Node{op, {}, {}, std::move(args)});
  return e;
}

std::string Expr::to_string() const {
  if (!n_) return "<null>";
  if (op() == Op::Var) return name();
  if (op() == Op::Const) return value().to_string();
  std::string s = "(" + std::string(op_name(op()));
  for (auto& a : args()) s += " " + a.to_string();
  return s + ")";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.valid() != b.valid()) return false;
  if (!a.valid()) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == Op::Var) return a.name() == b.name();
  if (a.op() == Op::Const) return a.value().kind() == b.value().kind() && a.value() == b.value();
  return a.args() == b.args();
}

Expr var(std::string name) { return Expr::var(std::move(name)); }
Expr lit(Scalar v) { return Expr::constant(std::move(v)); }
Expr lit(std::int64_t v) { return lit(Scalar::integer(v)); }
Expr lit_real(double v) { return lit(Scalar::real(v)); }
Expr lit_bool(bool v) { return lit(Scalar::boolean(v)); }
Expr lit_text(std::string v) { return lit(Scalar::text(std::move(v))); }
Expr land(Expr a, Expr b) { return Expr::node(Op::And, {std::move(a), std::move(b)}); }
Expr lor(Expr a, Expr b) { return Expr::node(Op::Or, {std::move(a), std::move(b)}); }
Expr lnot(Expr a) { return Expr::node(Op::Not, {std::move(a)}); }
Expr eq(Expr a, Expr b) { return Expr::node(Op::Eq, {std::move(a), std::move(b)}); }
Expr neq(Expr a, Expr b) { return lnot(eq(std::move(a), std::move(b))); }
Expr leq(Expr a, Expr b) { return Expr::node(Op::Leq, {std::move(a), std::move(b)}); }
Expr lt(Expr a, Expr b) { return lnot(leq(std::move(b), std::move(a))); }
Expr geq(Expr a, Expr b) { return leq(std::move(b), std::move(a)); }
Expr gt(Expr a, Expr b) { return lnot(leq(std::move(a), std::move(b))); }
Expr plus(Expr a, Expr b) { return Expr::node(Op::Plus, {std::move(a), std::move(b)}); }
Expr minus(Expr a, Expr b) { return plus(std::move(a), times(lit(-1), std::move(b))); }
Expr times(Expr a, Expr b) { return Expr::node(Op::Times, {std::move(a), std::move(b)}); }
Expr recip(Expr a) { return Expr::node(Op::Recip, {std::move(a)}); }
Expr ite(Expr c, Expr a, Expr b) {
  return Expr::node(Op::If, {std::move(c), std::move(a), std::move(b)});
}
Expr mkuncert(Expr lb, Expr sg, Expr ub) {
  return Expr::node(Op::MakeUncertain, {std::move(lb), std::move(sg), std::move(ub)});
}

namespace {

bool contains_mkuncert(const Expr& e) {
  if (e.op() == Op::MakeUncertain) return true;
  if (e.op() == Op::Var || e.op() == Op::Const) return false;
  return std::any_of(e.args().begin(), e.args().end(), contains_mkuncert);
}

void expect(Kind got, Kind want, const Expr& e) {
  if (got != want)
    fail(Errc::TypeMismatch, "expected " + std::string(kind_name(want)) + " operand in " +
                                 e.to_string() + ", got " + std::string(kind_name(got)));
}

Kind join_kinds(Kind a, Kind b, const Expr& e) {
  if (a == b) return a;
  if (is_numeric(a) && is_numeric(b)) return Kind::Real;
  fail(Errc::TypeMismatch, "incompatible kinds " + std::string(kind_name(a)) + " and " +
                               std::string(kind_name(b)) + " in " + e.to_string());
}

}  // namespace

Kind type_of(const Expr& e, const TypeEnv& env) {
  switch (e.op()) {
    case Op::Var: {
      auto it = env.find(e.name());
      if (it == env.end()) fail(Errc::UnboundVariable, "unknown attribute '" + e.name() + "'");
      return it->second;
    }
    case Op::Const: return e.value().kind();
    case Op::And:
    case Op::Or:
      expect(type_of(e.arg(0), env), Kind::Bool, e);
      expect(type_of(e.arg(1), env), Kind::Bool, e);
      return Kind::Bool;
    case Op::Not:
      expect(type_of(e.arg(0), env), Kind::Bool, e);
      return Kind::Bool;
    case Op::Eq:
    case Op::Leq:
      join_kinds(type_of(e.arg(0), env), type_of(e.arg(1), env), e);
      return Kind::Bool;
    case Op::Plus:
    case Op::Times: {
      Kind a = type_of(e.arg(0), env), b = type_of(e.arg(1), env);
      if (!is_numeric(a) || !is_numeric(b))
        fail(Errc::TypeMismatch, "arithmetic on non-numbers in " + e.to_string());
      return numeric_join(a, b);
    }
    case Op::Recip:
      if (!is_numeric(type_of(e.arg(0), env)))
        fail(Errc::TypeMismatch, "reciprocal of non-number in " + e.to_string());
      return Kind::Real;
    case Op::If:
      expect(type_of(e.arg(0), env), Kind::Bool, e);
      return join_kinds(type_of(e.arg(1), env), type_of(e.arg(2), env), e);
    case Op::MakeUncertain: {
      for (auto& a : e.args())
        if (contains_mkuncert(a))
          fail(Errc::TypeMismatch, "nested mkuncert in " + e.to_string());
      Kind k = join_kinds(type_of(e.arg(0), env), type_of(e.arg(1), env), e);
      return join_kinds(k, type_of(e.arg(2), env), e);
    }
  }
  fail(Errc::InvalidArgument, "unknown expression node");
}

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.op() == Op::Var) {
    if (std::find(out.begin(), out.end(), e.name()) == out.end()) out.push_back(e.name());
    return;
  }
  if (e.op() == Op::Const) return;
  for (auto& a : e.args()) collect_vars(a, out);
}

Scalar det(const Expr& e, const DetLookup& look) {
  switch (e.op()) {
    case Op::Var: {
      const Scalar* s = look(e.name());
      if (!s) fail(Errc::UnboundVariable, "unbound variable '" + e.name() + "'");
      return *s;
    }
    case Op::Const: return e.value();
    case Op::And: {
      bool a = det(e.arg(0), look).as_bool();
      bool b = det(e.arg(1), look).as_bool();
      return Scalar::boolean(a && b);
    }
    case Op::Or: {
      bool a = det(e.arg(0), look).as_bool();
      bool b = det(e.arg(1), look).as_bool();
      return Scalar::boolean(a || b);
    }
    case Op::Not: return Scalar::boolean(!det(e.arg(0), look).as_bool());
    case Op::Eq: return Scalar::boolean(compare(det(e.arg(0), look), det(e.arg(1), look)) == 0);
    case Op::Leq: return Scalar::boolean(compare(det(e.arg(0), look), det(e.arg(1), look)) <= 0);
    case Op::Plus: return add(det(e.arg(0), look), det(e.arg(1), look));
    case Op::Times: return mul(det(e.arg(0), look), det(e.arg(1), look));
    case Op::Recip: return reciprocal(det(e.arg(0), look));
    case Op::If:
      return det(e.arg(0), look).as_bool() ? det(e.arg(1), look) : det(e.arg(2), look);
    case Op::MakeUncertain: {
      Scalar l = det(e.arg(0), look), s = det(e.arg(1), look), u = det(e.arg(2), look);
      if (compare(l, s) > 0 || compare(s, u) > 0)
        fail(Errc::InvalidRange, "mkuncert bounds not ordered: " + l.to_string() + "," +
                                     s.to_string() + "," + u.to_string());
      return s;
    }
  }
  fail(Errc::InvalidArgument, "unknown expression node");
}

Scalar min4(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) {
  return min_of(min_of(a, b), min_of(c, d));
}
Scalar max4(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) {
  return max_of(max_of(a, b), max_of(c, d));
}

bool lower(const RangeValue& v) { return v.lb().as_bool(); }
bool upper(const RangeValue& v) { return v.ub().as_bool(); }
bool guess(const RangeValue& v) { return v.sg().as_bool(); }

RangeValue range(const Expr& e, const RangeLookup& look) {
  switch (e.op()) {
    case Op::Var: {
      const RangeValue* v = look(e.name());
      if (!v) fail(Errc::UnboundVariable, "unbound variable '" + e.name() + "'");
      return *v;
    }
    case Op::Const: return RangeValue::certain(e.value());
    case Op::And: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      return bool3(lower(a) && lower(b), guess(a) && guess(b), upper(a) && upper(b));
    }
    case Op::Or: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      return bool3(lower(a) || lower(b), guess(a) || guess(b), upper(a) || upper(b));
    }
    case Op::Not: {
      RangeValue a = range(e.arg(0), look);
      return bool3(!upper(a), !guess(a), !lower(a));
    }
    case Op::Eq: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      bool lo = compare(a.ub(), b.lb()) == 0 && compare(b.ub(), a.lb()) == 0;
      bool hi = compare(a.lb(), b.ub()) <= 0 && compare(b.lb(), a.ub()) <= 0;
      return bool3(lo, compare(a.sg(), b.sg()) == 0, hi);
    }
    case Op::Leq: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      return bool3(compare(a.ub(), b.lb()) <= 0, compare(a.sg(), b.sg()) <= 0,
                   compare(a.lb(), b.ub()) <= 0);
    }
    case Op::Plus: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      return RangeValue(add(a.lb(), b.lb()), add(a.sg(), b.sg()), add(a.ub(), b.ub()));
    }
    case Op::Times: {
      RangeValue a = range(e.arg(0), look), b = range(e.arg(1), look);
      Scalar p1 = mul(a.lb(), b.lb()), p2 = mul(a.lb(), b.ub());
      Scalar p3 = mul(a.ub(), b.lb()), p4 = mul(a.ub(), b.ub());
      return RangeValue(min4(p1, p2, p3, p4), mul(a.sg(), b.sg()), max4(p1, p2, p3, p4));
    }
    case Op::Recip: {
      RangeValue a = range(e.arg(0), look);
      Scalar zero = Scalar::integer(0);
      if (compare(a.lb(), zero) <= 0 && compare(zero, a.ub()) <= 0)
        fail(Errc::RecipUndefined, "reciprocal of range " + a.to_string() + " containing 0");
      return RangeValue(reciprocal(a.ub()), reciprocal(a.sg()), reciprocal(a.lb()));
    }
    case Op::If: {
      RangeValue c = range(e.arg(0), look);
      if (c.is_certain()) return range(guess(c) ? e.arg(1) : e.arg(2), look);
      RangeValue a = range(e.arg(1), look), b = range(e.arg(2), look);
      return RangeValue(min_of(a.lb(), b.lb()), guess(c) ? a.sg() : b.sg(),
                        max_of(a.ub(), b.ub()));
    }
    case Op::MakeUncertain: {
      // Each bound comes from the matching bound of its child, so the result
      // still covers the child values for every valuation in the box; over
      // certain inputs this is just the triple of the three child values.
      RangeValue l = range(e.arg(0), look), s = range(e.arg(1), look), u = range(e.arg(2), look);
      if (compare(l.lb(), s.sg()) > 0 || compare(s.sg(), u.ub()) > 0)
        fail(Errc::InvalidRange, "mkuncert bounds not ordered in " + e.to_string());
      return RangeValue(l.lb(), s.sg(), u.ub());
    }
  }
  fail(Errc::InvalidArgument, "unknown expression node");
}

}  // namespace

std::vector<std::string> vars(const Expr& e) {
  std::vector<std::string> out;
  collect_vars(e, out);
  return out;
}

Scalar eval_det(const Expr& e, const DetLookup& lookup) { return det(e, lookup); }

Scalar eval_det(const Expr& e, const Valuation& v) {
  return det(e, [&](const std::string& n) -> const Scalar* {
    auto it = v.find(n);
    return it == v.end() ? nullptr : &it->second;
  });
}

std::vector<Scalar> eval_incomplete(const Expr& e, const std::vector<Valuation>& worlds) {
  std::vector<Scalar> out;
  for (auto& w : worlds) out.push_back(eval_det(e, w));
  std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RangeValue eval_range(const Expr& e, const RangeLookup& lookup) { return range(e, lookup); }

RangeValue eval_range(const Expr& e, const RangeValuation& rv) {
  return range(e, [&](const std::string& n) -> const RangeValue* {
    auto it = rv.find(n);
    return it == rv.end() ? nullptr : &it->second;
  });
}

Valuation sg_valuation(const RangeValuation& rv) {
  Valuation v;
  for (auto& [k, r] : rv) v.emplace(k, r.sg());
  return v;
}

}  // namespace audb
