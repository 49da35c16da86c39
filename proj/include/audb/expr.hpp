#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "audb/value.hpp"

namespace audb {

// Primitive node kinds. Derived comparisons and subtraction are rewritten
// into these when the tree is built.
enum class Op { Var, Const, And, Or, Not, Eq, Leq, Plus, Times, Recip, If, MakeUncertain };

std::string_view op_name(Op op);

class Expr {
 public:
  Expr() = default;

  static Expr var(std::string name);
  static Expr constant(Scalar v);
  static Expr node(Op op, std::vector<Expr> args);

  bool valid() const { return n_ != nullptr; }
  Op op() const { return n_->op; }
  const std::string& name() const { return n_->name; }
  const Scalar& value() const { return n_->value; }
  const std::vector<Expr>& args() const { return n_->args; }
  const Expr& arg(std::size_t i) const { return n_->args.at(i); }

  std::string to_string() const;

 private:
  struct Node {
    Op op;
    std::string name;
    Scalar value;
    std::vector<Expr> args;
  };
  std::shared_ptr<const Node> n_;
};

bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

Expr var(std::string name);
Expr lit(Scalar v);
Expr lit(std::int64_t v);
Expr lit_real(double v);
Expr lit_bool(bool v);
Expr lit_text(std::string v);
Expr land(Expr a, Expr b);
Expr lor(Expr a, Expr b);
Expr lnot(Expr a);
Expr eq(Expr a, Expr b);
Expr neq(Expr a, Expr b);
Expr leq(Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr geq(Expr a, Expr b);
Expr gt(Expr a, Expr b);
Expr plus(Expr a, Expr b);
Expr minus(Expr a, Expr b);
Expr times(Expr a, Expr b);
Expr recip(Expr a);
Expr ite(Expr c, Expr a, Expr b);
Expr mkuncert(Expr lb, Expr sg, Expr ub);

using TypeEnv = std::map<std::string, Kind, std::less<>>;
using Valuation = std::map<std::string, Scalar, std::less<>>;
using RangeValuation = std::map<std::string, RangeValue, std::less<>>;

using DetLookup = std::function<const Scalar*(const std::string&)>;
using RangeLookup = std::function<const RangeValue*(const std::string&)>;

// Static kind of `e`; throws TypeMismatch or UnboundVariable.
Kind type_of(const Expr& e, const TypeEnv& env);

std::vector<std::string> vars(const Expr& e);

Scalar eval_det(const Expr& e, const Valuation& v);
Scalar eval_det(const Expr& e, const DetLookup& lookup);

// Distinct results over all valuations, in domain order.
std::vector<Scalar> eval_incomplete(const Expr& e, const std::vector<Valuation>& worlds);

RangeValue eval_range(const Expr& e, const RangeValuation& rv);
RangeValue eval_range(const Expr& e, const RangeLookup& lookup);

Valuation sg_valuation(const RangeValuation& rv);

}  // namespace audb
