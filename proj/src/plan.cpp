#include "audb/plan.hpp"

#include <cctype>
#include <charconv>

#include "audb/optimize.hpp"

namespace audb {

bool operator==(const Plan& a, const Plan& b) {
  if (a.kind != b.kind || a.table != b.table || a.expr != b.expr || a.items != b.items ||
      a.group_by != b.group_by || a.aggs != b.aggs || a.renames != b.renames ||
      a.attr != b.attr || a.n != b.n || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (*a.children[i] != *b.children[i]) return false;
  return true;
}

namespace {

PlanPtr make(Plan p) { return std::make_shared<const Plan>(std::move(p)); }

}  // namespace

PlanPtr table_plan(std::string name) {
  Plan p;
  p.kind = PlanKind::Table;
  p.table = std::move(name);
  return make(std::move(p));
}

PlanPtr select_plan(Expr theta, PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Select;
  p.expr = std::move(theta);
  p.children = {std::move(in)};
  return make(std::move(p));
}

PlanPtr project_plan(std::vector<ProjItem> items, PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Project;
  p.items = std::move(items);
  p.children = {std::move(in)};
  return make(std::move(p));
}

PlanPtr join_plan(Expr theta, PlanPtr l, PlanPtr r) {
  Plan p;
  p.kind = PlanKind::Join;
  p.expr = std::move(theta);
  p.children = {std::move(l), std::move(r)};
  return make(std::move(p));
}

PlanPtr cross_plan(PlanPtr l, PlanPtr r) {
  Plan p;
  p.kind = PlanKind::Cross;
  p.children = {std::move(l), std::move(r)};
  return make(std::move(p));
}

PlanPtr union_plan(PlanPtr l, PlanPtr r) {
  Plan p;
  p.kind = PlanKind::Union;
  p.children = {std::move(l), std::move(r)};
  return make(std::move(p));
}

PlanPtr diff_plan(PlanPtr l, PlanPtr r) {
  Plan p;
  p.kind = PlanKind::Diff;
  p.children = {std::move(l), std::move(r)};
  return make(std::move(p));
}

PlanPtr aggregate_plan(std::vector<std::string> group_by, std::vector<AggSpec> aggs, PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Aggregate;
  p.group_by = std::move(group_by);
  p.aggs = std::move(aggs);
  p.children = {std::move(in)};
  return make(std::move(p));
}

PlanPtr rename_plan(RenameMap m, PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Rename;
  p.renames = std::move(m);
  p.children = {std::move(in)};
  return make(std::move(p));
}

PlanPtr combine_plan(PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Combine;
  p.children = {std::move(in)};
  return make(std::move(p));
}

PlanPtr compress_plan(std::string attr, std::uint64_t n, PlanPtr in) {
  Plan p;
  p.kind = PlanKind::Compress;
  p.attr = std::move(attr);
  p.n = n;
  p.children = {std::move(in)};
  return make(std::move(p));
}

namespace {

struct SNode {
  enum Type { List, Atom, String } type;
  std::string text;
  std::vector<SNode> items;
  std::size_t pos;
};

[[noreturn]] void syntax(std::size_t pos, const std::string& msg) {
  fail(Errc::Parse, "offset " + std::to_string(pos) + ": " + msg);
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  SNode read_all() {
    SNode n = read();
    skip();
    if (i_ != s_.size()) syntax(i_, "unexpected trailing input");
    return n;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  SNode read() {
    skip();
    if (i_ >= s_.size()) syntax(i_, "unexpected end of input");
    std::size_t start = i_;
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      SNode n{SNode::List, {}, {}, start};
      for (;;) {
        skip();
        if (i_ >= s_.size()) syntax(start, "unbalanced '('");
        if (s_[i_] == ')') {
          ++i_;
          return n;
        }
        n.items.push_back(read());
      }
    }
    if (c == ')') syntax(i_, "unexpected ')'");
    if (c == '"') {
      ++i_;
      std::string text;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        text += s_[i_++];
      }
      if (i_ >= s_.size()) syntax(start, "unterminated string");
      ++i_;
      return SNode{SNode::String, std::move(text), {}, start};
    }
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')' && s_[i_] != '"' && s_[i_] != ';')
      ++i_;
    return SNode{SNode::Atom, s_.substr(start, i_ - start), {}, start};
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::optional<Scalar> number_atom(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t d = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (d >= s.size() || !(std::isdigit(static_cast<unsigned char>(s[d])) || s[d] == '.'))
    return std::nullopt;
  const char* b = s.data() + (s[0] == '+' ? 1 : 0);
  const char* e = s.data() + s.size();
  std::int64_t i;
  auto ri = std::from_chars(b, e, i);
  if (ri.ec == std::errc{} && ri.ptr == e) return Scalar::integer(i);
  double x;
  auto rd = std::from_chars(b, e, x);
  if (rd.ec == std::errc{} && rd.ptr == e) return Scalar::real(x);
  return std::nullopt;
}

const std::string& symbol(const SNode& n, const char* what) {
  if (n.type != SNode::Atom || !is_identifier(n.text)) syntax(n.pos, std::string("expected ") + what);
  return n.text;
}

void arity(const SNode& n, std::size_t want, const char* form) {
  if (n.items.size() != want)
    syntax(n.pos, std::string("'") + form + "' takes " + std::to_string(want - 1) + " operand(s)");
}

Expr to_expr(const SNode& n) {
  if (n.type == SNode::String) return lit_text(n.text);
  if (n.type == SNode::Atom) {
    if (n.text == "true") return lit_bool(true);
    if (n.text == "false") return lit_bool(false);
    if (auto v = number_atom(n.text)) return lit(*v);
    return var(symbol(n, "an attribute, literal or '('"));
  }
  if (n.items.empty() || n.items[0].type != SNode::Atom) syntax(n.pos, "expected an operator");
  const std::string& op = n.items[0].text;
  auto arg = [&](std::size_t i) { return to_expr(n.items[i]); };
  auto binary = [&](Expr (*f)(Expr, Expr)) {
    if (n.items.size() < 3) syntax(n.pos, "'" + op + "' takes at least 2 operands");
    Expr acc = arg(1);
    for (std::size_t i = 2; i < n.items.size(); ++i) acc = f(acc, arg(i));
    return acc;
  };
  auto pair = [&](Expr (*f)(Expr, Expr)) {
    arity(n, 3, op.c_str());
    return f(arg(1), arg(2));
  };
  if (op == "and") return binary(land);
  if (op == "or") return binary(lor);
  if (op == "+") return binary(plus);
  if (op == "*") return binary(times);
  if (op == "-") {
    if (n.items.size() == 2) return times(lit(-1), arg(1));
    return binary(minus);
  }
  if (op == "=") return pair(eq);
  if (op == "!=") return pair(neq);
  if (op == "<=") return pair(leq);
  if (op == "<") return pair(lt);
  if (op == ">=") return pair(geq);
  if (op == ">") return pair(gt);
  if (op == "not") {
    arity(n, 2, "not");
    return lnot(arg(1));
  }
  if (op == "recip") {
    arity(n, 2, "recip");
    return recip(arg(1));
  }
  if (op == "if") {
    arity(n, 4, "if");
    return ite(arg(1), arg(2), arg(3));
  }
  if (op == "mkuncert") {
    arity(n, 4, "mkuncert");
    return mkuncert(arg(1), arg(2), arg(3));
  }
  syntax(n.items[0].pos, "unknown operator '" + op + "'");
}

const SNode& list(const SNode& n, const char* what) {
  if (n.type != SNode::List) syntax(n.pos, std::string("expected ") + what);
  return n;
}

std::uint64_t nat_atom(const SNode& n) {
  std::uint64_t v;
  if (n.type == SNode::Atom) {
    auto r = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
    if (r.ec == std::errc{} && r.ptr == n.text.data() + n.text.size()) return v;
  }
  syntax(n.pos, "expected a natural number");
}

AggSpec to_agg(const SNode& n, std::size_t index) {
  list(n, "an aggregate like (sum A)");
  if (n.items.size() < 2 || n.items.size() > 3 || n.items[0].type != SNode::Atom)
    syntax(n.pos, "expected (fn arg [name])");
  const std::string& fn = n.items[0].text;
  AggSpec a;
  if (fn == "count") {
    if (n.items[1].type != SNode::Atom || n.items[1].text != "*")
      syntax(n.items[1].pos, "count takes '*'");
    a.fn = AggFn::Count;
    a.name = "count";
  } else {
    if (fn == "sum") a.fn = AggFn::Sum;
    else if (fn == "min") a.fn = AggFn::Min;
    else if (fn == "max") a.fn = AggFn::Max;
    else if (fn == "avg") a.fn = AggFn::Avg;
    else syntax(n.items[0].pos, "unknown aggregate '" + fn + "'");
    a.arg = to_expr(n.items[1]);
    a.name = a.arg.op() == Op::Var ? fn + "_" + a.arg.name() : fn + "_" + std::to_string(index + 1);
  }
  if (n.items.size() == 3) a.name = symbol(n.items[2], "an output name");
  return a;
}

PlanPtr to_plan(const SNode& n) {
  list(n, "a query like (table R)");
  if (n.items.empty() || n.items[0].type != SNode::Atom) syntax(n.pos, "expected an operator");
  const std::string& op = n.items[0].text;
  auto sub = [&](std::size_t i) { return to_plan(n.items[i]); };
  if (op == "table") {
    arity(n, 2, "table");
    return table_plan(symbol(n.items[1], "a table name"));
  }
  if (op == "select") {
    arity(n, 3, "select");
    return select_plan(to_expr(n.items[1]), sub(2));
  }
  if (op == "project") {
    arity(n, 3, "project");
    std::vector<ProjItem> items;
    for (auto& it : list(n.items[1], "a column list").items) {
      if (it.type == SNode::Atom) {
        const std::string& name = symbol(it, "a column");
        items.push_back({var(name), name});
      } else {
        if (it.type != SNode::List || it.items.size() != 2)
          syntax(it.pos, "expected a column or (name expr)");
        items.push_back({to_expr(it.items[1]), symbol(it.items[0], "a column name")});
      }
    }
    return project_plan(std::move(items), sub(2));
  }
  if (op == "join") {
    arity(n, 4, "join");
    return join_plan(to_expr(n.items[1]), sub(2), sub(3));
  }
  if (op == "cross") {
    arity(n, 3, "cross");
    return cross_plan(sub(1), sub(2));
  }
  if (op == "union") {
    arity(n, 3, "union");
    return union_plan(sub(1), sub(2));
  }
  if (op == "diff") {
    arity(n, 3, "diff");
    return diff_plan(sub(1), sub(2));
  }
  if (op == "aggregate") {
    arity(n, 4, "aggregate");
    std::vector<std::string> gb;
    for (auto& g : list(n.items[1], "a group-by list").items) gb.push_back(symbol(g, "an attribute"));
    std::vector<AggSpec> aggs;
    for (auto& a : list(n.items[2], "an aggregate list").items) aggs.push_back(to_agg(a, aggs.size()));
    return aggregate_plan(std::move(gb), std::move(aggs), sub(3));
  }
  if (op == "rename") {
    arity(n, 3, "rename");
    RenameMap m;
    for (auto& it : list(n.items[1], "a rename list").items) {
      if (it.type != SNode::List || it.items.size() != 2) syntax(it.pos, "expected (old new)");
      m.emplace_back(symbol(it.items[0], "an attribute"), symbol(it.items[1], "an attribute"));
    }
    return rename_plan(std::move(m), sub(2));
  }
  if (op == "combine") {
    arity(n, 2, "combine");
    return combine_plan(sub(1));
  }
  if (op == "compress") {
    arity(n, 4, "compress");
    return compress_plan(symbol(n.items[1], "an attribute"), nat_atom(n.items[2]), sub(3));
  }
  syntax(n.items[0].pos, "unknown operator '" + op + "'");
}

void print(const Plan& p, std::string& out) {
  auto child = [&](std::size_t i) {
    out += ' ';
    print(*p.children[i], out);
  };
  switch (p.kind) {
    case PlanKind::Table:
      out += "(table " + p.table + ")";
      return;
    case PlanKind::Select:
      out += "(select " + p.expr.to_string();
      child(0);
      break;
    case PlanKind::Project:
      out += "(project (";
      for (std::size_t i = 0; i < p.items.size(); ++i) {
        if (i) out += ' ';
        const ProjItem& it = p.items[i];
        if (it.expr.op() == Op::Var && it.expr.name() == it.name) out += it.name;
        else out += "(" + it.name + " " + it.expr.to_string() + ")";
      }
      out += ")";
      child(0);
      break;
    case PlanKind::Join:
      out += "(join " + p.expr.to_string();
      child(0);
      child(1);
      break;
    case PlanKind::Cross:
    case PlanKind::Union:
    case PlanKind::Diff:
      out += p.kind == PlanKind::Cross ? "(cross" : p.kind == PlanKind::Union ? "(union" : "(diff";
      child(0);
      child(1);
      break;
    case PlanKind::Aggregate:
      out += "(aggregate (";
      for (std::size_t i = 0; i < p.group_by.size(); ++i) out += (i ? " " : "") + p.group_by[i];
      out += ") (";
      for (std::size_t i = 0; i < p.aggs.size(); ++i) {
        const AggSpec& a = p.aggs[i];
        out += (i ? " (" : "(") + std::string(agg_name(a.fn)) + " ";
        out += a.fn == AggFn::Count ? "*" : a.arg.to_string();
        out += " " + a.name + ")";
      }
      out += ")";
      child(0);
      break;
    case PlanKind::Rename:
      out += "(rename (";
      for (std::size_t i = 0; i < p.renames.size(); ++i)
        out += (i ? " (" : "(") + p.renames[i].first + " " + p.renames[i].second + ")";
      out += ")";
      child(0);
      break;
    case PlanKind::Combine:
      out += "(combine";
      child(0);
      break;
    case PlanKind::Compress:
      out += "(compress " + p.attr + " " + std::to_string(p.n);
      child(0);
      break;
  }
  out += ")";
}

}  // namespace

Expr parse_expr(const std::string& text) { return to_expr(Reader(text).read_all()); }

PlanPtr parse_query(const std::string& text) { return to_plan(Reader(text).read_all()); }

std::string print_plan(const Plan& p) {
  std::string out;
  print(p, out);
  return out;
}

Schema infer_schema(const Plan& p, const Catalog& catalog) {
  auto in = [&](std::size_t i) { return infer_schema(*p.children.at(i), catalog); };
  switch (p.kind) {
    case PlanKind::Table: {
      auto it = catalog.find(p.table);
      if (it == catalog.end()) fail(Errc::UnknownTable, "unknown table '" + p.table + "'");
      return it->second;
    }
    case PlanKind::Select: {
      Schema s = in(0);
      check_predicate(p.expr, s);
      return s;
    }
    case PlanKind::Project: return project_schema(p.items, in(0));
    case PlanKind::Join: {
      Schema s = cross_schema(in(0), in(1));
      check_predicate(p.expr, s);
      return s;
    }
    case PlanKind::Cross: return cross_schema(in(0), in(1));
    case PlanKind::Union:
    case PlanKind::Diff: {
      Schema a = in(0), b = in(1);
      if (!union_compatible(a, b))
        fail(Errc::SchemaMismatch, "incompatible inputs " + a.to_string() + " and " + b.to_string());
      return a;
    }
    case PlanKind::Aggregate: return aggregate_schema(p.group_by, p.aggs, in(0));
    case PlanKind::Rename: return rename_schema(p.renames, in(0));
    case PlanKind::Combine: return in(0);
    case PlanKind::Compress: {
      Schema s = in(0);
      s.index_of(p.attr);
      if (p.n == 0) fail(Errc::InvalidArgument, "compression size must be at least 1");
      return s;
    }
  }
  fail(Errc::InvalidArgument, "unknown plan node");
}

Catalog catalog_of(const AUDatabase& db) {
  Catalog c;
  for (auto& [name, r] : db) c.emplace(name, r.schema());
  return c;
}

Catalog catalog_of(const Database& db) {
  Catalog c;
  for (auto& [name, r] : db) c.emplace(name, r.schema());
  return c;
}

AURelation execute(const Plan& p, const AUDatabase& db, const ExecOptions& opts, Warnings* w) {
  auto in = [&](std::size_t i) { return execute(*p.children.at(i), db, opts, w); };
  switch (p.kind) {
    case PlanKind::Table: {
      auto it = db.find(p.table);
      if (it == db.end()) fail(Errc::UnknownTable, "unknown table '" + p.table + "'");
      return it->second;
    }
    case PlanKind::Select: return select(p.expr, in(0));
    case PlanKind::Project: return project(p.items, in(0));
    case PlanKind::Join:
      if (opts.optimize) return join_opt(p.expr, in(0), in(1), opts.compress_size, w);
      return join(p.expr, in(0), in(1));
    case PlanKind::Cross: return cross(in(0), in(1));
    case PlanKind::Union: return union_all(in(0), in(1));
    case PlanKind::Diff: return difference(in(0), in(1));
    case PlanKind::Aggregate:
      if (opts.optimize) return aggregate_opt(p.group_by, p.aggs, in(0), opts.compress_size, w);
      return aggregate(p.group_by, p.aggs, in(0), w);
    case PlanKind::Rename: return rename(p.renames, in(0));
    case PlanKind::Combine: return sg_combine(in(0));
    case PlanKind::Compress: return compress(in(0), p.attr, p.n);
  }
  fail(Errc::InvalidArgument, "unknown plan node");
}

}  // namespace audb
