#include "audb/operators.hpp"

#include <unordered_set>

namespace audb {

bool operator==(const ProjItem& a, const ProjItem& b) {
  return a.name == b.name && a.expr == b.expr;
}

PairStats& pair_stats() {
  thread_local PairStats stats;
  return stats;
}

void check_predicate(const Expr& theta, const Schema& s) {
  if (type_of(theta, s.type_env()) != Kind::Bool)
    fail(Errc::TypeMismatch, "predicate " + theta.to_string() + " is not boolean");
}

AURelation select(const Expr& theta, const AURelation& r) {
  check_predicate(theta, r.schema());
  AURelation out(r.schema());
  for (auto& row : r.rows()) {
    AUMult m = au_mul(row.ann, rlift(eval_range(theta, row_lookup(r.schema(), row.tuple))));
    out.insert(row.tuple, m);
  }
  return out;
}

Schema project_schema(const std::vector<ProjItem>& items, const Schema& in) {
  if (items.empty()) fail(Errc::InvalidArgument, "projection needs at least one column");
  TypeEnv env = in.type_env();
  std::vector<Attribute> attrs;
  for (auto& it : items) attrs.push_back({it.name, type_of(it.expr, env)});
  return Schema(std::move(attrs));
}

AURelation project(const std::vector<ProjItem>& items, const AURelation& r) {
  Schema s = project_schema(items, r.schema());
  AURelation out(s);
  for (auto& row : r.rows()) {
    AUTuple t;
    t.reserve(items.size());
    auto look = row_lookup(r.schema(), row.tuple);
    for (std::size_t i = 0; i < items.size(); ++i)
      t.push_back(eval_range(items[i].expr, look).coerce(s[i].kind));
    out.insert(std::move(t), row.ann);
  }
  return out;
}

Schema cross_schema(const Schema& a, const Schema& b) {
  std::vector<Attribute> attrs = a.attrs();
  for (auto& x : b) {
    if (a.find(x.name))
      fail(Errc::NameClash, "attribute '" + x.name + "' appears on both sides; rename one");
    attrs.push_back(x);
  }
  return Schema(std::move(attrs));
}

AURelation cross(const AURelation& r, const AURelation& s) {
  AURelation out(cross_schema(r.schema(), s.schema()));
  for (auto& a : r.rows()) {
    for (auto& b : s.rows()) {
      ++pair_stats().pairs;
      AUTuple t = a.tuple;
      t.insert(t.end(), b.tuple.begin(), b.tuple.end());
      out.insert(std::move(t), au_mul(a.ann, b.ann));
    }
  }
  return out;
}

AURelation join(const Expr& theta, const AURelation& r, const AURelation& s) {
  check_predicate(theta, cross_schema(r.schema(), s.schema()));
  return select(theta, cross(r, s));
}

AURelation union_all(const AURelation& r, const AURelation& s) {
  if (!union_compatible(r.schema(), s.schema()))
    fail(Errc::SchemaMismatch,
         "union of " + r.schema().to_string() + " and " + s.schema().to_string());
  AURelation out(r.schema());
  for (auto& row : r.rows()) out.insert(row.tuple, row.ann);
  for (auto& row : s.rows()) out.insert(row.tuple, row.ann);
  return out;
}

AURelation difference(const AURelation& r, const AURelation& s) {
  if (!union_compatible(r.schema(), s.schema()))
    fail(Errc::SchemaMismatch,
         "difference of " + r.schema().to_string() + " and " + s.schema().to_string());
  AURelation lhs = sg_combine(r);
  AURelation out(r.schema());
  for (auto& row : lhs.rows()) {
    std::uint64_t lo = 0, mid = 0, hi = 0;
    DetTuple sg = sg_tuple(row.tuple);
    for (auto& other : s.rows()) {
      ++pair_stats().pairs;
      if (overlaps(row.tuple, other.tuple)) lo = checked_add(lo, other.ann.ub);
      if (sg_tuple(other.tuple) == sg) mid = checked_add(mid, other.ann.sg);
      if (cert_equal(row.tuple, other.tuple)) hi = checked_add(hi, other.ann.lb);
    }
    AUMult m(nat_monus(row.ann.lb, lo), nat_monus(row.ann.sg, mid), nat_monus(row.ann.ub, hi));
    out.insert(row.tuple, m);
  }
  return out;
}

Schema rename_schema(const RenameMap& m, const Schema& in) {
  std::vector<Attribute> attrs = in.attrs();
  std::unordered_set<std::string> from;
  for (auto& [old_name, new_name] : m) {
    if (!from.insert(old_name).second)
      fail(Errc::NameClash, "attribute '" + old_name + "' renamed twice");
    attrs[in.index_of(old_name)].name = new_name;
  }
  return Schema(std::move(attrs));
}

AURelation rename(const RenameMap& m, const AURelation& r) {
  AURelation out(rename_schema(m, r.schema()));
  for (auto& row : r.rows()) out.insert(row.tuple, row.ann);
  return out;
}

}  // namespace audb
