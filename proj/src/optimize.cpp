#include "audb/optimize.hpp"

#include <algorithm>
#include <numeric>

namespace audb {

AURelation bg_split(const AURelation& r) {
  struct Acc {
    AUTuple tuple;
    std::uint64_t lb = 0, sg = 0;
  };
  std::vector<Acc> acc;
  std::unordered_map<DetTuple, std::size_t, DetTupleHash> index;
  for (auto& row : r.rows()) {
    DetTuple key = sg_tuple(row.tuple);
    auto [it, fresh] = index.emplace(key, acc.size());
    if (fresh) acc.push_back({certain_tuple(key)});
    Acc& a = acc[it->second];
    if (is_certain(row.tuple)) a.lb = checked_add(a.lb, row.ann.lb);
    a.sg = checked_add(a.sg, row.ann.sg);
  }
  AURelation out(r.schema());
  for (auto& a : acc) {
    if (a.sg == 0) continue;
    out.insert(std::move(a.tuple), AUMult(a.lb, a.sg, a.sg));
  }
  return out;
}

AURelation ub_split(const AURelation& r) {
  AURelation out(r.schema());
  for (auto& row : r.rows()) out.insert(row.tuple, AUMult(0, 0, row.ann.ub));
  return out;
}

AURelation compress(const AURelation& r, const std::string& attr, std::uint64_t n) {
  if (n == 0) fail(Errc::InvalidArgument, "compression size must be at least 1");
  std::size_t a = r.schema().index_of(attr);
  if (r.size() <= n) return r;

  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const RangeValue& u = r.rows()[x].tuple[a];
    const RangeValue& v = r.rows()[y].tuple[a];
    int c = compare(u.lb(), v.lb());
    if (c != 0) return c < 0;
    return compare(u.ub(), v.ub()) < 0;
  });

  AURelation out(r.schema());
  const std::size_t total = r.size();
  for (std::uint64_t b = 0; b < n; ++b) {
    std::size_t from = static_cast<std::size_t>(b * total / n);
    std::size_t to = static_cast<std::size_t>((b + 1) * total / n);
    if (from == to) continue;
    AUTuple env = r.rows()[order[from]].tuple;
    std::uint64_t ub = 0;
    for (std::size_t i = from; i < to; ++i) {
      const AURow& row = r.rows()[order[i]];
      for (std::size_t j = 0; j < env.size(); ++j)
        env[j] = RangeValue(min_of(env[j].lb(), row.tuple[j].lb()), env[j].sg(),
                            max_of(env[j].ub(), row.tuple[j].ub()));
      ub = checked_add(ub, row.ann.ub);
    }
    out.insert(std::move(env), AUMult(0, 0, ub));
  }
  return out;
}

namespace {

void conjuncts(const Expr& e, std::vector<Expr>& out) {
  if (e.op() == Op::And) {
    conjuncts(e.arg(0), out);
    conjuncts(e.arg(1), out);
    return;
  }
  out.push_back(e);
}

}  // namespace

std::optional<JoinKey> find_join_key(const Expr& theta, const Schema& r, const Schema& s) {
  std::vector<Expr> cs;
  conjuncts(theta, cs);
  for (auto& c : cs) {
    if (c.op() != Op::Eq || c.arg(0).op() != Op::Var || c.arg(1).op() != Op::Var) continue;
    const std::string& x = c.arg(0).name();
    const std::string& y = c.arg(1).name();
    if (r.find(x) && s.find(y)) return JoinKey{x, y};
    if (r.find(y) && s.find(x)) return JoinKey{y, x};
  }
  return std::nullopt;
}

AURelation join_opt(const Expr& theta, const AURelation& r, const AURelation& s,
                    std::uint64_t n, Warnings* warnings) {
  Schema schema = cross_schema(r.schema(), s.schema());
  check_predicate(theta, schema);
  auto key = find_join_key(theta, r.schema(), s.schema());
  if (!key) {
    warn(warnings, "join condition " + theta.to_string() +
                       " has no equality between the inputs; using the exact join");
    return join(theta, r, s);
  }

  // Certain parts hold only certain values, so a hash join on the key finds
  // every pair the condition can accept.
  AURelation out(schema);
  AURelation rb = bg_split(r), sb = bg_split(s);
  std::size_t ri = r.schema().index_of(key->left), si = s.schema().index_of(key->right);
  std::unordered_map<DetTuple, std::vector<std::size_t>, DetTupleHash> buckets;
  for (std::size_t j = 0; j < sb.size(); ++j)
    buckets[{sb.rows()[j].tuple[si].sg()}].push_back(j);
  for (auto& a : rb.rows()) {
    auto it = buckets.find({a.tuple[ri].sg()});
    if (it == buckets.end()) continue;
    for (std::size_t j : it->second) {
      ++pair_stats().pairs;
      const AURow& b = sb.rows()[j];
      AUTuple t = a.tuple;
      t.insert(t.end(), b.tuple.begin(), b.tuple.end());
      AUMult m = au_mul(au_mul(a.ann, b.ann), rlift(eval_range(theta, row_lookup(schema, t))));
      out.insert(std::move(t), m);
    }
  }

  AURelation rp = compress(ub_split(r), key->left, n);
  AURelation sp = compress(ub_split(s), key->right, n);
  AURelation possible = join(theta, rp, sp);
  for (auto& row : possible.rows()) out.insert(row.tuple, row.ann);
  return out;
}

AURelation aggregate_opt(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                         const AURelation& r, std::uint64_t n, Warnings* warnings) {
  if (n == 0) fail(Errc::InvalidArgument, "compression size must be at least 1");
  return detail::aggregate_impl(groupby, aggs, r, n, warnings);
}

}  // namespace audb
