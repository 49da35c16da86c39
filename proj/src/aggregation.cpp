#include "audb/aggregation.hpp"

#include <limits>
#include <unordered_set>

#include "audb/optimize.hpp"

namespace audb {

std::string_view agg_name(AggFn f) {
  switch (f) {
    case AggFn::Sum: return "sum";
    case AggFn::Count: return "count";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    case AggFn::Avg: return "avg";
  }
  return "?";
}

bool operator==(const AggSpec& a, const AggSpec& b) {
  return a.fn == b.fn && a.name == b.name && a.arg == b.arg;
}

Scalar monoid_identity(Monoid m, Kind k) {
  switch (m) {
    case Monoid::Sum:
      if (k == Kind::Int) return Scalar::integer(0);
      if (k == Kind::Real) return Scalar::real(0.0);
      fail(Errc::TypeMismatch, "sum over " + std::string(kind_name(k)));
    case Monoid::Min: return Scalar::pos_inf(k);
    case Monoid::Max: return Scalar::neg_inf(k);
  }
  fail(Errc::InvalidArgument, "unknown monoid");
}

Scalar monoid_add(Monoid m, const Scalar& a, const Scalar& b) {
  switch (m) {
    case Monoid::Sum: return add(a, b);
    case Monoid::Min: return min_of(a, b);
    case Monoid::Max: return max_of(a, b);
  }
  fail(Errc::InvalidArgument, "unknown monoid");
}

Scalar act(Monoid m, std::uint64_t k, const Scalar& v) {
  if (m == Monoid::Sum) {
    if (k > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      fail(Errc::Overflow, "multiplicity too large for sum");
    return mul(Scalar::integer(static_cast<std::int64_t>(k)), v);
  }
  return k == 0 ? monoid_identity(m, v.kind()) : v;
}

RangeValue range_monoid_add(Monoid m, const RangeValue& a, const RangeValue& b) {
  return RangeValue(monoid_add(m, a.lb(), b.lb()), monoid_add(m, a.sg(), b.sg()),
                    monoid_add(m, a.ub(), b.ub()));
}

RangeValue smb(const AUMult& k, const RangeValue& v, Monoid m) {
  Scalar c1 = act(m, k.lb, v.lb()), c2 = act(m, k.lb, v.ub());
  Scalar c3 = act(m, k.ub, v.lb()), c4 = act(m, k.ub, v.ub());
  Scalar lo = min_of(min_of(c1, c2), min_of(c3, c4));
  Scalar hi = max_of(max_of(c1, c2), max_of(c3, c4));
  return RangeValue(lo, act(m, k.sg, v.sg()), hi);
}

namespace {

const Expr& avg_expr() {
  static const Expr e =
      ite(eq(var("count"), lit(0)), lit_real(0.0), times(var("sum"), recip(var("count"))));
  return e;
}

}  // namespace

Scalar avg_value(const Scalar& sum, const Scalar& count) {
  Valuation v{{"sum", sum.coerce(Kind::Real)}, {"count", count}};
  return eval_det(avg_expr(), v);
}

GroupAssignment assign_groups(const std::vector<std::string>& groupby, const AURelation& r) {
  GroupAssignment ga;
  for (auto& g : groupby) ga.gb.push_back(r.schema().index_of(g));
  std::unordered_map<DetTuple, std::size_t, DetTupleHash> index;
  ga.alpha.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    DetTuple key;
    for (std::size_t a : ga.gb) key.push_back(r.rows()[i].tuple[a].sg());
    auto [it, fresh] = index.emplace(key, ga.groups.size());
    if (fresh) {
      ga.groups.push_back(std::move(key));
      ga.members.emplace_back();
    }
    ga.alpha[i] = it->second;
    ga.members[it->second].push_back(i);
  }
  return ga;
}

AUTuple group_bounds(const GroupAssignment& ga, std::size_t g, const AURelation& r) {
  AUTuple out;
  for (std::size_t j = 0; j < ga.gb.size(); ++j) {
    std::size_t a = ga.gb[j];
    Scalar lo = r.rows()[ga.members[g].front()].tuple[a].lb();
    Scalar hi = r.rows()[ga.members[g].front()].tuple[a].ub();
    for (std::size_t i : ga.members[g]) {
      lo = min_of(lo, r.rows()[i].tuple[a].lb());
      hi = max_of(hi, r.rows()[i].tuple[a].ub());
    }
    out.emplace_back(lo, ga.groups[g][j], hi);
  }
  return out;
}

namespace {

struct BaseAgg {
  Monoid mon;
  Expr arg;
  Kind kind;
  bool is_count;
};

struct Layout {
  std::vector<BaseAgg> base;
  std::vector<std::size_t> first;   // per aggregate: its base (the sum for avg)
  std::vector<std::size_t> second;  // per aggregate: the count base for avg
  std::vector<Kind> out_kind;
};

Layout make_layout(const std::vector<AggSpec>& aggs, const Schema& in) {
  if (aggs.empty()) fail(Errc::InvalidArgument, "aggregation needs at least one function");
  TypeEnv env = in.type_env();
  Layout L;
  auto push = [&L](BaseAgg b) {
    L.base.push_back(std::move(b));
    return L.base.size() - 1;
  };
  for (auto& a : aggs) {
    std::size_t none = static_cast<std::size_t>(-1);
    if (a.fn == AggFn::Count) {
      L.first.push_back(push({Monoid::Sum, lit(1), Kind::Int, true}));
      L.second.push_back(none);
      L.out_kind.push_back(Kind::Int);
      continue;
    }
    if (!a.arg.valid()) fail(Errc::InvalidArgument, std::string(agg_name(a.fn)) + " needs an argument");
    Kind k = type_of(a.arg, env);
    switch (a.fn) {
      case AggFn::Sum:
        if (!is_numeric(k)) fail(Errc::TypeMismatch, "sum over non-numeric " + a.arg.to_string());
        L.first.push_back(push({Monoid::Sum, a.arg, k, false}));
        L.second.push_back(none);
        L.out_kind.push_back(k);
        break;
      case AggFn::Min:
      case AggFn::Max:
        L.first.push_back(push({a.fn == AggFn::Min ? Monoid::Min : Monoid::Max, a.arg, k, false}));
        L.second.push_back(none);
        L.out_kind.push_back(k);
        break;
      case AggFn::Avg:
        if (!is_numeric(k)) fail(Errc::TypeMismatch, "avg over non-numeric " + a.arg.to_string());
        L.first.push_back(push({Monoid::Sum, a.arg, Kind::Real, false}));
        L.second.push_back(push({Monoid::Sum, lit(1), Kind::Int, true}));
        L.out_kind.push_back(Kind::Real);
        break;
      case AggFn::Count: break;
    }
  }
  return L;
}

struct Prepared {
  AUTuple gb;
  std::vector<RangeValue> vals;
  AUMult ann;
};

struct Candidate {
  const AUTuple* gb;
  const std::vector<RangeValue>* vals;
  AUMult ann;
  bool certain;
};

// Bounds of one base aggregate over the candidates of an output row.
RangeValue base_bounds(const BaseAgg& b, std::size_t bi, const std::vector<Candidate>& cands,
                       const std::vector<const Prepared*>& sg_rows, bool nonempty) {
  Scalar id = monoid_identity(b.mon, b.kind);
  Scalar lo = id, hi = id;
  for (auto& c : cands) {
    RangeValue p = smb(c.ann, (*c.vals)[bi], b.mon);
    if (c.certain) {
      lo = monoid_add(b.mon, lo, p.lb());
      hi = monoid_add(b.mon, hi, p.ub());
    } else {
      lo = monoid_add(b.mon, lo, min_of(id, p.lb()));
      hi = monoid_add(b.mon, hi, max_of(id, p.ub()));
    }
  }
  if (nonempty && !cands.empty()) {
    // A group that surely exists has at least one member, so MIN cannot
    // exceed the largest possible member value (dually for MAX).
    if (b.mon == Monoid::Min) {
      Scalar cap = (*cands.front().vals)[bi].ub();
      for (auto& c : cands) cap = max_of(cap, (*c.vals)[bi].ub());
      hi = min_of(hi, cap);
    } else if (b.mon == Monoid::Max) {
      Scalar cap = (*cands.front().vals)[bi].lb();
      for (auto& c : cands) cap = min_of(cap, (*c.vals)[bi].lb());
      lo = max_of(lo, cap);
    }
  }
  Scalar sg = id;
  for (const Prepared* p : sg_rows) sg = monoid_add(b.mon, sg, act(b.mon, p->ann.sg, p->vals[bi].sg()));
  if (b.is_count && nonempty) lo = max_of(lo, Scalar::integer(1));
  // Only reachable when the output row is not part of the selected guess.
  sg = max_of(lo, min_of(sg, hi));
  return RangeValue(lo, sg, hi);
}

RangeValue avg_bounds(const RangeValue& sum, const RangeValue& count, std::size_t bi,
                      const std::vector<Candidate>& cands) {
  RangeValuation rv{{"sum", sum.coerce(Kind::Real)}, {"count", count}};
  try {
    return eval_range(avg_expr(), rv);
  } catch (const Error& e) {
    if (e.code() != Errc::RecipUndefined) throw;
  }
  // count may be zero: the average is then 0.0, otherwise it lies within
  // the envelope of the values that can contribute.
  Scalar sg = avg_value(sum.sg(), count.sg());
  Scalar lo = Scalar::pos_inf(Kind::Real), hi = Scalar::neg_inf(Kind::Real);
  if (count.lb() == Scalar::integer(0)) lo = hi = Scalar::real(0.0);
  for (auto& c : cands) {
    lo = min_of(lo, (*c.vals)[bi].lb().coerce(Kind::Real));
    hi = max_of(hi, (*c.vals)[bi].ub().coerce(Kind::Real));
  }
  return RangeValue(min_of(lo, sg), sg, max_of(hi, sg));
}

}  // namespace

Schema aggregate_schema(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                        const Schema& in) {
  Layout L = make_layout(aggs, in);
  std::vector<Attribute> attrs;
  for (auto& g : groupby) attrs.push_back(in[in.index_of(g)]);
  for (std::size_t i = 0; i < aggs.size(); ++i) attrs.push_back({aggs[i].name, L.out_kind[i]});
  return Schema(std::move(attrs));
}

AURelation aggregate(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                     const AURelation& r, Warnings* warnings) {
  return detail::aggregate_impl(groupby, aggs, r, std::nullopt, warnings);
}

namespace detail {

AURelation aggregate_impl(const std::vector<std::string>& groupby,
                          const std::vector<AggSpec>& aggs, const AURelation& r,
                          std::optional<std::uint64_t> compress_to, Warnings* warnings) {
  Schema out_schema = aggregate_schema(groupby, aggs, r.schema());
  Layout L = make_layout(aggs, r.schema());
  GroupAssignment ga = assign_groups(groupby, r);
  const bool grouped = !groupby.empty();

  std::vector<Prepared> rows;
  rows.reserve(r.size());
  for (auto& row : r.rows()) {
    Prepared p;
    for (std::size_t a : ga.gb) p.gb.push_back(row.tuple[a]);
    auto look = row_lookup(r.schema(), row.tuple);
    for (auto& b : L.base) p.vals.push_back(eval_range(b.arg, look).coerce(b.kind));
    p.ann = row.ann;
    rows.push_back(std::move(p));
  }

  // Buckets standing in for the rows when bounds are computed approximately.
  std::vector<Prepared> buckets;
  std::optional<AURelation> flat_holder;
  if (compress_to) {
    std::vector<Attribute> attrs;
    for (std::size_t j = 0; j < ga.gb.size(); ++j) attrs.push_back(r.schema()[ga.gb[j]]);
    for (std::size_t b = 0; b < L.base.size(); ++b)
      attrs.push_back({"__v" + std::to_string(b), L.base[b].kind});
    AURelation flat{Schema(attrs)};
    for (auto& p : rows) {
      AUTuple t = p.gb;
      t.insert(t.end(), p.vals.begin(), p.vals.end());
      flat.insert(std::move(t), p.ann);
    }
    // Nothing to merge: keep the exact bounds.
    if (flat.size() <= *compress_to) compress_to.reset();
    flat_holder = std::move(flat);
  }
  if (compress_to) {
    AURelation flat = std::move(*flat_holder);
    AURelation packed = compress(flat, flat.schema()[0].name, *compress_to);
    for (auto& row : packed.rows()) {
      Prepared p;
      p.gb.assign(row.tuple.begin(), row.tuple.begin() + ga.gb.size());
      p.vals.assign(row.tuple.begin() + ga.gb.size(), row.tuple.end());
      p.ann = AUMult(0, 0, row.ann.ub);
      buckets.push_back(std::move(p));
    }
  }

  auto emit = [&](AURelation& out, AUTuple head, const std::vector<Candidate>& cands,
                  const std::vector<const Prepared*>& sg_rows, bool nonempty, const AUMult& ann) {
    std::vector<RangeValue> base;
    for (std::size_t b = 0; b < L.base.size(); ++b)
      base.push_back(base_bounds(L.base[b], b, cands, sg_rows, nonempty));
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      RangeValue v = aggs[i].fn == AggFn::Avg
                         ? avg_bounds(base[L.first[i]], base[L.second[i]], L.first[i], cands)
                         : base[L.first[i]];
      if (v.lb().is_extreme() || v.sg().is_extreme() || v.ub().is_extreme())
        warn(warnings, "empty aggregate: " + aggs[i].name + " = " + v.to_string());
      head.push_back(v.coerce(L.out_kind[i]));
    }
    out.insert(std::move(head), ann);
  };

  AURelation out(out_schema);
  if (!grouped) {
    std::vector<Candidate> cands;
    std::vector<const Prepared*> sg_rows;
    bool nonempty = false;
    for (auto& p : rows) {
      sg_rows.push_back(&p);
      nonempty = nonempty || p.ann.lb > 0;
      if (!compress_to) cands.push_back({&p.gb, &p.vals, p.ann, p.ann.lb > 0});
    }
    for (auto& p : buckets) cands.push_back({&p.gb, &p.vals, p.ann, false});
    // Caps are only needed once some candidates were merged into buckets.
    emit(out, {}, cands, sg_rows, nonempty && compress_to.has_value(), AUMult::one());
    return out;
  }

  std::vector<AUTuple> bounds;
  std::unordered_set<DetTuple, DetTupleHash> points;
  for (std::size_t g = 0; g < ga.groups.size(); ++g) {
    bounds.push_back(group_bounds(ga, g, r));
    if (is_certain(bounds.back())) points.insert(ga.groups[g]);
  }

  for (std::size_t g = 0; g < ga.groups.size(); ++g) {
    const bool point = is_certain(bounds[g]);
    std::vector<Candidate> cands;
    if (compress_to) {
      for (auto& p : buckets)
        if (overlaps(p.gb, bounds[g])) cands.push_back({&p.gb, &p.vals, p.ann, false});
    } else {
      for (auto& p : rows) {
        ++pair_stats().pairs;
        if (!overlaps(p.gb, bounds[g])) continue;
        bool certain_gb = is_certain(p.gb);
        if (point) {
          cands.push_back({&p.gb, &p.vals, p.ann, certain_gb && p.ann.lb > 0});
        } else if (!(certain_gb && points.count(sg_tuple(p.gb)))) {
          // Rows pinned to a value that has its own exact output row never
          // reach the world groups this row stands for.
          cands.push_back({&p.gb, &p.vals, p.ann, false});
        }
      }
    }
    std::vector<const Prepared*> sg_rows;
    std::uint64_t lo = 0, sg = 0, hi = 0;
    bool has_certain = false;
    for (std::size_t i : ga.members[g]) {
      const Prepared& p = rows[i];
      sg_rows.push_back(&p);
      sg = checked_add(sg, p.ann.sg);
      if (is_certain(p.gb)) {
        has_certain = true;
        if (p.ann.lb > 0) lo = 1;
      } else {
        hi = checked_add(hi, p.ann.ub);
      }
    }
    if (has_certain) hi = checked_add(hi, 1);
    AUMult ann(lo, sg > 0 ? 1 : 0, hi);
    emit(out, bounds[g], cands, sg_rows, true, ann);
  }
  return out;
}

}  // namespace detail

}  // namespace audb
