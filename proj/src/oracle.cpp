#include "audb/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace audb {

namespace {

bool truthy(const Expr& theta, const Schema& s, const DetTuple& t) {
  return eval_det(theta, row_lookup(s, t)).as_bool();
}

DetRelation det_select(const Expr& theta, const DetRelation& r) {
  check_predicate(theta, r.schema());
  DetRelation out(r.schema());
  for (auto& row : r.rows())
    if (truthy(theta, r.schema(), row.tuple)) out.insert(row.tuple, row.mult);
  return out;
}

DetRelation det_project(const std::vector<ProjItem>& items, const DetRelation& r) {
  DetRelation out(project_schema(items, r.schema()));
  for (auto& row : r.rows()) {
    DetLookup look = row_lookup(r.schema(), row.tuple);
    DetTuple t;
    t.reserve(items.size());
    for (auto& it : items) t.push_back(eval_det(it.expr, look));
    out.insert(std::move(t), row.mult);
  }
  return out;
}

DetRelation det_cross(const DetRelation& r, const DetRelation& s) {
  DetRelation out(cross_schema(r.schema(), s.schema()));
  for (auto& a : r.rows())
    for (auto& b : s.rows()) {
      DetTuple t = a.tuple;
      t.insert(t.end(), b.tuple.begin(), b.tuple.end());
      out.insert(std::move(t), checked_mul(a.mult, b.mult));
    }
  return out;
}

void require_compatible(const Schema& a, const Schema& b) {
  if (!union_compatible(a, b))
    fail(Errc::SchemaMismatch, "incompatible inputs " + a.to_string() + " and " + b.to_string());
}

DetRelation det_union(const DetRelation& r, const DetRelation& s) {
  require_compatible(r.schema(), s.schema());
  DetRelation out(r.schema());
  for (auto& row : r.rows()) out.insert(row.tuple, row.mult);
  for (auto& row : s.rows()) out.insert(row.tuple, row.mult);
  return out;
}

DetRelation det_diff(const DetRelation& r, const DetRelation& s) {
  require_compatible(r.schema(), s.schema());
  DetRelation out(r.schema());
  for (auto& row : r.rows()) out.insert(row.tuple, nat_monus(row.mult, s.at(row.tuple)));
  return out;
}

// Running state of one aggregation function for one group.
struct Acc {
  Scalar value;
  Scalar count = Scalar::integer(0);
};

DetRelation det_aggregate(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                          const DetRelation& r) {
  Schema out_schema = aggregate_schema(groupby, aggs, r.schema());
  std::vector<std::size_t> gb;
  for (auto& g : groupby) gb.push_back(r.schema().index_of(g));

  auto monoid = [](AggFn f) {
    return f == AggFn::Min ? Monoid::Min : f == AggFn::Max ? Monoid::Max : Monoid::Sum;
  };
  auto base_kind = [&](const AggSpec& a) {
    return a.fn == AggFn::Avg ? Kind::Real : out_schema[groupby.size() + (&a - aggs.data())].kind;
  };
  auto fresh = [&] {
    std::vector<Acc> accs;
    for (auto& a : aggs) {
      Kind k = a.fn == AggFn::Count ? Kind::Int : base_kind(a);
      accs.push_back({monoid_identity(monoid(a.fn), k)});
    }
    return accs;
  };

  std::vector<DetTuple> keys;
  std::unordered_map<DetTuple, std::size_t, DetTupleHash> index;
  std::vector<std::vector<Acc>> state;
  if (groupby.empty()) {
    keys.emplace_back();
    index.emplace(DetTuple{}, 0);
    state.push_back(fresh());
  }
  for (auto& row : r.rows()) {
    DetTuple key;
    for (auto i : gb) key.push_back(row.tuple[i]);
    auto [it, added] = index.emplace(key, keys.size());
    if (added) {
      keys.push_back(key);
      state.push_back(fresh());
    }
    std::vector<Acc>& accs = state[it->second];
    DetLookup look = row_lookup(r.schema(), row.tuple);
    Scalar k = Scalar::integer(static_cast<std::int64_t>(row.mult));
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      const AggSpec& a = aggs[i];
      Acc& acc = accs[i];
      if (a.fn == AggFn::Count) {
        acc.value = add(acc.value, k);
        continue;
      }
      Scalar v = eval_det(a.arg, look).coerce(base_kind(a));
      acc.value = monoid_add(monoid(a.fn), acc.value, act(monoid(a.fn), row.mult, v));
      if (a.fn == AggFn::Avg) acc.count = add(acc.count, k);
    }
  }

  DetRelation out(out_schema);
  for (std::size_t g = 0; g < keys.size(); ++g) {
    DetTuple t = keys[g];
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      const Acc& acc = state[g][i];
      t.push_back(aggs[i].fn == AggFn::Avg ? avg_value(acc.value, acc.count) : acc.value);
    }
    out.insert(std::move(t), 1);
  }
  return out;
}

DetRelation det_rename(const RenameMap& m, const DetRelation& r) {
  DetRelation out(rename_schema(m, r.schema()));
  for (auto& row : r.rows()) out.insert(row.tuple, row.mult);
  return out;
}

// Dinic max-flow over int64 capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

  std::size_t add_edge(std::size_t u, std::size_t v, std::int64_t cap) {
    adj_[u].push_back(edges_.size());
    edges_.push_back({v, cap});
    adj_[v].push_back(edges_.size());
    edges_.push_back({u, 0});
    return edges_.size() - 2;
  }

  std::int64_t flow_on(std::size_t e) const { return edges_[e ^ 1].cap; }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

 private:
  struct Edge {
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      for (auto e : adj_[u]) {
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push_back(edges_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t f) {
    if (u == t) return f;
    for (std::size_t& i = it_[u]; i < adj_[u].size(); ++i) {
      std::size_t e = adj_[u][i];
      Edge& ed = edges_[e];
      if (ed.cap <= 0 || level_[ed.to] != level_[u] + 1) continue;
      std::int64_t got = dfs(ed.to, t, std::min(f, ed.cap));
      if (got > 0) {
        ed.cap -= got;
        edges_[e ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace

DetRelation eval_det_query(const Plan& p, const Database& db) {
  auto in = [&](std::size_t i) { return eval_det_query(*p.children.at(i), db); };
  switch (p.kind) {
    case PlanKind::Table: {
      auto it = db.find(p.table);
      if (it == db.end()) fail(Errc::UnknownTable, "unknown table '" + p.table + "'");
      return it->second;
    }
    case PlanKind::Select: return det_select(p.expr, in(0));
    case PlanKind::Project: return det_project(p.items, in(0));
    case PlanKind::Join: return det_select(p.expr, det_cross(in(0), in(1)));
    case PlanKind::Cross: return det_cross(in(0), in(1));
    case PlanKind::Union: return det_union(in(0), in(1));
    case PlanKind::Diff: return det_diff(in(0), in(1));
    case PlanKind::Aggregate: return det_aggregate(p.group_by, p.aggs, in(0));
    case PlanKind::Rename: return det_rename(p.renames, in(0));
    case PlanKind::Combine: return in(0);
    case PlanKind::Compress: {
      DetRelation r = in(0);
      r.schema().index_of(p.attr);
      return r;
    }
  }
  fail(Errc::InvalidArgument, "unknown plan node");
}

std::optional<std::vector<MatchEdge>> tuple_matching(const AURelation& r, const DetRelation& w) {
  if (r.schema().size() != w.schema().size() || !union_compatible(r.schema(), w.schema()))
    return std::nullopt;
  const std::size_t n = r.size(), m = w.size();

  std::uint64_t mass = 0, need = 0;
  for (auto& row : w.rows()) mass = checked_add(mass, row.mult);
  for (auto& row : r.rows()) need = checked_add(need, row.ann.lb);
  if (need > mass) return std::nullopt;
  if (mass > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max() / 4))
    fail(Errc::Overflow, "world too large for the matching solver");
  const auto cap = static_cast<std::int64_t>(mass);

  std::vector<std::vector<std::size_t>> bounders(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      if (tuple_bounds(w.rows()[j].tuple, r.rows()[i].tuple)) bounders[j].push_back(i);
    if (bounders[j].empty()) return std::nullopt;
  }

  // Nodes: S, T, AU rows, world rows, then the super source and sink used to
  // remove the lower bounds.
  const std::size_t S = 0, T = 1, au0 = 2, det0 = 2 + n, SS = 2 + n + m, TT = SS + 1;
  MaxFlow g(TT + 1);
  std::vector<std::int64_t> excess(TT + 1, 0);
  auto bounded_edge = [&](std::size_t u, std::size_t v, std::int64_t lo, std::int64_t hi) {
    excess[v] += lo;
    excess[u] -= lo;
    return g.add_edge(u, v, hi - lo);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const AUMult& a = r.rows()[i].ann;
    auto lo = static_cast<std::int64_t>(a.lb);
    auto hi = static_cast<std::int64_t>(std::min<std::uint64_t>(a.ub, mass));
    bounded_edge(S, au0 + i, lo, hi);
  }
  std::vector<std::vector<std::size_t>> edge_ids(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (auto i : bounders[j]) edge_ids[j].push_back(g.add_edge(au0 + i, det0 + j, cap));
    auto d = static_cast<std::int64_t>(w.rows()[j].mult);
    bounded_edge(det0 + j, T, d, d);
  }
  g.add_edge(T, S, cap);

  std::int64_t demand = 0;
  for (std::size_t v = 0; v < SS; ++v) {
    if (excess[v] > 0) {
      g.add_edge(SS, v, excess[v]);
      demand += excess[v];
    } else if (excess[v] < 0) {
      g.add_edge(v, TT, -excess[v]);
    }
  }
  if (g.run(SS, TT) != demand) return std::nullopt;

  std::vector<MatchEdge> out;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < bounders[j].size(); ++k)
      if (std::int64_t f = g.flow_on(edge_ids[j][k]); f > 0)
        out.push_back({bounders[j][k], j, static_cast<std::uint64_t>(f)});
  return out;
}

bool bounds_world(const AURelation& r, const DetRelation& w) {
  return tuple_matching(r, w).has_value();
}

IncompleteRelation table_worlds(const IncompleteDB& idb, const std::string& table) {
  auto it = idb.tables.find(table);
  if (it == idb.tables.end()) fail(Errc::UnknownTable, "unknown table '" + table + "'");
  IncompleteRelation out{it->second, {}, idb.selected};
  for (auto& w : idb.worlds) {
    auto wt = w.find(table);
    out.worlds.push_back(wt == w.end() ? DetRelation(it->second) : wt->second);
  }
  return out;
}

IncompleteRelation eval_worlds(const Plan& p, const IncompleteDB& idb) {
  idb.validate();
  IncompleteRelation out{infer_schema(p, idb.tables), {}, idb.selected};
  for (auto& w : idb.worlds) {
    Database full = w;
    for (auto& [name, schema] : idb.tables) full.try_emplace(name, DetRelation(schema));
    out.worlds.push_back(eval_det_query(p, full));
  }
  return out;
}

BoundsReport check_bounds(const AURelation& r, const IncompleteRelation& idb) {
  BoundsReport rep;
  for (std::size_t i = 0; i < idb.worlds.size(); ++i) {
    if (!bounds_world(r, idb.worlds[i])) {
      rep.ok = false;
      rep.failed_world = i;
      rep.message = "world " + std::to_string(i) + " has no tuple matching";
      return rep;
    }
  }
  if (idb.selected >= idb.worlds.size() || sg_world(r) != idb.worlds[idb.selected]) {
    rep.ok = false;
    rep.sg_mismatch = true;
    rep.message = "selected-guess world differs from world " + std::to_string(idb.selected);
  }
  return rep;
}

bool bounds_idb(const AURelation& r, const IncompleteRelation& idb) {
  return check_bounds(r, idb).ok;
}

BoundsReport check_bounds(const AUDatabase& db, const IncompleteDB& idb) {
  for (auto& [name, schema] : idb.tables) {
    auto it = db.find(name);
    if (it == db.end()) return {false, std::nullopt, false, "missing table " + name};
    BoundsReport rep = check_bounds(it->second, table_worlds(idb, name));
    if (!rep.ok) {
      rep.message = name + ": " + rep.message;
      return rep;
    }
  }
  return {};
}

bool bounds_idb(const AUDatabase& db, const IncompleteDB& idb) { return check_bounds(db, idb).ok; }

TightnessReport tightness_metrics(const AURelation& r) {
  TightnessReport rep;
  rep.rows = r.size();
  for (auto& row : r.rows()) {
    for (auto& v : row.tuple) {
      if (is_numeric(v.kind()) && !v.lb().is_extreme() && !v.ub().is_extreme())
        rep.width_sum += v.ub().as_real() - v.lb().as_real();
      else if (!v.is_certain())
        ++rep.uncertain_values;
    }
    rep.annotation_slack = checked_add(rep.annotation_slack, row.ann.ub - row.ann.lb);
  }
  return rep;
}

}  // namespace audb
