#include "audb/gen.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>

namespace audb::gen {

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const std::vector<std::string> kWords = {"a", "b", "c"};

Scalar small_value(Rng& rng, Kind k) {
  switch (k) {
    case Kind::Int: return Scalar::integer(uniform(rng, 0, 3));
    case Kind::Real: return Scalar::real(0.5 * static_cast<double>(uniform(rng, 0, 4)));
    case Kind::Bool: return Scalar::boolean(coin(rng, 0.5));
    case Kind::Text: return Scalar::text(kWords[pick(rng, kWords.size())]);
  }
  return Scalar();
}

DetTuple small_tuple(Rng& rng, const Schema& s) {
  DetTuple t;
  for (auto& a : s) t.push_back(small_value(rng, a.kind));
  return t;
}

bool tuple_less(const DetTuple& a, const DetTuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::vector<DetTuple> units(const DetRelation& r) {
  std::vector<DetTuple> out;
  for (auto& row : r.rows())
    for (std::uint64_t i = 0; i < row.mult; ++i) out.push_back(row.tuple);
  std::sort(out.begin(), out.end(), tuple_less);
  return out;
}

Schema random_schema(Rng& rng, const InstanceConfig& cfg, const std::string& names) {
  std::vector<Attribute> attrs{{std::string(1, names[0]), Kind::Int}};
  std::size_t extra = pick(rng, 3);
  for (std::size_t i = 0; i < extra; ++i) {
    std::vector<Kind> kinds{Kind::Int};
    if (cfg.reals) kinds.push_back(Kind::Real);
    if (cfg.text) kinds.push_back(Kind::Text);
    attrs.push_back({std::string(1, names[i + 1]), kinds[pick(rng, kinds.size())]});
  }
  return Schema(std::move(attrs));
}

DetRelation perturb(Rng& rng, const DetRelation& sel, std::size_t max_rows) {
  DetRelation w(sel.schema());
  std::size_t n = 0;
  for (auto& t : units(sel)) {
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    if (u < 0.15) continue;
    DetTuple v = t;
    if (u < 0.4) {
      std::size_t a = pick(rng, v.size());
      v[a] = small_value(rng, sel.schema()[a].kind);
    }
    w.insert(std::move(v), 1);
    ++n;
  }
  while (n < max_rows && coin(rng, 0.2)) {
    w.insert(small_tuple(rng, sel.schema()), 1);
    ++n;
  }
  return w;
}

}  // namespace

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("AUDB_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
  }
  return fallback;
}

AUDatabase envelope(const IncompleteDB& idb) {
  idb.validate();
  AUDatabase db;
  for (auto& [name, schema] : idb.tables) {
    std::vector<std::vector<DetTuple>> per_world;
    std::size_t most = 0;
    for (auto& w : idb.worlds) {
      auto it = w.find(name);
      per_world.push_back(it == w.end() ? std::vector<DetTuple>{} : units(it->second));
      most = std::max(most, per_world.back().size());
    }
    AURelation r(schema);
    const auto& sel = per_world[idb.selected];
    for (std::size_t k = 0; k < most; ++k) {
      const DetTuple* guess = k < sel.size() ? &sel[k] : nullptr;
      bool everywhere = true;
      std::vector<const DetTuple*> present;
      for (auto& u : per_world) {
        if (k < u.size()) present.push_back(&u[k]);
        else everywhere = false;
      }
      if (!guess) guess = present.front();
      AUTuple t;
      for (std::size_t a = 0; a < schema.size(); ++a) {
        Scalar lo = (*guess)[a], hi = (*guess)[a];
        for (auto* p : present) {
          lo = min_of(lo, (*p)[a]);
          hi = max_of(hi, (*p)[a]);
        }
        t.emplace_back(lo, (*guess)[a], hi);
      }
      r.insert(std::move(t), AUMult(everywhere ? 1 : 0, k < sel.size() ? 1 : 0, 1));
    }
    db.emplace(name, std::move(r));
  }
  return db;
}

AURelation widen(Rng& rng, const AURelation& r) {
  AURelation out(r.schema());
  for (auto& row : r.rows()) {
    AUTuple t = row.tuple;
    if (coin(rng, 0.5)) {
      for (auto& v : t) {
        Scalar lo = v.lb(), hi = v.ub();
        switch (v.kind()) {
          case Kind::Int:
            lo = Scalar::integer(lo.as_int() - uniform(rng, 0, 2));
            hi = Scalar::integer(hi.as_int() + uniform(rng, 0, 2));
            break;
          case Kind::Real:
            lo = Scalar::real(lo.as_real() - 0.5 * static_cast<double>(uniform(rng, 0, 2)));
            hi = Scalar::real(hi.as_real() + 0.5 * static_cast<double>(uniform(rng, 0, 2)));
            break;
          case Kind::Bool:
            if (coin(rng, 0.5)) lo = Scalar::boolean(false);
            if (coin(rng, 0.5)) hi = Scalar::boolean(true);
            break;
          case Kind::Text:
            if (coin(rng, 0.3)) lo = Scalar::text("");
            if (coin(rng, 0.3)) hi = Scalar::text("z");
            break;
        }
        v = RangeValue(lo, v.sg(), hi);
      }
    }
    AUMult m = row.ann;
    m.lb = static_cast<std::uint64_t>(uniform(rng, 0, static_cast<std::int64_t>(m.lb)));
    m.ub += static_cast<std::uint64_t>(uniform(rng, 0, 1));
    out.insert(std::move(t), m);
  }
  if (coin(rng, 0.2)) {
    out.insert(certain_tuple(small_tuple(rng, r.schema())), AUMult(0, 0, 1));
  }
  return out;
}

Instance random_instance(Rng& rng, const InstanceConfig& cfg) {
  Instance inst;
  IncompleteDB& idb = inst.worlds;
  const std::vector<std::pair<std::string, std::string>> tables = {{"R", "ABC"}, {"S", "DEF"}};
  std::size_t ntables = 1 + pick(rng, std::min(cfg.max_tables, tables.size()));
  std::size_t nworlds = 1 + pick(rng, cfg.max_worlds);
  idb.worlds.resize(nworlds);
  idb.selected = pick(rng, nworlds);
  for (std::size_t ti = 0; ti < ntables; ++ti) {
    const auto& [name, letters] = tables[ti];
    Schema s = random_schema(rng, cfg, letters);
    idb.tables.emplace(name, s);
    DetRelation sel(s);
    std::size_t n = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(cfg.max_rows)));
    for (std::size_t i = 0; i < n; ++i) sel.insert(small_tuple(rng, s), 1);
    for (std::size_t w = 0; w < nworlds; ++w)
      idb.worlds[w].emplace(name, w == idb.selected ? sel : perturb(rng, sel, cfg.max_rows));
  }
  for (auto& [name, r] : envelope(idb)) inst.db.emplace(name, widen(rng, r));
  return inst;
}

namespace {

struct PlanGen {
  Rng& rng;
  const Catalog& catalog;
  PlanConfig cfg;
  int fresh = 0;

  struct Out {
    PlanPtr plan;
    Schema schema;
  };

  std::string fresh_name() { return "x" + std::to_string(++fresh); }

  TypeEnv env_of(const Schema& s) { return s.type_env(); }

  Expr predicate(const Schema& s) {
    ExprConfig ec{2, false, false};
    return random_expr(rng, env_of(s), Kind::Bool, ec);
  }

  Out leaf() {
    auto it = catalog.begin();
    std::advance(it, static_cast<long>(pick(rng, catalog.size())));
    return {table_plan(it->first), it->second};
  }

  // Makes `in` union compatible with `target` through a projection.
  Out conform(const Out& in, const Schema& target) {
    std::vector<ProjItem> items;
    for (auto& a : target) {
      std::vector<std::string> same;
      for (auto& b : in.schema)
        if (b.kind == a.kind) same.push_back(b.name);
      if (!same.empty() && coin(rng, 0.85)) items.push_back({var(same[pick(rng, same.size())]), a.name});
      else items.push_back({lit(small_value(rng, a.kind)), a.name});
    }
    Schema s = project_schema(items, in.schema);
    return {project_plan(std::move(items), in.plan), s};
  }

  Out disjoint_from(const Out& in, const Schema& other) {
    RenameMap m;
    for (auto& a : in.schema)
      if (other.find(a.name)) m.emplace_back(a.name, fresh_name());
    if (m.empty()) return in;
    Schema s = rename_schema(m, in.schema);
    return {rename_plan(std::move(m), in.plan), s};
  }

  Out gen(int depth, bool root) {
    if (depth <= 0 || coin(rng, 0.2)) return leaf();
    switch (pick(rng, 6)) {
      case 0: {
        Out in = gen(depth - 1, false);
        Expr p = predicate(in.schema);
        return {select_plan(p, in.plan), in.schema};
      }
      case 1: {
        Out in = gen(depth - 1, false);
        std::vector<ProjItem> items;
        for (auto& a : in.schema)
          if (coin(rng, 0.6)) items.push_back({var(a.name), a.name});
        std::vector<Kind> numeric;
        for (auto& a : in.schema)
          if (is_numeric(a.kind)) numeric.push_back(a.kind);
        if (!numeric.empty() && (items.empty() || coin(rng, 0.4))) {
          ExprConfig ec{2, false, false};
          items.push_back({random_expr(rng, env_of(in.schema), numeric[pick(rng, numeric.size())], ec),
                           fresh_name()});
        }
        if (items.empty()) items.push_back({var(in.schema[0].name), in.schema[0].name});
        Schema s = project_schema(items, in.schema);
        return {project_plan(std::move(items), in.plan), s};
      }
      case 2: {
        Out l = gen(depth - 1, false);
        Out r = disjoint_from(gen(depth - 1, false), l.schema);
        std::vector<std::pair<std::string, std::string>> keys;
        for (auto& a : l.schema)
          for (auto& b : r.schema)
            if (comparable(a.kind, b.kind)) keys.emplace_back(a.name, b.name);
        Schema s = cross_schema(l.schema, r.schema);
        Expr theta = lit_bool(true);
        if (!keys.empty()) {
          auto& [a, b] = keys[pick(rng, keys.size())];
          theta = eq(var(a), var(b));
          if (coin(rng, 0.3)) theta = land(theta, predicate(s));
        }
        return {join_plan(theta, l.plan, r.plan), s};
      }
      case 3:
      case 4: {
        Out l = gen(depth - 1, false);
        Out r = conform(gen(depth - 1, false), l.schema);
        PlanPtr p = pick(rng, 2) == 0 ? union_plan(l.plan, r.plan) : diff_plan(l.plan, r.plan);
        return {p, l.schema};
      }
      default: {
        Out in = gen(depth - 1, false);
        std::vector<std::string> gb;
        for (auto& a : in.schema)
          if (gb.size() < 2 && coin(rng, 0.35)) gb.push_back(a.name);
        std::vector<AggSpec> aggs;
        std::size_t n = 1 + pick(rng, 2);
        for (std::size_t i = 0; i < n; ++i) {
          const Attribute& a = in.schema[pick(rng, in.schema.size())];
          std::vector<AggFn> fns{AggFn::Count, AggFn::Min, AggFn::Max};
          if (is_numeric(a.kind)) {
            fns.push_back(AggFn::Sum);
            if (root && cfg.avg) fns.push_back(AggFn::Avg);
          }
          AggFn f = fns[pick(rng, fns.size())];
          aggs.push_back({f, f == AggFn::Count ? Expr() : var(a.name), fresh_name()});
        }
        Schema s = aggregate_schema(gb, aggs, in.schema);
        return {aggregate_plan(std::move(gb), std::move(aggs), in.plan), s};
      }
    }
  }
};

struct ExprGen {
  Rng& rng;
  const TypeEnv& env;
  ExprConfig cfg;

  std::vector<std::string> vars_of(Kind k) {
    std::vector<std::string> out;
    for (auto& [n, kk] : env)
      if (kk == k) out.push_back(n);
    return out;
  }

  Scalar literal(Kind k) {
    switch (k) {
      case Kind::Int: return Scalar::integer(uniform(rng, -3, 3));
      case Kind::Real: return Scalar::real(0.5 * static_cast<double>(uniform(rng, -6, 6)));
      case Kind::Bool: return Scalar::boolean(coin(rng, 0.5));
      case Kind::Text: return Scalar::text(kWords[pick(rng, kWords.size())]);
    }
    return Scalar();
  }

  Expr leaf(Kind k) {
    auto vs = vars_of(k);
    if (!vs.empty() && coin(rng, 0.7)) return var(vs[pick(rng, vs.size())]);
    return lit(literal(k));
  }

  Kind numeric_kind() {
    bool ints = !vars_of(Kind::Int).empty(), reals = !vars_of(Kind::Real).empty();
    if (ints && reals) return coin(rng, 0.5) ? Kind::Int : Kind::Real;
    return reals ? Kind::Real : Kind::Int;
  }

  Expr gen(Kind k, int depth, bool allow_mku) {
    if (depth <= 0 || coin(rng, 0.25)) return leaf(k);
    if (k == Kind::Bool) {
      switch (pick(rng, 6)) {
        case 0: return land(gen(Kind::Bool, depth - 1, allow_mku), gen(Kind::Bool, depth - 1, allow_mku));
        case 1: return lor(gen(Kind::Bool, depth - 1, allow_mku), gen(Kind::Bool, depth - 1, allow_mku));
        case 2: return lnot(gen(Kind::Bool, depth - 1, allow_mku));
        case 3:
          return ite(gen(Kind::Bool, depth - 1, allow_mku), gen(Kind::Bool, depth - 1, allow_mku),
                     gen(Kind::Bool, depth - 1, allow_mku));
        default: {
          Kind c = numeric_kind();
          if (!vars_of(Kind::Text).empty() && coin(rng, 0.25)) c = Kind::Text;
          Expr a = gen(c, depth - 1, allow_mku), b = gen(c, depth - 1, allow_mku);
          using F = Expr (*)(Expr, Expr);
          static const F cmps[] = {eq, neq, leq, lt, geq, gt};
          return cmps[pick(rng, 6)](a, b);
        }
      }
    }
    if (k == Kind::Text) return leaf(k);
    std::size_t choices = 4 + (cfg.recip && k == Kind::Real ? 1 : 0);
    std::size_t c = pick(rng, choices);
    if (c == 3 && !(cfg.mkuncert && allow_mku)) c = 0;
    switch (c) {
      case 0: return plus(gen(k, depth - 1, allow_mku), gen(k, depth - 1, allow_mku));
      case 1: return coin(rng, 0.5) ? minus(gen(k, depth - 1, allow_mku), gen(k, depth - 1, allow_mku))
                                    : times(gen(k, depth - 1, allow_mku), gen(k, depth - 1, allow_mku));
      case 2:
        return ite(gen(Kind::Bool, depth - 1, allow_mku), gen(k, depth - 1, allow_mku),
                   gen(k, depth - 1, allow_mku));
      case 3: {
        Expr e = gen(k, depth - 1, false);
        Scalar c1 = literal(k), c2 = literal(k);
        auto nonneg = [&](const Scalar& s) {
          return k == Kind::Int ? Scalar::integer(std::abs(s.as_int())) : Scalar::real(std::abs(s.as_real()));
        };
        return mkuncert(minus(e, lit(nonneg(c1))), e, plus(e, lit(nonneg(c2))));
      }
      default: return recip(gen(numeric_kind(), depth - 1, allow_mku));
    }
  }
};

}  // namespace

PlanPtr random_plan(Rng& rng, const Catalog& catalog, const PlanConfig& cfg) {
  if (catalog.empty()) fail(Errc::InvalidArgument, "random plan needs at least one table");
  PlanGen g{rng, catalog, cfg};
  return g.gen(cfg.max_depth, true).plan;
}

Expr random_expr(Rng& rng, const TypeEnv& env, Kind want, const ExprConfig& cfg) {
  ExprGen g{rng, env, cfg};
  return g.gen(want, cfg.max_depth, true);
}

RangeValue random_range(Rng& rng, Kind k) {
  switch (k) {
    case Kind::Int: {
      std::int64_t s = uniform(rng, -5, 5);
      return RangeValue(Scalar::integer(s - uniform(rng, 0, 3)), Scalar::integer(s),
                        Scalar::integer(s + uniform(rng, 0, 3)));
    }
    case Kind::Real: {
      double s = std::uniform_real_distribution<double>(-4, 4)(rng);
      if (coin(rng, 0.2)) return RangeValue::certain(Scalar::real(s));
      double lo = s - std::uniform_real_distribution<double>(0, 2)(rng);
      double hi = s + std::uniform_real_distribution<double>(0, 2)(rng);
      return RangeValue(Scalar::real(lo), Scalar::real(s), Scalar::real(hi));
    }
    case Kind::Bool: {
      static const bool t[4][3] = {{false, false, false}, {false, false, true}, {false, true, true}, {true, true, true}};
      auto& r = t[pick(rng, 4)];
      return bool3(r[0], r[1], r[2]);
    }
    case Kind::Text: {
      std::vector<std::string> w{kWords[pick(rng, 3)], kWords[pick(rng, 3)], kWords[pick(rng, 3)]};
      std::sort(w.begin(), w.end());
      return RangeValue(Scalar::text(w[0]), Scalar::text(w[1]), Scalar::text(w[2]));
    }
  }
  return RangeValue();
}

Scalar sample_in(Rng& rng, const RangeValue& v) {
  std::size_t c = pick(rng, 5);
  if (c == 0) return v.lb();
  if (c == 1) return v.ub();
  if (c == 2) return v.sg();
  switch (v.kind()) {
    case Kind::Int: return Scalar::integer(uniform(rng, v.lb().as_int(), v.ub().as_int()));
    case Kind::Real: {
      double x = std::uniform_real_distribution<double>(v.lb().as_real(), v.ub().as_real())(rng);
      return Scalar::real(std::clamp(x, v.lb().as_real(), v.ub().as_real()));
    }
    case Kind::Bool:
      return v.is_certain() ? v.lb() : Scalar::boolean(coin(rng, 0.5));
    case Kind::Text: return coin(rng, 0.5) ? v.lb() : v.ub();
  }
  return v.sg();
}

std::vector<TIRow> random_ti(Rng& rng, const Schema& schema, std::size_t max_tuples) {
  std::vector<TIRow> rows;
  std::size_t n = 1 + pick(rng, max_tuples);
  for (std::size_t i = 0; i < n; ++i)
    rows.push_back({small_tuple(rng, schema), static_cast<double>(uniform(rng, 0, 8)) / 8.0});
  return rows;
}

std::vector<XTuple> random_xdb(Rng& rng, const Schema& schema, std::size_t max_xtuples,
                               std::size_t max_alternatives) {
  std::vector<XTuple> xs;
  std::size_t n = 1 + pick(rng, max_xtuples);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 1 + pick(rng, max_alternatives);
    // Split a total of `mass` eighths into k positive parts.
    auto mass = uniform(rng, static_cast<std::int64_t>(k), 8);
    std::vector<std::int64_t> parts(k, 1);
    for (std::int64_t left = mass - static_cast<std::int64_t>(k); left > 0; --left) ++parts[pick(rng, k)];
    XTuple x;
    for (std::size_t a = 0; a < k; ++a)
      x.alternatives.push_back({small_tuple(rng, schema), static_cast<double>(parts[a]) / 8.0});
    xs.push_back(std::move(x));
  }
  return xs;
}

IncompleteRelation ti_worlds(const Schema& schema, const std::vector<TIRow>& rows) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].p > 0.0 && rows[i].p < 1.0) open.push_back(i);
  if (open.size() > 20) fail(Errc::InvalidArgument, "too many optional tuples to enumerate");
  IncompleteRelation out{schema, {}, 0};
  DetRelation sel(schema);
  for (auto& r : rows)
    if (r.p >= 0.5) sel.insert(r.tuple, 1);
  out.worlds.push_back(sel);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << open.size()); ++mask) {
    DetRelation w(schema);
    for (auto& r : rows)
      if (r.p == 1.0) w.insert(r.tuple, 1);
    for (std::size_t b = 0; b < open.size(); ++b)
      if (mask >> b & 1) w.insert(rows[open[b]].tuple, 1);
    out.worlds.push_back(std::move(w));
  }
  return out;
}

IncompleteRelation xdb_worlds(const Schema& schema, const std::vector<XTuple>& xtuples) {
  IncompleteRelation out{schema, {}, 0};
  DetRelation sel(schema);
  for (auto& x : xtuples) {
    double mass = 0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < x.alternatives.size(); ++i) {
      mass += x.alternatives[i].p;
      if (x.alternatives[i].p > x.alternatives[best].p) best = i;
    }
    if (1.0 - mass <= x.alternatives[best].p) sel.insert(x.alternatives[best].tuple, 1);
  }
  out.worlds.push_back(sel);
  std::function<void(std::size_t, DetRelation&)> rec = [&](std::size_t i, DetRelation& w) {
    if (i == xtuples.size()) {
      out.worlds.push_back(w);
      return;
    }
    const XTuple& x = xtuples[i];
    double mass = 0;
    for (auto& a : x.alternatives) mass += a.p;
    for (auto& a : x.alternatives) {
      DetRelation next = w;
      next.insert(a.tuple, 1);
      rec(i + 1, next);
    }
    if (mass < 1.0) rec(i + 1, w);
  };
  DetRelation empty(schema);
  rec(0, empty);
  return out;
}

}  // namespace audb::gen
