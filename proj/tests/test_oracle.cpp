#include <doctest.h>

#include <algorithm>
#include <functional>

#include "audb/gen.hpp"
#include "audb/optimize.hpp"
#include "audb/oracle.hpp"
#include "fixtures.hpp"

using namespace audb;
using namespace audb::fixtures;

namespace {

// Exhaustive search over every way to split each world row among the AU
// rows that bound it.
bool brute_force_bounds(const AURelation& r, const DetRelation& w) {
  const auto& au = r.rows();
  const auto& det = w.rows();
  std::vector<std::uint64_t> load(au.size(), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t d) -> bool {
    if (d == det.size()) {
      for (std::size_t i = 0; i < au.size(); ++i)
        if (load[i] < au[i].ann.lb || load[i] > au[i].ann.ub) return false;
      return true;
    }
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < au.size(); ++i)
      if (tuple_bounds(det[d].tuple, au[i].tuple)) targets.push_back(i);
    std::function<bool(std::size_t, std::uint64_t)> split = [&](std::size_t k, std::uint64_t left) -> bool {
      if (k + 1 == targets.size()) {
        load[targets[k]] += left;
        bool ok = place(d + 1);
        load[targets[k]] -= left;
        return ok;
      }
      for (std::uint64_t c = 0; c <= left; ++c) {
        load[targets[k]] += c;
        bool ok = split(k + 1, left - c);
        load[targets[k]] -= c;
        if (ok) return true;
      }
      return false;
    };
    if (targets.empty()) return false;
    return split(0, det[d].mult);
  };
  return place(0);
}

// Bags as flat lists of tuples, one entry per copy.
using Bag = std::vector<DetTuple>;

Bag expand(const DetRelation& r) {
  Bag b;
  for (auto& row : r.rows())
    for (std::uint64_t i = 0; i < row.mult; ++i) b.push_back(row.tuple);
  return b;
}

DetRelation collect(const Schema& s, const Bag& b) {
  DetRelation r(s);
  for (auto& t : b) r.insert(t, 1);
  return r;
}

Valuation bind_row(const Schema& s, const DetTuple& t) {
  Valuation v;
  for (std::size_t i = 0; i < s.size(); ++i) v[s[i].name] = t[i];
  return v;
}

// A direct tuple-at-a-time interpreter for the golden queries below.
Bag naive(const Plan& p, const Database& db, Schema& schema) {
  Catalog cat = catalog_of(db);
  schema = infer_schema(p, cat);
  Schema in, in2;
  switch (p.kind) {
    case PlanKind::Table:
      return expand(db.at(p.table));
    case PlanKind::Select: {
      Bag out;
      for (auto& t : naive(*p.children[0], db, in))
        if (eval_det(p.expr, bind_row(in, t)).as_bool()) out.push_back(t);
      return out;
    }
    case PlanKind::Project: {
      Bag out;
      for (auto& t : naive(*p.children[0], db, in)) {
        DetTuple o;
        for (auto& item : p.items) o.push_back(eval_det(item.expr, bind_row(in, t)));
        out.push_back(o);
      }
      return out;
    }
    case PlanKind::Join: {
      Bag out;
      Bag l = naive(*p.children[0], db, in), r = naive(*p.children[1], db, in2);
      for (auto& a : l)
        for (auto& b : r) {
          DetTuple t = a;
          t.insert(t.end(), b.begin(), b.end());
          if (eval_det(p.expr, bind_row(schema, t)).as_bool()) out.push_back(t);
        }
      return out;
    }
    case PlanKind::Union: {
      Bag out = naive(*p.children[0], db, in);
      for (auto& t : naive(*p.children[1], db, in2)) out.push_back(t);
      return out;
    }
    case PlanKind::Diff: {
      Bag out = naive(*p.children[0], db, in);
      for (auto& t : naive(*p.children[1], db, in2)) {
        auto it = std::find(out.begin(), out.end(), t);
        if (it != out.end()) out.erase(it);
      }
      return out;
    }
    case PlanKind::Aggregate: {
      Bag rows = naive(*p.children[0], db, in);
      std::vector<DetTuple> keys;
      for (auto& t : rows) {
        DetTuple k;
        for (auto& g : p.group_by) k.push_back(t[in.index_of(g)]);
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
      }
      if (p.group_by.empty() && keys.empty()) keys.push_back({});
      Bag out;
      for (auto& k : keys) {
        std::vector<DetTuple> members;
        for (auto& t : rows) {
          DetTuple key;
          for (auto& g : p.group_by) key.push_back(t[in.index_of(g)]);
          if (key == k) members.push_back(t);
        }
        DetTuple o = k;
        for (auto& a : p.aggs) {
          if (a.fn == AggFn::Count) {
            o.push_back(Scalar::integer(static_cast<std::int64_t>(members.size())));
            continue;
          }
          std::vector<Scalar> vals;
          for (auto& t : members) vals.push_back(eval_det(a.arg, bind_row(in, t)));
          if (a.fn == AggFn::Sum) {
            Scalar s = Scalar::integer(0);
            for (auto& v : vals) s = add(s, v);
            o.push_back(s);
          } else if (a.fn == AggFn::Min) {
            o.push_back(*std::min_element(vals.begin(), vals.end(),
                                          [](auto& x, auto& y) { return compare(x, y) < 0; }));
          } else {
            o.push_back(*std::max_element(vals.begin(), vals.end(),
                                          [](auto& x, auto& y) { return compare(x, y) < 0; }));
          }
        }
        out.push_back(o);
      }
      return out;
    }
    default:
      FAIL("node not covered by the naive interpreter");
      return {};
  }
}

}  // namespace

TEST_CASE("the instance bounds its selected world with the example matching") {
  auto m = tuple_matching(uaar(), uaar_d1());
  REQUIRE(m.has_value());
  std::vector<std::uint64_t> load(uaar().size(), 0), served(uaar_d1().size(), 0);
  for (auto& e : *m) {
    load[e.au_row] += e.count;
    served[e.det_row] += e.count;
    CHECK(tuple_bounds(uaar_d1().rows()[e.det_row].tuple, uaar().rows()[e.au_row].tuple));
  }
  for (std::size_t i = 0; i < load.size(); ++i) {
    CHECK(load[i] >= uaar().rows()[i].ann.lb);
    CHECK(load[i] <= uaar().rows()[i].ann.ub);
  }
  for (std::size_t j = 0; j < served.size(); ++j) CHECK(served[j] == uaar_d1().rows()[j].mult);

  // TM(t1~, t1) = 2 and TM(t2~, t1) = 3 meets both intervals [2, 3].
  CHECK(uaar().rows()[0].ann.lb <= 2);
  CHECK(uaar().rows()[1].ann.ub >= 3);
  CHECK(tuple_bounds({I(1), I(1)}, uaar().rows()[1].tuple));
}

TEST_CASE("bounding single worlds") {
  CHECK(bounds_world(certain_encoding(uaar_d2()), uaar_d2()));
  CHECK(bounds_world(uaar(), uaar_d2()));

  AURelation base = uaar();
  AURelation raised(base.schema());
  for (auto& row : base.rows()) raised.insert(row.tuple, AUMult(7, 7, 7));
  CHECK_FALSE(bounds_world(raised, uaar_d1()));

  DetRelation outside(uaar().schema());
  outside.insert({I(1), I(1)}, 5);
  outside.insert({I(4), I(3)}, 1);
  CHECK_FALSE(bounds_world(uaar(), outside));

  DetRelation too_many = uaar_d1();
  too_many.insert({I(1), I(1)}, 2);
  CHECK_FALSE(bounds_world(uaar(), too_many));

  CHECK(bounds_world(AURelation(uaar().schema()), DetRelation(uaar().schema())));
  AURelation needs_one(Schema({{"A", Kind::Int}}));
  needs_one.insert({ic(1)}, {1, 1, 1});
  CHECK_FALSE(bounds_world(needs_one, DetRelation(needs_one.schema())));
}

TEST_CASE("bounding incomplete databases") {
  IncompleteRelation both{uaar().schema(), {uaar_d1(), uaar_d2()}, 0};
  CHECK(bounds_idb(uaar(), both));

  IncompleteRelation wrong_sel{uaar().schema(), {uaar_d1(), uaar_d2()}, 1};
  BoundsReport rep = check_bounds(uaar(), wrong_sel);
  CHECK_FALSE(rep.ok);
  CHECK(rep.sg_mismatch);

  DetRelation off(uaar().schema());
  off.insert({I(9), I(9)}, 1);
  IncompleteRelation perturbed{uaar().schema(), {uaar_d1(), off}, 0};
  rep = check_bounds(uaar(), perturbed);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.failed_world.has_value());
  CHECK(*rep.failed_world == 1);

  IncompleteRelation single{uaar().schema(), {uaar_d2()}, 0};
  CHECK(bounds_idb(certain_encoding(uaar_d2()), single));
}

TEST_CASE("flow feasibility agrees with brute force") {
  gen::Rng rng(gen::seed_from_env(11));
  Schema s({{"A", Kind::Int}});
  int agree_true = 0;
  for (int iter = 0; iter < 1500; ++iter) {
    AURelation r(s);
    std::size_t rows = 1 + rng() % 4;
    for (std::size_t i = 0; i < rows; ++i) {
      std::int64_t lo = static_cast<std::int64_t>(rng() % 4);
      std::int64_t hi = lo + static_cast<std::int64_t>(rng() % 3);
      std::uint64_t ub = 1 + rng() % 3, lb = rng() % (ub + 1);
      r.insert({iv(lo, lo, hi)}, AUMult(lb, lb, ub));
    }
    DetRelation w(s);
    std::size_t det = rng() % 4;
    for (std::size_t i = 0; i < det; ++i) w.insert({I(static_cast<std::int64_t>(rng() % 6))}, 1 + rng() % 3);
    bool flow = bounds_world(r, w);
    CHECK(flow == brute_force_bounds(r, w));
    agree_true += flow;
  }
  CHECK(agree_true > 50);
}

TEST_CASE("tightness metrics") {
  TightnessReport certain = tightness_metrics(certain_encoding(uaar_d1()));
  CHECK(certain.width_sum == 0);
  CHECK(certain.uncertain_values == 0);
  CHECK(certain.annotation_slack == 0);

  AURelation exact = join(eq(var("A"), var("C")), join_r(), join_s());
  AURelation packed = join_opt(eq(var("A"), var("C")), join_r(), join_s(), 1);
  TightnessReport e = tightness_metrics(exact), p = tightness_metrics(packed);
  CHECK(p.rows < e.rows);
  CHECK(p.annotation_slack > e.annotation_slack);
  CHECK(e.annotation_slack == 15);
  CHECK(p.annotation_slack == 17);

  // Projecting B gives rows disjoint from join_r, so widths add up.
  AURelation bs = project({{var("B"), "A"}}, uaar());
  TightnessReport a = tightness_metrics(join_r()), b = tightness_metrics(uaar());
  TightnessReport sum_ab = tightness_metrics(union_all(join_r(), bs));
  CHECK(sum_ab.rows == join_r().size() + bs.size());
  CHECK(tightness_metrics(bs).width_sum + a.width_sum == sum_ab.width_sum);
  CHECK(b.width_sum == 3);
  CHECK(tightness_metrics(address()).uncertain_values == 1);
}

TEST_CASE("deterministic evaluation") {
  DetRelation t(Schema({{"g", Kind::Text}, {"v", Kind::Int}}));
  t.insert({Scalar::text("x"), I(30)}, 2);
  t.insert({Scalar::text("x"), I(40)}, 3);
  Database db{{"T", t}};
  DetRelation s = eval_det_query(*parse_query("(aggregate () ((sum v s)) (table T))"), db);
  CHECK(s.at({I(180)}) == 1);
  CHECK(eval_det_query(*parse_query("(select true (table T))"), db) == t);

  DetRelation empty = eval_det_query(*parse_query("(aggregate () ((count *)) (select false (table T)))"), db);
  CHECK(empty.at({I(0)}) == 1);
}

TEST_CASE("deterministic evaluation matches a naive interpreter") {
  Database db{{"R", uaar_d2()}, {"S", uaar_d1()}};
  db.emplace("T", DetRelation(Schema({{"C", Kind::Int}, {"D", Kind::Int}})));
  db.at("T").insert({I(1), I(5)}, 2);
  db.at("T").insert({I(2), I(6)}, 1);
  const char* queries[] = {
      "(table R)",
      "(select (<= B 2) (table R))",
      "(project ((X (+ A B))) (table R))",
      "(join (= A C) (table R) (table T))",
      "(join (and (= A C) (< B D)) (table R) (table T))",
      "(union (table R) (table S))",
      "(diff (table R) (table S))",
      "(diff (table S) (table R))",
      "(aggregate (A) ((count *) (sum B s) (min B lo) (max B hi)) (table R))",
      "(aggregate () ((sum B s)) (join (= A C) (table R) (table T)))",
      "(aggregate (B) ((count *)) (union (table R) (table S)))",
      "(project ((A A)) (diff (table R) (select (= B 3) (table S))))",
  };
  for (const char* q : queries) {
    PlanPtr p = parse_query(q);
    Schema s;
    Bag bag = naive(*p, db, s);
    CHECK_MESSAGE(eval_det_query(*p, db) == collect(s, bag), q);
  }
}

TEST_CASE("a single-world database evaluated through its exact encoding") {
  Database db{{"R", uaar_d2()}, {"S", uaar_d1()}};
  AUDatabase encoded{{"R", certain_encoding(uaar_d2())}, {"S", certain_encoding(uaar_d1())}};
  const char* queries[] = {
      "(select (<= B 2) (table R))",
      "(diff (table R) (table S))",
      "(aggregate (A) ((count *) (sum B s) (avg B a)) (union (table R) (table S)))",
      "(join (= A X) (table R) (rename ((A X) (B Y)) (table S)))",
  };
  for (const char* q : queries) {
    PlanPtr p = parse_query(q);
    CHECK_MESSAGE(sg_world(execute(*p, encoded)) == eval_det_query(*p, db), q);
  }
}
