// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "checks.hpp"
#include "fixtures.hpp"

using namespace audb;
using namespace audb::fixtures;

namespace {

// Pinned limits.
constexpr double kSelectMaxMs = 1.0;
constexpr double kExpressionMaxS = 30.0;
constexpr double kEndToEndMaxS = 120.0;
constexpr std::size_t kExpressionCases = 10000;
constexpr std::size_t kEndToEndInstances = 500;
constexpr std::size_t kImporterInstances = 100;
constexpr std::size_t kWorkloadRows = 256;
constexpr std::uint64_t kWorkloadSeed = 20240611;

struct Result {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ann(const AURelation& r, const AUTuple& t) { return r.at(t).to_string(); }

Result selection() {
  Result res;
  AURelation r(Schema({{"A", Kind::Int}}));
  r.insert({iv(1, 2, 3)}, {1, 2, 3});
  Expr theta = eq(var("A"), lit(2));
  select(theta, r);
  auto t0 = std::chrono::steady_clock::now();
  AURelation out = select(theta, r);
  double ms = 1000 * seconds_since(t0);
  res.expect(out.size() == 1 && out.at({iv(1, 2, 3)}) == AUMult(0, 2, 3),
             "annotation " + ann(out, {iv(1, 2, 3)}));
  res.expect(ms < kSelectMaxMs, "took " + std::to_string(ms) + " ms");
  return res;
}

Result join_golden() {
  Result res;
  AURelation out = join(eq(var("A"), var("C")), join_r(), join_s());
  res.expect(out.size() == 4, std::to_string(out.size()) + " rows");
  std::pair<AUTuple, AUMult> want[] = {
      {{iv(1, 1, 2), iv(1, 3, 3)}, {0, 0, 3}},
      {{iv(1, 1, 2), iv(1, 2, 2)}, {0, 0, 6}},
      {{iv(1, 2, 2), iv(1, 3, 3)}, {0, 0, 2}},
      {{iv(1, 2, 2), iv(1, 2, 2)}, {1, 2, 4}},
  };
  for (auto& [t, m] : want)
    res.expect(out.at(t) == m, tuple_string(t) + " is " + ann(out, t) + ", expected " + m.to_string());
  return res;
}

Result optimized_join() {
  Result res;
  AURelation out = join_opt(eq(var("A"), var("C")), join_r(), join_s(), 1);
  res.expect(out.size() == 2, std::to_string(out.size()) + " rows");
  res.expect(out.at({ic(2), ic(2)}) == AUMult(0, 2, 2), "certain row " + ann(out, {ic(2), ic(2)}));
  res.expect(out.at({iv(1, 1, 2), iv(1, 2, 3)}) == AUMult(0, 0, 15),
             "possible row " + ann(out, {iv(1, 1, 2), iv(1, 2, 3)}));
  return res;
}

Result aggregation() {
  Result res;
  AURelation pop = aggregate({}, {{AggFn::Sum, var("inhab"), "pop"}}, address());
  res.expect(pop.size() == 1 && pop.at({iv(6, 7, 14)}) == AUMult(1, 1, 1),
             "sum without group-by " + (pop.empty() ? std::string("empty") : tuple_string(pop.rows()[0].tuple)));

  AURelation cnt = aggregate({"street"}, {{AggFn::Count, Expr(), "cnt"}}, address());
  res.expect(cnt.size() == 3, "count by street has " + std::to_string(cnt.size()) + " rows");
  std::pair<AUTuple, AUMult> want[] = {
      {{any_street("Canal"), iv(1, 2, 3)}, {1, 1, 2}},
      {{tc("State"), iv(2, 2, 4)}, {1, 1, 1}},
      {{tc("Monroe"), iv(1, 1, 2)}, {0, 0, 1}},
  };
  for (auto& [t, m] : want)
    res.expect(cnt.at(t) == m, tuple_string(t) + " is " + ann(cnt, t));

  AURelation sum = aggregate({"B"}, {{AggFn::Sum, var("A"), "s"}}, sum_example());
  bool found = false;
  for (auto& row : sum.rows()) {
    if (row.tuple[0].sg() != Scalar::integer(3)) continue;
    found = true;
    res.expect(row.tuple[1].lb() == Scalar::integer(-5),
               "sum lower bound for group (3) is " + row.tuple[1].lb().to_string() + ", expected -5");
  }
  res.expect(found, "no group (3) in the sum example");
  return res;
}

Result difference_golden() {
  Result res;
  AURelation d = difference(diff_r(), diff_s());
  res.expect(d.at({ic(1)}) == AUMult(0, 2, 2), "(R-S)(1) is " + ann(d, {ic(1)}));
  AURelation c = sg_combine(combiner_input());
  res.expect(c.size() == 1 && c.at({iv(1, 2, 4), iv(1, 3, 5)}) == AUMult(4, 5, 6),
             "combined row " + ann(c, {iv(1, 2, 4), iv(1, 3, 5)}));
  return res;
}

Result sgw_golden() {
  Result res;
  DetRelation w = sg_world(uaar());
  res.expect(w.size() == 2 && w.at({I(1), I(1)}) == 5 && w.at({I(2), I(3)}) == 1,
             "selected-guess world differs");
  IncompleteRelation idb{uaar().schema(), {uaar_d1(), uaar_d2()}, 0};
  BoundsReport rep = check_bounds(uaar(), idb);
  res.expect(rep.ok, rep.message);
  return res;
}

Result tally_result(const checks::Tally& t, const std::string& what) {
  Result res;
  res.expect(t.cases > 0, "no cases ran");
  res.expect(t.violations == 0, std::to_string(t.violations) + " violations, first: " + t.first);
  res.detail = res.detail.empty() ? std::to_string(t.cases) + " " + what +
                                        (t.skipped ? ", " + std::to_string(t.skipped) + " skipped" : "")
                                  : res.detail;
  return res;
}

Result expressions() {
  gen::Rng rng(gen::seed_from_env(7));
  auto t0 = std::chrono::steady_clock::now();
  checks::Tally t;
  while (t.cases < kExpressionCases) {
    checks::Tally part = checks::expression_bounds(rng, kExpressionCases - t.cases);
    t.cases += part.cases;
    t.skipped += part.skipped;
    if (part.violations && !t.violations) t.first = part.first;
    t.violations += part.violations;
  }
  double s = seconds_since(t0);
  Result res = tally_result(t, "triples");
  res.expect(s < kExpressionMaxS, "took " + std::to_string(s) + " s");
  return res;
}

Result end_to_end() {
  gen::Rng rng(gen::seed_from_env(8));
  auto t0 = std::chrono::steady_clock::now();
  checks::Tally t = checks::end_to_end(rng, kEndToEndInstances);
  double s = seconds_since(t0);
  Result res = tally_result(t, "instances");
  res.expect(t.cases == kEndToEndInstances, "only " + std::to_string(t.cases) + " instances ran");
  res.expect(s < kEndToEndMaxS, "took " + std::to_string(s) + " s");
  return res;
}

Result algebra() {
  checks::Tally semiring = checks::semiring_laws(4);
  checks::Tally monoid = checks::monoid_laws(-2, 2);
  checks::Tally pairing = checks::smb_bounds(4, -2, 2);
  Result res;
  for (auto* t : {&semiring, &monoid, &pairing})
    res.expect(t->ok(), std::to_string(t->violations) + " violations, first: " + t->first);
  if (res.pass)
    res.detail = std::to_string(semiring.cases + monoid.cases + pairing.cases) + " cases";
  return res;
}

Result importers() {
  gen::Rng rng(gen::seed_from_env(10));
  checks::Tally ti = checks::ti_import(rng, kImporterInstances, 12);
  checks::Tally x = checks::xdb_import(rng, kImporterInstances, 5, 3);
  Result res;
  res.expect(ti.ok(), "TI: " + ti.first);
  res.expect(x.ok(), "x-DB: " + x.first);
  if (res.pass) res.detail = std::to_string(ti.cases) + " TI and " + std::to_string(x.cases) + " x-DB instances";
  return res;
}

Result metrics() {
  Result res;
  checks::JoinWorkload w = checks::join_workload(kWorkloadSeed, kWorkloadRows);
  Expr theta = eq(var("A"), var("C"));
  std::uint64_t prev = UINT64_MAX;
  std::string trail;
  for (std::uint64_t n : {1u, 4u, 16u, 64u}) {
    std::uint64_t slack = tightness_metrics(join_opt(theta, w.r, w.s, n)).annotation_slack;
    trail += (trail.empty() ? "" : ", ") + std::to_string(n) + ":" + std::to_string(slack);
    res.expect(slack <= prev, "slack grew at n=" + std::to_string(n));
    prev = slack;
    std::size_t pr = compress(ub_split(w.r), "A", n).size();
    std::size_t ps = compress(ub_split(w.s), "C", n).size();
    res.expect(pr <= n && ps <= n, "possible part has " + std::to_string(std::max(pr, ps)) +
                                       " rows at n=" + std::to_string(n));
  }
  if (res.pass) res.detail = "slack " + trail;
  return res;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"selection golden", selection},
      {"join golden", join_golden},
      {"optimized join golden", optimized_join},
      {"aggregation golden", aggregation},
      {"difference golden", difference_golden},
      {"selected-guess world golden", sgw_golden},
      {"expression bound preservation", expressions},
      {"end-to-end bound preservation", end_to_end},
      {"algebraic laws", algebra},
      {"importer correctness", importers},
      {"metrics monotonicity", metrics},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failed;
    std::printf("%s %zu %s%s%s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
  }
  return failed ? 1 : 0;
}
