#include <doctest.h>

#include "audb/gen.hpp"
#include "audb/plan.hpp"
#include "fixtures.hpp"

using namespace audb;
using namespace audb::fixtures;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

std::string message_of(const std::string& text) {
  try {
    parse_query(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Catalog catalog() {
  return {{"R", join_r().schema()}, {"S", join_s().schema()}, {"address", address().schema()}};
}

}  // namespace

TEST_CASE("parsing plans") {
  PlanPtr p = parse_query("(select (= A 2) (table R))");
  CHECK(p->kind == PlanKind::Select);
  REQUIRE(p->children.size() == 1);
  CHECK(p->children[0]->kind == PlanKind::Table);
  CHECK(p->children[0]->table == "R");
  CHECK(p->expr == eq(var("A"), lit(2)));

  PlanPtr g = parse_query("(aggregate (street) ((count *)) (table address))");
  CHECK(g->kind == PlanKind::Aggregate);
  CHECK(g->group_by == std::vector<std::string>{"street"});
  REQUIRE(g->aggs.size() == 1);
  CHECK(g->aggs[0].fn == AggFn::Count);
  CHECK(g->aggs[0].name == "count");

  PlanPtr d = parse_query("(diff (table R) (table S))");
  CHECK(d->kind == PlanKind::Diff);
  CHECK(*d == *diff_plan(table_plan("R"), table_plan("S")));
}

TEST_CASE("parsing expressions") {
  CHECK(parse_expr("(if (<= x 3) (* x 2) (recip x))") ==
        ite(leq(var("x"), lit(3)), times(var("x"), lit(2)), recip(var("x"))));
  CHECK(parse_expr("(mkuncert (- x 1) x (+ x 1))") ==
        mkuncert(minus(var("x"), lit(1)), var("x"), plus(var("x"), lit(1))));
  CHECK(parse_expr("(and true (not false) (> 2.5 x))") ==
        land(land(lit_bool(true), lnot(lit_bool(false))), gt(lit_real(2.5), var("x"))));
  CHECK(parse_expr("(- x)") == times(lit(-1), var("x")));
  CHECK(parse_expr("\"a \\\"b\\\"\"") == lit_text("a \"b\""));
  CHECK(parse_expr("-3") == lit(-3));
  CHECK(parse_expr("; note\n(!= a b)") == neq(var("a"), var("b")));
}

TEST_CASE("syntax errors carry the offset") {
  CHECK(message_of("(select (= A 2) (table R)").find("offset") != std::string::npos);
  CHECK(message_of("(select (= A 2) (table R)))").find("offset 26") != std::string::npos);
  CHECK(message_of("(frobnicate (table R))").find("frobnicate") != std::string::npos);
  CHECK(message_of("(table)") != "");
  CHECK(message_of("\"open") != "");
  CHECK(code_of([] { parse_expr("(+ 1"); }) == Errc::Parse);
}

TEST_CASE("schema inference resolves names") {
  Catalog c = catalog();
  CHECK(infer_schema(*parse_query("(join (= A C) (table R) (table S))"), c).names() ==
        std::vector<std::string>{"A", "C"});
  CHECK(infer_schema(*parse_query("(project ((X (+ A 1))) (table R))"), c).to_string() == "(X:int)");
  CHECK(code_of([&] { infer_schema(*parse_query("(table Q)"), c); }) == Errc::UnknownTable);
  CHECK(code_of([&] { infer_schema(*parse_query("(select (= Z 1) (table R))"), c); }) ==
        Errc::UnboundVariable);
  CHECK(code_of([&] { infer_schema(*parse_query("(select (+ A 1) (table R))"), c); }) ==
        Errc::TypeMismatch);
  CHECK(code_of([&] { infer_schema(*parse_query("(union (table R) (table address))"), c); }) ==
        Errc::SchemaMismatch);
  CHECK(code_of([&] { infer_schema(*parse_query("(cross (table R) (table R))"), c); }) ==
        Errc::NameClash);
  CHECK(code_of([&] { infer_schema(*parse_query("(compress A 0 (table R))"), c); }) ==
        Errc::InvalidArgument);
}

TEST_CASE("printing then parsing is the identity on generated plans") {
  gen::Rng rng(gen::seed_from_env(7));
  Catalog c{{"R", Schema({{"A", Kind::Int}, {"B", Kind::Real}, {"C", Kind::Text}})},
            {"S", Schema({{"D", Kind::Int}, {"E", Kind::Int}})}};
  for (int i = 0; i < 300; ++i) {
    PlanPtr p = gen::random_plan(rng, c, {});
    std::string text = print_plan(*p);
    PlanPtr back = parse_query(text);
    CHECK_MESSAGE(*back == *p, text);
    CHECK(print_plan(*back) == text);
    CHECK_NOTHROW(infer_schema(*back, c));
  }
}

TEST_CASE("executing a parsed group-by query") {
  AURelation out = execute(*parse_query("(aggregate (street) ((count * cnt)) (table address))"),
                           {{"address", address()}});
  CHECK(same_content(out, aggregate({"street"}, {{AggFn::Count, Expr(), "cnt"}}, address())));

  AUDatabase db{{"R", join_r()}, {"S", join_s()}};
  PlanPtr j = parse_query("(join (= A C) (table R) (table S))");
  AURelation opt = execute(*j, db, {true, 1});
  CHECK(opt.size() == 2);
  CHECK(sg_world(opt) == sg_world(execute(*j, db)));
  CHECK(code_of([&] { execute(*parse_query("(table Q)"), db); }) == Errc::UnknownTable);

  AURelation renamed = execute(*parse_query("(rename ((A Z)) (table R))"), db);
  CHECK(renamed.schema().names() == std::vector<std::string>{"Z"});
  AURelation packed = execute(*parse_query("(compress A 1 (table R))"), db);
  CHECK(packed.size() == 1);
  AURelation combined = execute(*parse_query("(combine (table R))"), {{"R", combiner_input()}});
  CHECK(combined.size() == 1);
}
