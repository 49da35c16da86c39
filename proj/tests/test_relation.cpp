#include <doctest.h>

#include "audb/oracle.hpp"
#include "audb/relation.hpp"
#include "fixtures.hpp"

using namespace audb;
using namespace audb::fixtures;

TEST_CASE("schemas reject duplicate names") {
  CHECK_THROWS_AS(Schema({{"A", Kind::Int}, {"A", Kind::Real}}), Error);
  Schema s({{"A", Kind::Int}, {"B", Kind::Text}});
  CHECK(s.index_of("B") == 1);
  CHECK_FALSE(s.find("C").has_value());
  CHECK_THROWS_AS(s.index_of("C"), Error);
  CHECK(union_compatible(s, Schema({{"X", Kind::Int}, {"Y", Kind::Text}})));
  CHECK_FALSE(union_compatible(s, Schema({{"X", Kind::Real}, {"Y", Kind::Text}})));
}

TEST_CASE("inserting merges identical range tuples and skips zeros") {
  AURelation r(Schema({{"A", Kind::Int}}));
  r.insert({ic(1)}, {1, 1, 1});
  r.insert({ic(1)}, {1, 1, 1});
  r.insert({iv(0, 1, 1)}, {0, 0, 0});
  r.insert({iv(0, 1, 1)}, {0, 1, 2});
  CHECK(r.size() == 2);
  CHECK(r.at({ic(1)}) == AUMult(2, 2, 2));
  CHECK(r.at({iv(0, 1, 1)}) == AUMult(0, 1, 2));
  CHECK(r.at({ic(5)}) == AUMult::zero());
  CHECK_THROWS_AS(r.insert({tc("a")}, {1, 1, 1}), Error);
  CHECK_THROWS_AS(r.insert({ic(1), ic(2)}, {1, 1, 1}), Error);
}

TEST_CASE("integer values widen into real attributes") {
  AURelation r(Schema({{"A", Kind::Real}}));
  r.insert({ic(2)}, {1, 1, 1});
  CHECK(r.rows()[0].tuple[0].kind() == Kind::Real);
}

TEST_CASE("selected-guess world") {
  DetRelation w = sg_world(uaar());
  CHECK(w.size() == 2);
  CHECK(w.at({I(1), I(1)}) == 5);
  CHECK(w.at({I(2), I(3)}) == 1);
  CHECK(w == uaar_d1());

  AURelation certain(Schema({{"A", Kind::Int}}));
  certain.insert({ic(4)}, {1, 1, 1});
  certain.insert({ic(5)}, {0, 2, 2});
  CHECK(sg_world(certain).at({I(4)}) == 1);
  CHECK(sg_world(certain).at({I(5)}) == 2);

  AURelation shared(Schema({{"A", Kind::Int}}));
  shared.insert({iv(1, 2, 3)}, {2, 2, 2});
  shared.insert({iv(2, 2, 2)}, {0, 3, 3});
  shared.insert({iv(0, 7, 9)}, {0, 0, 4});
  DetRelation sw = sg_world(shared);
  CHECK(sw.size() == 1);
  CHECK(sw.at({I(2)}) == 5);
}

TEST_CASE("tuple bounding") {
  CHECK(tuple_bounds({I(2)}, {iv(1, 2, 3)}));
  CHECK(tuple_bounds({I(2)}, {iv(2, 3, 5)}));
  CHECK_FALSE(tuple_bounds({I(4)}, {iv(1, 2, 3)}));
  CHECK(tuple_bounds({I(7), Scalar::text("x")}, {ic(7), tc("x")}));
  CHECK_FALSE(tuple_bounds({I(7), Scalar::text("y")}, {ic(7), tc("x")}));
}

TEST_CASE("overlap and certain equality") {
  CHECK(overlaps({iv(1, 1, 2)}, {iv(1, 3, 3)}));
  CHECK(overlaps({ic(2)}, {ic(2)}));
  CHECK_FALSE(overlaps({iv(1, 1, 2)}, {iv(3, 3, 4)}));
  CHECK(overlaps({iv(1, 1, 2), ic(9)}, {iv(2, 2, 3), ic(0)}, {0}));
  CHECK_FALSE(overlaps({iv(1, 1, 2), ic(9)}, {iv(2, 2, 3), ic(0)}));
  CHECK(cert_equal({ic(2)}, {ic(2)}));
  CHECK_FALSE(cert_equal({ic(2)}, {iv(1, 2, 3)}));
  CHECK_FALSE(cert_equal({ic(2)}, {ic(3)}));
}

TEST_CASE("combiner merges rows that share a selected guess") {
  AURelation c = sg_combine(combiner_input());
  REQUIRE(c.size() == 1);
  CHECK(c.at({iv(1, 2, 4), iv(1, 3, 5)}) == AUMult(4, 5, 6));

  AURelation distinct(Schema({{"A", Kind::Int}}));
  distinct.insert({ic(1)}, {1, 1, 1});
  distinct.insert({ic(2)}, {0, 1, 3});
  CHECK(same_content(sg_combine(distinct), distinct));

  AURelation three(Schema({{"A", Kind::Int}}));
  three.insert({iv(0, 2, 2)}, {1, 1, 1});
  three.insert({iv(2, 2, 5)}, {0, 1, 2});
  three.insert({iv(1, 2, 3)}, {0, 0, 1});
  AURelation t = sg_combine(three);
  REQUIRE(t.size() == 1);
  CHECK(t.rows()[0].tuple[0] == iv(0, 2, 5));
  CHECK(t.rows()[0].ann == AUMult(1, 2, 4));
}

TEST_CASE("combining keeps the selected-guess world and every bounded world") {
  AURelation r = uaar();
  AURelation c = sg_combine(r);
  CHECK(sg_world(c) == sg_world(r));
  CHECK(bounds_world(r, uaar_d2()));
  CHECK(bounds_world(c, uaar_d2()));
  CHECK(bounds_world(c, uaar_d1()));
}

TEST_CASE("certain encoding") {
  AURelation e = certain_encoding(uaar_d2());
  CHECK(e.size() == 3);
  CHECK(e.at({ic(1), ic(3)}) == AUMult(2, 2, 2));
  CHECK(sg_world(e) == uaar_d2());
}

TEST_CASE("bag equality ignores order and names") {
  DetRelation a(Schema({{"A", Kind::Int}}));
  a.insert({I(1)}, 1);
  a.insert({I(2)}, 2);
  DetRelation b(Schema({{"Z", Kind::Int}}));
  b.insert({I(2)}, 1);
  b.insert({I(1)}, 1);
  b.insert({I(2)}, 1);
  CHECK(a == b);
  b.insert({I(3)}, 1);
  CHECK(a != b);
}
