#include <doctest.h>

#include <sstream>

#include "audb/codec.hpp"
#include "audb/oracle.hpp"
#include "fixtures.hpp"

using namespace audb;
using namespace audb::fixtures;

namespace {

std::string error_of(const std::string& text) {
  try {
    enc_parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("flat encoding round trip") {
  for (const AURelation& r : {uaar(), address(), join_r(), combiner_input()}) {
    AURelation back = enc_parse(enc_string(r));
    CHECK(same_content(back, r));
    CHECK(enc_string(back) == enc_string(r));
  }
  CHECK(enc_string(join_r()) == "A:int\n1,1,2,2,2,3\n1,2,2,1,1,2\n");
}

TEST_CASE("reading the flat encoding") {
  AURelation empty = enc_parse("A:int,B:text\n");
  CHECK(empty.empty());
  CHECK(empty.schema().size() == 2);

  AURelation dup = enc_parse("A:int\n4,4,4,1,1,1\n4,4,4,1,1,1\n");
  CHECK(dup.at({ic(4)}) == AUMult(2, 2, 2));

  AURelation real = enc_parse("x:real,b:bool\n0.5,1,2.25,false,false,true,0,1,1\n");
  CHECK(real.rows()[0].tuple[0].ub() == Scalar::real(2.25));
  CHECK(real.rows()[0].tuple[1] == bool3(false, false, true));
}

TEST_CASE("encoding errors name the row") {
  CHECK(error_of("A:int\n1,1,1,1,1,1\n3,2,4,1,1,1\n").find("row 2") != std::string::npos);
  CHECK(error_of("A:int\n1,1,1,1,1\n").find("row 1") != std::string::npos);
  CHECK(error_of("A:int\n1,1,x,1,1,1\n").find("bad int") != std::string::npos);
  CHECK(error_of("A:int\n1,1,1,0,0,0\n").find("row_ub") != std::string::npos);
  CHECK(error_of("A:int\n1,1,1,2,1,1\n").find("annotation") != std::string::npos);
  CHECK(error_of("A\n").find("name:kind") != std::string::npos);
  CHECK(error_of("A:blob\n") != "");
  CHECK(error_of("") != "");
  CHECK(error_of("A:int\n-inf,1,1,1,1,1\n") != "");
}

TEST_CASE("text values are quoted") {
  AURelation r(Schema({{"s", Kind::Text}}));
  r.insert({tc("a,\"b\"\nc")}, {1, 1, 1});
  std::string text = enc_string(r);
  CHECK(text == "s:text\n\"a,\"\"b\"\"\nc\",\"a,\"\"b\"\"\nc\",\"a,\"\"b\"\"\nc\",1,1,1\n");
  CHECK(same_content(enc_parse(text), r));
}

TEST_CASE("empty-aggregate values are not written") {
  AURelation r(Schema({{"m", Kind::Int}}));
  r.insert({RangeValue(I(1), Scalar::pos_inf(Kind::Int), Scalar::pos_inf(Kind::Int))}, {0, 0, 1});
  CHECK_THROWS_AS(enc_string(r), Error);
}

TEST_CASE("worlds documents") {
  IncompleteDB db;
  db.tables.emplace("R", uaar().schema());
  db.worlds = {{{"R", uaar_d1()}}, {{"R", uaar_d2()}}};
  db.selected = 0;
  std::ostringstream os;
  worlds_write(os, db);
  std::istringstream is(os.str());
  IncompleteDB back = worlds_read(is);
  REQUIRE(back.worlds.size() == 2);
  CHECK(back.selected == 0);
  CHECK(back.worlds[0].at("R") == uaar_d1());
  CHECK(back.worlds[1].at("R") == uaar_d2());
  std::ostringstream again;
  worlds_write(again, back);
  CHECK(again.str() == os.str());

  std::istringstream one(R"({"tables": {"R": [["A","int"]]}, "selected": 0, "worlds": [{}]})");
  IncompleteDB single = worlds_read(one);
  CHECK(single.worlds.size() == 1);
  CHECK(single.worlds[0].at("R").empty());

  std::istringstream dup(
      R"({"tables": {"R": [["A","int"]]}, "selected": 0, "worlds": [{"R": [[[1], 2], [[1], 3]]}]})");
  CHECK(worlds_read(dup).worlds[0].at("R").at({I(1)}) == 5);

  std::istringstream bad_sel(R"({"tables": {"R": [["A","int"]]}, "selected": 2, "worlds": [{}]})");
  CHECK_THROWS_AS(worlds_read(bad_sel), Error);
  std::istringstream bad_table(R"({"tables": {}, "selected": 0, "worlds": [{"R": []}]})");
  CHECK_THROWS_AS(worlds_read(bad_table), Error);
  std::istringstream bad_kind(
      R"({"tables": {"R": [["A","int"]]}, "selected": 0, "worlds": [{"R": [[["x"], 1]]}]})");
  CHECK_THROWS_AS(worlds_read(bad_kind), Error);
}

TEST_CASE("tuple-independent import") {
  Schema s({{"A", Kind::Int}});
  AURelation r = import_tidb(s, {{{I(1)}, 1.0}, {{I(2)}, 0.5}, {{I(3)}, 0.3}, {{I(4)}, 0.0}});
  CHECK(r.at({ic(1)}) == AUMult(1, 1, 1));
  CHECK(r.at({ic(2)}) == AUMult(0, 1, 1));
  CHECK(r.at({ic(3)}) == AUMult(0, 0, 1));
  CHECK(r.at({ic(4)}) == AUMult::zero());
  CHECK_THROWS_AS(import_tidb(s, {{{I(1)}, 1.5}}), Error);

  std::istringstream js(R"({"schema": [["A","int"]], "tuples": [
      {"values": [1], "p": 0.5}, {"values": [2], "certain": true}, {"values": [3], "certain": false}]})");
  AURelation j = import_tidb_json(js);
  CHECK(j.at({ic(1)}) == AUMult(0, 1, 1));
  CHECK(j.at({ic(2)}) == AUMult(1, 1, 1));
  CHECK(j.at({ic(3)}) == AUMult(0, 1, 1));
}

TEST_CASE("x-tuple import") {
  Schema s({{"A", Kind::Int}});
  AURelation full = import_xdb(s, {{{{{I(30)}, 0.5}, {{I(40)}, 0.5}}}});
  CHECK(full.at({iv(30, 30, 40)}) == AUMult(1, 1, 1));
  AURelation partial = import_xdb(s, {{{{{I(1)}, 0.2}, {{I(9)}, 0.3}}}});
  CHECK(partial.at({iv(1, 9, 9)}) == AUMult(0, 0, 1));
  AURelation tie = import_xdb(s, {{{{{I(5)}, 0.5}}}});
  CHECK(tie.at({ic(5)}) == AUMult(0, 1, 1));
  CHECK_THROWS_AS(import_xdb(s, {{{{{I(1)}, 0.7}, {{I(2)}, 0.7}}}}), Error);
  CHECK_THROWS_AS(import_xdb(s, {XTuple{}}), Error);

  std::istringstream js(R"({"schema": [["A","int"], ["B","text"]], "xtuples": [
      {"alternatives": [{"values": [1, "x"], "p": 0.6}, {"values": [3, "a"], "p": 0.4}]}]})");
  AURelation j = import_xdb_json(js);
  CHECK(j.at({iv(1, 1, 3), RangeValue(Scalar::text("a"), Scalar::text("x"), Scalar::text("x"))}) ==
        AUMult(1, 1, 1));

  std::istringstream plain(R"({"schema": [["A","int"]], "xtuples": [
      {"alternatives": [[2], [4]]}, {"alternatives": [[7]], "optional": true}]})");
  AURelation u = import_xdb_json(plain);
  CHECK(u.at({iv(2, 2, 4)}) == AUMult(1, 1, 1));
  CHECK(u.at({ic(7)}) == AUMult(0, 1, 1));
}
