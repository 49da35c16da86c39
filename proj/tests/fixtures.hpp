#pragma once

#include <string>

#include "audb/codec.hpp"
#include "audb/relation.hpp"

namespace audb::fixtures {

inline RangeValue iv(std::int64_t l, std::int64_t s, std::int64_t u) {
  return RangeValue(Scalar::integer(l), Scalar::integer(s), Scalar::integer(u));
}
inline RangeValue ic(std::int64_t v) { return RangeValue::certain(Scalar::integer(v)); }
inline RangeValue tc(std::string v) { return RangeValue::certain(Scalar::text(std::move(v))); }
inline Scalar I(std::int64_t v) { return Scalar::integer(v); }

// Join inputs R(A) and S(C).
inline AURelation join_r() {
  AURelation r(Schema({{"A", Kind::Int}}));
  r.insert({iv(1, 1, 2)}, {2, 2, 3});
  r.insert({iv(1, 2, 2)}, {1, 1, 2});
  return r;
}

inline AURelation join_s() {
  AURelation s(Schema({{"C", Kind::Int}}));
  s.insert({iv(1, 3, 3)}, {1, 1, 1});
  s.insert({iv(1, 2, 2)}, {1, 2, 2});
  return s;
}

// Relation R(A, B) bounding worlds D1 (selected) and D2 below.
inline AURelation uaar() {
  AURelation r(Schema({{"A", Kind::Int}, {"B", Kind::Int}}));
  r.insert({ic(1), ic(1)}, {2, 2, 3});
  r.insert({ic(1), iv(1, 1, 3)}, {2, 3, 3});
  r.insert({iv(1, 2, 2), ic(3)}, {1, 1, 1});
  return r;
}

inline DetRelation uaar_d1() {
  DetRelation d(Schema({{"A", Kind::Int}, {"B", Kind::Int}}));
  d.insert({I(1), I(1)}, 5);
  d.insert({I(2), I(3)}, 1);
  return d;
}

inline DetRelation uaar_d2() {
  DetRelation d(Schema({{"A", Kind::Int}, {"B", Kind::Int}}));
  d.insert({I(1), I(1)}, 2);
  d.insert({I(1), I(3)}, 2);
  d.insert({I(2), I(3)}, 1);
  return d;
}

// Street values marked as entirely unknown span from "" to "~", which lies
// above every street name used here. Street numbers of the second and the
// fourth row are listed with lb <= sg <= ub.
inline RangeValue any_street(std::string sg) {
  return RangeValue(Scalar::text(""), Scalar::text(std::move(sg)), Scalar::text("~"));
}

inline AURelation address() {
  AURelation r(Schema({{"street", Kind::Text}, {"number", Kind::Int}, {"inhab", Kind::Int}}));
  r.insert({tc("Canal"), ic(165), ic(1)}, {1, 1, 2});
  r.insert({any_street("Canal"), iv(153, 154, 156), iv(1, 2, 2)}, {1, 1, 1});
  r.insert({tc("State"), iv(623, 623, 629), ic(2)}, {2, 2, 3});
  r.insert({tc("Monroe"), iv(3550, 3574, 3585), iv(2, 3, 4)}, {0, 0, 1});
  return r;
}

// Two-row relation of the worked sum lower bound.
inline AURelation sum_example() {
  AURelation r(Schema({{"A", Kind::Int}, {"B", Kind::Int}}));
  r.insert({iv(3, 5, 10), ic(3)}, {1, 2, 2});
  r.insert({iv(-4, -3, -3), iv(2, 3, 4)}, {1, 2, 2});
  return r;
}

// Difference inputs over one attribute.
inline AURelation diff_r() {
  AURelation r(Schema({{"A", Kind::Int}}));
  r.insert({ic(1)}, {1, 2, 2});
  r.insert({ic(2)}, {0, 0, 1});
  return r;
}

inline AURelation diff_s() {
  AURelation s(Schema({{"A", Kind::Int}}));
  s.insert({ic(1)}, {0, 0, 3});
  s.insert({ic(2)}, {0, 1, 1});
  return s;
}

// Combiner input with two rows sharing the selected guess (2, 3).
inline AURelation combiner_input() {
  AURelation r(Schema({{"A", Kind::Int}, {"B", Kind::Int}}));
  r.insert({iv(1, 2, 2), iv(1, 3, 5)}, {1, 2, 2});
  r.insert({iv(2, 2, 4), iv(3, 3, 4)}, {3, 3, 4});
  return r;
}

inline AUMult at(const AURelation& r, const AUTuple& t) { return r.at(t); }

}  // namespace audb::fixtures
