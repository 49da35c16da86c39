#include <doctest.h>

#include <random>
#include <sstream>

#include "audb/value.hpp"

using namespace audb;

namespace {

AUMult random_mult(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, 6);
  std::uint64_t a = d(rng), b = d(rng), c = d(rng);
  std::uint64_t lo = std::min({a, b, c}), hi = std::max({a, b, c});
  return AUMult(lo, a + b + c - lo - hi, hi);
}

}  // namespace

TEST_CASE("scalar order within and across kinds") {
  CHECK(Scalar::boolean(false) < Scalar::boolean(true));
  CHECK(Scalar::integer(-3) < Scalar::integer(2));
  CHECK(Scalar::integer(2) < Scalar::real(2.5));
  CHECK(Scalar::real(2.0) == Scalar::integer(2));
  CHECK(Scalar::text("Canal") < Scalar::text("Monroe"));
  CHECK(Scalar::text("Z") < Scalar::text("a"));
  CHECK_THROWS_AS(compare(Scalar::integer(1), Scalar::text("1")), Error);
  CHECK_THROWS_AS(compare(Scalar::boolean(true), Scalar::integer(1)), Error);
  CHECK_FALSE(Scalar::integer(1) == Scalar::text("1"));
}

TEST_CASE("extremes bound every value of their kind") {
  CHECK(Scalar::neg_inf(Kind::Int) < Scalar::integer(-1000000));
  CHECK(Scalar::integer(1000000) < Scalar::pos_inf(Kind::Int));
  CHECK(Scalar::pos_inf(Kind::Text) == Scalar::pos_inf(Kind::Text));
  CHECK_THROWS_AS(add(Scalar::pos_inf(Kind::Int), Scalar::integer(1)), Error);
}

TEST_CASE("checked arithmetic") {
  CHECK(add(Scalar::integer(2), Scalar::integer(3)) == Scalar::integer(5));
  CHECK(add(Scalar::integer(2), Scalar::real(0.5)).kind() == Kind::Real);
  CHECK(mul(Scalar::integer(-2), Scalar::integer(3)) == Scalar::integer(-6));
  CHECK(reciprocal(Scalar::integer(4)) == Scalar::real(0.25));
  CHECK_THROWS_AS(reciprocal(Scalar::integer(0)), Error);
  CHECK_THROWS_AS(add(Scalar::integer(INT64_MAX), Scalar::integer(1)), Error);
  CHECK_THROWS_AS(mul(Scalar::integer(INT64_MAX), Scalar::integer(2)), Error);
  CHECK_THROWS_AS(Scalar::real(1.0 / 0.0), Error);
  CHECK_THROWS_AS(add(Scalar::text("a"), Scalar::integer(1)), Error);
}

TEST_CASE("literal syntax") {
  CHECK(Scalar::integer(-4).to_string() == "-4");
  CHECK(Scalar::real(2.0).to_string() == "2.0");
  CHECK(Scalar::real(0.25).to_string() == "0.25");
  CHECK(Scalar::boolean(true).to_string() == "true");
  CHECK(Scalar::text("say \"hi\"").to_string() == "\"say \\\"hi\\\"\"");
}

TEST_CASE("range values keep lb <= sg <= ub") {
  CHECK_NOTHROW(RangeValue(Scalar::integer(1), Scalar::integer(2), Scalar::integer(3)));
  CHECK_THROWS_AS(RangeValue(Scalar::integer(2), Scalar::integer(1), Scalar::integer(3)), Error);
  CHECK_THROWS_AS(RangeValue(Scalar::integer(1), Scalar::integer(4), Scalar::integer(3)), Error);
  CHECK_THROWS_AS(RangeValue(Scalar::integer(1), Scalar::text("a"), Scalar::integer(3)), Error);
  RangeValue c = RangeValue::certain(Scalar::integer(7));
  CHECK(c.is_certain());
  CHECK(c.contains(Scalar::integer(7)));
  CHECK_FALSE(c.contains(Scalar::integer(8)));
  CHECK(RangeValue(Scalar::integer(1), Scalar::integer(2), Scalar::integer(3)).to_string() == "<1,2,3>");
}

TEST_CASE("multiplicity triples") {
  CHECK_THROWS_AS(AUMult(2, 1, 3), Error);
  CHECK(au_add({2, 2, 3}, {2, 3, 3}) == AUMult(4, 5, 6));
  CHECK(au_add({0, 0, 0}, {1, 2, 3}) == AUMult(1, 2, 3));
  CHECK(au_add({1, 1, 2}, {0, 1, 1}) == AUMult(1, 2, 3));
  CHECK(au_mul({1, 2, 3}, {0, 1, 1}) == AUMult(0, 2, 3));
  CHECK(au_mul({1, 1, 1}, {4, 5, 6}) == AUMult(4, 5, 6));
  CHECK(au_mul({2, 2, 3}, {1, 1, 1}) == AUMult(2, 2, 3));
  CHECK_THROWS_AS(au_add({0, 0, UINT64_MAX}, {0, 0, 1}), Error);
}

TEST_CASE("monus and the boolean lift") {
  CHECK(nat_monus(2, 3) == 0);
  CHECK(nat_monus(9, 0) == 9);
  CHECK(nat_monus(5, 2) == 3);
  CHECK(rlift(bool3(false, true, true)) == AUMult(0, 1, 1));
  CHECK(rlift(bool3(true, true, true)) == AUMult(1, 1, 1));
  CHECK(rlift(bool3(false, false, true)) == AUMult(0, 0, 1));
}

TEST_CASE("semiring laws and ordering on random triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    AUMult a = random_mult(rng), b = random_mult(rng), c = random_mult(rng);
    CHECK(au_add(a, b) == au_add(b, a));
    CHECK(au_add(au_add(a, b), c) == au_add(a, au_add(b, c)));
    CHECK(au_mul(a, b) == au_mul(b, a));
    CHECK(au_mul(au_mul(a, b), c) == au_mul(a, au_mul(b, c)));
    CHECK(au_mul(a, au_add(b, c)) == au_add(au_mul(a, b), au_mul(a, c)));
    CHECK(au_mul(a, AUMult::zero()) == AUMult::zero());
    CHECK(au_add(a, AUMult::zero()) == a);
    CHECK(au_mul(a, AUMult::one()) == a);
    std::uint64_t x = a.ub, y = b.ub;
    CHECK(nat_monus(x, y) + y >= x);
    CHECK(nat_monus(x, y) <= x);
  }
}

TEST_CASE("hashing agrees with equality across numeric kinds") {
  CHECK(Scalar::integer(2).hash() == Scalar::real(2.0).hash());
  CHECK(Scalar::real(0.0).hash() == Scalar::real(-0.0).hash());
}
