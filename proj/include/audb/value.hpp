#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>

#include "audb/error.hpp"

namespace audb {

enum class Kind : std::uint8_t { Int, Real, Bool, Text };

std::string_view kind_name(Kind k);
Kind parse_kind(std::string_view s);
inline bool is_numeric(Kind k) { return k == Kind::Int || k == Kind::Real; }

// Numbers of either kind are mutually comparable; Int op Real yields Real.
Kind numeric_join(Kind a, Kind b);

// A value of the ordered domain. Besides ordinary values there are two
// extremes, below and above every value of their kind; they only arise as
// identities of MIN/MAX over empty input.
class Scalar {
 public:
  Scalar() : kind_(Kind::Int), v_(std::int64_t{0}) {}

  static Scalar integer(std::int64_t v) { return Scalar(Kind::Int, v); }
  static Scalar real(double v);
  static Scalar boolean(bool v) { return Scalar(Kind::Bool, v); }
  static Scalar text(std::string v) { return Scalar(Kind::Text, std::move(v)); }
  static Scalar neg_inf(Kind k) { return Scalar(k, Extreme{-1}); }
  static Scalar pos_inf(Kind k) { return Scalar(k, Extreme{+1}); }

  Kind kind() const { return kind_; }
  bool is_extreme() const { return std::holds_alternative<Extreme>(v_); }
  // -1 for the lower extreme, +1 for the upper, 0 for ordinary values.
  int extreme_sign() const;

  std::int64_t as_int() const;
  double as_real() const;  // any finite number
  bool as_bool() const;
  const std::string& as_text() const;

  // Same value converted to `k`; only Int -> Real widens, everything else
  // must already match.
  Scalar coerce(Kind k) const;

  // Literal syntax used by the query language and diagnostics.
  std::string to_string() const;

  std::size_t hash() const;

 private:
  struct Extreme {
    int sign;
  };
  using Payload = std::variant<std::int64_t, double, bool, std::string, Extreme>;

  Scalar(Kind k, Payload v) : kind_(k), v_(std::move(v)) {}

  Kind kind_;
  Payload v_;

  friend int compare(const Scalar& a, const Scalar& b);
};

bool comparable(Kind a, Kind b);

// Three-way comparison; throws TypeMismatch across incomparable kinds.
int compare(const Scalar& a, const Scalar& b);

// Value equality that never throws: incomparable kinds are unequal.
bool operator==(const Scalar& a, const Scalar& b);
inline bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
inline bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
inline bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }

const Scalar& min_of(const Scalar& a, const Scalar& b);
const Scalar& max_of(const Scalar& a, const Scalar& b);

// Checked arithmetic on numbers.
Scalar add(const Scalar& a, const Scalar& b);
Scalar mul(const Scalar& a, const Scalar& b);
Scalar reciprocal(const Scalar& a);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// <lb, sg, ub> with lb <= sg <= ub. Over booleans this doubles as the
// three-valued truth triple.
class RangeValue {
 public:
  RangeValue() = default;
  RangeValue(Scalar lb, Scalar sg, Scalar ub);

  static RangeValue certain(Scalar v) { return RangeValue(v, v, v); }

  const Scalar& lb() const { return lb_; }
  const Scalar& sg() const { return sg_; }
  const Scalar& ub() const { return ub_; }

  Kind kind() const { return sg_.kind(); }
  bool is_certain() const { return lb_ == ub_; }
  bool contains(const Scalar& v) const {
    return compare(lb_, v) <= 0 && compare(v, ub_) <= 0;
  }
  RangeValue coerce(Kind k) const;

  std::size_t hash() const;
  std::string to_string() const;

 private:
  Scalar lb_, sg_, ub_;
};

bool operator==(const RangeValue& a, const RangeValue& b);
inline bool operator!=(const RangeValue& a, const RangeValue& b) { return !(a == b); }
std::ostream& operator<<(std::ostream& os, const RangeValue& v);

using Bool3 = RangeValue;
Bool3 bool3(bool lb, bool sg, bool ub);

// Multiplicity triple of naturals, lb <= sg <= ub.
struct AUMult {
  std::uint64_t lb = 0, sg = 0, ub = 0;

  AUMult() = default;
  AUMult(std::uint64_t l, std::uint64_t s, std::uint64_t u);

  static AUMult zero() { return {}; }
  static AUMult one() { return {1, 1, 1}; }

  bool is_zero() const { return ub == 0; }
  std::string to_string() const;
};

bool operator==(const AUMult& a, const AUMult& b);
inline bool operator!=(const AUMult& a, const AUMult& b) { return !(a == b); }
std::ostream& operator<<(std::ostream& os, const AUMult& m);

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

AUMult au_add(const AUMult& a, const AUMult& b);
AUMult au_mul(const AUMult& a, const AUMult& b);
std::uint64_t nat_monus(std::uint64_t a, std::uint64_t b);
AUMult rlift(const Bool3& b);

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace audb
