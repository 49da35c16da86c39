#include "audb/value.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace audb {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::TypeMismatch: return "type mismatch";
    case Errc::UnboundVariable: return "unbound variable";
    case Errc::DivisionByZero: return "division by zero";
    case Errc::RecipUndefined: return "reciprocal undefined";
    case Errc::InvalidRange: return "invalid range";
    case Errc::Overflow: return "overflow";
    case Errc::SchemaMismatch: return "schema mismatch";
    case Errc::NameClash: return "name clash";
    case Errc::UnknownTable: return "unknown table";
    case Errc::Parse: return "parse error";
    case Errc::EmptyAggregate: return "empty aggregate";
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::Probability: return "invalid probability";
    case Errc::Io: return "i/o error";
  }
  return "error";
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Int: return "int";
    case Kind::Real: return "real";
    case Kind::Bool: return "bool";
    case Kind::Text: return "text";
  }
  return "?";
}

Kind parse_kind(std::string_view s) {
  if (s == "int") return Kind::Int;
  if (s == "real") return Kind::Real;
  if (s == "bool") return Kind::Bool;
  if (s == "text") return Kind::Text;
  fail(Errc::Parse, "unknown kind '" + std::string(s) + "'");
}

Kind numeric_join(Kind a, Kind b) {
  if (!is_numeric(a) || !is_numeric(b))
    fail(Errc::TypeMismatch, "arithmetic on " + std::string(kind_name(a)) +
                                 " and " + std::string(kind_name(b)));
  return (a == Kind::Real || b == Kind::Real) ? Kind::Real : Kind::Int;
}

bool comparable(Kind a, Kind b) {
  return a == b || (is_numeric(a) && is_numeric(b));
}

Scalar Scalar::real(double v) {
  if (!std::isfinite(v)) fail(Errc::Overflow, "non-finite real");
  if (v == 0.0) v = 0.0;  // fold -0
  return Scalar(Kind::Real, v);
}

int Scalar::extreme_sign() const {
  if (auto* e = std::get_if<Extreme>(&v_)) return e->sign;
  return 0;
}

std::int64_t Scalar::as_int() const {
  if (auto* p = std::get_if<std::int64_t>(&v_)) return *p;
  fail(Errc::TypeMismatch, "expected int, got " + to_string());
}

double Scalar::as_real() const {
  if (auto* p = std::get_if<double>(&v_)) return *p;
  if (auto* p = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*p);
  if (is_extreme()) fail(Errc::EmptyAggregate, "arithmetic on an empty-aggregate extreme");
  fail(Errc::TypeMismatch, "expected number, got " + to_string());
}

bool Scalar::as_bool() const {
  if (auto* p = std::get_if<bool>(&v_)) return *p;
  fail(Errc::TypeMismatch, "expected bool, got " + to_string());
}

const std::string& Scalar::as_text() const {
  if (auto* p = std::get_if<std::string>(&v_)) return *p;
  fail(Errc::TypeMismatch, "expected text, got " + to_string());
}

Scalar Scalar::coerce(Kind k) const {
  if (k == kind_) return *this;
  if (k == Kind::Real && kind_ == Kind::Int) {
    if (is_extreme()) return Scalar(k, v_);
    return real(static_cast<double>(std::get<std::int64_t>(v_)));
  }
  fail(Errc::TypeMismatch, "cannot use " + std::string(kind_name(kind_)) +
                               " value as " + std::string(kind_name(k)));
}

namespace {

std::string format_real(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string Scalar::to_string() const {
  if (auto* e = std::get_if<Extreme>(&v_)) return e->sign < 0 ? "-inf" : "+inf";
  if (auto* p = std::get_if<std::int64_t>(&v_)) return std::to_string(*p);
  if (auto* p = std::get_if<double>(&v_)) return format_real(*p);
  if (auto* p = std::get_if<bool>(&v_)) return *p ? "true" : "false";
  return quote(std::get<std::string>(v_));
}

std::size_t Scalar::hash() const {
  if (auto* e = std::get_if<Extreme>(&v_)) return e->sign < 0 ? 0x51ed27 : 0x7a3c11;
  if (auto* p = std::get_if<std::int64_t>(&v_))
    return std::hash<double>{}(static_cast<double>(*p));
  if (auto* p = std::get_if<double>(&v_)) return std::hash<double>{}(*p);
  if (auto* p = std::get_if<bool>(&v_)) return *p ? 0x2f : 0x1d;
  return std::hash<std::string>{}(std::get<std::string>(v_));
}

int compare(const Scalar& a, const Scalar& b) {
  if (!comparable(a.kind_, b.kind_))
    fail(Errc::TypeMismatch, "cannot compare " + a.to_string() + " with " + b.to_string());
  int ea = a.extreme_sign(), eb = b.extreme_sign();
  if (ea || eb) return (ea > eb) - (ea < eb);
  switch (a.kind_) {
    case Kind::Int:
    case Kind::Real: {
      auto* ia = std::get_if<std::int64_t>(&a.v_);
      auto* ib = std::get_if<std::int64_t>(&b.v_);
      if (ia && ib) return (*ia > *ib) - (*ia < *ib);
      long double x = ia ? static_cast<long double>(*ia) : std::get<double>(a.v_);
      long double y = ib ? static_cast<long double>(*ib) : std::get<double>(b.v_);
      return (x > y) - (x < y);
    }
    case Kind::Bool: {
      bool x = std::get<bool>(a.v_), y = std::get<bool>(b.v_);
      return int(x) - int(y);
    }
    case Kind::Text: {
      int c = std::get<std::string>(a.v_).compare(std::get<std::string>(b.v_));
      return (c > 0) - (c < 0);
    }
  }
  return 0;
}

bool operator==(const Scalar& a, const Scalar& b) {
  return comparable(a.kind(), b.kind()) && compare(a, b) == 0;
}

const Scalar& min_of(const Scalar& a, const Scalar& b) { return compare(b, a) < 0 ? b : a; }
const Scalar& max_of(const Scalar& a, const Scalar& b) { return compare(b, a) > 0 ? b : a; }

Scalar add(const Scalar& a, const Scalar& b) {
  Kind k = numeric_join(a.kind(), b.kind());
  if (a.is_extreme() || b.is_extreme())
    fail(Errc::EmptyAggregate, "arithmetic on an empty-aggregate extreme");
  if (k == Kind::Int) {
    std::int64_t r;
    if (__builtin_add_overflow(a.as_int(), b.as_int(), &r))
      fail(Errc::Overflow, "integer overflow in " + a.to_string() + " + " + b.to_string());
    return Scalar::integer(r);
  }
  return Scalar::real(a.as_real() + b.as_real());
}

Scalar mul(const Scalar& a, const Scalar& b) {
  Kind k = numeric_join(a.kind(), b.kind());
  if (a.is_extreme() || b.is_extreme())
    fail(Errc::EmptyAggregate, "arithmetic on an empty-aggregate extreme");
  if (k == Kind::Int) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.as_int(), b.as_int(), &r))
      fail(Errc::Overflow, "integer overflow in " + a.to_string() + " * " + b.to_string());
    return Scalar::integer(r);
  }
  return Scalar::real(a.as_real() * b.as_real());
}

Scalar reciprocal(const Scalar& a) {
  numeric_join(a.kind(), Kind::Real);
  double d = a.as_real();
  if (d == 0.0) fail(Errc::DivisionByZero, "reciprocal of zero");
  return Scalar::real(1.0 / d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

RangeValue::RangeValue(Scalar lb, Scalar sg, Scalar ub)
    : lb_(std::move(lb)), sg_(std::move(sg)), ub_(std::move(ub)) {
  if (!comparable(lb_.kind(), sg_.kind()) || !comparable(sg_.kind(), ub_.kind()))
    fail(Errc::TypeMismatch, "mixed kinds in range " + to_string());
  if (compare(lb_, sg_) > 0 || compare(sg_, ub_) > 0)
    fail(Errc::InvalidRange, "range not ordered: " + to_string());
}

RangeValue RangeValue::coerce(Kind k) const {
  if (lb_.kind() == k && sg_.kind() == k && ub_.kind() == k) return *this;
  return RangeValue(lb_.coerce(k), sg_.coerce(k), ub_.coerce(k));
}

std::size_t RangeValue::hash() const {
  std::size_t h = lb_.hash();
  hash_mix(h, sg_.hash());
  hash_mix(h, ub_.hash());
  return h;
}

std::string RangeValue::to_string() const {
  return "<" + lb_.to_string() + "," + sg_.to_string() + "," + ub_.to_string() + ">";
}

bool operator==(const RangeValue& a, const RangeValue& b) {
  return a.lb() == b.lb() && a.sg() == b.sg() && a.ub() == b.ub();
}

std::ostream& operator<<(std::ostream& os, const RangeValue& v) { return os << v.to_string(); }

Bool3 bool3(bool lb, bool sg, bool ub) {
  return Bool3(Scalar::boolean(lb), Scalar::boolean(sg), Scalar::boolean(ub));
}

AUMult::AUMult(std::uint64_t l, std::uint64_t s, std::uint64_t u) : lb(l), sg(s), ub(u) {
  if (l > s || s > u) fail(Errc::InvalidRange, "multiplicity not ordered: " + to_string());
}

std::string AUMult::to_string() const {
  return "(" + std::to_string(lb) + "," + std::to_string(sg) + "," + std::to_string(ub) + ")";
}

bool operator==(const AUMult& a, const AUMult& b) {
  return a.lb == b.lb && a.sg == b.sg && a.ub == b.ub;
}

std::ostream& operator<<(std::ostream& os, const AUMult& m) { return os << m.to_string(); }

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::Overflow, "multiplicity overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::Overflow, "multiplicity overflow");
  return r;
}

AUMult au_add(const AUMult& a, const AUMult& b) {
  return AUMult(checked_add(a.lb, b.lb), checked_add(a.sg, b.sg), checked_add(a.ub, b.ub));
}

AUMult au_mul(const AUMult& a, const AUMult& b) {
  return AUMult(checked_mul(a.lb, b.lb), checked_mul(a.sg, b.sg), checked_mul(a.ub, b.ub));
}

std::uint64_t nat_monus(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : 0; }

AUMult rlift(const Bool3& b) {
  return AUMult(b.lb().as_bool() ? 1 : 0, b.sg().as_bool() ? 1 : 0, b.ub().as_bool() ? 1 : 0);
}

}  // namespace audb
