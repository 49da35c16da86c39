#include "audb/relation.hpp"

#include <algorithm>
#include <unordered_set>

namespace audb {

bool operator==(const Attribute& a, const Attribute& b) {
  return a.name == b.name && a.kind == b.kind;
}

Schema::Schema(std::vector<Attribute> attrs) : attrs_(std::move(attrs)) {
  std::unordered_set<std::string> seen;
  for (auto& a : attrs_) {
    if (a.name.empty()) fail(Errc::InvalidArgument, "empty attribute name");
    if (!seen.insert(a.name).second)
      fail(Errc::NameClash, "duplicate attribute '" + a.name + "'");
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attrs_.size(); ++i)
    if (attrs_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  fail(Errc::UnboundVariable, "unknown attribute '" + std::string(name) + "'");
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  for (auto& a : attrs_) out.push_back(a.name);
  return out;
}

TypeEnv Schema::type_env() const {
  TypeEnv env;
  for (auto& a : attrs_) env.emplace(a.name, a.kind);
  return env;
}

std::string Schema::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    if (i) s += ", ";
    s += attrs_[i].name + ":" + std::string(kind_name(attrs_[i].kind));
  }
  return s + ")";
}

bool operator==(const Schema& a, const Schema& b) { return a.attrs() == b.attrs(); }

bool union_compatible(const Schema& a, const Schema& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != b[i].kind) return false;
  return true;
}

std::size_t AUTupleHash::operator()(const AUTuple& t) const {
  std::size_t h = t.size();
  for (auto& v : t) hash_mix(h, v.hash());
  return h;
}

std::size_t DetTupleHash::operator()(const DetTuple& t) const {
  std::size_t h = t.size();
  for (auto& v : t) hash_mix(h, v.hash());
  return h;
}

AUTuple certain_tuple(const DetTuple& t) {
  AUTuple out;
  out.reserve(t.size());
  for (auto& v : t) out.push_back(RangeValue::certain(v));
  return out;
}

DetTuple sg_tuple(const AUTuple& t) {
  DetTuple out;
  out.reserve(t.size());
  for (auto& v : t) out.push_back(v.sg());
  return out;
}

bool is_certain(const AUTuple& t) {
  return std::all_of(t.begin(), t.end(), [](const RangeValue& v) { return v.is_certain(); });
}

std::string tuple_string(const AUTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i].to_string();
  return s + ")";
}

std::string tuple_string(const DetTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i].to_string();
  return s + ")";
}

AUTuple AURelation::conform(AUTuple t) const {
  if (t.size() != schema_.size())
    fail(Errc::SchemaMismatch, "tuple " + tuple_string(t) + " does not fit " + schema_.to_string());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = t[i].coerce(schema_[i].kind);
  return t;
}

void AURelation::insert(AUTuple t, const AUMult& m) {
  if (m.is_zero()) return;
  t = conform(std::move(t));
  auto it = index_.find(t);
  if (it != index_.end()) {
    rows_[it->second].ann = au_add(rows_[it->second].ann, m);
    return;
  }
  index_.emplace(t, rows_.size());
  rows_.push_back({std::move(t), m});
}

AUMult AURelation::at(const AUTuple& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? AUMult::zero() : rows_[it->second].ann;
}

bool same_content(const AURelation& a, const AURelation& b) {
  if (a.schema() != b.schema() || a.size() != b.size()) return false;
  for (auto& row : a.rows())
    if (b.at(row.tuple) != row.ann) return false;
  return true;
}

DetTuple DetRelation::conform(DetTuple t) const {
  if (t.size() != schema_.size())
    fail(Errc::SchemaMismatch, "tuple " + tuple_string(t) + " does not fit " + schema_.to_string());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = t[i].coerce(schema_[i].kind);
  return t;
}

void DetRelation::insert(DetTuple t, std::uint64_t mult) {
  if (mult == 0) return;
  t = conform(std::move(t));
  auto it = index_.find(t);
  if (it != index_.end()) {
    rows_[it->second].mult = checked_add(rows_[it->second].mult, mult);
    return;
  }
  index_.emplace(t, rows_.size());
  rows_.push_back({std::move(t), mult});
}

std::uint64_t DetRelation::at(const DetTuple& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? 0 : rows_[it->second].mult;
}

std::uint64_t DetRelation::total() const {
  std::uint64_t n = 0;
  for (auto& r : rows_) n = checked_add(n, r.mult);
  return n;
}

bool operator==(const DetRelation& a, const DetRelation& b) {
  if (!union_compatible(a.schema(), b.schema()) || a.size() != b.size()) return false;
  for (auto& row : a.rows())
    if (b.at(row.tuple) != row.mult) return false;
  return true;
}

DetRelation sg_world(const AURelation& r) {
  DetRelation out(r.schema());
  for (auto& row : r.rows()) out.insert(sg_tuple(row.tuple), row.ann.sg);
  return out;
}

bool tuple_bounds(const DetTuple& t, const AUTuple& tt) {
  if (t.size() != tt.size()) fail(Errc::SchemaMismatch, "arity mismatch in bounds check");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!tt[i].contains(t[i])) return false;
  return true;
}

bool overlaps(const AUTuple& a, const AUTuple& b, const std::vector<std::size_t>& attrs) {
  for (std::size_t i : attrs) {
    if (i >= a.size() || i >= b.size()) fail(Errc::SchemaMismatch, "attribute out of range");
    if (compare(a[i].lb(), b[i].ub()) > 0 || compare(b[i].lb(), a[i].ub()) > 0) return false;
  }
  return true;
}

bool overlaps(const AUTuple& a, const AUTuple& b) {
  if (a.size() != b.size()) fail(Errc::SchemaMismatch, "arity mismatch in overlap check");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (compare(a[i].lb(), b[i].ub()) > 0 || compare(b[i].lb(), a[i].ub()) > 0) return false;
  return true;
}

bool cert_equal(const AUTuple& a, const AUTuple& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_certain() || !b[i].is_certain() || a[i].sg() != b[i].sg()) return false;
  return true;
}

AURelation sg_combine(const AURelation& r) {
  struct Group {
    AUTuple bounds;
    AUMult ann;
  };
  std::vector<Group> groups;
  std::unordered_map<DetTuple, std::size_t, DetTupleHash> index;
  for (auto& row : r.rows()) {
    DetTuple key = sg_tuple(row.tuple);
    auto [it, fresh] = index.emplace(std::move(key), groups.size());
    if (fresh) {
      groups.push_back({row.tuple, row.ann});
      continue;
    }
    Group& g = groups[it->second];
    for (std::size_t i = 0; i < g.bounds.size(); ++i) {
      const RangeValue& cur = g.bounds[i];
      g.bounds[i] = RangeValue(min_of(cur.lb(), row.tuple[i].lb()), cur.sg(),
                               max_of(cur.ub(), row.tuple[i].ub()));
    }
    g.ann = au_add(g.ann, row.ann);
  }
  AURelation out(r.schema());
  for (auto& g : groups) out.insert(std::move(g.bounds), g.ann);
  return out;
}

AURelation certain_encoding(const DetRelation& r) {
  AURelation out(r.schema());
  for (auto& row : r.rows())
    out.insert(certain_tuple(row.tuple), AUMult(row.mult, row.mult, row.mult));
  return out;
}

RangeLookup row_lookup(const Schema& s, const AUTuple& t) {
  return [&s, &t](const std::string& n) -> const RangeValue* {
    auto i = s.find(n);
    return i ? &t[*i] : nullptr;
  };
}

DetLookup row_lookup(const Schema& s, const DetTuple& t) {
  return [&s, &t](const std::string& n) -> const Scalar* {
    auto i = s.find(n);
    return i ? &t[*i] : nullptr;
  };
}

}  // namespace audb
