#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "audb/expr.hpp"
#include "audb/value.hpp"

namespace audb {

struct Attribute {
  std::string name;
  Kind kind;
};

bool operator==(const Attribute& a, const Attribute& b);

class Schema {
 public:
  Schema() = default;
  Schema(std::vector<Attribute> attrs);  // NOLINT: implicit from brace lists

  std::size_t size() const { return attrs_.size(); }
  const Attribute& operator[](std::size_t i) const { return attrs_[i]; }
  const std::vector<Attribute>& attrs() const { return attrs_; }
  auto begin() const { return attrs_.begin(); }
  auto end() const { return attrs_.end(); }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws UnboundVariable
  std::vector<std::string> names() const;
  TypeEnv type_env() const;
  std::string to_string() const;

 private:
  std::vector<Attribute> attrs_;
};

bool operator==(const Schema& a, const Schema& b);
inline bool operator!=(const Schema& a, const Schema& b) { return !(a == b); }

// Same kinds position by position; names may differ.
bool union_compatible(const Schema& a, const Schema& b);

using AUTuple = std::vector<RangeValue>;
using DetTuple = std::vector<Scalar>;

struct AUTupleHash {
  std::size_t operator()(const AUTuple& t) const;
};
struct DetTupleHash {
  std::size_t operator()(const DetTuple& t) const;
};

AUTuple certain_tuple(const DetTuple& t);
DetTuple sg_tuple(const AUTuple& t);
bool is_certain(const AUTuple& t);
std::string tuple_string(const AUTuple& t);
std::string tuple_string(const DetTuple& t);

struct AURow {
  AUTuple tuple;
  AUMult ann;
};

// Finite map from range tuples to multiplicity triples. Rows keep their
// first-insertion order; inserting an existing key adds the annotations and
// zero annotations are never stored.
class AURelation {
 public:
  AURelation() = default;
  explicit AURelation(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  const std::vector<AURow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void insert(AUTuple t, const AUMult& m);
  // Lookup with the exact range tuple; zero when absent.
  AUMult at(const AUTuple& t) const;

  // Kind-checks and widens `t` against the schema.
  AUTuple conform(AUTuple t) const;

 private:
  Schema schema_;
  std::vector<AURow> rows_;
  std::unordered_map<AUTuple, std::size_t, AUTupleHash> index_;
};

// Same schema and the same tuple -> annotation mapping, order ignored.
bool same_content(const AURelation& a, const AURelation& b);

struct DetRow {
  DetTuple tuple;
  std::uint64_t mult;
};

// Bag relation: tuple -> multiplicity >= 1.
class DetRelation {
 public:
  DetRelation() = default;
  explicit DetRelation(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  const std::vector<DetRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void insert(DetTuple t, std::uint64_t mult);
  std::uint64_t at(const DetTuple& t) const;
  std::uint64_t total() const;

  DetTuple conform(DetTuple t) const;

 private:
  Schema schema_;
  std::vector<DetRow> rows_;
  std::unordered_map<DetTuple, std::size_t, DetTupleHash> index_;
};

// Bag equality; schemas must agree on kinds, names are ignored.
bool operator==(const DetRelation& a, const DetRelation& b);
inline bool operator!=(const DetRelation& a, const DetRelation& b) { return !(a == b); }

// The selected-guess world encoded by the middle components.
DetRelation sg_world(const AURelation& r);

bool tuple_bounds(const DetTuple& t, const AUTuple& tt);

// Interval intersection on every listed attribute position.
bool overlaps(const AUTuple& a, const AUTuple& b, const std::vector<std::size_t>& attrs);
bool overlaps(const AUTuple& a, const AUTuple& b);

bool cert_equal(const AUTuple& a, const AUTuple& b);

// Groups rows by their selected-guess tuple: bounds become the envelope of
// the group, annotations the sum.
AURelation sg_combine(const AURelation& r);

// Exact encoding of a deterministic relation: certain values, (m,m,m).
AURelation certain_encoding(const DetRelation& r);

RangeLookup row_lookup(const Schema& s, const AUTuple& t);
DetLookup row_lookup(const Schema& s, const DetTuple& t);

}  // namespace audb
