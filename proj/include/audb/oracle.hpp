#pragma once

#include <optional>
#include <string>
#include <vector>

#include "audb/codec.hpp"
#include "audb/plan.hpp"

namespace audb {

// Bag semantics over one deterministic database. Combine and Compress only
// reshape annotations, so over a single world they are the identity.
DetRelation eval_det_query(const Plan& p, const Database& db);

// One unit of a tuple matching: `count` copies of world row `det_row`
// distributed to AU row `au_row`.
struct MatchEdge {
  std::size_t au_row;
  std::size_t det_row;
  std::uint64_t count;
};

// A tuple matching of `w` against `r` meeting every world multiplicity
// exactly and every AU annotation interval [lb, ub], or nothing when none
// exists. Solved as a feasible flow with lower bounds.
std::optional<std::vector<MatchEdge>> tuple_matching(const AURelation& r, const DetRelation& w);

bool bounds_world(const AURelation& r, const DetRelation& w);

struct IncompleteRelation {
  Schema schema;
  std::vector<DetRelation> worlds;
  std::size_t selected = 0;
};

IncompleteRelation table_worlds(const IncompleteDB& idb, const std::string& table);

// Query answer in every world of `idb`; the selected index carries over.
IncompleteRelation eval_worlds(const Plan& p, const IncompleteDB& idb);

struct BoundsReport {
  bool ok = true;
  std::optional<std::size_t> failed_world;  // first world without a matching
  bool sg_mismatch = false;                 // sg_world differs from the selected world
  std::string message;
};

BoundsReport check_bounds(const AURelation& r, const IncompleteRelation& idb);
bool bounds_idb(const AURelation& r, const IncompleteRelation& idb);

// Every table of `idb` is bounded by the same-named table of `db`.
BoundsReport check_bounds(const AUDatabase& db, const IncompleteDB& idb);
bool bounds_idb(const AUDatabase& db, const IncompleteDB& idb);

// Looseness proxies. Lower is tighter; none of them decides tightness.
struct TightnessReport {
  double width_sum = 0;              // sum of ub - lb over numeric attribute values
  std::uint64_t uncertain_values = 0;  // non-numeric values with lb != ub
  std::uint64_t annotation_slack = 0;  // sum of ub - lb over row annotations
  std::size_t rows = 0;
};

TightnessReport tightness_metrics(const AURelation& r);

}  // namespace audb
