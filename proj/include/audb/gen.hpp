#pragma once

#include <random>
#include <string>
#include <vector>

#include "audb/codec.hpp"
#include "audb/oracle.hpp"
#include "audb/plan.hpp"

namespace audb::gen {

using Rng = std::mt19937_64;

// Reads AUDB_SEED when set, otherwise returns `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

struct InstanceConfig {
  std::size_t max_tables = 2;
  std::size_t max_rows = 6;    // units per world, hence AU rows per table
  std::size_t max_worlds = 4;
  bool reals = true;           // allow a Real attribute holding multiples of 1/2
  bool text = true;            // allow a Text attribute
};

struct Instance {
  IncompleteDB worlds;
  AUDatabase db;
};

// Random worlds plus an AU-DB that bounds them: the union envelope of the
// worlds, randomly widened. The selected world is the selected-guess world.
Instance random_instance(Rng& rng, const InstanceConfig& cfg);

// AU-DB bounding `idb`: the k-th unit of every world (in sorted order) lands
// in the k-th AU row of its table, whose bounds are the envelope over worlds.
AUDatabase envelope(const IncompleteDB& idb);

// Loosens bounds and annotations while keeping every selected guess.
AURelation widen(Rng& rng, const AURelation& r);

struct PlanConfig {
  int max_depth = 4;
  bool avg = true;  // avg only ever appears at the root
};

// Random well-typed plan over {select, project, join, union, diff, aggregate}.
PlanPtr random_plan(Rng& rng, const Catalog& catalog, const PlanConfig& cfg);

struct ExprConfig {
  int max_depth = 4;
  bool recip = true;
  bool mkuncert = true;
};

// Random expression of kind `want` over the variables of `env`.
Expr random_expr(Rng& rng, const TypeEnv& env, Kind want, const ExprConfig& cfg);

// Random range value of the given kind with small magnitudes.
RangeValue random_range(Rng& rng, Kind k);

// A deterministic value inside `v` (endpoints included).
Scalar sample_in(Rng& rng, const RangeValue& v);

// Probabilities are multiples of 1/8 so thresholds are hit exactly.
std::vector<TIRow> random_ti(Rng& rng, const Schema& schema, std::size_t max_tuples);
std::vector<XTuple> random_xdb(Rng& rng, const Schema& schema, std::size_t max_xtuples,
                               std::size_t max_alternatives);

// Every world of the TI / x-DB instance with the selected world chosen by
// the import rules.
IncompleteRelation ti_worlds(const Schema& schema, const std::vector<TIRow>& rows);
IncompleteRelation xdb_worlds(const Schema& schema, const std::vector<XTuple>& xtuples);

}  // namespace audb::gen
