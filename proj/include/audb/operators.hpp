#pragma once

#include <string>
#include <utility>
#include <vector>

#include "audb/relation.hpp"

namespace audb {

struct ProjItem {
  Expr expr;
  std::string name;
};

bool operator==(const ProjItem& a, const ProjItem& b);

using RenameMap = std::vector<std::pair<std::string, std::string>>;

AURelation select(const Expr& theta, const AURelation& r);
AURelation project(const std::vector<ProjItem>& items, const AURelation& r);
AURelation cross(const AURelation& r, const AURelation& s);
AURelation join(const Expr& theta, const AURelation& r, const AURelation& s);
AURelation union_all(const AURelation& r, const AURelation& s);
AURelation difference(const AURelation& r, const AURelation& s);
AURelation rename(const RenameMap& m, const AURelation& r);

// Output schemas, shared by the engine and the deterministic evaluator.
Schema project_schema(const std::vector<ProjItem>& items, const Schema& in);
Schema cross_schema(const Schema& a, const Schema& b);
Schema rename_schema(const RenameMap& m, const Schema& in);
void check_predicate(const Expr& theta, const Schema& s);

// Counts tuple pairs inspected by the pairwise operators; lets tests check
// that work stays polynomial in the input size.
struct PairStats {
  std::uint64_t pairs = 0;
};
PairStats& pair_stats();

}  // namespace audb
