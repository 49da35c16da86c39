#pragma once

#include <limits>
#include <string>
#include <vector>

#include "audb/aggregation.hpp"
#include "audb/operators.hpp"

namespace audb {

// Compression size meaning "never compress".
inline constexpr std::uint64_t kNoCompression = std::numeric_limits<std::uint64_t>::max();

// Certain part: every row is replaced by its selected guess.
AURelation bg_split(const AURelation& r);

// Possible part: annotations become (0, 0, ub).
AURelation ub_split(const AURelation& r);

// Equi-depth bucketing on `attr` into at most n rows annotated (0, 0, sum ub).
AURelation compress(const AURelation& r, const std::string& attr, std::uint64_t n);

// Equality conjunct of theta linking one attribute of each side, if any.
struct JoinKey {
  std::string left, right;
};
std::optional<JoinKey> find_join_key(const Expr& theta, const Schema& r, const Schema& s);

AURelation join_opt(const Expr& theta, const AURelation& r, const AURelation& s,
                    std::uint64_t n, Warnings* warnings = nullptr);

AURelation aggregate_opt(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                         const AURelation& r, std::uint64_t n, Warnings* warnings = nullptr);

}  // namespace audb
