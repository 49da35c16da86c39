#pragma once

#include <optional>
#include <string>
#include <vector>

#include "audb/relation.hpp"

namespace audb {

enum class Monoid { Sum, Min, Max };

enum class AggFn { Sum, Count, Min, Max, Avg };

std::string_view agg_name(AggFn f);

struct AggSpec {
  AggFn fn;
  Expr arg;  // unset for count(*)
  std::string name;
};

bool operator==(const AggSpec& a, const AggSpec& b);

Scalar monoid_identity(Monoid m, Kind k);
Scalar monoid_add(Monoid m, const Scalar& a, const Scalar& b);

// k * m: repeated addition for SUM; m itself (or the identity when k = 0)
// for MIN and MAX.
Scalar act(Monoid m, std::uint64_t k, const Scalar& v);

// Range version of +_M, applied bound by bound.
RangeValue range_monoid_add(Monoid m, const RangeValue& a, const RangeValue& b);

// Pairs a multiplicity triple with a range value (the bound-preserving
// stand-in for k * m): bounds are the extremes over the four corner products.
RangeValue smb(const AUMult& k, const RangeValue& v, Monoid m);

// avg := if count = 0 then 0.0 else sum * recip(count), shared by the engine
// and the deterministic evaluator so both round identically.
Scalar avg_value(const Scalar& sum, const Scalar& count);

struct GroupAssignment {
  std::vector<std::size_t> gb;             // group-by attribute positions
  std::vector<DetTuple> groups;            // selected-guess group values
  std::vector<std::vector<std::size_t>> members;  // row positions per group
  std::vector<std::size_t> alpha;          // group of each row
};

GroupAssignment assign_groups(const std::vector<std::string>& groupby, const AURelation& r);
AUTuple group_bounds(const GroupAssignment& ga, std::size_t g, const AURelation& r);

Schema aggregate_schema(const std::vector<std::string>& groupby,
                        const std::vector<AggSpec>& aggs, const Schema& in);

AURelation aggregate(const std::vector<std::string>& groupby, const std::vector<AggSpec>& aggs,
                     const AURelation& r, Warnings* warnings = nullptr);

namespace detail {
// Shared body of the exact and the compressed aggregation. With
// `compress_to` set, aggregate bounds come from at most that many buckets.
AURelation aggregate_impl(const std::vector<std::string>& groupby,
                          const std::vector<AggSpec>& aggs, const AURelation& r,
                          std::optional<std::uint64_t> compress_to, Warnings* warnings);
}  // namespace detail

}  // namespace audb
