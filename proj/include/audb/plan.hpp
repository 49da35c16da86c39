#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "audb/aggregation.hpp"
#include "audb/codec.hpp"
#include "audb/operators.hpp"

namespace audb {

enum class PlanKind { Table, Select, Project, Join, Cross, Union, Diff, Aggregate, Rename, Combine, Compress };

struct Plan;
using PlanPtr = std::shared_ptr<const Plan>;

struct Plan {
  PlanKind kind = PlanKind::Table;
  std::string table;                 // Table
  Expr expr;                         // Select, Join
  std::vector<ProjItem> items;       // Project
  std::vector<std::string> group_by; // Aggregate
  std::vector<AggSpec> aggs;         // Aggregate
  RenameMap renames;                 // Rename
  std::string attr;                  // Compress
  std::uint64_t n = 0;               // Compress
  std::vector<PlanPtr> children;
};

bool operator==(const Plan& a, const Plan& b);
inline bool operator!=(const Plan& a, const Plan& b) { return !(a == b); }

PlanPtr table_plan(std::string name);
PlanPtr select_plan(Expr theta, PlanPtr in);
PlanPtr project_plan(std::vector<ProjItem> items, PlanPtr in);
PlanPtr join_plan(Expr theta, PlanPtr l, PlanPtr r);
PlanPtr cross_plan(PlanPtr l, PlanPtr r);
PlanPtr union_plan(PlanPtr l, PlanPtr r);
PlanPtr diff_plan(PlanPtr l, PlanPtr r);
PlanPtr aggregate_plan(std::vector<std::string> group_by, std::vector<AggSpec> aggs, PlanPtr in);
PlanPtr rename_plan(RenameMap m, PlanPtr in);
PlanPtr combine_plan(PlanPtr in);
PlanPtr compress_plan(std::string attr, std::uint64_t n, PlanPtr in);

// S-expression syntax, e.g.
//   (aggregate (street) ((count *)) (table address))
//   (select (= A 2) (table R))
Expr parse_expr(const std::string& text);
PlanPtr parse_query(const std::string& text);
std::string print_plan(const Plan& p);

using Catalog = std::map<std::string, Schema, std::less<>>;

Schema infer_schema(const Plan& p, const Catalog& catalog);
Catalog catalog_of(const AUDatabase& db);
Catalog catalog_of(const Database& db);

struct ExecOptions {
  bool optimize = false;
  std::uint64_t compress_size = 16;
};

AURelation execute(const Plan& p, const AUDatabase& db, const ExecOptions& opts = {},
                   Warnings* warnings = nullptr);

}  // namespace audb
