#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "audb/relation.hpp"

namespace audb {

// Flat encoding. First line: `name:kind` per attribute, comma separated.
// Every further line: a_lb,a,a_ub for each attribute, then row_lb,row_sg,row_ub.
// Text values are double-quoted with "" as the escape for a quote.
void enc_write(std::ostream& os, const AURelation& r);
AURelation enc_read(std::istream& is);
std::string enc_string(const AURelation& r);
AURelation enc_parse(const std::string& text);

// Deterministic relation in the same style: header, then values and `mult`.
void det_write(std::ostream& os, const DetRelation& r);

using Database = std::map<std::string, DetRelation, std::less<>>;
using AUDatabase = std::map<std::string, AURelation, std::less<>>;

// Possible worlds of one or more tables plus the index of the selected
// guess. Stored as JSON:
//   {"tables": {"R": [["A","int"], ...]}, "selected": 0,
//    "worlds": [{"R": [[[1, 2], 3], ...]}, ...]}
// where each entry is [tuple, multiplicity].
struct IncompleteDB {
  std::map<std::string, Schema, std::less<>> tables;
  std::vector<Database> worlds;
  std::size_t selected = 0;

  void validate() const;
};

void worlds_write(std::ostream& os, const IncompleteDB& db);
IncompleteDB worlds_read(std::istream& is);

// Probabilistic inputs for the importers.
struct TIRow {
  DetTuple tuple;
  double p;
};

struct XAlternative {
  DetTuple tuple;
  double p;
};

struct XTuple {
  std::vector<XAlternative> alternatives;
};

AURelation import_tidb(const Schema& schema, const std::vector<TIRow>& rows);
AURelation import_xdb(const Schema& schema, const std::vector<XTuple>& xtuples);

// JSON documents:
//   TI:  {"schema": [["A","int"]], "tuples": [{"values": [1], "p": 0.5}, ...]}
//        ("certain": true|false may replace "p": certain maps to 1, optional to 0.5)
//   x-DB: {"schema": [...], "xtuples": [{"alternatives": [{"values": [...], "p": 0.5}]}]}
//        (without probabilities: alternatives are plain value lists and
//         "optional": true|false marks whether the x-tuple may be absent)
AURelation import_tidb_json(std::istream& is);
AURelation import_xdb_json(std::istream& is);

AURelation read_relation_file(const std::string& path);
void write_relation_file(const std::string& path, const AURelation& r);

// Loads every `<name>.csv` in `dir` as table `name`.
AUDatabase read_database_dir(const std::string& dir);

}  // namespace audb
