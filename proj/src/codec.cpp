#include "audb/codec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace audb {

using nlohmann::json;

namespace {

constexpr double kMassTolerance = 1e-9;

std::string csv_field(const Scalar& v) {
  if (v.is_extreme())
    fail(Errc::EmptyAggregate, "cannot encode the empty-aggregate value " + v.to_string());
  if (v.kind() != Kind::Text) return v.to_string();
  std::string out = "\"";
  for (char c : v.as_text()) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string header(const Schema& s) {
  std::string h;
  for (std::size_t i = 0; i < s.size(); ++i)
    h += (i ? "," : "") + s[i].name + ":" + std::string(kind_name(s[i].kind));
  return h;
}

struct Field {
  std::string text;
  bool quoted = false;
};

// Splits CSV records; quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& is) : is_(is) {}

  // Returns false at end of input. `line` is where the record started.
  bool next(std::vector<Field>& rec, std::size_t& line) {
    rec.clear();
    int c;
    while ((c = is_.peek()) != EOF && (c == '\n' || c == '\r' || c == '#')) {
      if (c == '#') {
        std::string skip;
        std::getline(is_, skip);
      } else {
        is_.get();
      }
      ++line_;
      if (c == '\r') --line_;
    }
    if (is_.peek() == EOF) return false;
    line = line_;
    Field f;
    bool in_quotes = false;
    while ((c = is_.get()) != EOF) {
      if (in_quotes) {
        if (c == '"') {
          if (is_.peek() == '"') {
            f.text += '"';
            is_.get();
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line_;
          f.text += static_cast<char>(c);
        }
        continue;
      }
      if (c == '"') {
        if (!f.text.empty()) fail(Errc::Parse, "line " + std::to_string(line_) + ": stray quote");
        in_quotes = f.quoted = true;
      } else if (c == ',') {
        rec.push_back(std::move(f));
        f = Field{};
      } else if (c == '\n') {
        ++line_;
        break;
      } else if (c != '\r') {
        f.text += static_cast<char>(c);
      }
    }
    if (in_quotes) fail(Errc::Parse, "line " + std::to_string(line) + ": unterminated quote");
    rec.push_back(std::move(f));
    return true;
  }

 private:
  std::istream& is_;
  std::size_t line_ = 1;
};

Scalar parse_value(const Field& f, Kind k, const std::string& where) {
  const std::string& s = f.text;
  if (k == Kind::Text) return Scalar::text(s);
  if (f.quoted) fail(Errc::Parse, where + ": quoted value for " + std::string(kind_name(k)));
  if (s == "+inf" || s == "-inf")
    fail(Errc::EmptyAggregate, where + ": empty-aggregate value in data");
  if (k == Kind::Bool) {
    if (s == "true") return Scalar::boolean(true);
    if (s == "false") return Scalar::boolean(false);
  } else if (k == Kind::Int) {
    std::int64_t v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && !s.empty())
      return Scalar::integer(v);
  } else {
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && !s.empty() && std::isfinite(v))
      return Scalar::real(v);
  }
  fail(Errc::Parse, where + ": bad " + std::string(kind_name(k)) + " value '" + s + "'");
}

std::uint64_t parse_nat(const Field& f, const std::string& where) {
  std::uint64_t v;
  const std::string& s = f.text;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (f.quoted || s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(Errc::Parse, where + ": bad multiplicity '" + s + "'");
  return v;
}

Schema parse_header(const std::vector<Field>& rec) {
  std::vector<Attribute> attrs;
  for (auto& f : rec) {
    auto colon = f.text.rfind(':');
    if (colon == std::string::npos || colon == 0)
      fail(Errc::Parse, "line 1: header entry '" + f.text + "' is not name:kind");
    attrs.push_back({f.text.substr(0, colon), parse_kind(f.text.substr(colon + 1))});
  }
  if (attrs.empty()) fail(Errc::Parse, "line 1: empty header");
  return Schema(std::move(attrs));
}

}  // namespace

void enc_write(std::ostream& os, const AURelation& r) {
  std::vector<std::string> lines;
  for (auto& row : r.rows()) {
    std::string line;
    for (auto& v : row.tuple)
      line += csv_field(v.lb()) + "," + csv_field(v.sg()) + "," + csv_field(v.ub()) + ",";
    line += std::to_string(row.ann.lb) + "," + std::to_string(row.ann.sg) + "," +
            std::to_string(row.ann.ub);
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  os << header(r.schema()) << '\n';
  for (auto& l : lines) os << l << '\n';
}

AURelation enc_read(std::istream& is) {
  CsvReader reader(is);
  std::vector<Field> rec;
  std::size_t line = 0;
  if (!reader.next(rec, line)) fail(Errc::Parse, "missing header");
  AURelation out(parse_header(rec));
  const Schema& s = out.schema();
  const std::size_t width = 3 * s.size() + 3;
  std::size_t row_no = 0;
  while (reader.next(rec, line)) {
    ++row_no;
    std::string where = "row " + std::to_string(row_no) + " (line " + std::to_string(line) + ")";
    if (rec.size() != width)
      fail(Errc::Parse, where + ": expected " + std::to_string(width) + " fields, got " +
                            std::to_string(rec.size()));
    AUTuple t;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Scalar lb = parse_value(rec[3 * i], s[i].kind, where);
      Scalar sg = parse_value(rec[3 * i + 1], s[i].kind, where);
      Scalar ub = parse_value(rec[3 * i + 2], s[i].kind, where);
      if (compare(lb, sg) > 0 || compare(sg, ub) > 0)
        fail(Errc::Parse, where + ": attribute " + s[i].name + " triple not ordered");
      t.emplace_back(lb, sg, ub);
    }
    std::uint64_t lb = parse_nat(rec[width - 3], where);
    std::uint64_t sg = parse_nat(rec[width - 2], where);
    std::uint64_t ub = parse_nat(rec[width - 1], where);
    if (lb > sg || sg > ub) fail(Errc::Parse, where + ": row annotation not ordered");
    if (ub == 0) fail(Errc::Parse, where + ": row_ub is 0");
    out.insert(std::move(t), AUMult(lb, sg, ub));
  }
  return out;
}

std::string enc_string(const AURelation& r) {
  std::ostringstream os;
  enc_write(os, r);
  return os.str();
}

AURelation enc_parse(const std::string& text) {
  std::istringstream is(text);
  return enc_read(is);
}

void det_write(std::ostream& os, const DetRelation& r) {
  std::vector<std::string> lines;
  for (auto& row : r.rows()) {
    std::string line;
    for (auto& v : row.tuple) line += csv_field(v) + ",";
    lines.push_back(line + std::to_string(row.mult));
  }
  std::sort(lines.begin(), lines.end());
  os << header(r.schema()) << ",mult\n";
  for (auto& l : lines) os << l << '\n';
}

namespace {

json value_json(const Scalar& v) {
  if (v.is_extreme()) fail(Errc::EmptyAggregate, "cannot store the empty-aggregate value");
  switch (v.kind()) {
    case Kind::Int: return v.as_int();
    case Kind::Real: return v.as_real();
    case Kind::Bool: return v.as_bool();
    case Kind::Text: return v.as_text();
  }
  return nullptr;
}

Scalar json_value(const json& j, Kind k) {
  switch (k) {
    case Kind::Int:
      if (j.is_number_integer()) return Scalar::integer(j.get<std::int64_t>());
      break;
    case Kind::Real:
      if (j.is_number()) return Scalar::real(j.get<double>());
      break;
    case Kind::Bool:
      if (j.is_boolean()) return Scalar::boolean(j.get<bool>());
      break;
    case Kind::Text:
      if (j.is_string()) return Scalar::text(j.get<std::string>());
      break;
  }
  fail(Errc::Parse, "value " + j.dump() + " is not " + std::string(kind_name(k)));
}

DetTuple json_tuple(const json& j, const Schema& s) {
  if (!j.is_array() || j.size() != s.size())
    fail(Errc::Parse, "tuple " + j.dump() + " does not fit " + s.to_string());
  DetTuple t;
  for (std::size_t i = 0; i < s.size(); ++i) t.push_back(json_value(j[i], s[i].kind));
  return t;
}

json schema_json(const Schema& s) {
  json a = json::array();
  for (auto& x : s) a.push_back({x.name, std::string(kind_name(x.kind))});
  return a;
}

Schema json_schema(const json& j) {
  if (!j.is_array()) fail(Errc::Parse, "schema must be an array of [name, kind]");
  std::vector<Attribute> attrs;
  for (auto& a : j) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string())
      fail(Errc::Parse, "schema entry " + a.dump() + " is not [name, kind]");
    attrs.push_back({a[0].get<std::string>(), parse_kind(a[1].get<std::string>())});
  }
  if (attrs.empty()) fail(Errc::Parse, "empty schema");
  return Schema(std::move(attrs));
}

json parse_json(std::istream& is) {
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void IncompleteDB::validate() const {
  if (worlds.empty()) fail(Errc::InvalidArgument, "incomplete database has no worlds");
  if (selected >= worlds.size())
    fail(Errc::InvalidArgument, "selected world " + std::to_string(selected) + " out of range");
  for (auto& w : worlds) {
    for (auto& [name, rel] : w) {
      auto it = tables.find(name);
      if (it == tables.end()) fail(Errc::SchemaMismatch, "world mentions undeclared table " + name);
      if (rel.schema() != it->second) fail(Errc::SchemaMismatch, "schema disagreement for " + name);
    }
  }
}

void worlds_write(std::ostream& os, const IncompleteDB& db) {
  db.validate();
  json j;
  j["tables"] = json::object();
  for (auto& [name, s] : db.tables) j["tables"][name] = schema_json(s);
  j["selected"] = db.selected;
  j["worlds"] = json::array();
  for (auto& w : db.worlds) {
    json jw = json::object();
    for (auto& [name, s] : db.tables) {
      std::vector<std::pair<std::string, json>> entries;
      auto it = w.find(name);
      if (it != w.end()) {
        for (auto& row : it->second.rows()) {
          json t = json::array();
          for (auto& v : row.tuple) t.push_back(value_json(v));
          entries.emplace_back(tuple_string(row.tuple), json::array({t, row.mult}));
        }
      }
      std::sort(entries.begin(), entries.end(),
                [](auto& a, auto& b) { return a.first < b.first; });
      json rows = json::array();
      for (auto& e : entries) rows.push_back(e.second);
      jw[name] = rows;
    }
    j["worlds"].push_back(jw);
  }
  os << j.dump(2) << '\n';
}

IncompleteDB worlds_read(std::istream& is) {
  json j = parse_json(is);
  IncompleteDB db;
  try {
    for (auto& [name, s] : j.at("tables").items()) db.tables.emplace(name, json_schema(s));
    db.selected = j.at("selected").get<std::size_t>();
    for (auto& jw : j.at("worlds")) {
      Database w;
      for (auto& [name, s] : db.tables) w.emplace(name, DetRelation(s));
      for (auto& [name, rows] : jw.items()) {
        auto it = w.find(name);
        if (it == w.end()) fail(Errc::SchemaMismatch, "world mentions undeclared table " + name);
        for (auto& entry : rows) {
          if (!entry.is_array() || entry.size() != 2 || !entry[1].is_number_unsigned())
            fail(Errc::Parse, "world entry " + entry.dump() + " is not [tuple, multiplicity]");
          it->second.insert(json_tuple(entry[0], it->second.schema()),
                            entry[1].get<std::uint64_t>());
        }
      }
      db.worlds.push_back(std::move(w));
    }
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("worlds document: ") + e.what());
  }
  db.validate();
  return db;
}

AURelation import_tidb(const Schema& schema, const std::vector<TIRow>& rows) {
  AURelation out(schema);
  for (auto& r : rows) {
    if (!(r.p >= 0.0 && r.p <= 1.0))
      fail(Errc::Probability, "probability " + std::to_string(r.p) + " outside [0,1]");
    AUMult m(r.p == 1.0 ? 1 : 0, r.p >= 0.5 ? 1 : 0, r.p > 0.0 ? 1 : 0);
    out.insert(certain_tuple(r.tuple), m);
  }
  return out;
}

AURelation import_xdb(const Schema& schema, const std::vector<XTuple>& xtuples) {
  AURelation out(schema);
  for (auto& x : xtuples) {
    if (x.alternatives.empty()) fail(Errc::InvalidArgument, "x-tuple without alternatives");
    double mass = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < x.alternatives.size(); ++i) {
      double p = x.alternatives[i].p;
      if (!(p >= 0.0 && p <= 1.0))
        fail(Errc::Probability, "probability " + std::to_string(p) + " outside [0,1]");
      mass += p;
      if (p > x.alternatives[best].p) best = i;
    }
    if (mass > 1.0 + kMassTolerance)
      fail(Errc::Probability, "x-tuple probabilities sum to " + std::to_string(mass));
    std::vector<DetTuple> alts;
    for (auto& alt : x.alternatives) {
      if (alt.tuple.size() != schema.size())
        fail(Errc::SchemaMismatch, "alternative " + tuple_string(alt.tuple) + " has wrong arity");
      DetTuple v;
      for (std::size_t a = 0; a < schema.size(); ++a) v.push_back(alt.tuple[a].coerce(schema[a].kind));
      alts.push_back(std::move(v));
    }
    AUTuple t;
    for (std::size_t a = 0; a < schema.size(); ++a) {
      Scalar lo = alts.front()[a], hi = alts.front()[a];
      for (auto& v : alts) {
        lo = min_of(lo, v[a]);
        hi = max_of(hi, v[a]);
      }
      t.emplace_back(lo, alts[best][a], hi);
    }
    bool complete = std::abs(mass - 1.0) <= kMassTolerance;
    bool in_guess = (1.0 - mass) <= x.alternatives[best].p + kMassTolerance;
    AUMult m(complete ? 1 : 0, in_guess ? 1 : 0, mass > 0.0 ? 1 : 0);
    out.insert(std::move(t), m);
  }
  return out;
}

AURelation import_tidb_json(std::istream& is) {
  json j = parse_json(is);
  try {
    Schema s = json_schema(j.at("schema"));
    std::vector<TIRow> rows;
    for (auto& t : j.at("tuples")) {
      double p;
      if (t.contains("p")) {
        p = t.at("p").get<double>();
      } else {
        p = t.at("certain").get<bool>() ? 1.0 : 0.5;
      }
      rows.push_back({json_tuple(t.at("values"), s), p});
    }
    return import_tidb(s, rows);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("TI document: ") + e.what());
  }
}

AURelation import_xdb_json(std::istream& is) {
  json j = parse_json(is);
  try {
    Schema s = json_schema(j.at("schema"));
    std::vector<XTuple> xs;
    for (auto& jx : j.at("xtuples")) {
      XTuple x;
      const json& alts = jx.at("alternatives");
      bool weighted = !alts.empty() && alts.front().is_object();
      if (weighted) {
        for (auto& a : alts) x.alternatives.push_back({json_tuple(a.at("values"), s), a.at("p").get<double>()});
      } else {
        // Unweighted: spread the mass evenly, leaving one share for absence
        // when the x-tuple is optional.
        bool optional = jx.value("optional", false);
        double share = 1.0 / static_cast<double>(alts.size() + (optional ? 1 : 0));
        for (auto& a : alts) x.alternatives.push_back({json_tuple(a, s), share});
      }
      xs.push_back(std::move(x));
    }
    return import_xdb(s, xs);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("x-DB document: ") + e.what());
  }
}

AURelation read_relation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open " + path);
  try {
    return enc_read(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_relation_file(const std::string& path, const AURelation& r) {
  std::string text = enc_string(r);
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path);
  out << text;
}

AUDatabase read_database_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(Errc::Io, "not a directory: " + dir);
  AUDatabase db;
  for (auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    db.emplace(entry.path().stem().string(), read_relation_file(entry.path().string()));
  }
  return db;
}

}  // namespace audb
