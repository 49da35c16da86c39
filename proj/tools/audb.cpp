// Command-line front end: run queries over AU-DB files, check bounds against
// possible worlds, import probabilistic data, print metrics and the
// selected-guess world.
//
// Exit status: 0 on success or PASS, 1 on FAIL, 2 on usage, parse or data
// errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "audb/gen.hpp"
#include "audb/optimize.hpp"
#include "audb/oracle.hpp"
#include "audb/plan.hpp"

using namespace audb;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open " + path);
  return in;
}

void print_warnings(const Warnings& w) {
  for (auto& msg : w.items) std::cerr << "warning: " << msg << '\n';
}

void emit(const std::string& out, const AURelation& r) {
  if (out.empty()) {
    enc_write(std::cout, r);
  } else {
    write_relation_file(out, r);
  }
}

struct QueryArgs {
  std::string db, query;
  bool optimize = false;
  std::uint64_t compress_size = 16;
};

void add_query_flags(CLI::App* cmd, QueryArgs& q) {
  cmd->add_option("--db", q.db, "directory of <table>.csv encodings")->required();
  cmd->add_option("--query", q.query, "file holding the query")->required();
  cmd->add_flag("--optimize", q.optimize, "use the compressed join and aggregation");
  cmd->add_option("--compress-size", q.compress_size, "buckets per compressed input")
      ->check(CLI::PositiveNumber);
}

AURelation run_query(const QueryArgs& q, const AUDatabase& db, const Plan& plan) {
  Warnings w;
  infer_schema(plan, catalog_of(db));
  AURelation out = execute(plan, db, {q.optimize, q.compress_size}, &w);
  print_warnings(w);
  return out;
}

void print_world(const IncompleteRelation& idb, std::size_t k) {
  std::cout << "world " << k << (k == idb.selected ? " (selected)" : "") << ":\n";
  det_write(std::cout, idb.worlds[k]);
}

int report(const BoundsReport& rep, const IncompleteRelation& expected) {
  if (rep.ok) {
    std::cout << "PASS: result bounds all " << expected.worlds.size() << " worlds\n";
    return kOk;
  }
  std::cout << "FAIL: " << rep.message << '\n';
  if (rep.failed_world) print_world(expected, *rep.failed_world);
  if (rep.sg_mismatch) print_world(expected, expected.selected);
  return kFail;
}

int fuzz(std::size_t n, const QueryArgs& q) {
  gen::Rng rng(gen::seed_from_env(1));
  for (std::size_t i = 0; i < n; ++i) {
    gen::Instance inst = gen::random_instance(rng, {});
    PlanPtr plan = gen::random_plan(rng, catalog_of(inst.db), {});
    IncompleteRelation expected;
    AURelation got;
    try {
      expected = eval_worlds(*plan, inst.worlds);
      got = execute(*plan, inst.db, {q.optimize, q.compress_size});
    } catch (const Error&) {
      continue;
    }
    BoundsReport rep = check_bounds(got, expected);
    if (!rep.ok) {
      std::cout << "FAIL on instance " << i << ": " << print_plan(*plan) << '\n';
      return report(rep, expected);
    }
  }
  std::cout << "PASS: " << n << " random instances\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AU-DB query engine"};
  app.require_subcommand(1);

  QueryArgs run_args;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "evaluate a query and write the encoded result");
  add_query_flags(run, run_args);
  run->add_option("--out", run_out, "output file (default: stdout)");

  QueryArgs check_args;
  std::string worlds_path, result_path;
  std::size_t fuzz_n = 0;
  CLI::App* check = app.add_subcommand("check", "verify that a query result bounds every world");
  check->add_option("--db", check_args.db, "directory of <table>.csv encodings");
  check->add_option("--query", check_args.query, "file holding the query");
  check->add_flag("--optimize", check_args.optimize, "use the compressed join and aggregation");
  check->add_option("--compress-size", check_args.compress_size, "buckets per compressed input")
      ->check(CLI::PositiveNumber);
  check->add_option("--worlds", worlds_path, "possible worlds document");
  check->add_option("--result", result_path, "check this encoded result instead of evaluating");
  check->add_option("--fuzz", fuzz_n, "check N random instances seeded by AUDB_SEED");

  std::string format, import_in, import_out;
  CLI::App* imp = app.add_subcommand("import", "convert a TI or x-DB document into an encoding");
  imp->add_option("--format", format, "tidb or xdb")->required()->check(CLI::IsMember({"tidb", "xdb"}));
  imp->add_option("--in", import_in, "input document")->required();
  imp->add_option("--out", import_out, "output file (default: stdout)");

  std::string metrics_in;
  CLI::App* met = app.add_subcommand("metrics", "print looseness proxies of an encoding");
  met->add_option("--in", metrics_in, "encoded relation")->required();

  std::string sgw_in;
  CLI::App* sgw = app.add_subcommand("sgw", "print the selected-guess world of an encoding");
  sgw->add_option("--in", sgw_in, "encoded relation")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*run) {
      AUDatabase db = read_database_dir(run_args.db);
      PlanPtr plan = parse_query(read_file(run_args.query));
      emit(run_out, run_query(run_args, db, *plan));
      return kOk;
    }
    if (*check) {
      if (fuzz_n > 0) return fuzz(fuzz_n, check_args);
      if (check_args.query.empty() || worlds_path.empty() ||
          (check_args.db.empty() && result_path.empty())) {
        std::cerr << "check needs --query and --worlds, plus --db or --result (or --fuzz N)\n";
        return kError;
      }
      std::ifstream win = open_in(worlds_path);
      IncompleteDB idb = worlds_read(win);
      PlanPtr plan = parse_query(read_file(check_args.query));
      IncompleteRelation expected = eval_worlds(*plan, idb);
      AURelation got = result_path.empty()
                           ? run_query(check_args, read_database_dir(check_args.db), *plan)
                           : read_relation_file(result_path);
      return report(check_bounds(got, expected), expected);
    }
    if (*imp) {
      std::ifstream in = open_in(import_in);
      AURelation r = format == "tidb" ? import_tidb_json(in) : import_xdb_json(in);
      emit(import_out, r);
      return kOk;
    }
    if (*met) {
      AURelation r = read_relation_file(metrics_in);
      TightnessReport t = tightness_metrics(r);
      std::cout << "rows " << t.rows << "\nwidth_sum " << t.width_sum << "\nuncertain_values "
                << t.uncertain_values << "\nannotation_slack " << t.annotation_slack << '\n';
      return kOk;
    }
    if (*sgw) {
      det_write(std::cout, sg_world(read_relation_file(sgw_in)));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
