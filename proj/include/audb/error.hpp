#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace audb {

enum class Errc {
  TypeMismatch,
  UnboundVariable,
  DivisionByZero,
  RecipUndefined,
  InvalidRange,
  Overflow,
  SchemaMismatch,
  NameClash,
  UnknownTable,
  Parse,
  EmptyAggregate,
  InvalidArgument,
  Probability,
  Io,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

// Non-fatal diagnostics collected while evaluating a query.
struct Warnings {
  std::vector<std::string> items;

  void add(std::string msg) { items.push_back(std::move(msg)); }
  bool empty() const { return items.empty(); }
};

inline void warn(Warnings* w, std::string msg) {
  if (w) w->add(std::move(msg));
}

}  // namespace audb
