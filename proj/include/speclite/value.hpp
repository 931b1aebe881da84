#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclite/ast.hpp"

namespace speclite {

/// Logical value produced by evaluating a term.
///
/// Sets keep their items sorted and duplicate free; maps keep sorted
/// (key, value) pairs with unique keys. Integers are 64-bit and every
/// arithmetic operation is overflow checked.
struct Value {
  enum class Kind { Unit, Bool, Int, Tuple, List, Set, Map, Vertex, Exn, Instance, Func };

  Kind kind = Kind::Unit;
  std::int64_t num = 0;      // Bool (0/1), Int, Vertex id, Instance id
  std::string name;          // Exn tag, Func symbol
  std::vector<Value> items;  // Tuple, List, Set, Map (pairs), Func (bound arguments)

  static Value unit() { return {}; }
  static Value boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}, {}}; }
  static Value integer(std::int64_t i) { return {Kind::Int, i, {}, {}}; }
  static Value tuple(std::vector<Value> items) { return {Kind::Tuple, 0, {}, std::move(items)}; }
  static Value list(std::vector<Value> items) { return {Kind::List, 0, {}, std::move(items)}; }
  static Value set(std::vector<Value> items);
  static Value map(std::vector<std::pair<Value, Value>> entries);
  static Value vertex(std::int64_t id) { return {Kind::Vertex, id, {}, {}}; }
  static Value exn(std::string tag) { return {Kind::Exn, 0, std::move(tag), {}}; }
  static Value instance(std::int64_t id) { return {Kind::Instance, id, {}, {}}; }
  static Value func(std::string symbol, std::vector<Value> bound = {}) {
    return {Kind::Func, 0, std::move(symbol), std::move(bound)};
  }

  bool as_bool() const;
  std::int64_t as_int() const;
  bool is_sequence() const { return kind == Kind::List; }

  /// Map lookup; nullptr when the key is outside the domain.
  const Value* lookup(const Value& key) const;
  bool contains(const Value& item) const;  // List or Set membership

  std::string to_string() const;

  friend int compare(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
};

const char* to_string(Value::Kind kind);

/// Structural hash, consistent with ==.
std::size_t hash_value(const Value& v);

struct ValueHash {
  std::size_t operator()(const Value& v) const { return hash_value(v); }
};

/// Abstract state: model fields of every live instance.
struct ModelState {
  struct Instance {
    std::string type;
    std::map<std::string, Value> fields;
    bool operator==(const Instance&) const = default;
  };
  std::map<std::int64_t, Instance> instances;

  bool has(std::int64_t id) const { return instances.count(id) > 0; }
  const Value* get(std::int64_t id, const std::string& field) const;
  void set(std::int64_t id, const std::string& field, Value v);
  std::string dump(std::int64_t id) const;
  bool operator==(const ModelState&) const = default;
};

enum class SpecErrorKind {
  HeadOfEmpty,
  TailOfEmpty,
  IndexOutOfBounds,
  DivisionByZero,
  Overflow,
  NotFound,
  OutOfDomain,
  UnboundedQuantifier,
  MissingOld,
  UnknownSymbol,
  UnknownField,
  TypeMismatch,
  UndeterminedModel,
};

const char* to_string(SpecErrorKind kind);

/// Failure while evaluating a clause. This signals a defect in the
/// specification (or its use), never an implementation violation.
class SpecRuntimeError : public std::runtime_error {
 public:
  SpecRuntimeError(SpecErrorKind kind, Span span, const std::string& detail);
  SpecErrorKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  SpecErrorKind kind_;
  Span span_;
  std::string detail_;
};

}  // namespace speclite
