#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclite/typecheck.hpp"
#include "speclite/value.hpp"

namespace speclite {

/// What an implementation operation did: returned a value or raised.
struct CallOutcome {
  Value result;
  std::optional<std::string> raised;  // exception tag

  static CallOutcome returned(Value v) { return {std::move(v), std::nullopt}; }
  static CallOutcome raise(std::string tag) { return {Value::unit(), std::move(tag)}; }
};

/// Black-box view of an implementation. SUT instances are referred to by
/// Instance values whose ids the adapter allocates in its constructors.
class ImplAdapter {
 public:
  virtual ~ImplAdapter() = default;

  virtual std::string name() const = 0;
  /// Name of the specification type the adapter implements, e.g. "t".
  virtual std::string sut_type() const = 0;
  virtual bool supports(const std::string& op) const = 0;
  virtual CallOutcome invoke(const std::string& op, const std::vector<Value>& args) = 0;

  /// Abstraction function: model field values of a live instance.
  virtual std::optional<std::map<std::string, Value>> observe(std::int64_t id) const = 0;

  /// Concrete fields as logical values, checked against the invariant of
  /// representation_spec() together with the model fields.
  virtual std::map<std::string, Value> representation(std::int64_t) const { return {}; }
  virtual std::shared_ptr<const TypedSpec> representation_spec() const { return nullptr; }

  /// Heap-shape checks that have no logical counterpart.
  virtual std::optional<std::string> structural_violation(std::int64_t) const { return std::nullopt; }

  /// A new adapter of the same kind with no live instances.
  virtual std::unique_ptr<ImplAdapter> fresh() const = 0;
};

enum class VerdictKind {
  Pass,
  PreViolation,
  PostViolation,
  ModifiesViolation,
  RaisesViolation,
  UnexpectedException,
  TypeInvariantViolation,
  SpecRuntimeError,
};

const char* to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Pass;
  Span span;           // offending clause
  std::string clause;  // its text
  std::string exception;
  std::string field;
  std::string type;
  std::int64_t instance = 0;
  std::optional<SpecErrorKind> error;
  std::string detail;
  std::vector<Value> args;
  std::optional<Value> result;
  std::string old_model, new_model;

  bool pass() const { return kind == VerdictKind::Pass; }
  std::string summary() const;
};

struct CallResult {
  Verdict verdict;
  ModelState state;  // model after the call (unchanged unless the call passed)
  std::optional<Value> result;
  std::optional<std::string> raised;
};

class AliasError : public std::runtime_error {
 public:
  AliasError(std::vector<std::size_t> positions, const std::string& msg)
      : std::runtime_error(msg), positions_(std::move(positions)) {}
  const std::vector<std::size_t>& positions() const { return positions_; }

 private:
  std::vector<std::size_t> positions_;
};

/// Throws AliasError when two instance arguments are the same instance.
void check_alias(const std::vector<Value>& args);

/// Runs one call of `val` through the adapter with contract checking.
/// `args` has one value per parameter (unit for `()` and omitted optional
/// arguments). Throws AliasError on aliased instance arguments.
CallResult check_call(const TypedSpec& typed, const ValDecl& val, ImplAdapter& adapter,
                      const ModelState& state, const std::vector<Value>& args);

}  // namespace speclite
