#pragma once

#include <map>
#include <string>

#include "speclite/typecheck.hpp"
#include "speclite/value.hpp"

namespace speclite {

struct EvalEnv {
  /// Source of predicate definitions and chain readings; may be null for
  /// standalone terms.
  const TypedSpec* spec = nullptr;
  std::map<std::string, Value> bindings;
  const ModelState* state = nullptr;
  const ModelState* old = nullptr;  // snapshot for `old`, when available
};

/// Evaluates a term. Throws SpecRuntimeError on partial operations,
/// unbounded quantifiers and missing symbols.
Value eval(const TermPtr& term, const EvalEnv& env);

bool eval_bool(const TermPtr& term, const EvalEnv& env);

/// Applies a function value (standard-library symbol, predicate or map) to
/// arguments.
Value apply_value(const Value& fn, const std::vector<Value>& args, const EvalEnv& env,
                  const Span& span = {});

}  // namespace speclite
