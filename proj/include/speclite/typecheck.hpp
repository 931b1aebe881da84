#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "speclite/ast.hpp"

namespace speclite {

struct TypeError {
  enum class Kind {
    Mismatch,
    UnknownSymbol,
    OldOutsidePostcondition,
    InvalidOld,
    InvalidModifies,
    ArityMismatch,
    DuplicateName,
    UnboundTypeVariable,
  };
  Kind kind;
  Span span;
  std::string message;
  std::optional<LogicalType> expected;
  std::optional<LogicalType> actual;
};

const char* to_string(TypeError::Kind kind);

class TypeCheckFailure : public std::runtime_error {
 public:
  explicit TypeCheckFailure(std::vector<TypeError> errors);
  const std::vector<TypeError>& errors() const { return errors_; }

 private:
  std::vector<TypeError> errors_;
};

/// How a relational chain with several operators is read.
/// `a <= i < b` and `x = [] = y` are conjunctions of adjacent comparisons;
/// `b = l = []` (a boolean compared with a comparison) nests to the right.
enum class ChainMode { Conjunction, RightNested };

struct TypedSpec {
  SpecInterface spec;
  std::unordered_map<const Term*, LogicalType> term_types;
  std::unordered_map<const Term*, ChainMode> chain_modes;
  std::unordered_map<const Term*, std::vector<LogicalType>> binder_types;

  const LogicalType* type_of(const Term* t) const;
  ChainMode chain_mode(const Term* t) const;
};

/// Type checks every contract, invariant and predicate body. Throws
/// TypeCheckFailure with all errors found.
TypedSpec typecheck(const SpecInterface& spec);

/// Same as typecheck, but reports errors instead of throwing.
std::vector<TypeError> type_errors(const SpecInterface& spec);

// ---- executability -----------------------------------------------------

enum class NonExecReason {
  UnboundedExistential,
  UnboundedUniversal,
  NonExecutableMapType,
  AbstractPredicate,
};

const char* to_string(NonExecReason reason);

struct ExecVerdict {
  struct Finding {
    Span span;
    NonExecReason reason;
  };
  std::vector<Finding> findings;  // empty: executable

  bool executable() const { return findings.empty(); }
};

/// Executable iff every quantifier is bounded by a recognised guard and no
/// map-typed value has to be enumerated. Calls to defined predicates are
/// classified through their bodies.
ExecVerdict classify_executable(const TypedSpec& typed, const TermPtr& term);

/// All clauses of a value declaration's contract.
ExecVerdict classify_executable(const TypedSpec& typed, const ValDecl& val);

/// Enumeration domain of one quantified variable, read off its guard.
struct BinderDomain {
  enum class Kind { Member, Range };
  Kind kind = Kind::Member;
  TermPtr collection;  // Member: list, sequence or set
  TermPtr low, high;   // Range
  bool low_strict = false, high_strict = false;
};

/// Domains for every binder of a quantifier, or nullopt when some binder has
/// no recognised guard. Recognised guards: `List.mem x l`, `Seq.mem x s`,
/// `Fset.mem x s`, `mem x s` and `a <= x < b` (any mix of `<` / `<=`), as an
/// implication antecedent for `forall` and as a conjunct for `exists`.
std::optional<std::vector<BinderDomain>> plan_quantifier(const node::Quantifier& q);

// ---- STM compatibility -------------------------------------------------

enum class StmReason { MultipleSut, NoSut, HigherOrderParameter, UngeneratableParameter };

const char* to_string(StmReason reason);

struct StmVerdict {
  std::optional<StmReason> reason;  // empty: compatible
  bool constructor = false;         // result is the SUT, no SUT parameter

  bool compatible() const { return !reason.has_value(); }
};

StmVerdict stm_compatibility(const TypedSpec& typed, const ValDecl& val,
                             const std::string& sut_type);

/// True when `type` denotes the named declared type (module qualifiers are
/// ignored).
bool is_named_type(const LogicalType& type, const std::string& name);

}  // namespace speclite
