#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace speclite {

/// Source location of a syntax node. Spans are metadata: two spans always
/// compare equal so that defaulted equality on AST nodes is structural.
struct Span {
  std::string file;
  int line = 0;
  int column = 0;

  friend bool operator==(const Span&, const Span&) { return true; }
  std::string to_string() const;
};

/// Strict positional ordering, used where the real position matters.
bool precedes(const Span& a, const Span& b);

struct LogicalType {
  enum class Kind { Int, Bool, Unit, Tuple, List, Seq, FSet, Arrow, Named, Var };

  Kind kind = Kind::Unit;
  std::string name;               // Named: constructor (maybe qualified); Var: 'a
  std::vector<LogicalType> args;  // Tuple items, element type, Arrow {from, to}

  static LogicalType integer() { return {Kind::Int, {}, {}}; }
  static LogicalType boolean() { return {Kind::Bool, {}, {}}; }
  static LogicalType unit() { return {Kind::Unit, {}, {}}; }
  static LogicalType var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static LogicalType list(LogicalType t) { return {Kind::List, {}, {std::move(t)}}; }
  static LogicalType seq(LogicalType t) { return {Kind::Seq, {}, {std::move(t)}}; }
  static LogicalType fset(LogicalType t) { return {Kind::FSet, {}, {std::move(t)}}; }
  static LogicalType tuple(std::vector<LogicalType> items) {
    return {Kind::Tuple, {}, std::move(items)};
  }
  static LogicalType arrow(LogicalType from, LogicalType to) {
    return {Kind::Arrow, {}, {std::move(from), std::move(to)}};
  }
  static LogicalType named(std::string n, std::vector<LogicalType> params = {}) {
    return {Kind::Named, std::move(n), std::move(params)};
  }

  bool operator==(const LogicalType&) const = default;
  std::string to_string() const;
};

struct Term;

/// Shared immutable handle to a term. Equality is deep (structural).
class TermPtr {
 public:
  TermPtr() = default;
  explicit TermPtr(std::shared_ptr<const Term> p) : p_(std::move(p)) {}

  const Term& operator*() const { return *p_; }
  const Term* operator->() const { return p_.get(); }
  const Term* get() const { return p_.get(); }
  explicit operator bool() const { return static_cast<bool>(p_); }

  friend bool operator==(const TermPtr& a, const TermPtr& b);

 private:
  std::shared_ptr<const Term> p_;
};

enum class BinOp { Implies, Iff, Or, And, Cons, Append, Add, Sub, Mul, Div, Mod };
enum class RelOp { Eq, Neq, Lt, Le, Gt, Ge };
enum class Quant { Forall, Exists };

const char* to_string(BinOp op);
const char* to_string(RelOp op);

namespace node {
struct IntLit {
  std::int64_t value = 0;
  bool operator==(const IntLit&) const = default;
};
struct BoolLit {
  bool value = false;
  bool operator==(const BoolLit&) const = default;
};
struct UnitLit {
  bool operator==(const UnitLit&) const = default;
};
/// Identifier, possibly module-qualified ("List.mem").
struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct Tuple {
  std::vector<TermPtr> items;
  bool operator==(const Tuple&) const = default;
};
/// `[a; b; c]`; the empty list is a ListLit with no items.
struct ListLit {
  std::vector<TermPtr> items;
  bool operator==(const ListLit&) const = default;
};
struct Binary {
  BinOp op;
  TermPtr lhs, rhs;
  bool operator==(const Binary&) const = default;
};
/// One or more relational operators: `a = b`, `a <= i < b`, `x = y = z`.
/// Chains with several operators are resolved by the type checker.
struct Chain {
  std::vector<TermPtr> operands;
  std::vector<RelOp> ops;
  bool operator==(const Chain&) const = default;
};
struct Not {
  TermPtr body;
  bool operator==(const Not&) const = default;
};
struct Neg {
  TermPtr body;
  bool operator==(const Neg&) const = default;
};
struct If {
  TermPtr cond, then_branch, else_branch;
  bool operator==(const If&) const = default;
};
struct Let {
  std::string name;
  TermPtr bound, body;
  bool operator==(const Let&) const = default;
};
struct Apply {
  TermPtr fn;
  std::vector<TermPtr> args;
  bool operator==(const Apply&) const = default;
};
/// Model access `x.field` or `x.M.field` (the module qualifier is kept for
/// printing and ignored by resolution).
struct Field {
  TermPtr record;
  std::string qualifier;
  std::string field;
  bool operator==(const Field&) const = default;
};
struct Index {
  TermPtr seq, index;
  bool operator==(const Index&) const = default;
};
struct Old {
  TermPtr body;
  bool operator==(const Old&) const = default;
};
struct Binder {
  std::string name;
  std::optional<LogicalType> type;
  bool operator==(const Binder&) const = default;
};
struct Quantifier {
  Quant kind;
  std::vector<Binder> binders;
  TermPtr body;
  bool operator==(const Quantifier&) const = default;
};
}  // namespace node

using TermNode = std::variant<node::IntLit, node::BoolLit, node::UnitLit, node::Var, node::Tuple,
                              node::ListLit, node::Binary, node::Chain, node::Not, node::Neg,
                              node::If, node::Let, node::Apply, node::Field, node::Index,
                              node::Old, node::Quantifier>;

struct Term {
  Span span;
  TermNode node;
  bool operator==(const Term&) const = default;
};

TermPtr make_term(Span span, TermNode node);

/// Calls `f` on each direct subterm, left to right.
void for_each_child(const Term& t, const std::function<void(const TermPtr&)>& f);

struct ModelField {
  std::string name;
  bool is_mutable = false;
  LogicalType type;
  Span span;
  bool operator==(const ModelField&) const = default;
};

struct TypeParam {
  std::string name;  // 'a
  bool injective = false;  // written `!'a`
  bool operator==(const TypeParam&) const = default;
};

struct TypeInvariant {
  std::string binder;
  TermPtr body;
  bool operator==(const TypeInvariant&) const = default;
};

struct TypeDecl {
  std::string name;
  std::vector<TypeParam> params;
  std::vector<ModelField> models;
  std::optional<TypeInvariant> invariant;
  Span span;

  const ModelField* find_model(std::string_view field) const;
  bool has_mutable_model() const;
  bool operator==(const TypeDecl&) const = default;
};

enum class ParamLabel { None, Labeled, Optional };

struct Param {
  ParamLabel label = ParamLabel::None;
  std::string label_name;
  LogicalType type;
  bool operator==(const Param&) const = default;
};

struct HeaderArg {
  enum class Kind { Named, Unit, Labeled, Optional };
  Kind kind = Kind::Named;
  std::string name;
  bool operator==(const HeaderArg&) const = default;
};

struct ContractHeader {
  std::vector<std::string> results;  // empty: no result pattern
  std::string function;
  std::vector<HeaderArg> args;
  bool operator==(const ContractHeader&) const = default;
};

struct ModifiesTarget {
  std::string name;
  std::optional<std::string> field;
  Span span;
  bool operator==(const ModifiesTarget&) const = default;
};

struct RaisesClause {
  std::string exception;
  std::optional<TermPtr> condition;  // bare `raises E` has none
  Span span;
  bool operator==(const RaisesClause&) const = default;
};

struct Contract {
  ContractHeader header;
  std::vector<TermPtr> preconditions;   // requires
  std::vector<TermPtr> postconditions;  // ensures
  std::vector<ModifiesTarget> modifies;
  std::vector<RaisesClause> raises;
  Span span;
  bool operator==(const Contract&) const = default;
};

struct ValDecl {
  std::string name;
  std::vector<Param> params;
  LogicalType result;
  std::optional<Contract> contract;
  Span span;
  bool operator==(const ValDecl&) const = default;
};

struct ExnDecl {
  std::string name;
  std::optional<LogicalType> payload;
  Span span;
  bool operator==(const ExnDecl&) const = default;
};

struct LogicParam {
  std::string name;
  LogicalType type;
  bool operator==(const LogicParam&) const = default;
};

/// Standalone `predicate` / `function` definition inside a spec comment.
struct LogicDecl {
  bool is_predicate = true;
  std::string name;
  std::vector<LogicParam> params;
  std::optional<LogicalType> result;  // functions only
  std::optional<TermPtr> body;        // absent: abstract symbol
  Span span;
  bool operator==(const LogicDecl&) const = default;
};

enum class DeclKind { Type, Val, Exception, Logic };

struct DeclRef {
  DeclKind kind;
  std::size_t index;
  bool operator==(const DeclRef&) const = default;
};

struct SpecInterface {
  std::vector<TypeDecl> type_decls;
  std::vector<ValDecl> val_decls;
  std::vector<ExnDecl> exn_decls;
  std::vector<LogicDecl> logic_decls;
  std::vector<DeclRef> order;  // declaration order across the four lists

  const TypeDecl* find_type(std::string_view name) const;
  const ValDecl* find_val(std::string_view name) const;
  const LogicDecl* find_logic(std::string_view name) const;
  bool empty() const { return order.empty(); }
  bool operator==(const SpecInterface&) const = default;
};

}  // namespace speclite
