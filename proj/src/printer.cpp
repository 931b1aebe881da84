#include "speclite/printer.hpp"

#include <sstream>

namespace speclite {
namespace {

// Binding strength, loosest first. Mirrors the parser's precedence ladder.
enum Level : int {
  kOpen = 0,  // forall / exists / let / if: extend as far right as possible
  kImplies,
  kOr,
  kAnd,
  kNot,
  kChain,
  kAppend,
  kCons,
  kAdd,
  kMul,
  kNeg,
  kApply,
  kPostfix,
  kAtom,
};

struct BinInfo {
  Level level;
  bool right_assoc;
};

BinInfo info(BinOp op) {
  switch (op) {
    case BinOp::Implies:
    case BinOp::Iff: return {kImplies, true};
    case BinOp::Or: return {kOr, true};
    case BinOp::And: return {kAnd, true};
    case BinOp::Append: return {kAppend, true};
    case BinOp::Cons: return {kCons, true};
    case BinOp::Add:
    case BinOp::Sub: return {kAdd, false};
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return {kMul, false};
  }
  return {kAtom, false};
}

Level level_of(const Term& t) {
  return std::visit(
      [](const auto& n) -> Level {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Binary>) return info(n.op).level;
        else if constexpr (std::is_same_v<N, node::Chain>) return kChain;
        else if constexpr (std::is_same_v<N, node::Not>) return kNot;
        else if constexpr (std::is_same_v<N, node::Neg>) return kNeg;
        else if constexpr (std::is_same_v<N, node::Apply> || std::is_same_v<N, node::Old>)
          return kApply;
        else if constexpr (std::is_same_v<N, node::Field> || std::is_same_v<N, node::Index>)
          return kPostfix;
        else if constexpr (std::is_same_v<N, node::If> || std::is_same_v<N, node::Let> ||
                           std::is_same_v<N, node::Quantifier>)
          return kOpen;
        else return kAtom;
      },
      t.node);
}

std::string print_at(const TermPtr& t, int ctx);

std::string join(const std::vector<TermPtr>& items, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += print_at(items[i], kOpen);
  }
  return s;
}

std::string print_node(const Term& t) {
  return std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::IntLit>) {
          return n.value < 0 ? "(" + std::to_string(n.value) + ")" : std::to_string(n.value);
        } else if constexpr (std::is_same_v<N, node::BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<N, node::UnitLit>) {
          return "()";
        } else if constexpr (std::is_same_v<N, node::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, node::Tuple>) {
          return "(" + join(n.items, ", ") + ")";
        } else if constexpr (std::is_same_v<N, node::ListLit>) {
          return "[" + join(n.items, "; ") + "]";
        } else if constexpr (std::is_same_v<N, node::Binary>) {
          BinInfo bi = info(n.op);
          int l = bi.right_assoc ? bi.level + 1 : bi.level;
          int r = bi.right_assoc ? bi.level : bi.level + 1;
          return print_at(n.lhs, l) + " " + to_string(n.op) + " " + print_at(n.rhs, r);
        } else if constexpr (std::is_same_v<N, node::Chain>) {
          std::string s = print_at(n.operands.at(0), kAppend);
          for (std::size_t i = 0; i < n.ops.size(); ++i)
            s += std::string(" ") + to_string(n.ops[i]) + " " + print_at(n.operands.at(i + 1), kAppend);
          return s;
        } else if constexpr (std::is_same_v<N, node::Not>) {
          return "not " + print_at(n.body, kNot);
        } else if constexpr (std::is_same_v<N, node::Neg>) {
          return "-" + print_at(n.body, kNeg);
        } else if constexpr (std::is_same_v<N, node::If>) {
          return "if " + print_at(n.cond, kOpen) + " then " + print_at(n.then_branch, kOpen) +
                 " else " + print_at(n.else_branch, kOpen);
        } else if constexpr (std::is_same_v<N, node::Let>) {
          return "let " + n.name + " = " + print_at(n.bound, kOpen) + " in " +
                 print_at(n.body, kOpen);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          std::string s = print_at(n.fn, kPostfix);
          for (const auto& a : n.args) s += " " + print_at(a, kPostfix);
          return s;
        } else if constexpr (std::is_same_v<N, node::Field>) {
          std::string s = print_at(n.record, kPostfix) + ".";
          if (!n.qualifier.empty()) s += n.qualifier + ".";
          return s + n.field;
        } else if constexpr (std::is_same_v<N, node::Index>) {
          return print_at(n.seq, kPostfix) + "[" + print_at(n.index, kOpen) + "]";
        } else if constexpr (std::is_same_v<N, node::Old>) {
          return "old " + print_at(n.body, kPostfix);
        } else {
          static_assert(std::is_same_v<N, node::Quantifier>);
          std::string s = n.kind == Quant::Forall ? "forall " : "exists ";
          for (std::size_t i = 0; i < n.binders.size(); ++i) {
            if (i) s += ", ";
            s += n.binders[i].name;
            if (n.binders[i].type) s += ": " + n.binders[i].type->to_string();
          }
          return s + ". " + print_at(n.body, kOpen);
        }
      },
      t.node);
}

std::string print_at(const TermPtr& t, int ctx) {
  std::string s = print_node(*t);
  int lvl = level_of(*t);
  // Open constructs only stay bare at the outermost position.
  if (lvl < ctx || (lvl == kOpen && ctx > kOpen)) return "(" + s + ")";
  return s;
}

std::string param_type(const LogicalType& t) {
  std::string s = t.to_string();
  return t.kind == LogicalType::Kind::Arrow ? "(" + s + ")" : s;
}

constexpr const char* kIndent = "    ";

void print_type_decl(std::ostringstream& os, const TypeDecl& d) {
  os << "type ";
  if (d.params.size() == 1) {
    os << (d.params[0].injective ? "!" : "") << d.params[0].name << " ";
  } else if (d.params.size() > 1) {
    os << "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i) os << ", ";
      os << (d.params[i].injective ? "!" : "") << d.params[i].name;
    }
    os << ") ";
  }
  os << d.name << "\n";
  if (d.models.empty() && !d.invariant) return;
  os << "(*@ ";
  bool first = true;
  for (const auto& m : d.models) {
    if (!first) os << "\n" << kIndent;
    first = false;
    os << (m.is_mutable ? "mutable " : "") << "model " << m.name << " : " << m.type.to_string();
  }
  if (d.invariant) {
    if (!first) os << "\n" << kIndent;
    os << "with " << d.invariant->binder << " invariant " << print_term(d.invariant->body);
  }
  os << " *)\n";
}

void print_contract(std::ostringstream& os, const Contract& c) {
  os << "(*@ ";
  const auto& h = c.header;
  if (h.results.size() == 1) {
    os << h.results[0] << " = ";
  } else if (h.results.size() > 1) {
    os << "(";
    for (std::size_t i = 0; i < h.results.size(); ++i) os << (i ? ", " : "") << h.results[i];
    os << ") = ";
  }
  os << h.function;
  for (const auto& a : h.args) {
    switch (a.kind) {
      case HeaderArg::Kind::Named: os << " " << a.name; break;
      case HeaderArg::Kind::Unit: os << " ()"; break;
      case HeaderArg::Kind::Optional: os << " ?" << a.name; break;
      case HeaderArg::Kind::Labeled: os << " ~" << a.name; break;
    }
  }
  for (const auto& t : c.preconditions) os << "\n" << kIndent << "requires " << print_term(t);
  for (const auto& t : c.postconditions) os << "\n" << kIndent << "ensures " << print_term(t);
  if (!c.modifies.empty()) {
    os << "\n" << kIndent << "modifies ";
    for (std::size_t i = 0; i < c.modifies.size(); ++i) {
      if (i) os << ", ";
      os << c.modifies[i].name;
      if (c.modifies[i].field) os << "." << *c.modifies[i].field;
    }
  }
  for (const auto& r : c.raises) {
    os << "\n" << kIndent << "raises " << r.exception;
    if (r.condition) os << " -> " << print_term(*r.condition);
  }
  os << " *)\n";
}

void print_val_decl(std::ostringstream& os, const ValDecl& d) {
  os << "val " << d.name << " : ";
  for (const auto& p : d.params) {
    if (p.label == ParamLabel::Optional) os << "?" << p.label_name << ": ";
    if (p.label == ParamLabel::Labeled) os << "~" << p.label_name << ": ";
    os << param_type(p.type) << " -> ";
  }
  os << d.result.to_string() << "\n";
  if (d.contract) print_contract(os, *d.contract);
}

void print_logic_decl(std::ostringstream& os, const LogicDecl& d) {
  os << "(*@ " << (d.is_predicate ? "predicate " : "function ") << d.name;
  for (const auto& p : d.params) os << " (" << p.name << ": " << p.type.to_string() << ")";
  if (d.result) os << " : " << d.result->to_string();
  if (d.body) os << " =\n" << kIndent << print_term(*d.body);
  os << " *)\n";
}

}  // namespace

std::string print_term(const TermPtr& term) { return print_at(term, kOpen); }

std::string print_type(const LogicalType& type) { return type.to_string(); }

std::string pretty_print(const SpecInterface& spec) {
  std::ostringstream os;
  bool first = true;
  for (const DeclRef& ref : spec.order) {
    if (!first) os << "\n";
    first = false;
    switch (ref.kind) {
      case DeclKind::Type: print_type_decl(os, spec.type_decls.at(ref.index)); break;
      case DeclKind::Val: print_val_decl(os, spec.val_decls.at(ref.index)); break;
      case DeclKind::Exception: {
        const auto& e = spec.exn_decls.at(ref.index);
        os << "exception " << e.name;
        if (e.payload) os << " of " << e.payload->to_string();
        os << "\n";
        break;
      }
      case DeclKind::Logic: print_logic_decl(os, spec.logic_decls.at(ref.index)); break;
    }
  }
  return os.str();
}

}  // namespace speclite
