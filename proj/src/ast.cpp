#include "speclite/ast.hpp"

#include <algorithm>
#include <tuple>
#include <type_traits>

namespace speclite {

std::string Span::to_string() const {
  return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
         std::to_string(column);
}

bool precedes(const Span& a, const Span& b) {
  return std::tie(a.line, a.column) < std::tie(b.line, b.column);
}

namespace {

// 0: arrow, 1: product, 2: application / atom
std::string type_to_string(const LogicalType& t, int min_level) {
  using K = LogicalType::Kind;
  auto wrap = [&](int level, std::string s) {
    return level < min_level ? "(" + s + ")" : s;
  };
  auto postfix = [&](const LogicalType& arg, const char* ctor) {
    return type_to_string(arg, 2) + " " + ctor;
  };
  switch (t.kind) {
    case K::Int: return "int";
    case K::Bool: return "bool";
    case K::Unit: return "unit";
    case K::Var: return t.name;
    case K::List: return postfix(t.args.at(0), "list");
    case K::Seq: return postfix(t.args.at(0), "seq");
    case K::FSet: return postfix(t.args.at(0), "fset");
    case K::Tuple: {
      std::string s;
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += " * ";
        s += type_to_string(t.args[i], 2);
      }
      return wrap(1, s);
    }
    case K::Arrow:
      return wrap(0, type_to_string(t.args.at(0), 1) + " -> " + type_to_string(t.args.at(1), 0));
    case K::Named: {
      if (t.args.empty()) return t.name;
      if (t.args.size() == 1) return type_to_string(t.args[0], 2) + " " + t.name;
      std::string s = "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += type_to_string(t.args[i], 0);
      }
      return s + ") " + t.name;
    }
  }
  return "?";
}

}  // namespace

std::string LogicalType::to_string() const { return type_to_string(*this, 0); }

bool operator==(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  return *a == *b;
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Implies: return "->";
    case BinOp::Iff: return "<->";
    case BinOp::Or: return "||";
    case BinOp::And: return "&&";
    case BinOp::Cons: return "::";
    case BinOp::Append: return "@";
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "mod";
  }
  return "?";
}

const char* to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Neq: return "<>";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

void for_each_child(const Term& t, const std::function<void(const TermPtr&)>& f) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Tuple> || std::is_same_v<N, node::ListLit>) {
          for (const auto& i : n.items) f(i);
        } else if constexpr (std::is_same_v<N, node::Binary>) {
          f(n.lhs);
          f(n.rhs);
        } else if constexpr (std::is_same_v<N, node::Chain>) {
          for (const auto& o : n.operands) f(o);
        } else if constexpr (std::is_same_v<N, node::Not> || std::is_same_v<N, node::Neg> ||
                             std::is_same_v<N, node::Old> || std::is_same_v<N, node::Quantifier>) {
          f(n.body);
        } else if constexpr (std::is_same_v<N, node::If>) {
          f(n.cond);
          f(n.then_branch);
          f(n.else_branch);
        } else if constexpr (std::is_same_v<N, node::Let>) {
          f(n.bound);
          f(n.body);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          f(n.fn);
          for (const auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<N, node::Field>) {
          f(n.record);
        } else if constexpr (std::is_same_v<N, node::Index>) {
          f(n.seq);
          f(n.index);
        }
      },
      t.node);
}

TermPtr make_term(Span span, TermNode node) {
  return TermPtr(std::make_shared<const Term>(Term{std::move(span), std::move(node)}));
}

const ModelField* TypeDecl::find_model(std::string_view field) const {
  auto it = std::find_if(models.begin(), models.end(),
                         [&](const ModelField& m) { return m.name == field; });
  return it == models.end() ? nullptr : &*it;
}

bool TypeDecl::has_mutable_model() const {
  return std::any_of(models.begin(), models.end(), [](const ModelField& m) { return m.is_mutable; });
}

namespace {
template <class T>
const T* find_named(const std::vector<T>& v, std::string_view name) {
  auto it = std::find_if(v.begin(), v.end(), [&](const T& d) { return d.name == name; });
  return it == v.end() ? nullptr : &*it;
}
}  // namespace

const TypeDecl* SpecInterface::find_type(std::string_view name) const {
  return find_named(type_decls, name);
}
const ValDecl* SpecInterface::find_val(std::string_view name) const {
  return find_named(val_decls, name);
}
const LogicDecl* SpecInterface::find_logic(std::string_view name) const {
  return find_named(logic_decls, name);
}

}  // namespace speclite
