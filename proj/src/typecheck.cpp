#include "speclite/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "speclite/parser.hpp"

namespace speclite {

const char* to_string(TypeError::Kind kind) {
  using K = TypeError::Kind;
  switch (kind) {
    case K::Mismatch: return "mismatch";
    case K::UnknownSymbol: return "unknown-symbol";
    case K::OldOutsidePostcondition: return "old-outside-postcondition";
    case K::InvalidOld: return "invalid-old";
    case K::InvalidModifies: return "invalid-modifies";
    case K::ArityMismatch: return "arity-mismatch";
    case K::DuplicateName: return "duplicate-name";
    case K::UnboundTypeVariable: return "unbound-type-variable";
  }
  return "?";
}

namespace {
std::string summarize(const std::vector<TypeError>& errors) {
  std::string s = std::to_string(errors.size()) + " type error(s)";
  if (!errors.empty()) s += "; first: " + errors.front().span.to_string() + ": " + errors.front().message;
  return s;
}
}  // namespace

TypeCheckFailure::TypeCheckFailure(std::vector<TypeError> errors)
    : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}

const LogicalType* TypedSpec::type_of(const Term* t) const {
  auto it = term_types.find(t);
  return it == term_types.end() ? nullptr : &it->second;
}

ChainMode TypedSpec::chain_mode(const Term* t) const {
  auto it = chain_modes.find(t);
  return it == chain_modes.end() ? ChainMode::Conjunction : it->second;
}

namespace {

using K = LogicalType::Kind;

std::string base_name(const std::string& n) {
  auto p = n.rfind('.');
  return p == std::string::npos ? n : n.substr(p + 1);
}

bool is_meta(const LogicalType& t) { return t.kind == K::Var && !t.name.empty() && t.name[0] == '?'; }

// seq and list share one representation.
LogicalType normalize(const LogicalType& t) {
  LogicalType r = t;
  if (r.kind == K::Seq) r.kind = K::List;
  for (auto& a : r.args) a = normalize(a);
  return r;
}

LogicalType substitute(const LogicalType& t, const std::map<std::string, LogicalType>& m) {
  if (t.kind == K::Var) {
    auto it = m.find(t.name);
    return it == m.end() ? t : it->second;
  }
  LogicalType r = t;
  for (auto& a : r.args) a = substitute(a, m);
  return r;
}

void collect_vars(const LogicalType& t, std::set<std::string>& out) {
  if (t.kind == K::Var) out.insert(t.name);
  for (const auto& a : t.args) collect_vars(a, out);
}

const std::map<std::string, std::string>& stdlib_schemes() {
  static const std::map<std::string, std::string> schemes = {
      {"List.mem", "'a -> 'a list -> bool"},
      {"List.map", "('a -> 'b) -> 'a list -> 'b list"},
      {"List.hd", "'a list -> 'a"},
      {"List.tl", "'a list -> 'a list"},
      {"List.rev", "'a list -> 'a list"},
      {"List.length", "'a list -> int"},
      {"List.assoc", "'a -> ('a * 'b) list -> 'b"},
      {"List.remove_assoc", "'a -> ('a * 'b) list -> ('a * 'b) list"},
      {"fst", "'a * 'b -> 'a"},
      {"snd", "'a * 'b -> 'b"},
      {"Seq.length", "'a seq -> int"},
      {"Seq.mem", "'a -> 'a seq -> bool"},
      {"Fset.mem", "'a -> 'a fset -> bool"},
      {"mem", "'a -> 'a fset -> bool"},
      {"Fset.cardinal", "'a fset -> int"},
      {"reachable", "'v -> 'v -> 'g -> bool"},
  };
  return schemes;
}

const std::map<std::string, LogicalType>& stdlib_types() {
  static const std::map<std::string, LogicalType> types = [] {
    std::map<std::string, LogicalType> m;
    for (const auto& [name, text] : stdlib_schemes()) m[name] = normalize(parse_type(text));
    return m;
  }();
  return types;
}

class Checker {
 public:
  explicit Checker(const SpecInterface& spec) : spec_(spec) {}

  std::vector<TypeError> run(TypedSpec* out) {
    check_duplicates();
    for (const auto& d : spec_.type_decls) check_type_decl(d);
    for (const auto& d : spec_.logic_decls) check_logic_decl(d);
    for (const auto& d : spec_.val_decls) check_val_decl(d);
    if (out) {
      for (const auto& [t, ty] : raw_types_) out->term_types[t] = zonk(ty);
      for (const auto& [t, tys] : raw_binders_) {
        auto& v = out->binder_types[t];
        v.clear();
        for (const auto& ty : tys) v.push_back(zonk(ty));
      }
      out->chain_modes = chain_modes_;
    }
    return errors_;
  }

 private:
  // ---- unification ---------------------------------------------------

  LogicalType fresh() { return LogicalType::var("?" + std::to_string(next_meta_++)); }

  LogicalType resolve(LogicalType t) const {
    while (is_meta(t)) {
      auto it = subst_.find(t.name);
      if (it == subst_.end()) break;
      t = it->second;
    }
    return t;
  }

  LogicalType zonk(const LogicalType& t) const {
    LogicalType r = resolve(t);
    for (auto& a : r.args) a = zonk(a);
    return r;
  }

  bool occurs(const std::string& meta, const LogicalType& t) const {
    LogicalType r = resolve(t);
    if (is_meta(r)) return r.name == meta;
    return std::any_of(r.args.begin(), r.args.end(),
                       [&](const LogicalType& a) { return occurs(meta, a); });
  }

  bool unify(const LogicalType& x, const LogicalType& y) {
    LogicalType a = resolve(x), b = resolve(y);
    if (is_meta(a) && is_meta(b) && a.name == b.name) return true;
    if (is_meta(a)) {
      if (occurs(a.name, b)) return false;
      subst_[a.name] = b;
      return true;
    }
    if (is_meta(b)) return unify(b, a);
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    if (a.kind == K::Var && a.name != b.name) return false;
    if (a.kind == K::Named && base_name(a.name) != base_name(b.name)) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!unify(a.args[i], b.args[i])) return false;
    return true;
  }

  LogicalType instantiate(const LogicalType& scheme) {
    std::set<std::string> vars;
    collect_vars(scheme, vars);
    std::map<std::string, LogicalType> m;
    for (const auto& v : vars) m[v] = fresh();
    return substitute(scheme, m);
  }

  void error(TypeError::Kind kind, const Span& span, std::string msg,
             std::optional<LogicalType> expected = {}, std::optional<LogicalType> actual = {}) {
    errors_.push_back(TypeError{kind, span, std::move(msg), std::move(expected), std::move(actual)});
  }

  void mismatch(const Span& span, const LogicalType& expected, const LogicalType& actual,
                const std::string& what = "type mismatch") {
    LogicalType e = zonk(expected), a = zonk(actual);
    error(TypeError::Kind::Mismatch, span,
          what + ": expected " + e.to_string() + ", found " + a.to_string(), e, a);
  }

  void expect(const TermPtr& t, const LogicalType& ty) {
    LogicalType actual = infer(t);
    if (!unify(actual, ty)) mismatch(t->span, ty, actual);
  }

  // ---- declarations --------------------------------------------------

  void check_duplicates() {
    std::set<std::string> vals, logics, exns, types;
    for (const auto& d : spec_.val_decls)
      if (!vals.insert(d.name).second)
        error(TypeError::Kind::DuplicateName, d.span, "duplicate value '" + d.name + "'");
    for (const auto& d : spec_.logic_decls)
      if (!logics.insert(d.name).second)
        error(TypeError::Kind::DuplicateName, d.span, "duplicate predicate or function '" + d.name + "'");
    for (const auto& d : spec_.exn_decls)
      if (!exns.insert(d.name).second)
        error(TypeError::Kind::DuplicateName, d.span, "duplicate exception '" + d.name + "'");
    for (const auto& d : spec_.type_decls)
      if (!types.insert(d.name).second)
        error(TypeError::Kind::DuplicateName, d.span, "duplicate type '" + d.name + "'");
  }

  LogicalType self_type(const TypeDecl& d) const {
    std::vector<LogicalType> args;
    for (const auto& p : d.params) args.push_back(LogicalType::var(p.name));
    return LogicalType::named(d.name, std::move(args));
  }

  void check_type_decl(const TypeDecl& d) {
    std::set<std::string> names, params;
    for (const auto& p : d.params) params.insert(p.name);
    for (const auto& m : d.models) {
      if (!names.insert(m.name).second)
        error(TypeError::Kind::DuplicateName, m.span,
              "duplicate model field '" + m.name + "' in type '" + d.name + "'");
      std::set<std::string> vars;
      collect_vars(m.type, vars);
      for (const auto& v : vars)
        if (!params.count(v))
          error(TypeError::Kind::UnboundTypeVariable, m.span,
                "type variable " + v + " is not a parameter of type '" + d.name + "'");
    }
    if (d.invariant) {
      scopes_.push_back({{d.invariant->binder, self_type(d)}});
      allow_old_ = false;
      expect(d.invariant->body, LogicalType::boolean());
      scopes_.pop_back();
    }
  }

  void check_logic_decl(const LogicDecl& d) {
    if (!d.body) return;
    std::map<std::string, LogicalType> scope;
    for (const auto& p : d.params) scope[p.name] = normalize(p.type);
    scopes_.push_back(std::move(scope));
    allow_old_ = false;
    header_params_.clear();
    expect(*d.body, d.is_predicate ? LogicalType::boolean() : normalize(*d.result));
    scopes_.pop_back();
  }

  static bool arg_matches(const HeaderArg& a, const Param& p) {
    switch (a.kind) {
      case HeaderArg::Kind::Unit: return p.label == ParamLabel::None && p.type.kind == K::Unit;
      case HeaderArg::Kind::Optional: return p.label == ParamLabel::Optional;
      case HeaderArg::Kind::Labeled: return p.label == ParamLabel::Labeled;
      case HeaderArg::Kind::Named: return p.label != ParamLabel::Optional;
    }
    return false;
  }

  void check_val_decl(const ValDecl& d) {
    if (!d.contract) return;
    const Contract& c = *d.contract;
    const ContractHeader& h = c.header;
    if (h.function != d.name)
      error(TypeError::Kind::UnknownSymbol, c.span,
            "contract header names '" + h.function + "' but annotates '" + d.name + "'");

    std::map<std::string, LogicalType> scope;
    header_params_.clear();
    auto bind = [&](const std::string& name, const LogicalType& t) {
      if (!scope.emplace(name, normalize(t)).second)
        error(TypeError::Kind::DuplicateName, c.span, "duplicate name '" + name + "' in contract header");
    };
    if (h.args.size() != d.params.size()) {
      error(TypeError::Kind::ArityMismatch, c.span,
            "contract header of '" + d.name + "' has " + std::to_string(h.args.size()) +
                " argument(s) but the declaration has " + std::to_string(d.params.size()));
    }
    for (std::size_t i = 0; i < std::min(h.args.size(), d.params.size()); ++i) {
      const auto& a = h.args[i];
      if (!arg_matches(a, d.params[i]))
        error(TypeError::Kind::ArityMismatch, c.span,
              "contract header argument " + std::to_string(i + 1) + " of '" + d.name +
                  "' does not match the parameter kind");
      if (a.kind != HeaderArg::Kind::Unit) {
        bind(a.name, d.params[i].type);
        header_params_[a.name] = normalize(d.params[i].type);
      }
    }
    if (h.results.size() == 1) {
      bind(h.results[0], d.result);
    } else if (h.results.size() > 1) {
      if (d.result.kind != K::Tuple || d.result.args.size() != h.results.size()) {
        error(TypeError::Kind::ArityMismatch, c.span,
              "contract header binds " + std::to_string(h.results.size()) +
                  " results but the result type is " + d.result.to_string());
      } else {
        for (std::size_t i = 0; i < h.results.size(); ++i) bind(h.results[i], d.result.args[i]);
      }
    }

    scopes_.push_back(scope);
    allow_old_ = false;
    for (const auto& t : c.preconditions) expect(t, LogicalType::boolean());
    allow_old_ = true;
    for (const auto& t : c.postconditions) expect(t, LogicalType::boolean());
    for (const auto& r : c.raises) {
      bool known = std::any_of(spec_.exn_decls.begin(), spec_.exn_decls.end(),
                               [&](const ExnDecl& e) { return e.name == r.exception; });
      if (!known)
        error(TypeError::Kind::UnknownSymbol, r.span, "unknown exception '" + r.exception + "'");
      if (r.condition) expect(*r.condition, LogicalType::boolean());
    }
    allow_old_ = false;
    scopes_.pop_back();

    for (const auto& m : c.modifies) check_modifies(m);
  }

  const TypeDecl* find_decl(const std::string& name) const {
    if (const TypeDecl* d = spec_.find_type(name)) return d;
    return spec_.find_type(base_name(name));
  }

  void check_modifies(const ModifiesTarget& m) {
    auto it = header_params_.find(m.name);
    if (it == header_params_.end()) {
      error(TypeError::Kind::InvalidModifies, m.span, "modifies target '" + m.name + "' is not a parameter");
      return;
    }
    const LogicalType& t = it->second;
    const TypeDecl* d = t.kind == K::Named ? find_decl(t.name) : nullptr;
    if (!d || !d->has_mutable_model()) {
      error(TypeError::Kind::InvalidModifies, m.span,
            "modifies target '" + m.name + "' has no mutable model (type " + t.to_string() + ")");
      return;
    }
    if (m.field) {
      const ModelField* f = d->find_model(*m.field);
      if (!f || !f->is_mutable)
        error(TypeError::Kind::InvalidModifies, m.span,
              "'" + *m.field + "' is not a mutable model field of type '" + d->name + "'");
    }
  }

  // ---- terms ---------------------------------------------------------

  bool lookup_local(const std::string& name, LogicalType& out) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        out = f->second;
        return true;
      }
    }
    return false;
  }

  LogicalType symbol_type(const Term& t, const std::string& name) {
    LogicalType local;
    if (lookup_local(name, local)) return local;
    if (const LogicDecl* d = spec_.find_logic(name)) {
      LogicalType ty = d->is_predicate ? LogicalType::boolean() : normalize(*d->result);
      for (auto it = d->params.rbegin(); it != d->params.rend(); ++it)
        ty = LogicalType::arrow(normalize(it->type), std::move(ty));
      return instantiate(ty);
    }
    auto& lib = stdlib_types();
    auto it = lib.find(name);
    if (it != lib.end()) return instantiate(it->second);
    error(TypeError::Kind::UnknownSymbol, t.span, "unknown symbol '" + name + "'");
    return fresh();
  }

  bool mentions_state(const TermPtr& t) const {
    bool found = false;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& u) {
      if (found || !u) return;
      std::visit(
          [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Var>) {
              if (header_params_.count(n.name)) found = true;
            } else if constexpr (std::is_same_v<N, node::Field>) {
              for (const auto& d : spec_.type_decls)
                if (const ModelField* m = d.find_model(n.field); m && m->is_mutable) found = true;
              walk(n.record);
            } else {
              for_each_child(n, walk);
            }
          },
          u->node);
    };
    walk(t);
    return found;
  }

  template <class N, class F>
  static void for_each_child(const N& n, F&& f) {
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
  }

  LogicalType infer(const TermPtr& t) {
    LogicalType ty = infer_node(*t);
    raw_types_[t.get()] = ty;
    return ty;
  }

  LogicalType infer_field(const Term& t, const node::Field& n) {
    LogicalType rt = resolve(infer(n.record));
    const TypeDecl* decl = nullptr;
    if (rt.kind == K::Named) {
      decl = find_decl(rt.name);
      if (!decl) {
        error(TypeError::Kind::UnknownSymbol, t.span,
              "type " + rt.to_string() + " has no model fields");
        return fresh();
      }
    } else if (is_meta(rt)) {
      std::vector<const TypeDecl*> owners;
      for (const auto& d : spec_.type_decls)
        if (d.find_model(n.field)) owners.push_back(&d);
      if (owners.size() != 1) {
        error(TypeError::Kind::UnknownSymbol, t.span,
              "cannot resolve model field '" + n.field + "'");
        return fresh();
      }
      decl = owners.front();
      std::vector<LogicalType> args;
      for (std::size_t i = 0; i < decl->params.size(); ++i) args.push_back(fresh());
      unify(rt, LogicalType::named(decl->name, args));
      rt = resolve(rt);
    } else {
      error(TypeError::Kind::Mismatch, t.span,
            "model access '." + n.field + "' on a value of type " + zonk(rt).to_string());
      return fresh();
    }
    const ModelField* m = decl->find_model(n.field);
    if (!m) {
      error(TypeError::Kind::UnknownSymbol, t.span,
            "type '" + decl->name + "' has no model field '" + n.field + "'");
      return fresh();
    }
    std::map<std::string, LogicalType> inst;
    for (std::size_t i = 0; i < decl->params.size() && i < rt.args.size(); ++i)
      inst[decl->params[i].name] = rt.args[i];
    return substitute(normalize(m->type), inst);
  }

  LogicalType infer_apply(const node::Apply& n) {
    LogicalType fty = infer(n.fn);
    for (const auto& arg : n.args) {
      LogicalType at = infer(arg);
      LogicalType f = resolve(fty);
      if (f.kind == K::Arrow) {
        if (!unify(f.args[0], at)) mismatch(arg->span, f.args[0], at, "argument type mismatch");
        fty = f.args[1];
      } else if (is_meta(f)) {
        LogicalType res = fresh();
        unify(f, LogicalType::arrow(at, res));
        fty = res;
      } else {
        error(TypeError::Kind::ArityMismatch, arg->span,
              "too many arguments: a value of type " + zonk(f).to_string() + " is not a function");
        return fresh();
      }
    }
    return fty;
  }

  void compare_pair(const Span& span, RelOp op, const LogicalType& a, const LogicalType& b) {
    if (op == RelOp::Eq || op == RelOp::Neq) {
      if (!unify(a, b)) mismatch(span, a, b, "operands of '" + std::string(to_string(op)) + "' differ");
    } else {
      if (!unify(a, LogicalType::integer())) mismatch(span, LogicalType::integer(), a);
      if (!unify(b, LogicalType::integer())) mismatch(span, LogicalType::integer(), b);
    }
  }

  struct Snapshot {
    std::unordered_map<std::string, LogicalType> subst;
    std::size_t errors;
  };
  Snapshot save() const { return {subst_, errors_.size()}; }
  void restore(const Snapshot& s) {
    subst_ = s.subst;
    errors_.resize(s.errors);
  }

  LogicalType infer_chain(const Term& t, const node::Chain& n) {
    Snapshot before = save();
    auto conjunction = [&] {
      std::vector<LogicalType> tys;
      for (const auto& o : n.operands) tys.push_back(infer(o));
      for (std::size_t i = 0; i < n.ops.size(); ++i)
        compare_pair(n.operands[i + 1]->span, n.ops[i], tys[i], tys[i + 1]);
    };
    conjunction();
    chain_modes_[&t] = ChainMode::Conjunction;
    if (errors_.size() == before.errors) return LogicalType::boolean();

    bool all_eq = n.ops.size() >= 2 && std::all_of(n.ops.begin(), n.ops.end(), [](RelOp op) {
                    return op == RelOp::Eq || op == RelOp::Neq;
                  });
    if (!all_eq) return LogicalType::boolean();
    restore(before);
    std::vector<LogicalType> tys;
    for (const auto& o : n.operands) tys.push_back(infer(o));
    LogicalType rhs = tys.back();
    for (std::size_t i = n.ops.size(); i-- > 0;) {
      compare_pair(n.operands[i + 1]->span, n.ops[i], tys[i], rhs);
      rhs = LogicalType::boolean();
    }
    if (errors_.size() == before.errors) {
      chain_modes_[&t] = ChainMode::RightNested;
      return LogicalType::boolean();
    }
    restore(before);
    conjunction();
    chain_modes_[&t] = ChainMode::Conjunction;
    return LogicalType::boolean();
  }

  LogicalType infer_node(const Term& t) {
    return std::visit(
        [&](const auto& n) -> LogicalType {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, node::IntLit>) {
            return LogicalType::integer();
          } else if constexpr (std::is_same_v<N, node::BoolLit>) {
            return LogicalType::boolean();
          } else if constexpr (std::is_same_v<N, node::UnitLit>) {
            return LogicalType::unit();
          } else if constexpr (std::is_same_v<N, node::Var>) {
            return symbol_type(t, n.name);
          } else if constexpr (std::is_same_v<N, node::Tuple>) {
            std::vector<LogicalType> items;
            for (const auto& i : n.items) items.push_back(infer(i));
            return LogicalType::tuple(std::move(items));
          } else if constexpr (std::is_same_v<N, node::ListLit>) {
            LogicalType elem = fresh();
            for (const auto& i : n.items) expect(i, elem);
            return LogicalType::list(elem);
          } else if constexpr (std::is_same_v<N, node::Binary>) {
            switch (n.op) {
              case BinOp::Implies:
              case BinOp::Iff:
              case BinOp::Or:
              case BinOp::And:
                expect(n.lhs, LogicalType::boolean());
                expect(n.rhs, LogicalType::boolean());
                return LogicalType::boolean();
              case BinOp::Cons: {
                LogicalType elem = infer(n.lhs);
                expect(n.rhs, LogicalType::list(elem));
                return LogicalType::list(elem);
              }
              case BinOp::Append: {
                LogicalType l = LogicalType::list(fresh());
                expect(n.lhs, l);
                expect(n.rhs, l);
                return l;
              }
              default:
                expect(n.lhs, LogicalType::integer());
                expect(n.rhs, LogicalType::integer());
                return LogicalType::integer();
            }
          } else if constexpr (std::is_same_v<N, node::Chain>) {
            return infer_chain(t, n);
          } else if constexpr (std::is_same_v<N, node::Not>) {
            expect(n.body, LogicalType::boolean());
            return LogicalType::boolean();
          } else if constexpr (std::is_same_v<N, node::Neg>) {
            expect(n.body, LogicalType::integer());
            return LogicalType::integer();
          } else if constexpr (std::is_same_v<N, node::If>) {
            expect(n.cond, LogicalType::boolean());
            LogicalType a = infer(n.then_branch);
            expect(n.else_branch, a);
            return a;
          } else if constexpr (std::is_same_v<N, node::Let>) {
            LogicalType b = infer(n.bound);
            scopes_.push_back({{n.name, b}});
            LogicalType r = infer(n.body);
            scopes_.pop_back();
            return r;
          } else if constexpr (std::is_same_v<N, node::Apply>) {
            return infer_apply(n);
          } else if constexpr (std::is_same_v<N, node::Field>) {
            return infer_field(t, n);
          } else if constexpr (std::is_same_v<N, node::Index>) {
            LogicalType elem = fresh();
            expect(n.seq, LogicalType::list(elem));
            expect(n.index, LogicalType::integer());
            return elem;
          } else if constexpr (std::is_same_v<N, node::Old>) {
            if (!allow_old_)
              error(TypeError::Kind::OldOutsidePostcondition, t.span,
                    "'old' is only allowed in ensures and raises clauses");
            else if (!mentions_state(n.body))
              error(TypeError::Kind::InvalidOld, t.span,
                    "'old' applied to a term that mentions no mutable model or parameter");
            return infer(n.body);
          } else {
            static_assert(std::is_same_v<N, node::Quantifier>);
            std::map<std::string, LogicalType> scope;
            std::vector<LogicalType> tys;
            for (const auto& b : n.binders) {
              LogicalType bt = b.type ? normalize(*b.type) : fresh();
              scope[b.name] = bt;
              tys.push_back(bt);
            }
            raw_binders_[&t] = tys;
            scopes_.push_back(std::move(scope));
            expect(n.body, LogicalType::boolean());
            scopes_.pop_back();
            return LogicalType::boolean();
          }
        },
        t.node);
  }

  const SpecInterface& spec_;
  std::vector<TypeError> errors_;
  std::unordered_map<std::string, LogicalType> subst_;
  int next_meta_ = 0;
  std::unordered_map<const Term*, LogicalType> raw_types_;
  std::unordered_map<const Term*, std::vector<LogicalType>> raw_binders_;
  std::unordered_map<const Term*, ChainMode> chain_modes_;
  std::vector<std::map<std::string, LogicalType>> scopes_;
  std::map<std::string, LogicalType> header_params_;
  bool allow_old_ = false;
};

}  // namespace

TypedSpec typecheck(const SpecInterface& spec) {
  TypedSpec out;
  out.spec = spec;
  // Check the copy so that recorded term pointers refer to the stored spec.
  // Terms are shared, so the pointers are identical either way.
  auto errors = Checker(out.spec).run(&out);
  if (!errors.empty()) throw TypeCheckFailure(std::move(errors));
  return out;
}

std::vector<TypeError> type_errors(const SpecInterface& spec) { return Checker(spec).run(nullptr); }

// ---- executability -------------------------------------------------------

const char* to_string(NonExecReason reason) {
  switch (reason) {
    case NonExecReason::UnboundedExistential: return "unbounded-existential";
    case NonExecReason::UnboundedUniversal: return "unbounded-universal";
    case NonExecReason::NonExecutableMapType: return "non-executable-map-type";
    case NonExecReason::AbstractPredicate: return "abstract-predicate";
  }
  return "?";
}

namespace {

bool mentions_any(const TermPtr& t, const std::set<std::string>& names) {
  if (!t) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, node::Var>) {
          return names.count(n.name) > 0;
        } else if constexpr (std::is_same_v<N, node::Tuple> || std::is_same_v<N, node::ListLit>) {
          return std::any_of(n.items.begin(), n.items.end(),
                             [&](const TermPtr& i) { return mentions_any(i, names); });
        } else if constexpr (std::is_same_v<N, node::Binary>) {
          return mentions_any(n.lhs, names) || mentions_any(n.rhs, names);
        } else if constexpr (std::is_same_v<N, node::Chain>) {
          return std::any_of(n.operands.begin(), n.operands.end(),
                             [&](const TermPtr& i) { return mentions_any(i, names); });
        } else if constexpr (std::is_same_v<N, node::Not> || std::is_same_v<N, node::Neg> ||
                             std::is_same_v<N, node::Old>) {
          return mentions_any(n.body, names);
        } else if constexpr (std::is_same_v<N, node::If>) {
          return mentions_any(n.cond, names) || mentions_any(n.then_branch, names) ||
                 mentions_any(n.else_branch, names);
        } else if constexpr (std::is_same_v<N, node::Let>) {
          if (mentions_any(n.bound, names)) return true;
          std::set<std::string> inner = names;
          inner.erase(n.name);
          return mentions_any(n.body, inner);
        } else if constexpr (std::is_same_v<N, node::Apply>) {
          return mentions_any(n.fn, names) ||
                 std::any_of(n.args.begin(), n.args.end(),
                             [&](const TermPtr& i) { return mentions_any(i, names); });
        } else if constexpr (std::is_same_v<N, node::Field>) {
          return mentions_any(n.record, names);
        } else if constexpr (std::is_same_v<N, node::Index>) {
          return mentions_any(n.seq, names) || mentions_any(n.index, names);
        } else if constexpr (std::is_same_v<N, node::Quantifier>) {
          std::set<std::string> inner = names;
          for (const auto& b : n.binders) inner.erase(b.name);
          return mentions_any(n.body, inner);
        } else {
          return false;
        }
      },
      t->node);
}

bool is_var(const TermPtr& t, const std::string& name) {
  auto* v = std::get_if<node::Var>(&t->node);
  return v && v->name == name;
}

void flatten_and(const TermPtr& t, std::vector<TermPtr>& out) {
  if (auto* b = std::get_if<node::Binary>(&t->node); b && b->op == BinOp::And) {
    flatten_and(b->lhs, out);
    flatten_and(b->rhs, out);
  } else {
    out.push_back(t);
  }
}

std::optional<BinderDomain> match_guard(const TermPtr& g, const std::string& x,
                                        const std::set<std::string>& forbidden) {
  static const std::set<std::string> kMem = {"List.mem", "Seq.mem", "Fset.mem", "mem"};
  if (auto* a = std::get_if<node::Apply>(&g->node)) {
    auto* fn = std::get_if<node::Var>(&a->fn->node);
    if (fn && kMem.count(fn->name) && a->args.size() == 2 && is_var(a->args[0], x) &&
        !mentions_any(a->args[1], forbidden)) {
      BinderDomain d;
      d.kind = BinderDomain::Kind::Member;
      d.collection = a->args[1];
      return d;
    }
  }
  if (auto* c = std::get_if<node::Chain>(&g->node)) {
    auto ordering = [](RelOp op) { return op == RelOp::Lt || op == RelOp::Le; };
    if (c->ops.size() == 2 && ordering(c->ops[0]) && ordering(c->ops[1]) &&
        is_var(c->operands[1], x) && !mentions_any(c->operands[0], forbidden) &&
        !mentions_any(c->operands[2], forbidden)) {
      BinderDomain d;
      d.kind = BinderDomain::Kind::Range;
      d.low = c->operands[0];
      d.high = c->operands[2];
      d.low_strict = c->ops[0] == RelOp::Lt;
      d.high_strict = c->ops[1] == RelOp::Lt;
      return d;
    }
  }
  return std::nullopt;
}

// Guard candidates of a quantifier body, and the remaining parts.
std::vector<TermPtr> guard_candidates(const node::Quantifier& q) {
  std::vector<TermPtr> guards;
  if (q.kind == Quant::Forall) {
    TermPtr body = q.body;
    while (auto* b = std::get_if<node::Binary>(&body->node)) {
      if (b->op != BinOp::Implies) break;
      flatten_and(b->lhs, guards);
      body = b->rhs;
    }
  } else {
    flatten_and(q.body, guards);
  }
  return guards;
}

}  // namespace

std::optional<std::vector<BinderDomain>> plan_quantifier(const node::Quantifier& q) {
  std::vector<TermPtr> guards = guard_candidates(q);
  std::vector<BinderDomain> out;
  for (std::size_t i = 0; i < q.binders.size(); ++i) {
    std::set<std::string> forbidden;
    for (std::size_t j = i; j < q.binders.size(); ++j) forbidden.insert(q.binders[j].name);
    std::optional<BinderDomain> found;
    for (const auto& g : guards) {
      found = match_guard(g, q.binders[i].name, forbidden);
      if (found) break;
    }
    if (!found) return std::nullopt;
    out.push_back(std::move(*found));
  }
  return out;
}

namespace {

class Classifier {
 public:
  explicit Classifier(const TypedSpec& ts) : ts_(ts) {}

  void visit(const TermPtr& t, ExecVerdict& out) {
    if (!t) return;
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, node::Quantifier>) {
            auto bt = ts_.binder_types.find(t.get());
            if (bt != ts_.binder_types.end()) {
              for (const auto& ty : bt->second)
                if (ty.kind == K::Arrow)
                  out.findings.push_back({t->span, NonExecReason::NonExecutableMapType});
            }
            if (!plan_quantifier(n))
              out.findings.push_back({t->span, n.kind == Quant::Forall
                                                   ? NonExecReason::UnboundedUniversal
                                                   : NonExecReason::UnboundedExistential});
            visit(n.body, out);
          } else if constexpr (std::is_same_v<N, node::Var>) {
            symbol(t, n.name, out);
          } else if constexpr (std::is_same_v<N, node::Chain>) {
            for (std::size_t i = 0; i < n.ops.size(); ++i) {
              if (n.ops[i] != RelOp::Eq && n.ops[i] != RelOp::Neq) continue;
              const LogicalType* ty = ts_.type_of(n.operands[i].get());
              if (ty && ty->kind == K::Arrow)
                out.findings.push_back({n.operands[i]->span, NonExecReason::NonExecutableMapType});
            }
            for (const auto& o : n.operands) visit(o, out);
          } else {
            each_child(n, [&](const TermPtr& c) { visit(c, out); });
          }
        },
        t->node);
  }

 private:
  template <class N, class F>
  static void each_child(const N& n, F&& f) {
    if constexpr (std::is_same_v<N, node::Tuple> || std::is_same_v<N, node::ListLit>) {
      for (const auto& i : n.items) f(i);
    } else if constexpr (std::is_same_v<N, node::Binary>) {
      f(n.lhs);
      f(n.rhs);
    } else if constexpr (std::is_same_v<N, node::Not> || std::is_same_v<N, node::Neg> ||
                         std::is_same_v<N, node::Old>) {
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
  }

  // Local names shadow predicates; the typed spec records which symbol a
  // variable resolved to only through its type, so shadowing is rare enough
  // in practice that logic names are simply looked up.
  void symbol(const TermPtr& t, const std::string& name, ExecVerdict& out) {
    const LogicDecl* d = ts_.spec.find_logic(name);
    if (!d) return;
    for (NonExecReason r : predicate_reasons(*d))
      out.findings.push_back({t->span, r});
  }

  std::vector<NonExecReason> predicate_reasons(const LogicDecl& d) {
    auto it = cache_.find(d.name);
    if (it != cache_.end()) return it->second;
    if (!d.body) return cache_[d.name] = {NonExecReason::AbstractPredicate};
    cache_[d.name] = {};  // recursion: assume executable while in progress
    ExecVerdict inner;
    visit(*d.body, inner);
    std::vector<NonExecReason> reasons;
    for (const auto& f : inner.findings)
      if (std::find(reasons.begin(), reasons.end(), f.reason) == reasons.end())
        reasons.push_back(f.reason);
    return cache_[d.name] = reasons;
  }

  const TypedSpec& ts_;
  std::map<std::string, std::vector<NonExecReason>> cache_;
};

}  // namespace

ExecVerdict classify_executable(const TypedSpec& typed, const TermPtr& term) {
  ExecVerdict v;
  Classifier(typed).visit(term, v);
  return v;
}

ExecVerdict classify_executable(const TypedSpec& typed, const ValDecl& val) {
  ExecVerdict v;
  if (!val.contract) return v;
  Classifier c(typed);
  for (const auto& t : val.contract->preconditions) c.visit(t, v);
  for (const auto& t : val.contract->postconditions) c.visit(t, v);
  for (const auto& r : val.contract->raises)
    if (r.condition) c.visit(*r.condition, v);
  return v;
}

// ---- STM compatibility -----------------------------------------------------

const char* to_string(StmReason reason) {
  switch (reason) {
    case StmReason::MultipleSut: return "multiple SUT parameters";
    case StmReason::NoSut: return "no SUT parameter";
    case StmReason::HigherOrderParameter: return "higher-order parameter";
    case StmReason::UngeneratableParameter: return "ungeneratable parameter";
  }
  return "?";
}

bool is_named_type(const LogicalType& type, const std::string& name) {
  return type.kind == K::Named && base_name(type.name) == base_name(name);
}

namespace {
bool generatable(const LogicalType& t) {
  switch (t.kind) {
    case K::Int:
    case K::Bool:
    case K::Unit:
    case K::Var:
      return true;
    case K::Tuple:
    case K::List:
    case K::Seq:
      return std::all_of(t.args.begin(), t.args.end(), generatable);
    default:
      return false;
  }
}
}  // namespace

StmVerdict stm_compatibility(const TypedSpec&, const ValDecl& val, const std::string& sut_type) {
  StmVerdict v;
  int sut_params = 0;
  bool higher_order = false, ungeneratable = false;
  for (const auto& p : val.params) {
    if (is_named_type(p.type, sut_type)) {
      ++sut_params;
    } else if (p.label == ParamLabel::Optional) {
      continue;  // always omitted by the tester
    } else if (p.type.kind == K::Arrow) {
      higher_order = true;
    } else if (!generatable(p.type)) {
      ungeneratable = true;
    }
  }
  if (sut_params > 1) {
    v.reason = StmReason::MultipleSut;
  } else if (higher_order) {
    v.reason = StmReason::HigherOrderParameter;
  } else if (sut_params == 0 && !is_named_type(val.result, sut_type)) {
    v.reason = StmReason::NoSut;
  } else if (ungeneratable) {
    v.reason = StmReason::UngeneratableParameter;
  } else {
    v.constructor = sut_params == 0;
  }
  return v;
}

}  // namespace speclite
