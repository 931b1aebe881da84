#include "speclite/eval.hpp"

#include <algorithm>
#include <set>

namespace speclite {
namespace {

constexpr std::int64_t kMaxRange = 10'000'000;

const std::map<std::string, std::size_t>& stdlib_arity() {
  static const std::map<std::string, std::size_t> arity = {
      {"List.mem", 2},     {"List.map", 2},    {"List.hd", 1},
      {"List.tl", 1},      {"List.rev", 1},    {"List.length", 1},
      {"List.assoc", 2},   {"List.remove_assoc", 2},
      {"fst", 1},          {"snd", 1},         {"Seq.length", 1},
      {"Seq.mem", 2},      {"Fset.mem", 2},    {"mem", 2},
      {"Fset.cardinal", 1}, {"reachable", 3},
  };
  return arity;
}

[[noreturn]] void fail(SpecErrorKind kind, const Span& span, const std::string& detail) {
  throw SpecRuntimeError(kind, span, detail);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, const Span& span) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) fail(SpecErrorKind::Overflow, span, "integer overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b, const Span& span) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) fail(SpecErrorKind::Overflow, span, "integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const Span& span) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) fail(SpecErrorKind::Overflow, span, "integer overflow");
  return r;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalEnv& env) : env_(env), cur_(env.state) {}

  Value eval(const TermPtr& t) {
    return std::visit([&](const auto& n) { return eval_node(*t, n); }, t->node);
  }

  bool eval_bool(const TermPtr& t) {
    Value v = eval(t);
    if (v.kind != Value::Kind::Bool)
      fail(SpecErrorKind::TypeMismatch, t->span, "expected a boolean, got " + v.to_string());
    return v.num != 0;
  }

  std::int64_t eval_int(const TermPtr& t) {
    Value v = eval(t);
    if (v.kind != Value::Kind::Int)
      fail(SpecErrorKind::TypeMismatch, t->span, "expected an integer, got " + v.to_string());
    return v.num;
  }

  Value apply(const Value& fn, std::vector<Value> args, const Span& span) {
    if (args.empty()) return fn;
    if (fn.kind == Value::Kind::Map) {
      const Value* r = fn.lookup(args[0]);
      if (!r) fail(SpecErrorKind::OutOfDomain, span, args[0].to_string() + " is outside the map's domain");
      args.erase(args.begin());
      return apply(*r, std::move(args), span);
    }
    if (fn.kind != Value::Kind::Func)
      fail(SpecErrorKind::TypeMismatch, span, "cannot apply " + fn.to_string());
    std::vector<Value> all = fn.items;
    all.insert(all.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
    std::size_t arity = arity_of(fn.name, span);
    if (all.size() < arity) return Value::func(fn.name, std::move(all));
    std::vector<Value> rest(all.begin() + static_cast<std::ptrdiff_t>(arity), all.end());
    all.resize(arity);
    Value r = call(fn.name, all, span);
    return apply(r, std::move(rest), span);
  }

 private:
  std::size_t arity_of(const std::string& name, const Span& span) const {
    if (const LogicDecl* d = logic(name)) return d->params.size();
    auto it = stdlib_arity().find(name);
    if (it == stdlib_arity().end()) fail(SpecErrorKind::UnknownSymbol, span, name);
    return it->second;
  }

  const LogicDecl* logic(const std::string& name) const {
    return env_.spec ? env_.spec->spec.find_logic(name) : nullptr;
  }

  const Value* lookup_local(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
      if (it->first == name) return &it->second;
    if (!isolated_) {
      auto b = env_.bindings.find(name);
      if (b != env_.bindings.end()) return &b->second;
    }
    return nullptr;
  }

  Value call_logic(const LogicDecl& d, const std::vector<Value>& args, const Span& span) {
    if (!d.body) fail(SpecErrorKind::UnknownSymbol, span, "predicate '" + d.name + "' has no definition");
    auto saved = std::move(locals_);
    bool saved_iso = isolated_;
    locals_.clear();
    isolated_ = true;
    for (std::size_t i = 0; i < d.params.size(); ++i) locals_.emplace_back(d.params[i].name, args[i]);
    Value r = eval(*d.body);
    locals_ = std::move(saved);
    isolated_ = saved_iso;
    return r;
  }

  static const std::vector<Value>& seq_items(const Value& v, const Span& span) {
    if (v.kind != Value::Kind::List && v.kind != Value::Kind::Set)
      fail(SpecErrorKind::TypeMismatch, span, "expected a collection, got " + v.to_string());
    return v.items;
  }

  Value call(const std::string& name, const std::vector<Value>& a, const Span& span) {
    if (const LogicDecl* d = logic(name)) return call_logic(*d, a, span);
    if (name == "List.mem" || name == "Seq.mem" || name == "Fset.mem" || name == "mem") {
      seq_items(a[1], span);
      return Value::boolean(a[1].contains(a[0]));
    }
    if (name == "List.map") {
      std::vector<Value> out;
      for (const auto& x : seq_items(a[1], span)) out.push_back(apply(a[0], {x}, span));
      return Value::list(std::move(out));
    }
    if (name == "List.hd") {
      const auto& l = seq_items(a[0], span);
      if (l.empty()) fail(SpecErrorKind::HeadOfEmpty, span, "List.hd []");
      return l.front();
    }
    if (name == "List.tl") {
      const auto& l = seq_items(a[0], span);
      if (l.empty()) fail(SpecErrorKind::TailOfEmpty, span, "List.tl []");
      return Value::list(std::vector<Value>(l.begin() + 1, l.end()));
    }
    if (name == "List.rev") {
      std::vector<Value> l = seq_items(a[0], span);
      std::reverse(l.begin(), l.end());
      return Value::list(std::move(l));
    }
    if (name == "List.length" || name == "Seq.length" || name == "Fset.cardinal")
      return Value::integer(static_cast<std::int64_t>(seq_items(a[0], span).size()));
    if (name == "List.assoc" || name == "List.remove_assoc") {
      const auto& l = seq_items(a[1], span);
      for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i].kind == Value::Kind::Tuple && l[i].items.size() == 2 && l[i].items[0] == a[0]) {
          if (name == "List.assoc") return l[i].items[1];
          std::vector<Value> out = l;
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
          return Value::list(std::move(out));
        }
      }
      if (name == "List.assoc") fail(SpecErrorKind::NotFound, span, "List.assoc " + a[0].to_string());
      return a[1];
    }
    if (name == "fst" || name == "snd") {
      if (a[0].kind != Value::Kind::Tuple || a[0].items.size() != 2)
        fail(SpecErrorKind::TypeMismatch, span, "expected a pair, got " + a[0].to_string());
      return a[0].items[name == "fst" ? 0 : 1];
    }
    if (name == "reachable") return Value::boolean(reachable(a[0], a[1], a[2], span));
    fail(SpecErrorKind::UnknownSymbol, span, name);
  }

  // Least fixpoint of the successor relation from `from`, over the graph's
  // model fields `dom` and `succ`.
  bool reachable(const Value& from, const Value& to, const Value& g, const Span& span) {
    if (g.kind != Value::Kind::Instance || !cur_)
      fail(SpecErrorKind::TypeMismatch, span, "reachable expects a graph instance");
    const Value* dom = cur_->get(g.num, "dom");
    const Value* succ = cur_->get(g.num, "succ");
    if (!dom || !succ) fail(SpecErrorKind::UnknownField, span, "graph without dom/succ models");
    std::set<Value> reached{from};
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Value& u : dom->items) {
        if (!reached.count(u)) continue;
        const Value* out = succ->lookup(u);
        if (!out) continue;
        for (const Value& w : out->items)
          if (reached.insert(w).second) changed = true;
      }
    }
    return reached.count(to) > 0;
  }

  // ---- nodes ---------------------------------------------------------

  Value eval_node(const Term&, const node::IntLit& n) { return Value::integer(n.value); }
  Value eval_node(const Term&, const node::BoolLit& n) { return Value::boolean(n.value); }
  Value eval_node(const Term&, const node::UnitLit&) { return Value::unit(); }

  Value eval_node(const Term& t, const node::Var& n) {
    if (const Value* v = lookup_local(n.name)) return *v;
    if (const LogicDecl* d = logic(n.name)) {
      if (d->params.empty()) return call_logic(*d, {}, t.span);
      return Value::func(n.name);
    }
    if (stdlib_arity().count(n.name)) return Value::func(n.name);
    fail(SpecErrorKind::UnknownSymbol, t.span, n.name);
  }

  Value eval_node(const Term&, const node::Tuple& n) {
    std::vector<Value> items;
    for (const auto& i : n.items) items.push_back(eval(i));
    return Value::tuple(std::move(items));
  }

  Value eval_node(const Term&, const node::ListLit& n) {
    std::vector<Value> items;
    for (const auto& i : n.items) items.push_back(eval(i));
    return Value::list(std::move(items));
  }

  Value eval_node(const Term& t, const node::Binary& n) {
    switch (n.op) {
      case BinOp::Implies: return Value::boolean(!eval_bool(n.lhs) || eval_bool(n.rhs));
      case BinOp::Iff: return Value::boolean(eval_bool(n.lhs) == eval_bool(n.rhs));
      case BinOp::Or: return Value::boolean(eval_bool(n.lhs) || eval_bool(n.rhs));
      case BinOp::And: return Value::boolean(eval_bool(n.lhs) && eval_bool(n.rhs));
      case BinOp::Cons: {
        Value head = eval(n.lhs);
        Value tail = eval(n.rhs);
        std::vector<Value> items{std::move(head)};
        const auto& rest = seq_items(tail, n.rhs->span);
        items.insert(items.end(), rest.begin(), rest.end());
        return Value::list(std::move(items));
      }
      case BinOp::Append: {
        Value l = eval(n.lhs);
        Value r = eval(n.rhs);
        std::vector<Value> items = seq_items(l, n.lhs->span);
        const auto& rest = seq_items(r, n.rhs->span);
        items.insert(items.end(), rest.begin(), rest.end());
        return Value::list(std::move(items));
      }
      default: break;
    }
    std::int64_t a = eval_int(n.lhs), b = eval_int(n.rhs);
    switch (n.op) {
      case BinOp::Add: return Value::integer(checked_add(a, b, t.span));
      case BinOp::Sub: return Value::integer(checked_sub(a, b, t.span));
      case BinOp::Mul: return Value::integer(checked_mul(a, b, t.span));
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0) fail(SpecErrorKind::DivisionByZero, t.span, "division by zero");
        if (a == INT64_MIN && b == -1) fail(SpecErrorKind::Overflow, t.span, "integer overflow");
        return Value::integer(n.op == BinOp::Div ? a / b : a % b);
      default: break;
    }
    fail(SpecErrorKind::TypeMismatch, t.span, "unsupported operator");
  }

  bool relate(RelOp op, const Value& a, const Value& b, const Span& span) {
    switch (op) {
      case RelOp::Eq: return a == b;
      case RelOp::Neq: return a != b;
      default: break;
    }
    if (a.kind != Value::Kind::Int || b.kind != Value::Kind::Int)
      fail(SpecErrorKind::TypeMismatch, span, "ordering on non-integers");
    switch (op) {
      case RelOp::Lt: return a.num < b.num;
      case RelOp::Le: return a.num <= b.num;
      case RelOp::Gt: return a.num > b.num;
      default: return a.num >= b.num;
    }
  }

  Value eval_node(const Term& t, const node::Chain& n) {
    ChainMode mode = env_.spec ? env_.spec->chain_mode(&t) : ChainMode::Conjunction;
    std::vector<Value> vals;
    for (const auto& o : n.operands) vals.push_back(eval(o));
    if (mode == ChainMode::RightNested) {
      Value rhs = vals.back();
      for (std::size_t i = n.ops.size(); i-- > 0;)
        rhs = Value::boolean(relate(n.ops[i], vals[i], rhs, n.operands[i]->span));
      return rhs;
    }
    for (std::size_t i = 0; i < n.ops.size(); ++i)
      if (!relate(n.ops[i], vals[i], vals[i + 1], n.operands[i + 1]->span)) return Value::boolean(false);
    return Value::boolean(true);
  }

  Value eval_node(const Term&, const node::Not& n) { return Value::boolean(!eval_bool(n.body)); }

  Value eval_node(const Term& t, const node::Neg& n) {
    std::int64_t a = eval_int(n.body);
    return Value::integer(checked_sub(0, a, t.span));
  }

  Value eval_node(const Term&, const node::If& n) {
    return eval_bool(n.cond) ? eval(n.then_branch) : eval(n.else_branch);
  }

  Value eval_node(const Term&, const node::Let& n) {
    Value b = eval(n.bound);
    locals_.emplace_back(n.name, std::move(b));
    Value r = eval(n.body);
    locals_.pop_back();
    return r;
  }

  Value eval_node(const Term& t, const node::Apply& n) {
    Value fn = eval(n.fn);
    std::vector<Value> args;
    for (const auto& a : n.args) args.push_back(eval(a));
    return apply(fn, std::move(args), t.span);
  }

  Value eval_node(const Term& t, const node::Field& n) {
    Value r = eval(n.record);
    if (r.kind != Value::Kind::Instance)
      fail(SpecErrorKind::TypeMismatch, t.span, "model access on " + r.to_string());
    const Value* v = cur_ ? cur_->get(r.num, n.field) : nullptr;
    if (!v) fail(SpecErrorKind::UnknownField, t.span, r.to_string() + "." + n.field);
    return *v;
  }

  Value eval_node(const Term& t, const node::Index& n) {
    Value s = eval(n.seq);
    std::int64_t i = eval_int(n.index);
    const auto& items = seq_items(s, n.seq->span);
    if (i < 0 || i >= static_cast<std::int64_t>(items.size()))
      fail(SpecErrorKind::IndexOutOfBounds, t.span,
           "index " + std::to_string(i) + " of a sequence of length " + std::to_string(items.size()));
    return items[static_cast<std::size_t>(i)];
  }

  Value eval_node(const Term& t, const node::Old& n) {
    if (!env_.old) fail(SpecErrorKind::MissingOld, t.span, "no pre-state snapshot");
    const ModelState* saved = cur_;
    cur_ = env_.old;
    Value r = eval(n.body);
    cur_ = saved;
    return r;
  }

  Value eval_node(const Term& t, const node::Quantifier& n) {
    auto plan = plan_quantifier(n);
    if (!plan) fail(SpecErrorKind::UnboundedQuantifier, t.span, "quantifier without a recognised bound");
    return Value::boolean(quantify(n, *plan, 0));
  }

  bool quantify(const node::Quantifier& q, const std::vector<BinderDomain>& plan, std::size_t i) {
    if (i == plan.size()) return eval_bool(q.body);
    bool universal = q.kind == Quant::Forall;
    auto visit = [&](Value v) {
      locals_.emplace_back(q.binders[i].name, std::move(v));
      bool r = quantify(q, plan, i + 1);
      locals_.pop_back();
      return r;
    };
    const BinderDomain& d = plan[i];
    if (d.kind == BinderDomain::Kind::Member) {
      Value coll = eval(d.collection);
      for (const Value& v : seq_items(coll, d.collection->span)) {
        bool r = visit(v);
        if (universal && !r) return false;
        if (!universal && r) return true;
      }
      return universal;
    }
    std::int64_t lo = eval_int(d.low), hi = eval_int(d.high);
    if (d.low_strict) lo = checked_add(lo, 1, d.low->span);
    if (d.high_strict) hi = checked_sub(hi, 1, d.high->span);
    if (hi < lo) return universal;
    __int128 count = static_cast<__int128>(hi) - lo + 1;
    if (count > kMaxRange)
      fail(SpecErrorKind::UnboundedQuantifier, d.low->span, "integer range too large to enumerate");
    for (__int128 k = 0; k < count; ++k) {
      bool r = visit(Value::integer(static_cast<std::int64_t>(lo + k)));
      if (universal && !r) return false;
      if (!universal && r) return true;
    }
    return universal;
  }

  const EvalEnv& env_;
  const ModelState* cur_;
  std::vector<std::pair<std::string, Value>> locals_;
  bool isolated_ = false;  // inside a predicate body: outer bindings hidden
};

}  // namespace

Value eval(const TermPtr& term, const EvalEnv& env) { return Evaluator(env).eval(term); }

bool eval_bool(const TermPtr& term, const EvalEnv& env) { return Evaluator(env).eval_bool(term); }

Value apply_value(const Value& fn, const std::vector<Value>& args, const EvalEnv& env,
                  const Span& span) {
  return Evaluator(env).apply(fn, args, span);
}

}  // namespace speclite
