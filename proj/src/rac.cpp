#include "speclite/rac.hpp"

#include <set>

#include "speclite/eval.hpp"
#include "speclite/printer.hpp"

namespace speclite {

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Pass: return "Pass";
    case VerdictKind::PreViolation: return "PreViolation";
    case VerdictKind::PostViolation: return "PostViolation";
    case VerdictKind::ModifiesViolation: return "ModifiesViolation";
    case VerdictKind::RaisesViolation: return "RaisesViolation";
    case VerdictKind::UnexpectedException: return "UnexpectedException";
    case VerdictKind::TypeInvariantViolation: return "TypeInvariantViolation";
    case VerdictKind::SpecRuntimeError: return "SpecRuntimeError";
  }
  return "?";
}

std::string Verdict::summary() const {
  std::string s = to_string(kind);
  switch (kind) {
    case VerdictKind::Pass: break;
    case VerdictKind::PreViolation:
    case VerdictKind::PostViolation: s += " at " + span.to_string() + ": " + clause; break;
    case VerdictKind::ModifiesViolation:
      s += ": field '" + field + "' of #" + std::to_string(instance) + " changed outside the modifies clause";
      break;
    case VerdictKind::RaisesViolation:
      s += ": " + exception + " at " + span.to_string() + ": " + clause;
      break;
    case VerdictKind::UnexpectedException: s += ": " + exception; break;
    case VerdictKind::TypeInvariantViolation:
      s += ": " + type + " #" + std::to_string(instance) + (detail.empty() ? "" : ": " + detail);
      break;
    case VerdictKind::SpecRuntimeError:
      s += std::string(": ") + (error ? speclite::to_string(*error) : "?") + " at " + span.to_string() +
           ": " + detail;
      break;
  }
  return s;
}

void check_alias(const std::vector<Value>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].kind != Value::Kind::Instance) continue;
    for (std::size_t j = i + 1; j < args.size(); ++j) {
      if (args[j].kind == Value::Kind::Instance && args[j].num == args[i].num)
        throw AliasError({i, j}, "arguments " + std::to_string(i) + " and " + std::to_string(j) +
                                     " are the same instance " + args[i].to_string());
    }
  }
}

namespace {

using Bindings = std::map<std::string, Value>;
using FieldSet = std::map<std::int64_t, std::set<std::string>>;

std::string base_name(const std::string& qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

void split_conjuncts(const TermPtr& t, std::vector<TermPtr>& out) {
  if (const auto* b = std::get_if<node::Binary>(&t->node); b && b->op == BinOp::And) {
    split_conjuncts(b->lhs, out);
    split_conjuncts(b->rhs, out);
    return;
  }
  out.push_back(t);
}

// True when `t` reads the current state: an instance variable occurring
// outside `old`.
bool reads_current_state(const TermPtr& t, const Bindings& b) {
  if (std::holds_alternative<node::Old>(t->node)) return false;
  if (const auto* v = std::get_if<node::Var>(&t->node)) {
    auto it = b.find(v->name);
    return it != b.end() && it->second.kind == Value::Kind::Instance;
  }
  bool found = false;
  for_each_child(*t, [&](const TermPtr& c) { found = found || reads_current_state(c, b); });
  return found;
}

struct Assignment {
  std::int64_t id;
  std::string field;
  TermPtr rhs;
};

// `X.f = rhs` with (X, f) modifiable and rhs a function of the pre-state,
// the arguments and the results.
std::optional<Assignment> determinate(const TermPtr& conj, const Bindings& b, const FieldSet& mod) {
  const auto* chain = std::get_if<node::Chain>(&conj->node);
  if (!chain || chain->ops.size() != 1 || chain->ops[0] != RelOp::Eq) return std::nullopt;
  const auto* field = std::get_if<node::Field>(&chain->operands[0]->node);
  if (!field) return std::nullopt;
  const auto* var = std::get_if<node::Var>(&field->record->node);
  if (!var) return std::nullopt;
  auto it = b.find(var->name);
  if (it == b.end() || it->second.kind != Value::Kind::Instance) return std::nullopt;
  auto m = mod.find(it->second.num);
  if (m == mod.end() || !m->second.count(field->field)) return std::nullopt;
  if (reads_current_state(chain->operands[1], b)) return std::nullopt;
  return Assignment{it->second.num, field->field, chain->operands[1]};
}

std::string dump(const ModelState& s, const std::set<std::int64_t>& ids) {
  std::string out;
  for (auto id : ids) {
    if (!s.has(id)) continue;
    if (!out.empty()) out += "; ";
    out += "#" + std::to_string(id) + " " + s.dump(id);
  }
  return out;
}

class Call {
 public:
  Call(const TypedSpec& typed, const ValDecl& val, ImplAdapter& adapter, const ModelState& pre,
       const std::vector<Value>& args)
      : typed_(typed), val_(val), adapter_(adapter), pre_(pre), args_(args) {}

  CallResult run() {
    out_.state = pre_;
    out_.verdict.args = args_;
    for (const auto& a : args_)
      if (a.kind == Value::Kind::Instance) touched_.insert(a.num);
    if (contract()) {
      const auto& hdr = contract()->header.args;
      for (std::size_t i = 0; i < hdr.size() && i < args_.size(); ++i)
        if (hdr[i].kind != HeaderArg::Kind::Unit) bindings_[hdr[i].name] = args_[i];
    }
    try {
      if (!requires_hold()) return finish();
      observe_all(before_);
      CallOutcome o = adapter_.invoke(val_.name, args_);
      ModelState post = pre_;
      bool ok = o.raised ? on_raise(*o.raised, post) : on_return(o.result, post);
      if (o.raised) out_.raised = o.raised;
      else out_.result = o.result;
      if (ok && frame_holds(o.raised.has_value()) && invariants_hold(post)) out_.state = std::move(post);
      if (!out_.verdict.pass()) {
        out_.verdict.old_model = dump(pre_, touched_);
        out_.verdict.new_model = dump(post, touched_);
      }
    } catch (const SpecRuntimeError& e) {
      fail(VerdictKind::SpecRuntimeError, e.span(), {});
      out_.verdict.error = e.kind();
      out_.verdict.detail = e.detail();
    }
    return finish();
  }

 private:
  const Contract* contract() const { return val_.contract ? &*val_.contract : nullptr; }

  CallResult finish() { return std::move(out_); }

  void fail(VerdictKind kind, const Span& span, const TermPtr& clause) {
    out_.verdict.kind = kind;
    out_.verdict.span = span;
    if (clause) out_.verdict.clause = print_term(clause);
  }

  bool requires_hold() {
    if (!contract()) return true;
    EvalEnv env{&typed_, bindings_, &pre_, nullptr};
    for (const auto& r : contract()->preconditions) {
      if (!eval_bool(r, env)) {
        fail(VerdictKind::PreViolation, r->span, r);
        return false;
      }
    }
    return true;
  }

  void observe_all(std::map<std::int64_t, std::optional<std::map<std::string, Value>>>& into) {
    for (const auto& [id, inst] : pre_.instances) into[id] = adapter_.observe(id);
  }

  FieldSet modifiable(const ModelState& post) const {
    FieldSet mod;
    if (!contract()) return mod;
    for (const auto& m : contract()->modifies) {
      auto it = bindings_.find(m.name);
      if (it == bindings_.end() || it->second.kind != Value::Kind::Instance) continue;
      std::int64_t id = it->second.num;
      if (m.field) {
        mod[id].insert(*m.field);
        continue;
      }
      auto inst = post.instances.find(id);
      if (inst == post.instances.end()) continue;
      if (const TypeDecl* d = typed_.spec.find_type(inst->second.type))
        for (const auto& f : d->models)
          if (f.is_mutable) mod[id].insert(f.name);
    }
    return mod;
  }

  // Applies the determinate conjuncts of `clauses` to `post`; returns the
  // fields they set.
  FieldSet apply_updates(const std::vector<TermPtr>& clauses, const FieldSet& mod, ModelState& post) {
    std::vector<Assignment> updates;
    for (const auto& c : clauses) {
      std::vector<TermPtr> conj;
      split_conjuncts(c, conj);
      for (const auto& t : conj)
        if (auto a = determinate(t, bindings_, mod)) updates.push_back(*a);
    }
    EvalEnv env{&typed_, bindings_, &pre_, &pre_};
    std::vector<Value> values;
    for (const auto& u : updates) values.push_back(eval(u.rhs, env));
    FieldSet set;
    for (std::size_t i = 0; i < updates.size(); ++i) {
      post.set(updates[i].id, updates[i].field, values[i]);
      set[updates[i].id].insert(updates[i].field);
    }
    return set;
  }

  bool on_return(const Value& result, ModelState& post) {
    const Contract* c = contract();
    if (c) {
      const auto& names = c->header.results;
      if (names.size() == 1) {
        bindings_[names[0]] = result;
      } else if (names.size() > 1 && result.kind == Value::Kind::Tuple) {
        for (std::size_t i = 0; i < names.size() && i < result.items.size(); ++i)
          bindings_[names[i]] = result.items[i];
      }
    }
    FieldSet mod = modifiable(post);
    if (result.kind == Value::Kind::Instance && !pre_.has(result.num)) {
      std::string type = base_name(val_.result.name);
      post.instances[result.num].type = type;
      touched_.insert(result.num);
      if (const TypeDecl* d = typed_.spec.find_type(type))
        for (const auto& f : d->models) mod[result.num].insert(f.name);
    }
    FieldSet set = c ? apply_updates(c->postconditions, mod, post) : FieldSet{};
    for (const auto& [id, fields] : mod) {
      std::optional<std::map<std::string, Value>> obs;
      bool observed = false;
      for (const auto& f : fields) {
        if (set[id].count(f)) continue;
        if (!observed) {
          obs = adapter_.observe(id);
          observed = true;
        }
        auto v = obs ? obs->find(f) : decltype(obs->find(f)){};
        if (!obs || v == obs->end())
          throw SpecRuntimeError(SpecErrorKind::UndeterminedModel, c ? c->span : val_.span,
                                 "no clause determines #" + std::to_string(id) + "." + f +
                                     " and the implementation does not expose it");
        post.set(id, f, v->second);
      }
    }
    if (!c) return true;
    EvalEnv env{&typed_, bindings_, &post, &pre_};
    for (const auto& e : c->postconditions) {
      if (!eval_bool(e, env)) {
        fail(VerdictKind::PostViolation, e->span, e);
        out_.verdict.result = result;
        return false;
      }
    }
    return true;
  }

  bool on_raise(const std::string& tag, ModelState& post) {
    out_.verdict.exception = tag;
    std::vector<const RaisesClause*> matching;
    if (const Contract* c = contract())
      for (const auto& r : c->raises)
        if (base_name(r.exception) == base_name(tag)) matching.push_back(&r);
    if (matching.empty()) {
      fail(VerdictKind::UnexpectedException, val_.span, {});
      return false;
    }
    std::vector<TermPtr> conds;
    for (const auto* r : matching)
      if (r->condition) conds.push_back(*r->condition);
    apply_updates(conds, modifiable(post), post);
    EvalEnv env{&typed_, bindings_, &post, &pre_};
    for (const auto* r : matching) {
      if (r->condition && !eval_bool(*r->condition, env)) {
        fail(VerdictKind::RaisesViolation, r->span, *r->condition);
        return false;
      }
    }
    return true;
  }

  // Observed fields outside the frame keep their values. On an exceptional
  // return the model is rolled back, so nothing may change.
  bool frame_holds(bool raised) {
    FieldSet mod = raised ? FieldSet{} : modifiable(pre_);
    for (const auto& [id, obs] : before_) {
      if (!obs) continue;
      auto now = adapter_.observe(id);
      for (const auto& [f, v] : *obs) {
        if (mod[id].count(f)) continue;
        const Value* after = nullptr;
        if (now) {
          auto it = now->find(f);
          if (it != now->end()) after = &it->second;
        }
        if (!after || *after != v) {
          fail(VerdictKind::ModifiesViolation, val_.span, {});
          out_.verdict.field = f;
          out_.verdict.instance = id;
          out_.verdict.detail = v.to_string() + " became " + (after ? after->to_string() : "<missing>");
          return false;
        }
      }
    }
    return true;
  }

  bool invariants_hold(const ModelState& post) {
    auto rep = adapter_.representation_spec();
    for (auto id : touched_) {
      auto inst = post.instances.find(id);
      if (inst == post.instances.end()) continue;
      const std::string& type = inst->second.type;
      auto violated = [&](const std::string& detail) {
        fail(VerdictKind::TypeInvariantViolation, val_.span, {});
        out_.verdict.type = type;
        out_.verdict.instance = id;
        out_.verdict.detail = detail;
        return false;
      };
      const TypeDecl* d = typed_.spec.find_type(type);
      if (d && d->invariant) {
        EvalEnv env{&typed_, {{d->invariant->binder, Value::instance(id)}}, &post, nullptr};
        if (!eval_bool(d->invariant->body, env)) {
          out_.verdict.clause = print_term(d->invariant->body);
          out_.verdict.span = d->invariant->body->span;
          return violated("type invariant");
        }
      }
      if (rep && !rep->spec.type_decls.empty() && rep->spec.type_decls[0].invariant) {
        const TypeInvariant& inv = *rep->spec.type_decls[0].invariant;
        ModelState joint;
        joint.instances[id] = inst->second;
        for (auto& [f, v] : adapter_.representation(id)) joint.set(id, f, v);
        EvalEnv env{rep.get(), {{inv.binder, Value::instance(id)}}, &joint, nullptr};
        if (!eval_bool(inv.body, env)) {
          std::string detail = "representation invariant: " + joint.dump(id);
          out_.verdict.clause = print_term(inv.body);
          return violated(detail);
        }
      }
      if (auto s = adapter_.structural_violation(id)) return violated(*s);
    }
    return true;
  }

  const TypedSpec& typed_;
  const ValDecl& val_;
  ImplAdapter& adapter_;
  const ModelState& pre_;
  const std::vector<Value>& args_;
  Bindings bindings_;
  std::set<std::int64_t> touched_;
  std::map<std::int64_t, std::optional<std::map<std::string, Value>>> before_;
  CallResult out_;
};

}  // namespace

CallResult check_call(const TypedSpec& typed, const ValDecl& val, ImplAdapter& adapter,
                      const ModelState& state, const std::vector<Value>& args) {
  check_alias(args);
  return Call(typed, val, adapter, state, args).run();
}

}  // namespace speclite
