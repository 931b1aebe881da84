#include "speclite/corpus/adapters.hpp"

#include <map>

#include "speclite/corpus/hashtbl.hpp"
#include "speclite/corpus/queues.hpp"
#include "speclite/parser.hpp"

namespace speclite::corpus {
namespace {

std::shared_ptr<const TypedSpec> load_rep(const char* source) {
  return std::make_shared<const TypedSpec>(typecheck(parse_interface(source, "<representation>")));
}

const char* const kTwoListRep = R"(
type 'a rep
(*@ mutable model elems : 'a list
    mutable model front : 'a list
    mutable model rear : 'a list
    with x invariant (x.front = [] -> x.rear = []) &&
                      x.elems = x.front @ List.rev x.rear *)
)";

const char* const kLinkedRep = R"(
type 'a rep
(*@ mutable model elems : 'a list
    mutable model cells : 'a list
    mutable model length : int
    with x invariant x.length = List.length x.cells && x.elems = x.cells *)
)";

// Splits arguments into the instance handles and the remaining values.
struct Args {
  std::vector<std::int64_t> instances;
  std::vector<Value> values;
};

Args split(const std::vector<Value>& args) {
  Args a;
  for (const auto& v : args) {
    if (v.kind == Value::Kind::Instance) a.instances.push_back(v.num);
    else a.values.push_back(v);
  }
  return a;
}

[[noreturn]] void bad_call(const std::string& adapter, const std::string& op) {
  throw std::invalid_argument(adapter + ": malformed call to '" + op + "'");
}

template <class Impl>
class AdapterBase : public ImplAdapter {
 protected:
  Impl* get(std::int64_t id) {
    auto it = live_.find(id);
    return it == live_.end() ? nullptr : &it->second;
  }
  const Impl* get(std::int64_t id) const {
    auto it = live_.find(id);
    return it == live_.end() ? nullptr : &it->second;
  }
  Impl& need(const Args& a, std::size_t i, const std::string& op) {
    if (a.instances.size() <= i) bad_call(name(), op);
    Impl* p = get(a.instances[i]);
    if (!p) bad_call(name(), op);
    return *p;
  }
  Value create(Impl impl) {
    std::int64_t id = next_id_++;
    live_.emplace(id, std::move(impl));
    return Value::instance(id);
  }

  std::map<std::int64_t, Impl> live_;
  std::int64_t next_id_ = 1;
};

// ---- queues ----------------------------------------------------------------

class TwoListAdapter : public AdapterBase<TwoListQueue<Value>> {
 public:
  explicit TwoListAdapter(QueueFault fault) : fault_(fault) {}

  std::string name() const override { return "queue_two_list"; }
  std::string sut_type() const override { return "t"; }
  bool supports(const std::string& op) const override {
    return op == "create" || op == "push" || op == "pop" || op == "is_empty" || op == "transfer";
  }

  CallOutcome invoke(const std::string& op, const std::vector<Value>& args) override {
    Args a = split(args);
    if (op == "create") return CallOutcome::returned(AdapterBase::create({}));
    auto& q = need(a, 0, op);
    if (op == "push") {
      if (a.values.empty()) bad_call(name(), op);
      Value x = a.values[0];
      switch (fault_) {
        case QueueFault::PushPrepends:
          if (q.is_empty()) q.push(x);
          else q.front().push_front(x);
          break;
        case QueueFault::PushToRear: q.rear().push_front(x); break;
        default: q.push(x);
      }
      return CallOutcome::returned(Value::unit());
    }
    if (op == "pop") {
      if (q.is_empty()) {
        if (fault_ == QueueFault::PopEmptyDefault) return CallOutcome::returned(Value::integer(0));
        return CallOutcome::raise("Empty");
      }
      if (fault_ == QueueFault::PopKeeps) return CallOutcome::returned(q.front().front());
      return CallOutcome::returned(q.pop());
    }
    if (op == "is_empty")
      return CallOutcome::returned(Value::boolean(fault_ == QueueFault::IsEmptyFalse ? false : q.is_empty()));
    if (op == "transfer") {
      auto& q2 = need(a, 1, op);
      q2.transfer_from(q);
      return CallOutcome::returned(Value::unit());
    }
    bad_call(name(), op);
  }

  std::optional<std::map<std::string, Value>> observe(std::int64_t id) const override {
    const auto* q = get(id);
    if (!q) return std::nullopt;
    return std::map<std::string, Value>{{"elems", Value::list(q->elems())}};
  }

  std::map<std::string, Value> representation(std::int64_t id) const override {
    const auto* q = get(id);
    if (!q) return {};
    return {{"front", Value::list({q->front().begin(), q->front().end()})},
            {"rear", Value::list({q->rear().begin(), q->rear().end()})}};
  }

  std::shared_ptr<const TypedSpec> representation_spec() const override {
    static const auto rep = load_rep(kTwoListRep);
    return rep;
  }

  std::unique_ptr<ImplAdapter> fresh() const override { return std::make_unique<TwoListAdapter>(fault_); }

 private:
  QueueFault fault_;
};

class LinkedAdapter : public AdapterBase<LinkedQueue<Value>> {
 public:
  std::string name() const override { return "queue_linked"; }
  std::string sut_type() const override { return "t"; }
  bool supports(const std::string& op) const override {
    return op == "create" || op == "push" || op == "pop" || op == "is_empty" || op == "transfer";
  }

  CallOutcome invoke(const std::string& op, const std::vector<Value>& args) override {
    Args a = split(args);
    if (op == "create") return CallOutcome::returned(AdapterBase::create({}));
    auto& q = need(a, 0, op);
    if (op == "push") {
      if (a.values.empty()) bad_call(name(), op);
      q.push(a.values[0]);
      return CallOutcome::returned(Value::unit());
    }
    if (op == "pop") {
      if (q.is_empty()) return CallOutcome::raise("Empty");
      return CallOutcome::returned(q.pop());
    }
    if (op == "is_empty") return CallOutcome::returned(Value::boolean(q.is_empty()));
    if (op == "transfer") {
      need(a, 1, op).transfer_from(q);
      return CallOutcome::returned(Value::unit());
    }
    bad_call(name(), op);
  }

  std::optional<std::map<std::string, Value>> observe(std::int64_t id) const override {
    const auto* q = get(id);
    if (!q) return std::nullopt;
    return std::map<std::string, Value>{{"elems", Value::list(q->elems())}};
  }

  std::map<std::string, Value> representation(std::int64_t id) const override {
    const auto* q = get(id);
    if (!q) return {};
    return {{"cells", Value::list(q->elems())},
            {"length", Value::integer(static_cast<std::int64_t>(q->length()))}};
  }

  std::shared_ptr<const TypedSpec> representation_spec() const override {
    static const auto rep = load_rep(kLinkedRep);
    return rep;
  }

  std::optional<std::string> structural_violation(std::int64_t id) const override {
    const auto* q = get(id);
    return q ? q->shape_error() : std::nullopt;
  }

  std::unique_ptr<ImplAdapter> fresh() const override { return std::make_unique<LinkedAdapter>(); }
};

// ---- hash table ------------------------------------------------------------

using Table = BucketHashtbl<Value, Value, ValueHash>;

class HashtblAdapter : public AdapterBase<Table> {
 public:
  explicit HashtblAdapter(HashtblFault fault) : fault_(fault) {}

  std::string name() const override { return "hashtbl_bucket"; }
  std::string sut_type() const override { return "t"; }
  bool supports(const std::string& op) const override {
    return op == "create" || op == "add" || op == "mem" || op == "find" || op == "remove";
  }

  CallOutcome invoke(const std::string& op, const std::vector<Value>& args) override {
    Args a = split(args);
    if (op == "create") {
      // The optional `random` argument arrives as unit and is ignored.
      std::int64_t size = 16;
      for (const auto& v : a.values)
        if (v.kind == Value::Kind::Int) size = v.num;
      return CallOutcome::returned(AdapterBase::create(Table(size)));
    }
    auto& h = need(a, 0, op);
    if (a.values.empty()) bad_call(name(), op);
    const Value& k = a.values[0];
    if (op == "add") {
      if (a.values.size() < 2) bad_call(name(), op);
      if (fault_ == HashtblFault::AddAppends) {
        h.buckets()[h.bucket_of(k)].push_back(Table::Binding{k, a.values[1], h.next_stamp()});
      } else {
        h.add(k, a.values[1]);
      }
      return CallOutcome::returned(Value::unit());
    }
    if (op == "mem") return CallOutcome::returned(Value::boolean(fault_ == HashtblFault::MemTrue || h.mem(k)));
    if (op == "find") {
      const Value* v = h.find(k);
      if (!v) return CallOutcome::raise("Not_found");
      return CallOutcome::returned(*v);
    }
    if (op == "remove") {
      h.remove(k);
      return CallOutcome::returned(Value::unit());
    }
    bad_call(name(), op);
  }

  std::optional<std::map<std::string, Value>> observe(std::int64_t id) const override {
    const auto* h = get(id);
    if (!h) return std::nullopt;
    std::vector<Value> contents;
    for (auto& [k, v] : h->contents()) contents.push_back(Value::tuple({k, v}));
    return std::map<std::string, Value>{{"contents", Value::list(std::move(contents))}};
  }

  std::optional<std::string> structural_violation(std::int64_t id) const override {
    const auto* h = get(id);
    return h ? h->shape_error() : std::nullopt;
  }

  std::unique_ptr<ImplAdapter> fresh() const override { return std::make_unique<HashtblAdapter>(fault_); }

 private:
  HashtblFault fault_;
};

// ---- counter ---------------------------------------------------------------

struct Counter {
  std::int64_t hits = 0;
  std::int64_t misses = 0;
};

class CounterAdapter : public AdapterBase<Counter> {
 public:
  explicit CounterAdapter(CounterFault fault) : fault_(fault) {}

  std::string name() const override { return fault_ == CounterFault::None ? "counter" : "counter_frame_bug"; }
  std::string sut_type() const override { return "t"; }
  bool supports(const std::string& op) const override {
    return op == "create" || op == "hit" || op == "miss" || op == "total";
  }

  CallOutcome invoke(const std::string& op, const std::vector<Value>& args) override {
    Args a = split(args);
    if (op == "create") return CallOutcome::returned(AdapterBase::create({}));
    auto& c = need(a, 0, op);
    if (op == "hit") ++c.hits;
    else if (op == "miss") ++c.misses;
    else if (op == "total") {
      std::int64_t n = c.hits + c.misses;
      if (fault_ == CounterFault::TotalBumpsMisses) ++c.misses;
      return CallOutcome::returned(Value::integer(n));
    } else {
      bad_call(name(), op);
    }
    return CallOutcome::returned(Value::unit());
  }

  std::optional<std::map<std::string, Value>> observe(std::int64_t id) const override {
    const auto* c = get(id);
    if (!c) return std::nullopt;
    return std::map<std::string, Value>{{"hits", Value::integer(c->hits)},
                                        {"misses", Value::integer(c->misses)}};
  }

  std::unique_ptr<ImplAdapter> fresh() const override { return std::make_unique<CounterAdapter>(fault_); }

 private:
  CounterFault fault_;
};

}  // namespace

std::unique_ptr<ImplAdapter> make_two_list_queue(QueueFault fault) {
  return std::make_unique<TwoListAdapter>(fault);
}
std::unique_ptr<ImplAdapter> make_linked_queue() { return std::make_unique<LinkedAdapter>(); }
std::unique_ptr<ImplAdapter> make_bucket_hashtbl(HashtblFault fault) {
  return std::make_unique<HashtblAdapter>(fault);
}
std::unique_ptr<ImplAdapter> make_counter(CounterFault fault) { return std::make_unique<CounterAdapter>(fault); }

const std::vector<ImplEntry>& registry() {
  static const std::vector<ImplEntry> entries = {
      {"queue_two_list", "two-list queue", "", "queue.mli.spec", [] { return make_two_list_queue(); }},
      {"queue_linked", "linked-cell queue", "", "queue.mli.spec", [] { return make_linked_queue(); }},
      {"hashtbl_bucket", "separate-chaining hash table", "", "hashtbl_ext.mli.spec",
       [] { return make_bucket_hashtbl(); }},
      {"counter", "two-field counter", "", "counter.mli.spec", [] { return make_counter(); }},
      {"counter_frame_bug", "counter whose total bumps misses", "", "counter.mli.spec",
       [] { return make_counter(CounterFault::TotalBumpsMisses); }},
      {"mutant_Q1", "push inserts at the head", "Q1", "queue_ortac.mli.spec",
       [] { return make_two_list_queue(QueueFault::PushPrepends); }},
      {"mutant_Q2", "pop does not remove", "Q2", "queue_ortac.mli.spec",
       [] { return make_two_list_queue(QueueFault::PopKeeps); }},
      {"mutant_Q3", "pop on empty returns 0", "Q3", "queue_ortac.mli.spec",
       [] { return make_two_list_queue(QueueFault::PopEmptyDefault); }},
      {"mutant_Q4", "is_empty always false", "Q4", "queue_ortac.mli.spec",
       [] { return make_two_list_queue(QueueFault::IsEmptyFalse); }},
      {"mutant_Q5", "push always to rear (breaks front = [] -> rear = [])", "Q5", "queue_ortac.mli.spec",
       [] { return make_two_list_queue(QueueFault::PushToRear); }},
      {"mutant_H1", "add appends at the bucket tail", "H1", "hashtbl_ext.mli.spec",
       [] { return make_bucket_hashtbl(HashtblFault::AddAppends); }},
      {"mutant_H2", "mem always true", "H2", "hashtbl.mli.spec",
       [] { return make_bucket_hashtbl(HashtblFault::MemTrue); }},
  };
  return entries;
}

const ImplEntry* find_impl(std::string_view name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace speclite::corpus
