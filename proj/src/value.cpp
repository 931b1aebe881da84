#include "speclite/value.hpp"

#include <algorithm>
#include <functional>

namespace speclite {

Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return {Kind::Set, 0, {}, std::move(items)};
}

Value Value::map(std::vector<std::pair<Value, Value>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Value m{Kind::Map, 0, {}, {}};
  for (auto& [k, v] : entries) {
    if (!m.items.empty() && m.items.back().items[0] == k) {
      m.items.back().items[1] = std::move(v);  // last binding wins
      continue;
    }
    m.items.push_back(tuple({std::move(k), std::move(v)}));
  }
  return m;
}

bool Value::as_bool() const {
  if (kind != Kind::Bool) throw std::logic_error("expected a boolean value, got " + to_string());
  return num != 0;
}

std::int64_t Value::as_int() const {
  if (kind != Kind::Int) throw std::logic_error("expected an integer value, got " + to_string());
  return num;
}

const Value* Value::lookup(const Value& key) const {
  auto it = std::lower_bound(items.begin(), items.end(), key,
                             [](const Value& entry, const Value& k) { return entry.items[0] < k; });
  if (it == items.end() || it->items[0] != key) return nullptr;
  return &it->items[1];
}

bool Value::contains(const Value& item) const {
  if (kind == Kind::Set) return std::binary_search(items.begin(), items.end(), item);
  return std::find(items.begin(), items.end(), item) != items.end();
}

int compare(const Value& a, const Value& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Value::Kind::Unit:
      return 0;
    case Value::Kind::Bool:
    case Value::Kind::Int:
    case Value::Kind::Vertex:
    case Value::Kind::Instance:
      return a.num < b.num ? -1 : a.num > b.num ? 1 : 0;
    case Value::Kind::Exn:
      return a.name.compare(b.name) < 0 ? -1 : a.name == b.name ? 0 : 1;
    case Value::Kind::Func:
      if (a.name != b.name) return a.name < b.name ? -1 : 1;
      [[fallthrough]];
    default: {
      std::size_t n = std::min(a.items.size(), b.items.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.items[i], b.items[i])) return c;
      if (a.items.size() == b.items.size()) return 0;
      return a.items.size() < b.items.size() ? -1 : 1;
    }
  }
}

namespace {
std::string join(const std::vector<Value>& items, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += items[i].to_string();
  }
  return s;
}
}  // namespace

std::string Value::to_string() const {
  switch (kind) {
    case Kind::Unit: return "()";
    case Kind::Bool: return num ? "true" : "false";
    case Kind::Int: return std::to_string(num);
    case Kind::Tuple: return "(" + join(items, ", ") + ")";
    case Kind::List: return "[" + join(items, "; ") + "]";
    case Kind::Set: return "{" + join(items, ", ") + "}";
    case Kind::Map: {
      std::string s = "{";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += items[i].items[0].to_string() + " -> " + items[i].items[1].to_string();
      }
      return s + "}";
    }
    case Kind::Vertex: return "v" + std::to_string(num);
    case Kind::Exn: return name;
    case Kind::Instance: return "#" + std::to_string(num);
    case Kind::Func:
      return items.empty() ? "<" + name + ">" : "<" + name + " " + join(items, " ") + ">";
  }
  return "?";
}

std::size_t hash_value(const Value& v) {
  std::size_t h = std::hash<int>{}(static_cast<int>(v.kind));
  auto mix = [&h](std::size_t x) { h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2); };
  mix(std::hash<std::int64_t>{}(v.num));
  if (!v.name.empty()) mix(std::hash<std::string>{}(v.name));
  for (const auto& i : v.items) mix(hash_value(i));
  return h;
}

const char* to_string(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::Unit: return "unit";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Int: return "int";
    case Value::Kind::Tuple: return "tuple";
    case Value::Kind::List: return "list";
    case Value::Kind::Set: return "set";
    case Value::Kind::Map: return "map";
    case Value::Kind::Vertex: return "vertex";
    case Value::Kind::Exn: return "exn";
    case Value::Kind::Instance: return "instance";
    case Value::Kind::Func: return "function";
  }
  return "?";
}

const Value* ModelState::get(std::int64_t id, const std::string& field) const {
  auto it = instances.find(id);
  if (it == instances.end()) return nullptr;
  auto f = it->second.fields.find(field);
  return f == it->second.fields.end() ? nullptr : &f->second;
}

void ModelState::set(std::int64_t id, const std::string& field, Value v) {
  instances[id].fields[field] = std::move(v);
}

std::string ModelState::dump(std::int64_t id) const {
  auto it = instances.find(id);
  if (it == instances.end()) return "<no instance #" + std::to_string(id) + ">";
  std::string s = "{";
  bool first = true;
  for (const auto& [k, v] : it->second.fields) {
    if (!first) s += "; ";
    first = false;
    s += k + " = " + v.to_string();
  }
  return s + "}";
}

const char* to_string(SpecErrorKind kind) {
  switch (kind) {
    case SpecErrorKind::HeadOfEmpty: return "HeadOfEmpty";
    case SpecErrorKind::TailOfEmpty: return "TailOfEmpty";
    case SpecErrorKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case SpecErrorKind::DivisionByZero: return "DivisionByZero";
    case SpecErrorKind::Overflow: return "Overflow";
    case SpecErrorKind::NotFound: return "NotFound";
    case SpecErrorKind::OutOfDomain: return "OutOfDomain";
    case SpecErrorKind::UnboundedQuantifier: return "UnboundedQuantifier";
    case SpecErrorKind::MissingOld: return "MissingOld";
    case SpecErrorKind::UnknownSymbol: return "UnknownSymbol";
    case SpecErrorKind::UnknownField: return "UnknownField";
    case SpecErrorKind::TypeMismatch: return "TypeMismatch";
    case SpecErrorKind::UndeterminedModel: return "UndeterminedModel";
  }
  return "?";
}

SpecRuntimeError::SpecRuntimeError(SpecErrorKind kind, Span span, const std::string& detail)
    : std::runtime_error(std::string(speclite::to_string(kind)) + " at " + span.to_string() +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind), span_(std::move(span)), detail_(detail) {}

}  // namespace speclite
