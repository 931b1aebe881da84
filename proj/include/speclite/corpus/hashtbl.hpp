#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace speclite::corpus {

/// Separate-chaining hash table that keeps every binding, as the standard
/// OCaml table does. Each bucket lists its bindings most recent first; the
/// model `contents` lists all bindings most recent first.
template <class K, class V, class Hash = std::hash<K>>
class BucketHashtbl {
 public:
  struct Binding {
    K key;
    V value;
    std::uint64_t stamp;  // global insertion order
  };

  static constexpr std::int64_t kMaxBuckets = 1 << 16;

  explicit BucketHashtbl(std::int64_t size)
      : buckets_(static_cast<std::size_t>(std::clamp<std::int64_t>(size, 1, kMaxBuckets))) {}

  void add(K k, V v) {
    auto& b = buckets_[bucket_of(k)];
    b.insert(b.begin(), Binding{std::move(k), std::move(v), ++clock_});
  }

  bool mem(const K& k) const { return find(k) != nullptr; }

  /// Most recent binding of k.
  const V* find(const K& k) const {
    for (const auto& e : buckets_[bucket_of(k)])
      if (e.key == k) return &e.value;
    return nullptr;
  }

  /// Removes the most recent binding of k, uncovering the previous one.
  void remove(const K& k) {
    auto& b = buckets_[bucket_of(k)];
    auto it = std::find_if(b.begin(), b.end(), [&](const Binding& e) { return e.key == k; });
    if (it != b.end()) b.erase(it);
  }

  std::vector<std::pair<K, V>> contents() const {
    std::vector<const Binding*> all;
    for (const auto& b : buckets_)
      for (const auto& e : b) all.push_back(&e);
    std::sort(all.begin(), all.end(), [](const Binding* a, const Binding* b) { return a->stamp > b->stamp; });
    std::vector<std::pair<K, V>> out;
    for (const Binding* e : all) out.emplace_back(e->key, e->value);
    return out;
  }

  std::size_t bucket_of(const K& k) const { return Hash{}(k) % buckets_.size(); }
  std::size_t bucket_count() const { return buckets_.size(); }

  /// Empty when every binding sits in its key's bucket and buckets are
  /// ordered most recent first.
  std::optional<std::string> shape_error() const {
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
      const auto& b = buckets_[i];
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (bucket_of(b[j].key) != i) return "binding in bucket " + std::to_string(i) + " belongs elsewhere";
        if (j > 0 && b[j - 1].stamp < b[j].stamp)
          return "bucket " + std::to_string(i) + " is not ordered most recent first";
      }
    }
    return std::nullopt;
  }

  // Raw access for mutants.
  std::vector<std::vector<Binding>>& buckets() { return buckets_; }
  std::uint64_t next_stamp() { return ++clock_; }

 private:
  std::vector<std::vector<Binding>> buckets_;
  std::uint64_t clock_ = 0;
};

}  // namespace speclite::corpus
