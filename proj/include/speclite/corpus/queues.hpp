#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace speclite::corpus {

struct Empty : std::exception {
  const char* what() const noexcept override { return "Empty"; }
};

/// Functional-style queue over two lists: elements are popped from the head
/// of `front` and pushed onto the head of `rear`.
/// Invariant: front = [] -> rear = [], and elems = front @ List.rev rear.
template <class T>
class TwoListQueue {
 public:
  bool is_empty() const { return front_.empty(); }

  void push(T x) {
    if (is_empty()) front_ = {std::move(x)};
    else rear_.push_front(std::move(x));
  }

  T pop() {
    if (front_.empty()) throw Empty{};
    T x = std::move(front_.front());
    front_.pop_front();
    if (front_.empty()) normalize();
    return x;
  }

  /// Moves every element of `other` to the back of this queue.
  void transfer_from(TwoListQueue& other) {
    for (auto& x : other.elems()) push(std::move(x));
    other.front_.clear();
    other.rear_.clear();
  }

  std::vector<T> elems() const {
    std::vector<T> out(front_.begin(), front_.end());
    out.insert(out.end(), rear_.rbegin(), rear_.rend());
    return out;
  }

  std::size_t size() const { return front_.size() + rear_.size(); }

  // Raw access for mutants and representation checks.
  std::deque<T>& front() { return front_; }
  std::deque<T>& rear() { return rear_; }
  const std::deque<T>& front() const { return front_; }
  const std::deque<T>& rear() const { return rear_; }

  void normalize() {
    front_.assign(rear_.rbegin(), rear_.rend());
    rear_.clear();
  }

 private:
  std::deque<T> front_;
  std::deque<T> rear_;
};

/// Mutable queue as a chain of cells with first/last pointers and a length.
template <class T>
class LinkedQueue {
 public:
  struct Cell {
    T content;
    std::unique_ptr<Cell> next;
  };

  LinkedQueue() = default;
  LinkedQueue(const LinkedQueue&) = delete;
  LinkedQueue& operator=(const LinkedQueue&) = delete;
  LinkedQueue(LinkedQueue&&) = default;
  LinkedQueue& operator=(LinkedQueue&&) = default;
  ~LinkedQueue() { clear(); }

  bool is_empty() const { return length_ == 0; }
  std::size_t length() const { return length_; }

  void push(T x) {
    auto cell = std::make_unique<Cell>(Cell{std::move(x), nullptr});
    Cell* raw = cell.get();
    if (last_) last_->next = std::move(cell);
    else first_ = std::move(cell);
    last_ = raw;
    ++length_;
  }

  T pop() {
    if (!first_) throw Empty{};
    T x = std::move(first_->content);
    first_ = std::move(first_->next);
    if (!first_) last_ = nullptr;
    --length_;
    return x;
  }

  void transfer_from(LinkedQueue& other) {
    if (!other.first_) return;
    Cell* other_last = other.last_;
    if (last_) last_->next = std::move(other.first_);
    else first_ = std::move(other.first_);
    last_ = other_last;
    length_ += other.length_;
    other.last_ = nullptr;
    other.length_ = 0;
  }

  std::vector<T> elems() const {
    std::vector<T> out;
    for (const Cell* c = first_.get(); c; c = c->next.get()) out.push_back(c->content);
    return out;
  }

  /// Empty when length, first and last agree with the cell chain.
  std::optional<std::string> shape_error() const {
    std::size_t n = 0;
    const Cell* tail = nullptr;
    for (const Cell* c = first_.get(); c; c = c->next.get()) {
      ++n;
      tail = c;
    }
    if (n != length_) return "length " + std::to_string(length_) + " but " + std::to_string(n) + " cells";
    if (tail != last_) return std::string("last does not point to the final cell");
    return std::nullopt;
  }

  // Raw access for mutants.
  std::unique_ptr<Cell>& first() { return first_; }
  Cell*& last() { return last_; }
  std::size_t& length_ref() { return length_; }

 private:
  void clear() {
    // Iterative, so long chains do not recurse in the destructors.
    while (first_) first_ = std::move(first_->next);
    last_ = nullptr;
    length_ = 0;
  }

  std::unique_ptr<Cell> first_;
  Cell* last_ = nullptr;
  std::size_t length_ = 0;
};

}  // namespace speclite::corpus
