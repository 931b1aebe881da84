#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "speclite/rac.hpp"

namespace speclite::corpus {

enum class QueueFault {
  None,
  PushPrepends,     // Q1: push inserts at the head
  PopKeeps,         // Q2: pop returns the head without removing it
  PopEmptyDefault,  // Q3: pop on an empty queue returns 0
  IsEmptyFalse,     // Q4: is_empty always answers false
  PushToRear,       // Q5: push always goes to rear, even on an empty queue
};

enum class HashtblFault {
  None,
  AddAppends,  // H1: add puts the binding at the tail of its bucket
  MemTrue,     // H2: mem always answers true
};

enum class CounterFault {
  None,
  TotalBumpsMisses,  // total silently increments misses
};

std::unique_ptr<ImplAdapter> make_two_list_queue(QueueFault fault = QueueFault::None);
std::unique_ptr<ImplAdapter> make_linked_queue();
std::unique_ptr<ImplAdapter> make_bucket_hashtbl(HashtblFault fault = HashtblFault::None);
std::unique_ptr<ImplAdapter> make_counter(CounterFault fault = CounterFault::None);

struct ImplEntry {
  std::string name;
  std::string description;
  std::string mutant;        // catalog id (Q1, H2, ...), empty for reference code
  std::string default_spec;  // spec file under specs/ the entry is meant for
  std::function<std::unique_ptr<ImplAdapter>()> make;
};

/// Compiled-in implementations selectable by name.
const std::vector<ImplEntry>& registry();
const ImplEntry* find_impl(std::string_view name);

}  // namespace speclite::corpus
