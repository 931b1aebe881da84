#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "speclite/rac.hpp"
#include "speclite/rng.hpp"

namespace speclite {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  std::uint64_t seed = 0;
  int trace_count = 100;
  int max_trace_len = 20;  // commands per trace, constructor included
  std::int64_t int_min = -100;
  std::int64_t int_max = 100;
  /// Instantiations of the SUT type's parameters, in order ('a, 'b, ...).
  std::vector<LogicalType> type_args = {LogicalType::integer(), LogicalType::boolean()};
  std::map<std::string, double> weights;  // per operation; missing means 1
  bool multiple_slots = false;            // allow constructors after the first command
  int jobs = 1;                           // traces run concurrently
};

/// One call. Instance values in `args` name SUT slots, not live instances.
struct Command {
  std::string op;
  std::vector<Value> args;
  int creates = -1;  // slot created by a constructor command

  bool operator==(const Command&) const = default;
};

using Trace = std::vector<Command>;

std::string to_string(const Command& c);
std::string to_string(const Trace& t);

/// Operations of the spec the tester may call, split by role.
struct StmPlan {
  std::string sut_type;
  std::vector<const ValDecl*> constructors;
  std::vector<const ValDecl*> operations;
  std::vector<std::pair<const ValDecl*, StmVerdict>> rejected;
  std::vector<const ValDecl*> unsupported;  // compatible, but missing from the adapter
};

/// Classifies every declaration against the adapter. Throws ConfigError when
/// no compatible constructor is available.
StmPlan plan_stm(const TypedSpec& typed, const ImplAdapter& adapter);

Trace generate_trace(const TypedSpec& typed, const StmPlan& plan, const GenConfig& config, std::uint64_t index);

/// Starts with a constructor and uses every slot only after the command
/// creating it.
bool well_formed(const Trace& trace);

struct TraceRun {
  std::optional<std::size_t> failed_at;  // command index
  Verdict verdict;                       // of the failing command
  ModelState state;                      // final model (before the failing command)
  std::vector<CallResult> calls;         // one per executed command
  std::vector<bool> skipped;             // per command: precondition false

  bool passed() const { return !failed_at.has_value(); }
};

/// Runs the trace on a fresh adapter. Commands whose precondition fails are
/// skipped; the run stops at the first other non-Pass verdict.
TraceRun run_trace(const TypedSpec& typed, const ImplAdapter& prototype, const Trace& trace);

/// Traces one shrinking step away from `trace`: single command deletions,
/// then single argument reductions.
std::vector<Trace> shrink_candidates(const Trace& trace);

/// Shrinks a failing trace to a 1-minimal one failing with the same verdict
/// kind: no candidate of the result fails that way.
Trace shrink(const TypedSpec& typed, const ImplAdapter& prototype, const Trace& trace);

struct Failure {
  std::uint64_t trace_index = 0;
  Trace trace;
  std::size_t command_index = 0;
  Verdict verdict;
};

struct TestReport {
  std::uint64_t seed = 0;
  int traces_run = 0;
  int passed = 0;
  std::uint64_t commands_run = 0;
  std::uint64_t commands_skipped = 0;
  std::optional<Failure> failure;
  std::optional<Failure> shrunk;
  double seconds = 0;

  bool ok() const { return !failure.has_value(); }
};

/// Generates and runs config.trace_count traces, stopping at the lowest
/// failing index, and shrinks that failure.
TestReport run_tests(const TypedSpec& typed, const ImplAdapter& prototype, const GenConfig& config);

}  // namespace speclite
