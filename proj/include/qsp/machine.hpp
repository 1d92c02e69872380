#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsp/common.hpp"

namespace qsp::machine {

struct RunOutcome {
  enum class Status { kHalted, kBudgetExhausted };
  Status status = Status::kHalted;
  std::string output;
  std::uint64_t steps = 0;
};

// Like RunOutcome but for runs where only a bounded prefix of the output is
// needed; kOutputCapped means the run emitted max_output_bits and kept going.
struct CappedRun {
  enum class Status { kHalted, kBudgetExhausted, kOutputCapped };
  Status status = Status::kHalted;
  std::string output;  // at most max_output_bits characters
  std::uint64_t steps = 0;
};

// Budget cap for full runs; a bounded run may emit up to one output bit per
// step, so uncapped budgets could balloon the output string.
inline constexpr std::uint64_t kMaxRunBudget = std::uint64_t{1} << 26;

// Deterministic program semantics: binary programs in, bit streams out,
// one cost unit per step. Implementations must be pure.
class ProgramMachine {
 public:
  virtual ~ProgramMachine() = default;

  virtual std::string id() const = 0;

  // Runs at most `budget` steps and returns everything emitted. Budgets
  // above kMaxRunBudget are rejected; use run_for_output or emits_prefix
  // when only a bounded slice of the output matters.
  virtual RunOutcome run_bounded(std::string_view program, std::uint64_t budget) const = 0;

  // Runs at most `budget` steps but may stop early once max_output_bits
  // are emitted. Budgets here may be astronomically large; implementations
  // should detect silent cycles instead of spinning.
  virtual CappedRun run_for_output(std::string_view program, std::uint64_t budget,
                                   std::uint64_t max_output_bits) const;

  // Does the bounded run emit an output that starts with `prefix`?
  bool emits_prefix(std::string_view program, std::uint64_t budget,
                    std::string_view prefix) const;
};

// Reference machine: the program is a stream of 2-bit opcodes, read left to
// right, each costing one step.
//   00  emit 0
//   01  emit 1
//   10  re-emit the last emitted bit (0 when nothing was emitted yet)
//   11  jump back to the start of the program
// Running past the last full opcode halts; a trailing odd bit is ignored.
class Sk2Machine final : public ProgramMachine {
 public:
  std::string id() const override { return "sk2"; }
  RunOutcome run_bounded(std::string_view program, std::uint64_t budget) const override;
  CappedRun run_for_output(std::string_view program, std::uint64_t budget,
                           std::uint64_t max_output_bits) const override;
};

const Sk2Machine& sk2();

// floor(2^{phase - program_len}): the step allowance of PHASE `phase` for a
// program of that length. Saturates instead of overflowing.
std::uint64_t phase_budget(int phase, std::size_t program_len);

// The p ->_i x predicate: the bounded run of `program` emits an output
// starting with x, and no proper prefix of the program (each length
// 1 .. len-1, with its own larger budget) does so.
bool outputs_within(const ProgramMachine& machine, std::string_view program, int phase,
                    std::string_view x);

// Outputs of every program of length 1 .. min(phase, max_len) under its
// phase budget, in shortlex order.
std::vector<std::pair<std::string, RunOutcome>> fast_phase(const ProgramMachine& machine,
                                                           int phase, int max_len);

// Length of the shortest program of length <= max_len whose run under the
// given phase budget emits exactly x; nullopt when none does.
std::optional<int> kolmogorov_bounded(const ProgramMachine& machine, std::string_view x,
                                      int max_len, int phase);

}  // namespace qsp::machine
