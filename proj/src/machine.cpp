#include "qsp/machine.hpp"

#include <algorithm>

namespace qsp::machine {

CappedRun ProgramMachine::run_for_output(std::string_view program, std::uint64_t budget,
                                         std::uint64_t max_output_bits) const {
  const RunOutcome full = run_bounded(program, budget);
  CappedRun capped;
  capped.steps = full.steps;
  if (full.output.size() > max_output_bits) {
    capped.status = CappedRun::Status::kOutputCapped;
    capped.output = full.output.substr(0, max_output_bits);
  } else {
    capped.status = full.status == RunOutcome::Status::kHalted
                        ? CappedRun::Status::kHalted
                        : CappedRun::Status::kBudgetExhausted;
    capped.output = full.output;
  }
  return capped;
}

bool ProgramMachine::emits_prefix(std::string_view program, std::uint64_t budget,
                                  std::string_view prefix) const {
  const CappedRun run = run_for_output(program, budget, prefix.size());
  return run.output.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), run.output.begin());
}

CappedRun Sk2Machine::run_for_output(std::string_view program, std::uint64_t budget,
                                     std::uint64_t max_output_bits) const {
  require_bits(program, "program");
  const std::size_t opcode_end = program.size() - program.size() % 2;

  CappedRun run;
  std::size_t pc = 0;   // bit offset of the next opcode
  char last = '0';      // last emitted bit; re-emit default is 0

  // The machine's whole state is (pc, last). Revisiting a state with no
  // emission in between means a silent loop that will never emit again, so
  // the rest of the budget can be consumed in one jump.
  std::vector<bool> seen(opcode_end + 2, false);
  const auto state_key = [](std::size_t at, char bit) {
    return at + (bit == '1' ? 1 : 0);
  };

  while (true) {
    if (pc >= opcode_end) {
      run.status = CappedRun::Status::kHalted;
      return run;
    }
    if (run.output.size() >= max_output_bits) {
      run.status = CappedRun::Status::kOutputCapped;
      return run;
    }
    if (run.steps >= budget) {
      run.status = CappedRun::Status::kBudgetExhausted;
      return run;
    }
    const std::size_t key = state_key(pc, last);
    if (seen[key]) {
      run.steps = budget;
      run.status = CappedRun::Status::kBudgetExhausted;
      return run;
    }
    seen[key] = true;

    const int opcode = (program[pc] == '1' ? 2 : 0) + (program[pc + 1] == '1' ? 1 : 0);
    ++run.steps;
    switch (opcode) {
      case 0:  // emit 0
      case 1:  // emit 1
        last = opcode == 1 ? '1' : '0';
        run.output.push_back(last);
        pc += 2;
        std::fill(seen.begin(), seen.end(), false);
        break;
      case 2:  // re-emit last
        run.output.push_back(last);
        pc += 2;
        std::fill(seen.begin(), seen.end(), false);
        break;
      default:  // jump to start
        pc = 0;
        break;
    }
  }
}

RunOutcome Sk2Machine::run_bounded(std::string_view program, std::uint64_t budget) const {
  if (budget > kMaxRunBudget) {
    throw ResourceError("run budget exceeds the interpreter cap; query a bounded prefix");
  }
  const CappedRun run = run_for_output(program, budget, budget + 1);
  RunOutcome out;
  out.steps = run.steps;
  out.output = run.output;
  // A run can emit at most one bit per step, so the cap above never binds.
  out.status = run.status == CappedRun::Status::kHalted ? RunOutcome::Status::kHalted
                                                        : RunOutcome::Status::kBudgetExhausted;
  return out;
}

const Sk2Machine& sk2() {
  static const Sk2Machine instance;
  return instance;
}

std::uint64_t phase_budget(int phase, std::size_t program_len) {
  if (phase < 1) throw ValidationError("phase index must be >= 1");
  const long long shift = static_cast<long long>(phase) - static_cast<long long>(program_len);
  if (shift < 0) return 0;
  if (shift >= 63) return UINT64_MAX;
  return std::uint64_t{1} << shift;
}

bool outputs_within(const ProgramMachine& machine, std::string_view program, int phase,
                    std::string_view x) {
  require_bits(program, "program");
  require_bits(x, "target");
  if (phase < 1) throw ValidationError("phase index must be >= 1");

  if (!machine.emits_prefix(program, phase_budget(phase, program.size()), x)) return false;
  // Minimality: no proper prefix, at any bit length, may emit x first.
  for (std::size_t len = 1; len < program.size(); ++len) {
    if (machine.emits_prefix(program.substr(0, len), phase_budget(phase, len), x)) {
      return false;
    }
  }
  return true;
}

std::vector<std::pair<std::string, RunOutcome>> fast_phase(const ProgramMachine& machine,
                                                           int phase, int max_len) {
  if (phase < 1) throw ValidationError("phase index must be >= 1");
  if (max_len < 1 || max_len > 24) throw ResourceError("program length cap out of range");

  std::vector<std::pair<std::string, RunOutcome>> results;
  const int top = std::min(phase, max_len);
  for (int len = 1; len <= top; ++len) {
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << len); ++value) {
      std::string program = index_to_bits(value, len);
      RunOutcome outcome = machine.run_bounded(program, phase_budget(phase, program.size()));
      results.emplace_back(std::move(program), std::move(outcome));
    }
  }
  return results;
}

std::optional<int> kolmogorov_bounded(const ProgramMachine& machine, std::string_view x,
                                      int max_len, int phase) {
  require_bits(x, "target");
  if (max_len < 0 || max_len > 20) throw ResourceError("enumeration cap out of range");
  if (phase < 1) throw ValidationError("phase index must be >= 1");

  if (x.empty()) return 0;  // the empty program emits the empty string
  for (int len = 1; len <= max_len; ++len) {
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << len); ++value) {
      const std::string program = index_to_bits(value, len);
      const CappedRun run = machine.run_for_output(
          program, phase_budget(phase, program.size()), x.size() + 1);
      if (run.status != CappedRun::Status::kOutputCapped && run.output == x) {
        return len;
      }
    }
  }
  return std::nullopt;
}

}  // namespace qsp::machine
