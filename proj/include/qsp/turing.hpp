#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qsp/machine.hpp"

namespace qsp::machine {

enum class Move { kLeft, kRight };

struct TmTransition {
  char write;
  std::string next_state;
  Move move;

  bool operator==(const TmTransition&) const = default;
};

// A deterministic Turing machine (Sigma, Q, delta) with an identified blank
// symbol, initial state and distinct final state. delta may be partial; a
// missing entry halts with reject at the caller level.
struct TmSpec {
  char blank = '#';
  std::vector<char> alphabet;          // includes the blank
  std::vector<std::string> states;     // includes initial and final
  std::string initial;
  std::string final_state;
  std::map<std::pair<std::string, char>, TmTransition> transitions;

  bool operator==(const TmSpec&) const = default;

  void validate() const;
  bool has_transition(const std::string& state, char symbol) const;
};

// Snapshot of a running machine: sparse tape, head position, control state.
struct TmConfig {
  std::map<long long, char> tape;  // cells not present hold the blank
  long long head = 0;
  std::string state;
  std::uint64_t steps = 0;

  char read(char blank) const;
  // Number of distinct cells ever written.
  std::size_t support() const { return tape.size(); }
};

TmConfig tm_initial_config(const TmSpec& spec, std::string_view tape);

// One transition: write, move, change state. The configuration must not be
// final and the transition must exist.
TmConfig tm_step(const TmSpec& spec, TmConfig config);

struct TmRun {
  enum class Status { kHalted, kRejected, kBudgetExhausted };
  Status status;
  TmConfig config;
};

TmRun tm_run(const TmSpec& spec, TmConfig config, std::uint64_t budget);

// Tape contents from the leftmost to the rightmost written cell, with blanks
// for gaps; empty when nothing was written.
std::string tape_contents(const TmConfig& config, char blank);

// Text format: directive lines for the alphabet, blank, states, initial and
// final state, then one `state symbol -> symbol state L|R` line per entry.
// serialize() emits a canonical form that parse() reproduces bit-exactly.
TmSpec parse_tm(std::string_view text);
std::string serialize_tm(const TmSpec& spec);

// Fixtures: the unary adder and the two machines that never halt.
TmSpec add_machine();
TmSpec runaway_machine();     // writes 1 and walks right forever
TmSpec oscillator_machine();  // bounces between two cells forever

// A Turing machine driven as a program machine: the program bits become the
// initial tape ('0'/'1' symbols, head at the first bit), and the output is
// the longest run of '0'/'1' symbols starting at cell 0 when the machine
// stops or the budget runs out. The alphabet must contain '0' and '1'.
class TmProgramMachine final : public ProgramMachine {
 public:
  TmProgramMachine(TmSpec spec, std::string machine_id);

  std::string id() const override { return id_; }
  RunOutcome run_bounded(std::string_view program, std::uint64_t budget) const override;

  const TmSpec& spec() const { return spec_; }

 private:
  TmSpec spec_;
  std::string id_;
};

}  // namespace qsp::machine
