#include "qsp/turing.hpp"

#include <algorithm>
#include <sstream>

namespace qsp::machine {

void TmSpec::validate() const {
  if (alphabet.empty()) throw ValidationError("machine alphabet is empty");
  if (std::find(alphabet.begin(), alphabet.end(), blank) == alphabet.end()) {
    throw ValidationError("alphabet must contain the blank symbol");
  }
  auto has_state = [this](const std::string& s) {
    return std::find(states.begin(), states.end(), s) != states.end();
  };
  if (!has_state(initial)) throw ValidationError("initial state not in the state set");
  if (!has_state(final_state)) throw ValidationError("final state not in the state set");
  if (initial == final_state) throw ValidationError("final state must differ from initial");
  for (const auto& [key, t] : transitions) {
    if (!has_state(key.first) || !has_state(t.next_state)) {
      throw ValidationError("transition references an unknown state");
    }
    if (key.first == final_state) throw ValidationError("final state has no transitions");
    if (std::find(alphabet.begin(), alphabet.end(), key.second) == alphabet.end() ||
        std::find(alphabet.begin(), alphabet.end(), t.write) == alphabet.end()) {
      throw ValidationError("transition references an unknown symbol");
    }
  }
}

bool TmSpec::has_transition(const std::string& state, char symbol) const {
  return transitions.count({state, symbol}) > 0;
}

char TmConfig::read(char blank) const {
  const auto it = tape.find(head);
  return it == tape.end() ? blank : it->second;
}

TmConfig tm_initial_config(const TmSpec& spec, std::string_view tape) {
  TmConfig config;
  config.state = spec.initial;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    if (std::find(spec.alphabet.begin(), spec.alphabet.end(), tape[i]) == spec.alphabet.end()) {
      throw ValidationError(std::string("tape symbol '") + tape[i] + "' not in the alphabet");
    }
    if (tape[i] != spec.blank) config.tape[static_cast<long long>(i)] = tape[i];
  }
  return config;
}

TmConfig tm_step(const TmSpec& spec, TmConfig config) {
  if (config.state == spec.final_state) {
    throw ValidationError("machine already halted");
  }
  const char symbol = config.read(spec.blank);
  const auto it = spec.transitions.find({config.state, symbol});
  if (it == spec.transitions.end()) {
    throw ValidationError("no transition for (" + config.state + ", " + symbol + ")");
  }
  const TmTransition& t = it->second;
  if (t.write == spec.blank) {
    config.tape.erase(config.head);
  } else {
    config.tape[config.head] = t.write;
  }
  config.head += t.move == Move::kRight ? 1 : -1;
  config.state = t.next_state;
  ++config.steps;
  return config;
}

TmRun tm_run(const TmSpec& spec, TmConfig config, std::uint64_t budget) {
  if (budget > kMaxRunBudget) {
    throw ResourceError("run budget exceeds the interpreter cap");
  }
  const std::uint64_t start = config.steps;
  while (true) {
    if (config.state == spec.final_state) return {TmRun::Status::kHalted, std::move(config)};
    if (!spec.has_transition(config.state, config.read(spec.blank))) {
      return {TmRun::Status::kRejected, std::move(config)};
    }
    if (config.steps - start >= budget) {
      return {TmRun::Status::kBudgetExhausted, std::move(config)};
    }
    config = tm_step(spec, std::move(config));
  }
}

std::string tape_contents(const TmConfig& config, char blank) {
  if (config.tape.empty()) return "";
  std::string out;
  const long long lo = config.tape.begin()->first;
  const long long hi = config.tape.rbegin()->first;
  for (long long i = lo; i <= hi; ++i) {
    const auto it = config.tape.find(i);
    out.push_back(it == config.tape.end() ? blank : it->second);
  }
  return out;
}

TmSpec parse_tm(std::string_view text) {
  TmSpec spec;
  spec.alphabet.clear();
  spec.states.clear();
  bool saw_alphabet = false, saw_states = false;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line

    if (first == "alphabet:") {
      std::string sym;
      while (ls >> sym) {
        if (sym.size() != 1) throw ValidationError("alphabet symbols must be single characters");
        spec.alphabet.push_back(sym[0]);
      }
      saw_alphabet = true;
    } else if (first == "blank:") {
      std::string sym;
      if (!(ls >> sym) || sym.size() != 1) throw ValidationError("bad blank directive");
      spec.blank = sym[0];
    } else if (first == "states:") {
      std::string s;
      while (ls >> s) spec.states.push_back(s);
      saw_states = true;
    } else if (first == "initial:") {
      if (!(ls >> spec.initial)) throw ValidationError("bad initial directive");
    } else if (first == "final:") {
      if (!(ls >> spec.final_state)) throw ValidationError("bad final directive");
    } else {
      // state symbol -> symbol state L|R
      std::string sym, arrow, write, next, move;
      if (!(ls >> sym >> arrow >> write >> next >> move) || arrow != "->" ||
          sym.size() != 1 || write.size() != 1 || (move != "L" && move != "R")) {
        throw ValidationError("bad transition line: " + line);
      }
      const std::pair<std::string, char> key{first, sym[0]};
      if (spec.transitions.count(key) > 0) {
        throw ValidationError("duplicate transition for (" + first + ", " + sym + ")");
      }
      spec.transitions[key] =
          TmTransition{write[0], next, move == "L" ? Move::kLeft : Move::kRight};
    }
  }
  if (!saw_alphabet || !saw_states) {
    throw ValidationError("machine file needs alphabet and states directives");
  }
  spec.validate();
  return spec;
}

std::string serialize_tm(const TmSpec& spec) {
  std::ostringstream out;
  out << "alphabet:";
  for (char c : spec.alphabet) out << ' ' << c;
  out << '\n';
  out << "blank: " << spec.blank << '\n';
  out << "states:";
  for (const auto& s : spec.states) out << ' ' << s;
  out << '\n';
  out << "initial: " << spec.initial << '\n';
  out << "final: " << spec.final_state << '\n';
  for (const auto& [key, t] : spec.transitions) {
    out << key.first << ' ' << key.second << " -> " << t.write << ' ' << t.next_state << ' '
        << (t.move == Move::kLeft ? 'L' : 'R') << '\n';
  }
  return out.str();
}

TmSpec add_machine() {
  TmSpec spec;
  spec.alphabet = {'#', '1'};
  spec.states = {"q0", "q1", "q2", "qf"};
  spec.initial = "q0";
  spec.final_state = "qf";
  spec.transitions[{"q0", '1'}] = {'1', "q0", Move::kRight};
  spec.transitions[{"q0", '#'}] = {'1', "q1", Move::kRight};
  spec.transitions[{"q1", '1'}] = {'1', "q1", Move::kRight};
  spec.transitions[{"q1", '#'}] = {'#', "q2", Move::kLeft};
  spec.transitions[{"q2", '1'}] = {'#', "qf", Move::kRight};
  spec.validate();
  return spec;
}

TmSpec runaway_machine() {
  TmSpec spec;
  spec.alphabet = {'#', '1'};
  spec.states = {"q0", "qf"};
  spec.initial = "q0";
  spec.final_state = "qf";
  spec.transitions[{"q0", '#'}] = {'1', "q0", Move::kRight};
  spec.transitions[{"q0", '1'}] = {'1', "q0", Move::kRight};
  spec.validate();
  return spec;
}

TmSpec oscillator_machine() {
  TmSpec spec;
  spec.alphabet = {'#', '1'};
  spec.states = {"q0", "q1", "qf"};
  spec.initial = "q0";
  spec.final_state = "qf";
  spec.transitions[{"q0", '#'}] = {'1', "q1", Move::kRight};
  spec.transitions[{"q1", '#'}] = {'1', "q0", Move::kLeft};
  spec.transitions[{"q0", '1'}] = {'1', "q1", Move::kRight};
  spec.transitions[{"q1", '1'}] = {'1', "q0", Move::kLeft};
  spec.validate();
  return spec;
}

TmProgramMachine::TmProgramMachine(TmSpec spec, std::string machine_id)
    : spec_(std::move(spec)), id_(std::move(machine_id)) {
  spec_.validate();
  for (char required : {'0', '1'}) {
    if (std::find(spec_.alphabet.begin(), spec_.alphabet.end(), required) ==
        spec_.alphabet.end()) {
      throw ValidationError("program machines need '0' and '1' in the alphabet");
    }
  }
}

RunOutcome TmProgramMachine::run_bounded(std::string_view program,
                                         std::uint64_t budget) const {
  require_bits(program, "program");
  const TmRun run = tm_run(spec_, tm_initial_config(spec_, program), budget);

  RunOutcome out;
  out.steps = run.config.steps;
  out.status = run.status == TmRun::Status::kBudgetExhausted
                   ? RunOutcome::Status::kBudgetExhausted
                   : RunOutcome::Status::kHalted;
  // Output: the 0/1 run starting at the origin.
  for (long long i = 0;; ++i) {
    const auto it = run.config.tape.find(i);
    if (it == run.config.tape.end() || (it->second != '0' && it->second != '1')) break;
    out.output.push_back(it->second);
  }
  return out;
}

}  // namespace qsp::machine
