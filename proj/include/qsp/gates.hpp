#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qsp/common.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qsim {

// Small dense complex matrix, row-major. Dimensions here stay tiny (the
// largest gates we realize explicitly act on a handful of qubits), so this
// carries only what gate manipulation needs.
class CMatrix {
 public:
  CMatrix() : dim_(0) {}
  explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, Complex(0.0)) {}

  static CMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  CMatrix multiply(const CMatrix& rhs) const;
  CMatrix adjoint() const;
  // max_{ij} |(U U† - I)_{ij}|
  double unitarity_defect() const;
  bool is_unitary(double tol = kTol) const { return unitarity_defect() <= tol; }

  std::vector<Complex> apply(const std::vector<Complex>& v) const;

 private:
  std::size_t dim_;
  std::vector<Complex> a_;
};

// U^(2^j) for j = 0 .. count-1, by repeated squaring.
std::vector<CMatrix> binary_powers(const CMatrix& u, int count);

// A total boolean function on n-bit inputs, used to build oracle transforms.
class OracleSpec {
 public:
  OracleSpec(int arity, std::function<bool(std::uint64_t)> f);
  static OracleSpec from_table(int arity, std::vector<bool> table);
  // Marks exactly the inputs in `marked`.
  static OracleSpec marking(int arity, const std::vector<std::uint64_t>& marked);
  static OracleSpec constant_zero(int arity);
  static OracleSpec constant_one(int arity);

  int arity() const { return arity_; }
  bool eval(std::uint64_t x) const;
  std::uint64_t domain_size() const { return std::uint64_t{1} << arity_; }
  // Number of inputs mapped to 1 (full enumeration).
  std::uint64_t count_ones() const;
  std::vector<bool> truth_table() const;

 private:
  int arity_;
  std::function<bool(std::uint64_t)> f_;
};

// A unitary plus the qubits it acts on. targets[0] is the most significant
// bit of the gate's local basis index, matching the register convention.
class GateSpec {
 public:
  enum class Kind {
    kHadamard,
    kCnot,               // targets = {control, target}
    kPi8,                // diag(1, e^{i pi/4})
    kPhaseFlipAboutZero, // |0..0> -> |0..0>, |x> -> -|x> on its targets
    kExplicit,
    kControlled,         // leading targets are controls for the inner gate
  };

  static GateSpec hadamard(int qubit);
  static GateSpec cnot(int control, int target);
  static GateSpec pi8(int qubit);
  static GateSpec phase_flip_about_zero(std::vector<int> targets);
  // Validates unitarity of `matrix` (dimension 2^targets.size()).
  static GateSpec explicit_gate(CMatrix matrix, std::vector<int> targets);
  static GateSpec controlled(GateSpec inner, std::vector<int> controls);

  Kind kind() const { return kind_; }
  const std::vector<int>& targets() const { return targets_; }
  int control_count() const { return control_count_; }
  const GateSpec& inner() const { return *inner_; }

  // The gate's matrix on its own targets (controls included for kControlled).
  CMatrix realized_matrix() const;

 private:
  GateSpec(Kind kind, std::vector<int> targets) : kind_(kind), targets_(std::move(targets)) {}

  Kind kind_;
  std::vector<int> targets_;
  CMatrix matrix_;                          // kExplicit
  std::shared_ptr<const GateSpec> inner_;   // kControlled
  int control_count_ = 0;
};

// U * state with U lifted to the full register by identity tensoring on the
// qubits the gate does not touch. Single-qubit kinds act in place on
// amplitude pairs; nothing of size 4^n is ever materialized.
StateVector apply_gate(StateVector state, const GateSpec& gate);

// |x>|y> -> |x>|y XOR f(x)>; input_qubits[0] is the most significant bit
// of the oracle argument.
StateVector apply_oracle(StateVector state, const OracleSpec& oracle,
                         const std::vector<int>& input_qubits, int ancilla);

// Hadamard on each listed qubit.
StateVector apply_hadamards(StateVector state, const std::vector<int>& qubits);

namespace detail {
// Gathers each 2^k-amplitude block spanned by `targets` (targets[0] most
// significant), calls fn on it in place, and scatters it back.
void for_each_target_block(StateVector& state, const std::vector<int>& targets,
                           const std::function<void(std::vector<Complex>&)>& fn);
}  // namespace detail

}  // namespace qsp::qsim
