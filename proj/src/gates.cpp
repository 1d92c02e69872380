#include "qsp/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace qsp::qsim {

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = Complex(1.0);
  return m;
}

CMatrix CMatrix::multiply(const CMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw ValidationError("matrix dimension mismatch");
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Complex v = at(i, k);
      if (v == Complex(0.0)) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        out.at(i, j) += v * rhs.at(k, j);
      }
    }
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      out.at(j, i) = std::conj(at(i, j));
    }
  }
  return out;
}

double CMatrix::unitarity_defect() const {
  const CMatrix product = multiply(adjoint());
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex expected = (i == j) ? Complex(1.0) : Complex(0.0);
      worst = std::max(worst, std::abs(product.at(i, j) - expected));
    }
  }
  return worst;
}

std::vector<Complex> CMatrix::apply(const std::vector<Complex>& v) const {
  if (v.size() != dim_) throw ValidationError("matrix/vector dimension mismatch");
  std::vector<Complex> out(dim_, Complex(0.0));
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex sum(0.0);
    for (std::size_t j = 0; j < dim_; ++j) sum += at(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

std::vector<CMatrix> binary_powers(const CMatrix& u, int count) {
  std::vector<CMatrix> powers;
  powers.reserve(static_cast<std::size_t>(count));
  if (count <= 0) return powers;
  powers.push_back(u);
  for (int j = 1; j < count; ++j) {
    powers.push_back(powers.back().multiply(powers.back()));
  }
  return powers;
}

OracleSpec::OracleSpec(int arity, std::function<bool(std::uint64_t)> f)
    : arity_(arity), f_(std::move(f)) {
  if (arity < 1 || arity > 62) throw ValidationError("oracle arity out of range");
  if (!f_) throw ValidationError("oracle function must be callable");
}

OracleSpec OracleSpec::from_table(int arity, std::vector<bool> table) {
  if (arity < 1 || arity > 24) throw ValidationError("oracle table arity out of range");
  if (table.size() != (std::size_t{1} << arity)) {
    throw ValidationError("oracle table must cover all 2^n inputs");
  }
  auto shared = std::make_shared<std::vector<bool>>(std::move(table));
  return OracleSpec(arity, [shared](std::uint64_t x) { return (*shared)[x]; });
}

OracleSpec OracleSpec::marking(int arity, const std::vector<std::uint64_t>& marked) {
  std::vector<bool> table(std::size_t{1} << arity, false);
  for (std::uint64_t m : marked) {
    if (m >= table.size()) throw ValidationError("marked input out of oracle domain");
    table[m] = true;
  }
  return from_table(arity, std::move(table));
}

OracleSpec OracleSpec::constant_zero(int arity) {
  return OracleSpec(arity, [](std::uint64_t) { return false; });
}

OracleSpec OracleSpec::constant_one(int arity) {
  return OracleSpec(arity, [](std::uint64_t) { return true; });
}

bool OracleSpec::eval(std::uint64_t x) const {
  if (x >= domain_size()) throw ValidationError("oracle input out of domain");
  return f_(x);
}

std::uint64_t OracleSpec::count_ones() const {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < domain_size(); ++x) count += eval(x) ? 1 : 0;
  return count;
}

std::vector<bool> OracleSpec::truth_table() const {
  if (arity_ > 24) throw ResourceError("oracle too wide to tabulate");
  std::vector<bool> table(domain_size());
  for (std::uint64_t x = 0; x < domain_size(); ++x) table[x] = eval(x);
  return table;
}

namespace {

void require_distinct(const std::vector<int>& targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) throw ValidationError("gate targets must be distinct");
    }
  }
}

const Complex kInvSqrt2(1.0 / std::numbers::sqrt2, 0.0);

}  // namespace

GateSpec GateSpec::hadamard(int qubit) { return GateSpec(Kind::kHadamard, {qubit}); }

GateSpec GateSpec::cnot(int control, int target) {
  if (control == target) throw ValidationError("CNOT control and target must differ");
  return GateSpec(Kind::kCnot, {control, target});
}

GateSpec GateSpec::pi8(int qubit) { return GateSpec(Kind::kPi8, {qubit}); }

GateSpec GateSpec::phase_flip_about_zero(std::vector<int> targets) {
  require_distinct(targets);
  if (targets.empty()) throw ValidationError("phase flip needs at least one target");
  return GateSpec(Kind::kPhaseFlipAboutZero, std::move(targets));
}

GateSpec GateSpec::explicit_gate(CMatrix matrix, std::vector<int> targets) {
  require_distinct(targets);
  if (targets.empty() || targets.size() > 24) {
    throw ValidationError("explicit gate target count out of range");
  }
  if (matrix.dim() != (std::size_t{1} << targets.size())) {
    throw ValidationError("explicit gate matrix dimension does not match target count");
  }
  if (!matrix.is_unitary()) {
    throw ValidationError("explicit gate matrix is not unitary");
  }
  GateSpec g(Kind::kExplicit, std::move(targets));
  g.matrix_ = std::move(matrix);
  return g;
}

GateSpec GateSpec::controlled(GateSpec inner, std::vector<int> controls) {
  if (controls.empty()) throw ValidationError("controlled gate needs at least one control");
  std::vector<int> all = controls;
  all.insert(all.end(), inner.targets().begin(), inner.targets().end());
  require_distinct(all);
  GateSpec g(Kind::kControlled, std::move(all));
  g.inner_ = std::make_shared<GateSpec>(std::move(inner));
  g.control_count_ = static_cast<int>(controls.size());
  return g;
}

CMatrix GateSpec::realized_matrix() const {
  switch (kind_) {
    case Kind::kHadamard: {
      CMatrix m(2);
      m.at(0, 0) = kInvSqrt2;
      m.at(0, 1) = kInvSqrt2;
      m.at(1, 0) = kInvSqrt2;
      m.at(1, 1) = -kInvSqrt2;
      return m;
    }
    case Kind::kCnot: {
      CMatrix m(4);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = 1.0;
      m.at(2, 3) = 1.0;
      m.at(3, 2) = 1.0;
      return m;
    }
    case Kind::kPi8: {
      CMatrix m(2);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
      return m;
    }
    case Kind::kPhaseFlipAboutZero: {
      CMatrix m(std::size_t{1} << targets_.size());
      m.at(0, 0) = 1.0;
      for (std::size_t i = 1; i < m.dim(); ++i) m.at(i, i) = -1.0;
      return m;
    }
    case Kind::kExplicit:
      return matrix_;
    case Kind::kControlled: {
      // Block diagonal: identity unless every control bit is 1.
      const CMatrix inner = inner_->realized_matrix();
      CMatrix m(std::size_t{1} << targets_.size());
      const std::size_t inner_dim = inner.dim();
      const std::size_t blocks = m.dim() / inner_dim;
      for (std::size_t block = 0; block < blocks; ++block) {
        const std::size_t base = block * inner_dim;
        if (block == blocks - 1) {  // all controls set
          for (std::size_t r = 0; r < inner_dim; ++r) {
            for (std::size_t c = 0; c < inner_dim; ++c) {
              m.at(base + r, base + c) = inner.at(r, c);
            }
          }
        } else {
          for (std::size_t r = 0; r < inner_dim; ++r) m.at(base + r, base + r) = 1.0;
        }
      }
      return m;
    }
  }
  throw std::logic_error("unreachable gate kind");
}

namespace detail {

void for_each_target_block(StateVector& state, const std::vector<int>& targets,
                           const std::function<void(std::vector<Complex>&)>& fn) {
  const int n = state.num_qubits();
  const int k = static_cast<int>(targets.size());
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n - k));
  for (int q = 0; q < n; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  }

  // Precompute bit placements for the block-local index and the coset index.
  const std::size_t block_size = std::size_t{1} << k;
  const std::size_t coset_count = std::size_t{1} << (n - k);
  std::vector<std::uint64_t> place_block(block_size, 0);
  for (std::uint64_t j = 0; j < block_size; ++j) {
    std::uint64_t idx = 0;
    for (int b = 0; b < k; ++b) {
      if ((j >> (k - 1 - b)) & 1ULL) idx |= std::uint64_t{1} << state.bit_position(targets[b]);
    }
    place_block[j] = idx;
  }
  std::vector<std::uint64_t> place_coset(coset_count, 0);
  for (std::uint64_t g = 0; g < coset_count; ++g) {
    std::uint64_t idx = 0;
    for (int b = 0; b < n - k; ++b) {
      if ((g >> (n - k - 1 - b)) & 1ULL) idx |= std::uint64_t{1} << state.bit_position(rest[b]);
    }
    place_coset[g] = idx;
  }

  auto& amps = state.mutable_amplitudes();
  std::vector<Complex> block(block_size);
  for (std::uint64_t g = 0; g < coset_count; ++g) {
    const std::uint64_t base = place_coset[g];
    for (std::uint64_t j = 0; j < block_size; ++j) block[j] = amps[base | place_block[j]];
    fn(block);
    for (std::uint64_t j = 0; j < block_size; ++j) amps[base | place_block[j]] = block[j];
  }
}

}  // namespace detail

namespace {

void apply_hadamard_in_place(StateVector& state, int qubit) {
  auto& amps = state.mutable_amplitudes();
  const std::uint64_t mask = std::uint64_t{1} << state.bit_position(qubit);
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    if (b & mask) continue;
    const Complex a0 = amps[b];
    const Complex a1 = amps[b | mask];
    amps[b] = kInvSqrt2 * (a0 + a1);
    amps[b | mask] = kInvSqrt2 * (a0 - a1);
  }
}

void apply_explicit_block(StateVector& state, const CMatrix& matrix,
                          const std::vector<int>& targets) {
  detail::for_each_target_block(state, targets, [&matrix](std::vector<Complex>& block) {
    block = matrix.apply(block);
  });
}

}  // namespace

StateVector apply_gate(StateVector state, const GateSpec& gate) {
  for (int q : gate.targets()) state.require_qubit(q);
  {
    // Distinctness is checked at construction for most kinds, but explicit
    // gates can be built once and applied to several registers.
    std::vector<int> targets = gate.targets();
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
      throw ValidationError("gate targets must be distinct");
    }
  }

  switch (gate.kind()) {
    case GateSpec::Kind::kHadamard:
      apply_hadamard_in_place(state, gate.targets()[0]);
      break;
    case GateSpec::Kind::kCnot: {
      auto& amps = state.mutable_amplitudes();
      const std::uint64_t control = std::uint64_t{1} << state.bit_position(gate.targets()[0]);
      const std::uint64_t target = std::uint64_t{1} << state.bit_position(gate.targets()[1]);
      for (std::uint64_t b = 0; b < amps.size(); ++b) {
        if ((b & control) && !(b & target)) std::swap(amps[b], amps[b | target]);
      }
      break;
    }
    case GateSpec::Kind::kPi8: {
      auto& amps = state.mutable_amplitudes();
      const std::uint64_t mask = std::uint64_t{1} << state.bit_position(gate.targets()[0]);
      const Complex phase = std::polar(1.0, std::numbers::pi / 4.0);
      for (std::uint64_t b = 0; b < amps.size(); ++b) {
        if (b & mask) amps[b] *= phase;
      }
      break;
    }
    case GateSpec::Kind::kPhaseFlipAboutZero: {
      auto& amps = state.mutable_amplitudes();
      std::uint64_t mask = 0;
      for (int q : gate.targets()) mask |= std::uint64_t{1} << state.bit_position(q);
      for (std::uint64_t b = 0; b < amps.size(); ++b) {
        if (b & mask) amps[b] = -amps[b];
      }
      break;
    }
    case GateSpec::Kind::kExplicit:
      apply_explicit_block(state, gate.realized_matrix(), gate.targets());
      break;
    case GateSpec::Kind::kControlled: {
      // Apply the inner matrix only on the all-controls-set slice rather
      // than expanding the block-diagonal matrix over every coset.
      const CMatrix inner = gate.inner().realized_matrix();
      std::uint64_t control_mask = 0;
      for (int i = 0; i < gate.control_count(); ++i) {
        control_mask |= std::uint64_t{1} << state.bit_position(gate.targets()[i]);
      }
      std::vector<int> inner_targets(gate.targets().begin() + gate.control_count(),
                                     gate.targets().end());
      if (inner_targets.empty()) throw ValidationError("controlled gate has no inner targets");
      const int k = static_cast<int>(inner_targets.size());
      std::vector<std::uint64_t> place_block(std::size_t{1} << k, 0);
      for (std::uint64_t j = 0; j < place_block.size(); ++j) {
        std::uint64_t idx = 0;
        for (int b = 0; b < k; ++b) {
          if ((j >> (k - 1 - b)) & 1ULL) {
            idx |= std::uint64_t{1} << state.bit_position(inner_targets[b]);
          }
        }
        place_block[j] = idx;
      }
      std::uint64_t involved_mask = control_mask;
      for (std::uint64_t p : place_block) involved_mask |= p;
      auto& amps = state.mutable_amplitudes();
      std::vector<Complex> block(place_block.size());
      for (std::uint64_t base = 0; base < amps.size(); ++base) {
        if (base & involved_mask) continue;            // enumerate cosets once
        const std::uint64_t root = base | control_mask;  // controls all set
        for (std::uint64_t j = 0; j < block.size(); ++j) block[j] = amps[root | place_block[j]];
        block = inner.apply(block);
        for (std::uint64_t j = 0; j < block.size(); ++j) amps[root | place_block[j]] = block[j];
      }
      break;
    }
  }

  state.check_normalized();
  return state;
}

StateVector apply_oracle(StateVector state, const OracleSpec& oracle,
                         const std::vector<int>& input_qubits, int ancilla) {
  if (static_cast<int>(input_qubits.size()) != oracle.arity()) {
    throw ValidationError("oracle arity does not match the number of input qubits");
  }
  state.require_qubit(ancilla);
  for (int q : input_qubits) {
    state.require_qubit(q);
    if (q == ancilla) throw ValidationError("ancilla must not be an oracle input");
  }

  auto& amps = state.mutable_amplitudes();
  const std::uint64_t ancilla_mask = std::uint64_t{1} << state.bit_position(ancilla);
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    if (b & ancilla_mask) continue;
    std::uint64_t x = 0;
    for (int q : input_qubits) x = (x << 1) | ((b >> state.bit_position(q)) & 1ULL);
    if (oracle.eval(x)) std::swap(amps[b], amps[b | ancilla_mask]);
  }
  state.check_normalized();
  return state;
}

StateVector apply_hadamards(StateVector state, const std::vector<int>& qubits) {
  for (int q : qubits) {
    state.require_qubit(q);
    apply_hadamard_in_place(state, q);
  }
  state.check_normalized();
  return state;
}

}  // namespace qsp::qsim
