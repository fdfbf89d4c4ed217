#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oqs/channels.hpp"
#include "oqs/qmath.hpp"

namespace oqs {

enum class OpKind { kUnitary, kReset, kSwap };

struct GateOp {
  OpKind kind = OpKind::kUnitary;
  std::string name;              // gate name, kUnitary only
  std::optional<double> theta;   // Ry / CRy / NCRy angle
  ComplexMatrix matrix;          // kUnitary only; first wire most significant
  std::vector<std::string> wires;

  static GateOp gate(std::string name, std::vector<std::string> wires,
                     std::optional<double> theta = std::nullopt);
  static GateOp reset(std::string wire);
  static GateOp swap(std::string a, std::string b);

  friend bool operator==(const GateOp& a, const GateOp& b);
};

/// One discrete time step: a register layout and the ordered operations
/// applied to it. Construction validates every op against the layout.
class StepCircuit {
 public:
  StepCircuit(Layout layout, std::vector<GateOp> ops, std::string label = {});

  const Layout& layout() const noexcept { return layout_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  const std::string& label() const noexcept { return label_; }

  /// Layout entries with WireRole::kSystem, in order.
  Layout system_layout() const;

  friend bool operator==(const StepCircuit&, const StepCircuit&) = default;

 private:
  Layout layout_;
  std::vector<GateOp> ops_;
  std::string label_;
};

/// Memory order k and the storage angles theta^1..theta^k.
struct MemorySpec {
  std::vector<double> thetas;

  int k() const noexcept { return static_cast<int>(thetas.size()); }
};

enum class DampingKind { kAmplitudeDamping, kDephasing };

std::string_view to_string(DampingKind kind);
DampingKind damping_kind_from_string(std::string_view text);

/// Named gates: X, Y, Z, H, Ry, CNOT, CY, CZ, SWAP, CRy, NCRy.
/// Two-qubit gates take (control, target); NCRy rotates the target when the
/// control is |0>. Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
ComplexMatrix standard_gate(std::string_view name,
                            std::optional<double> theta = std::nullopt);

/// Layout {q, e}. Amplitude damping: CRy(q -> e), CNOT(e -> q), reset e.
/// Dephasing: Ry on e, CZ(e -> q), reset e.
StepCircuit build_markovian_step(DampingKind kind, double theta);

/// Layout {q, e1..ek}. Storage rotations on every e_i (controlled on q for
/// amplitude damping, plain for dephasing), coupling from e1 to q, reset e1,
/// then SWAP(e1,e2) ... SWAP(e_{k-1},e_k) to shift the memory register.
StepCircuit build_nonmarkovian_step(DampingKind kind, const MemorySpec& mem);

/// Layout {c, q, e} (or {c, q, e1..ek} with memory). Each non-identity Kraus
/// operator sqrt(p_i) P_i becomes: NCRy(c -> e) firing with probability p_i,
/// controlled P_i (e -> q), CNOT(e -> c) to mark the branch as fired, reset e.
/// The control is reset at the end of the step. Supports qubit channels whose
/// operators are scaled Paulis.
StepCircuit build_sequential_step(const KrausChannel& ch,
                                  const std::optional<MemorySpec>& mem = {});

/// Executes the step on a full register state.
ComplexMatrix apply_step(const StepCircuit& step, const ComplexMatrix& rho);
DensityMatrix apply_step(const StepCircuit& step, const DensityMatrix& rho);

/// Line-oriented text form: a STEP header, one WIRE line per layout entry,
/// then `GATE name wires... [theta]`, `RESET wire`, `SWAP w1 w2`.
std::string dump_circuit(const StepCircuit& step);
StepCircuit parse_circuit(std::string_view text);

}  // namespace oqs
