#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "oqs/circuit.hpp"
#include "oqs/engine.hpp"

namespace oqs {

struct MonotonicityVerdict {
  bool monotone = true;
  std::optional<int> first_violation;  // step index n+1 of the first increase
  double max_revival = 0.0;            // largest single-step increase, >= 0
};

MonotonicityVerdict monotonicity_check(std::span<const double> values,
                                       double tolerance = 1e-9);
MonotonicityVerdict monotonicity_check(const Trajectory& traj,
                                       std::string_view observable,
                                       double tolerance = 1e-9);

/// Evolves both states under `step` and sums the positive increments of the
/// trace distance between the reduced system states. Zero for contractive
/// (Markovian) dynamics; positive when information flows back.
double blp_witness(const StepCircuit& step, const DensityMatrix& rho_a,
                   const DensityMatrix& rho_b, int T);

enum class ResourceMethod { kDirectDilation, kSequential };

std::string_view to_string(ResourceMethod method);

struct ResourceReport {
  ResourceMethod method = ResourceMethod::kDirectDilation;
  int k = 1;
  int l = 1;
  int system_qubits = 0;
  int environment_qubits = 0;
  int control_qubits = 0;
  int qubit_count = 0;    // system + environment + control, per method
  int layout_qubits = 0;  // qubits actually present in the step layout
  int gates_per_step = 0;               // every op, resets included
  int gates_per_step_without_resets = 0;
  long long total_gates = 0;            // T * gates_per_step
  long long total_gates_without_resets = 0;
};

/// Counts the step's wires and ops and fills the method's qubit formula:
/// sequential = system + k + 1 control, direct dilation = system +
/// k * ceil(log2 l).
ResourceReport resource_count(const StepCircuit& step, int T,
                              ResourceMethod method, int k, int l);

/// Flat `key=value` lines.
std::string format_report(const ResourceReport& report);

}  // namespace oqs
