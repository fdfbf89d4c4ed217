#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "oqs/circuit.hpp"
#include "oqs/qmath.hpp"

namespace oqs {

/// A named projector on the system wires. Populations only.
struct Observable {
  std::string name;
  ComplexMatrix projector;
};

/// Validates Hermiticity and idempotence within kValidityTol.
Observable make_observable(std::string name, ComplexMatrix projector);

/// "p0", "p1", "plus", "minus": projectors onto |0>, |1>, |+>, |->.
Observable named_observable(std::string_view name);

/// "0", "1", "+", "-" as single-qubit system states on wire `label`.
DensityMatrix named_state(std::string_view name, std::string label = "q");

struct Record {
  int step = 0;
  std::vector<double> values;  // parallel to Trajectory::observables
  double trace = 0.0;
  double purity = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<std::string> observables;
  std::vector<Record> records;  // step 0 .. T

  int step_count() const { return static_cast<int>(records.size()) - 1; }
  /// Values of one observable across all records; throws kInvalidArgument
  /// for an unknown name.
  std::vector<double> series(std::string_view observable) const;
};

/// Owns the full register state of one simulation. Environment and control
/// wires start in |0><0| and persist between steps, so memory wires keep
/// their content unless the step resets them.
class Simulator {
 public:
  Simulator(StepCircuit step, const DensityMatrix& rho0_system);

  void advance();
  int steps_taken() const noexcept { return steps_; }
  const StepCircuit& step() const noexcept { return step_; }
  const ComplexMatrix& full_state() const noexcept { return state_; }
  /// Reduced state on the system wires.
  DensityMatrix system_state() const;

 private:
  StepCircuit step_;
  ComplexMatrix state_;
  int steps_ = 0;
};

/// tr(rho^2).
double purity(const DensityMatrix& rho);

/// Applies `step` T times and records every observable on the reduced system
/// state, including step 0. Throws NumericalViolation naming the invariant
/// and step when a recorded state is not a valid density matrix.
Trajectory run(const StepCircuit& step, const DensityMatrix& rho0_system, int T,
               const std::vector<Observable>& observables);

}  // namespace oqs
