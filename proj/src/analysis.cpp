#include "oqs/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "oqs/error.hpp"

namespace oqs {
namespace {

int qubits_for(int dim) {
  int q = 0;
  while ((1 << q) < dim) ++q;
  return q;
}

}  // namespace

MonotonicityVerdict monotonicity_check(std::span<const double> values,
                                       double tolerance) {
  if (tolerance < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  }
  MonotonicityVerdict verdict;
  for (std::size_t n = 1; n < values.size(); ++n) {
    const double rise = values[n] - values[n - 1];
    verdict.max_revival = std::max(verdict.max_revival, rise);
    if (rise > tolerance && !verdict.first_violation) {
      verdict.first_violation = static_cast<int>(n);
      verdict.monotone = false;
    }
  }
  return verdict;
}

MonotonicityVerdict monotonicity_check(const Trajectory& traj,
                                       std::string_view observable,
                                       double tolerance) {
  const std::vector<double> values = traj.series(observable);
  return monotonicity_check(values, tolerance);
}

double blp_witness(const StepCircuit& step, const DensityMatrix& rho_a,
                   const DensityMatrix& rho_b, int T) {
  if (rho_a.dim() != rho_b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "blp_witness: states have different dimensions");
  }
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "T must be >= 1");
  Simulator a(step, rho_a);
  Simulator b(step, rho_b);
  double prev = trace_distance(a.system_state(), b.system_state());
  double backflow = 0.0;
  for (int n = 1; n <= T; ++n) {
    a.advance();
    b.advance();
    const double d = trace_distance(a.system_state(), b.system_state());
    if (d > prev) backflow += d - prev;
    prev = d;
  }
  return backflow;
}

std::string_view to_string(ResourceMethod method) {
  return method == ResourceMethod::kSequential ? "sequential" : "direct-dilation";
}

ResourceReport resource_count(const StepCircuit& step, int T,
                              ResourceMethod method, int k, int l) {
  ResourceReport r;
  r.method = method;
  r.k = k;
  r.l = l;
  for (const auto& w : step.layout()) {
    const int q = qubits_for(w.dim);
    r.layout_qubits += q;
    if (w.role == WireRole::kSystem) r.system_qubits += q;
  }
  if (method == ResourceMethod::kSequential) {
    r.environment_qubits = k;
    r.control_qubits = 1;
  } else {
    r.environment_qubits = k * qubits_for(l);
  }
  r.qubit_count = r.system_qubits + r.environment_qubits + r.control_qubits;

  r.gates_per_step = static_cast<int>(step.ops().size());
  r.gates_per_step_without_resets = static_cast<int>(
      std::count_if(step.ops().begin(), step.ops().end(),
                    [](const GateOp& op) { return op.kind != OpKind::kReset; }));
  r.total_gates = static_cast<long long>(T) * r.gates_per_step;
  r.total_gates_without_resets =
      static_cast<long long>(T) * r.gates_per_step_without_resets;
  return r;
}

std::string format_report(const ResourceReport& r) {
  std::ostringstream out;
  out << "method=" << to_string(r.method) << "\n"
      << "k=" << r.k << "\n"
      << "l=" << r.l << "\n"
      << "system_qubits=" << r.system_qubits << "\n"
      << "environment_qubits=" << r.environment_qubits << "\n"
      << "control_qubits=" << r.control_qubits << "\n"
      << "qubit_count=" << r.qubit_count << "\n"
      << "layout_qubits=" << r.layout_qubits << "\n"
      << "gates_per_step=" << r.gates_per_step << "\n"
      << "gates_per_step_without_resets=" << r.gates_per_step_without_resets << "\n"
      << "total_gates=" << r.total_gates << "\n"
      << "total_gates_without_resets=" << r.total_gates_without_resets << "\n";
  return out.str();
}

}  // namespace oqs
