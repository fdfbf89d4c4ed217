#include "oqs/engine.hpp"

#include <cmath>

#include "oqs/error.hpp"

namespace oqs {
namespace {

ComplexVector qubit_ket(std::string_view name) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v(2);
  if (name == "0") {
    v << 1.0, 0.0;
  } else if (name == "1") {
    v << 0.0, 1.0;
  } else if (name == "+") {
    v << r, r;
  } else if (name == "-") {
    v << r, -r;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown named state '" + std::string(name) + "'");
  }
  return v;
}

}  // namespace

Observable make_observable(std::string name, ComplexMatrix projector) {
  if (!is_hermitian(projector) ||
      (projector * projector - projector).cwiseAbs().maxCoeff() > kValidityTol) {
    throw Error(ErrorCode::kInvalidArgument,
                "observable '" + name + "' is not a projector");
  }
  return {std::move(name), std::move(projector)};
}

Observable named_observable(std::string_view name) {
  static constexpr std::pair<std::string_view, std::string_view> kNames[] = {
      {"p0", "0"}, {"p1", "1"}, {"plus", "+"}, {"minus", "-"}};
  for (const auto& [obs, ket] : kNames) {
    if (obs == name) return make_observable(std::string(obs), outer(qubit_ket(ket)));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown observable '" + std::string(name) + "'");
}

DensityMatrix named_state(std::string_view name, std::string label) {
  return DensityMatrix::qubit(outer(qubit_ket(name)), std::move(label));
}

std::vector<double> Trajectory::series(std::string_view observable) const {
  for (std::size_t i = 0; i < observables.size(); ++i) {
    if (observables[i] != observable) continue;
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.values[i]);
    return out;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "trajectory has no observable '" + std::string(observable) + "'");
}

Simulator::Simulator(StepCircuit step, const DensityMatrix& rho0_system)
    : step_(std::move(step)) {
  const Layout& layout = step_.layout();
  const Layout system = step_.system_layout();
  if (system.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "step has no system wires");
  }
  const Layout& given = rho0_system.layout();
  bool same_dims = given.size() == system.size();
  for (std::size_t i = 0; same_dims && i < system.size(); ++i) {
    same_dims = given[i].dim == system[i].dim;
  }
  if (!same_dims) {
    throw Error(ErrorCode::kDimensionMismatch,
                "initial state does not match the step's system wires");
  }

  // Environment and control wires start in |0><0|; the system block is
  // inserted at the first system wire and must be contiguous.
  ComplexMatrix full = ComplexMatrix::Ones(1, 1);
  bool placed = false;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].role == WireRole::kSystem) {
      if (placed) continue;
      for (std::size_t j = 0; j < system.size(); ++j) {
        if (i + j >= layout.size() || layout[i + j].role != WireRole::kSystem) {
          throw Error(ErrorCode::kInvalidArgument,
                      "system wires must be contiguous in the layout");
        }
      }
      full = tensor_product(full, rho0_system.matrix());
      placed = true;
      continue;
    }
    ComplexMatrix zero = ComplexMatrix::Zero(layout[i].dim, layout[i].dim);
    zero(0, 0) = 1.0;
    full = tensor_product(full, zero);
  }
  state_ = std::move(full);
}

void Simulator::advance() {
  state_ = apply_step(step_, state_);
  ++steps_;
}

DensityMatrix Simulator::system_state() const {
  DensityMatrix reduced(state_, step_.layout());
  for (const auto& w : step_.layout()) {
    if (w.role != WireRole::kSystem) reduced = partial_trace(reduced, w.label);
  }
  return reduced;
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum_ij rho_ij rho_ji = sum |rho_ij|^2 for Hermitian rho.
  return (rho.matrix() * rho.matrix()).trace().real();
}

Trajectory run(const StepCircuit& step, const DensityMatrix& rho0_system, int T,
               const std::vector<Observable>& observables) {
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "step count T must be >= 1");
  for (const auto& obs : observables) {
    if (obs.projector.rows() != rho0_system.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "observable '" + obs.name + "' has dimension " +
                      std::to_string(obs.projector.rows()) + ", system has " +
                      std::to_string(rho0_system.dim()));
    }
  }

  Trajectory traj;
  for (const auto& obs : observables) traj.observables.push_back(obs.name);
  traj.records.reserve(static_cast<std::size_t>(T) + 1);

  Simulator sim(step, rho0_system);
  for (int n = 0; n <= T; ++n) {
    if (n > 0) sim.advance();
    const DensityMatrix rho = sim.system_state();
    const StateCheck check = check_state(rho);
    if (!check.ok) {
      throw NumericalViolation(check.invariant, n,
                               "invariant '" + check.invariant +
                                   "' violated at step " + std::to_string(n) +
                                   " (value " + std::to_string(check.value) + ")");
    }
    Record rec;
    rec.step = n;
    for (const auto& obs : observables) {
      rec.values.push_back((obs.projector * rho.matrix()).trace().real());
    }
    rec.trace = rho.trace().real();
    rec.purity = purity(rho);
    rec.min_eigenvalue = min_eigenvalue(rho.matrix());
    traj.records.push_back(std::move(rec));
  }
  return traj;
}

}  // namespace oqs
