#include "oqs/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "oqs/error.hpp"

namespace oqs {
namespace {

bool needs_theta(std::string_view name) {
  return name == "Ry" || name == "CRy" || name == "NCRy";
}

ComplexMatrix controlled(const ComplexMatrix& u, bool on_zero = false) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  const int offset = on_zero ? 0 : 2;
  m.block(offset, offset, 2, 2) = u;
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string wire_name(int i) { return "e" + std::to_string(i); }

void check_thetas(const MemorySpec& mem) {
  for (double t : mem.thetas) {
    if (!(t >= 0.0 && t < 2.0 * M_PI)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "memory angle " + std::to_string(t) + " outside [0, 2pi)");
    }
  }
}

Layout memory_layout(int k) {
  Layout layout{{"q", 2, WireRole::kSystem}};
  for (int i = 1; i <= k; ++i) {
    layout.push_back({wire_name(i), 2, WireRole::kEnvironment});
  }
  return layout;
}

// Name of the Pauli that `u` equals up to a global phase, or empty.
std::string pauli_name(const ComplexMatrix& u) {
  for (const char* name : {"I", "X", "Y", "Z"}) {
    const ComplexMatrix p = std::string_view(name) == "I"
                                ? ComplexMatrix::Identity(2, 2)
                                : standard_gate(name);
    const Complex overlap = (p.adjoint() * u).trace() / 2.0;
    if (std::abs(std::abs(overlap) - 1.0) < 1e-9) return name;
  }
  return {};
}

}  // namespace

GateOp GateOp::gate(std::string name, std::vector<std::string> wires,
                    std::optional<double> theta) {
  GateOp op;
  op.kind = OpKind::kUnitary;
  op.matrix = standard_gate(name, theta);
  op.name = std::move(name);
  op.theta = theta;
  op.wires = std::move(wires);
  return op;
}

GateOp GateOp::reset(std::string wire) {
  GateOp op;
  op.kind = OpKind::kReset;
  op.wires = {std::move(wire)};
  return op;
}

GateOp GateOp::swap(std::string a, std::string b) {
  GateOp op;
  op.kind = OpKind::kSwap;
  op.wires = {std::move(a), std::move(b)};
  return op;
}

bool operator==(const GateOp& a, const GateOp& b) {
  if (a.kind != b.kind || a.name != b.name || a.theta != b.theta ||
      a.wires != b.wires) {
    return false;
  }
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) {
    return false;
  }
  return a.matrix.size() == 0 || a.matrix == b.matrix;
}

StepCircuit::StepCircuit(Layout layout, std::vector<GateOp> ops,
                         std::string label)
    : layout_(std::move(layout)), ops_(std::move(ops)), label_(std::move(label)) {
  std::set<std::string> seen;
  for (const auto& w : layout_) {
    if (w.dim < 1) {
      throw Error(ErrorCode::kInvalidArgument, "wire '" + w.label + "' has dim < 1");
    }
    if (!seen.insert(w.label).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate wire '" + w.label + "'");
    }
  }
  for (const auto& op : ops_) {
    std::set<std::string> targets(op.wires.begin(), op.wires.end());
    if (targets.size() != op.wires.size()) {
      throw Error(ErrorCode::kInvalidArgument, "op repeats a wire");
    }
    std::vector<std::size_t> idx;
    for (const auto& w : op.wires) idx.push_back(wire_index(layout_, w));
    switch (op.kind) {
      case OpKind::kUnitary: {
        int d = 1;
        for (std::size_t i : idx) d *= layout_[i].dim;
        if (op.matrix.rows() != d || op.matrix.cols() != d) {
          throw Error(ErrorCode::kDimensionMismatch,
                      "gate " + op.name + " does not match its wires");
        }
        if (!is_unitary(op.matrix)) {
          throw Error(ErrorCode::kInvalidArgument, "gate " + op.name + " is not unitary");
        }
        break;
      }
      case OpKind::kReset:
        if (idx.size() != 1) {
          throw Error(ErrorCode::kInvalidArgument, "RESET takes exactly one wire");
        }
        if (layout_[idx[0]].role == WireRole::kSystem) {
          throw Error(ErrorCode::kInvalidArgument,
                      "RESET on system wire '" + op.wires[0] + "' is not allowed");
        }
        break;
      case OpKind::kSwap:
        if (idx.size() != 2 || layout_[idx[0]].dim != layout_[idx[1]].dim) {
          throw Error(ErrorCode::kInvalidArgument,
                      "SWAP needs two wires of equal dimension");
        }
        break;
    }
  }
}

Layout StepCircuit::system_layout() const {
  Layout out;
  for (const auto& w : layout_) {
    if (w.role == WireRole::kSystem) out.push_back(w);
  }
  return out;
}

std::string_view to_string(DampingKind kind) {
  return kind == DampingKind::kAmplitudeDamping ? "amplitude-damping"
                                                : "dephasing";
}

DampingKind damping_kind_from_string(std::string_view text) {
  if (text == "amplitude-damping") return DampingKind::kAmplitudeDamping;
  if (text == "dephasing") return DampingKind::kDephasing;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown channel kind '" + std::string(text) + "'");
}

ComplexMatrix standard_gate(std::string_view name, std::optional<double> theta) {
  const bool wants = needs_theta(name);
  if (wants && !theta) {
    throw Error(ErrorCode::kInvalidArgument,
                "gate " + std::string(name) + " requires theta");
  }
  if (!wants && theta) {
    throw Error(ErrorCode::kInvalidArgument,
                "gate " + std::string(name) + " takes no theta");
  }
  const Complex i(0.0, 1.0);
  ComplexMatrix m;
  if (name == "X") {
    m.resize(2, 2);
    m << 0, 1, 1, 0;
  } else if (name == "Y") {
    m.resize(2, 2);
    m << 0, -i, i, 0;
  } else if (name == "Z") {
    m.resize(2, 2);
    m << 1, 0, 0, -1;
  } else if (name == "H") {
    m.resize(2, 2);
    m << 1, 1, 1, -1;
    m /= std::sqrt(2.0);
  } else if (name == "Ry") {
    const double c = std::cos(*theta / 2.0), s = std::sin(*theta / 2.0);
    m.resize(2, 2);
    m << c, -s, s, c;
  } else if (name == "CNOT") {
    m = controlled(standard_gate("X"));
  } else if (name == "CY") {
    m = controlled(standard_gate("Y"));
  } else if (name == "CZ") {
    m = controlled(standard_gate("Z"));
  } else if (name == "CRy") {
    m = controlled(standard_gate("Ry", theta));
  } else if (name == "NCRy") {
    m = controlled(standard_gate("Ry", theta), /*on_zero=*/true);
  } else if (name == "SWAP") {
    m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown gate '" + std::string(name) + "'");
  }
  return m;
}

StepCircuit build_markovian_step(DampingKind kind, double theta) {
  (void)ChannelParams::from_theta(theta);  // range check
  Layout layout{{"q", 2, WireRole::kSystem}, {"e", 2, WireRole::kEnvironment}};
  std::vector<GateOp> ops;
  if (kind == DampingKind::kAmplitudeDamping) {
    ops.push_back(GateOp::gate("CRy", {"q", "e"}, theta));
    ops.push_back(GateOp::gate("CNOT", {"e", "q"}));
  } else {
    ops.push_back(GateOp::gate("Ry", {"e"}, theta));
    ops.push_back(GateOp::gate("CZ", {"e", "q"}));
  }
  ops.push_back(GateOp::reset("e"));
  return StepCircuit(std::move(layout), std::move(ops),
                     "markovian " + std::string(to_string(kind)));
}

StepCircuit build_nonmarkovian_step(DampingKind kind, const MemorySpec& mem) {
  if (mem.k() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "non-Markovian step needs memory order k >= 2");
  }
  check_thetas(mem);
  const int k = mem.k();
  std::vector<GateOp> ops;
  for (int i = 1; i <= k; ++i) {
    const double t = mem.thetas[i - 1];
    if (kind == DampingKind::kAmplitudeDamping) {
      ops.push_back(GateOp::gate("CRy", {"q", wire_name(i)}, t));
    } else {
      ops.push_back(GateOp::gate("Ry", {wire_name(i)}, t));
    }
  }
  ops.push_back(GateOp::gate(
      kind == DampingKind::kAmplitudeDamping ? "CNOT" : "CZ", {"e1", "q"}));
  ops.push_back(GateOp::reset("e1"));
  for (int i = 1; i < k; ++i) {
    ops.push_back(GateOp::swap(wire_name(i), wire_name(i + 1)));
  }
  return StepCircuit(memory_layout(k), std::move(ops),
                     "non-markovian " + std::string(to_string(kind)) +
                         " k=" + std::to_string(k));
}

StepCircuit build_sequential_step(const KrausChannel& ch,
                                  const std::optional<MemorySpec>& mem) {
  if (ch.dim() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequential step supports qubit channels only (dim " +
                    std::to_string(ch.dim()) + ")");
  }
  Layout layout{{"c", 2, WireRole::kControl}};
  layout.push_back({"q", 2, WireRole::kSystem});
  std::string branch_wire = "e";
  std::vector<GateOp> ops;
  if (mem) {
    if (mem->k() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sequential memory needs order k >= 2");
    }
    check_thetas(*mem);
    if (mem->thetas[0] != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sequential memory: theta^1 must be 0, the current-step "
                  "rotation comes from the channel weights");
    }
    for (int i = 1; i <= mem->k(); ++i) {
      layout.push_back({wire_name(i), 2, WireRole::kEnvironment});
    }
    for (int i = 2; i <= mem->k(); ++i) {
      ops.push_back(GateOp::gate("Ry", {wire_name(i)}, mem->thetas[i - 1]));
    }
    branch_wire = "e1";
  } else {
    layout.push_back({"e", 2, WireRole::kEnvironment});
  }

  const auto factors = sequential_factors(ch, FactorMode::kExact);
  for (const auto& factor : factors) {
    const ComplexMatrix& op = factor.operators()[0];
    const ComplexMatrix gram = op.adjoint() * op;
    const double weight = gram.trace().real() / 2.0;
    if ((gram - weight * ComplexMatrix::Identity(2, 2)).norm() > 1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sequential step: Kraus operator in '" + factor.label() +
                      "' is not a scaled unitary; use stinespring_dilate");
    }
    if (weight <= 0.0) continue;
    const std::string pauli = pauli_name(op / std::sqrt(weight));
    if (pauli.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sequential step: Kraus operator in '" + factor.label() +
                      "' is not a scaled Pauli; use stinespring_dilate");
    }
    if (pauli == "I") continue;  // no-jump branch, carried by c = |0>
    const double angle = 2.0 * std::asin(std::sqrt(std::min(weight, 1.0)));
    ops.push_back(GateOp::gate("NCRy", {"c", branch_wire}, angle));
    ops.push_back(GateOp::gate(pauli == "X" ? "CNOT" : "C" + pauli,
                               {branch_wire, "q"}));
    ops.push_back(GateOp::gate("CNOT", {branch_wire, "c"}));
    ops.push_back(GateOp::reset(branch_wire));
  }
  if (mem) {
    for (int i = 1; i < mem->k(); ++i) {
      ops.push_back(GateOp::swap(wire_name(i), wire_name(i + 1)));
    }
  }
  ops.push_back(GateOp::reset("c"));
  return StepCircuit(std::move(layout), std::move(ops),
                     "sequential " + ch.label());
}

ComplexMatrix apply_step(const StepCircuit& step, const ComplexMatrix& rho) {
  const Layout& layout = step.layout();
  if (rho.rows() != layout_dim(layout) || rho.cols() != rho.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_step: state does not match the step layout");
  }
  ComplexMatrix state = rho;
  for (const auto& op : step.ops()) {
    std::vector<std::size_t> idx;
    for (const auto& w : op.wires) idx.push_back(wire_index(layout, w));
    switch (op.kind) {
      case OpKind::kUnitary: {
        const ComplexMatrix u = embed_operator(op.matrix, layout, idx);
        state = u * state * u.adjoint();
        break;
      }
      case OpKind::kReset:
        state = reset_wire(state, layout, idx[0]);
        break;
      case OpKind::kSwap: {
        const int d = layout[idx[0]].dim;
        ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) swap(b * d + a, a * d + b) = 1.0;
        }
        const ComplexMatrix u = embed_operator(swap, layout, idx);
        state = u * state * u.adjoint();
        break;
      }
    }
  }
  return state;
}

DensityMatrix apply_step(const StepCircuit& step, const DensityMatrix& rho) {
  if (rho.layout() != step.layout()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_step: state layout differs from step layout");
  }
  return DensityMatrix(apply_step(step, rho.matrix()), rho.layout());
}

std::string dump_circuit(const StepCircuit& step) {
  std::ostringstream out;
  out << "STEP " << step.label() << "\n";
  for (const auto& w : step.layout()) {
    out << "WIRE " << w.label << " " << w.dim << " " << to_string(w.role) << "\n";
  }
  for (const auto& op : step.ops()) {
    switch (op.kind) {
      case OpKind::kUnitary:
        out << "GATE " << op.name;
        for (const auto& w : op.wires) out << " " << w;
        if (op.theta) out << " " << format_double(*op.theta);
        break;
      case OpKind::kReset:
        out << "RESET " << op.wires[0];
        break;
      case OpKind::kSwap:
        out << "SWAP " << op.wires[0] << " " << op.wires[1];
        break;
    }
    out << "\n";
  }
  return out.str();
}

StepCircuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::string label;
  Layout layout;
  std::vector<GateOp> ops;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head) || head[0] == '#') continue;
    std::vector<std::string> args;
    for (std::string t; tokens >> t;) args.push_back(t);
    try {
      if (head == "STEP") {
        const auto pos = line.find("STEP") + 4;
        label = pos < line.size() ? line.substr(pos + 1) : std::string();
      } else if (head == "WIRE") {
        if (args.size() != 3) throw fail("WIRE needs: label dim role");
        layout.push_back({args[0], std::stoi(args[1]), wire_role_from_string(args[2])});
      } else if (head == "GATE") {
        if (args.empty()) throw fail("GATE needs a name");
        const std::string name = args[0];
        args.erase(args.begin());
        std::optional<double> theta;
        if (needs_theta(name)) {
          if (args.empty()) throw fail("gate " + name + " needs theta");
          std::size_t used = 0;
          theta = std::stod(args.back(), &used);
          if (used != args.back().size()) throw fail("bad theta '" + args.back() + "'");
          args.pop_back();
        }
        ops.push_back(GateOp::gate(name, args, theta));
      } else if (head == "RESET") {
        if (args.size() != 1) throw fail("RESET takes one wire");
        ops.push_back(GateOp::reset(args[0]));
      } else if (head == "SWAP") {
        if (args.size() != 2) throw fail("SWAP takes two wires");
        ops.push_back(GateOp::swap(args[0], args[1]));
      } else {
        throw fail("unknown directive '" + head + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse &&
          std::string_view(e.what()).starts_with("line ")) {
        throw;
      }
      throw fail(e.what());
    } catch (const std::exception&) {
      throw fail("malformed number");
    }
  }
  try {
    return StepCircuit(std::move(layout), std::move(ops), std::move(label));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("circuit: ") + e.what());
  }
}

}  // namespace oqs
