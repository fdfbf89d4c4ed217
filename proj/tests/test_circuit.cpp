#include "oqs/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oqs/error.hpp"
#include "test_util.hpp"

using namespace oqs;
using oqs::testing::max_abs_diff;

namespace {

ComplexMatrix ket0() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

ComplexMatrix ket1() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix ry(double t) {
  ComplexMatrix m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Hand-written Kraus forms, independent of the channels module.
ComplexMatrix damp_oracle(const ComplexMatrix& rho, double gamma) {
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1 - gamma * gamma);
  k1 << 0, gamma, 0, 0;
  return k0 * rho * k0.adjoint() + k1 * rho * k1.adjoint();
}

ComplexMatrix dephase_oracle(const ComplexMatrix& rho, double gamma) {
  ComplexMatrix out = rho;
  out(0, 1) *= 1 - 2 * gamma * gamma;
  out(1, 0) *= 1 - 2 * gamma * gamma;
  return out;
}

ComplexMatrix pauli_oracle(const ComplexMatrix& rho, double eps) {
  return (1 - 3 * eps) * rho + eps * (pauli_x() * rho * pauli_x() +
                                      pauli_y() * rho * pauli_y() +
                                      pauli_z() * rho * pauli_z());
}

// Full register state: system rho on the single system wire, |0><0| elsewhere.
ComplexMatrix embed_system(const StepCircuit& step, const ComplexMatrix& rho) {
  ComplexMatrix full = ComplexMatrix::Identity(1, 1);
  for (const auto& w : step.layout()) {
    full = tensor_product(full, w.role == WireRole::kSystem ? rho : ket0());
  }
  return full;
}

ComplexMatrix reduce_to(const StepCircuit& step, const ComplexMatrix& full,
                        const std::string& keep) {
  DensityMatrix state(full, step.layout());
  for (const auto& w : step.layout()) {
    if (w.label != keep) state = partial_trace(state, w.label);
  }
  return state.matrix();
}

ComplexMatrix one_step(const StepCircuit& step, const ComplexMatrix& rho) {
  return reduce_to(step, apply_step(step, embed_system(step, rho)), "q");
}

// Populations of |1> (or <+|rho|+>) over T steps with persistent wires.
std::vector<ComplexMatrix> trajectory(const StepCircuit& step, const ComplexMatrix& rho,
                                      int T) {
  ComplexMatrix full = embed_system(step, rho);
  std::vector<ComplexMatrix> out{rho};
  for (int n = 0; n < T; ++n) {
    full = apply_step(step, full);
    out.push_back(reduce_to(step, full, "q"));
  }
  return out;
}

double worst_sequential_error(double eps, const std::vector<ComplexMatrix>& states) {
  const auto step = build_sequential_step(pauli_channel(eps, eps, eps));
  double worst = 0.0;
  for (const auto& rho : states) {
    worst = std::max(worst, trace_distance(DensityMatrix::qubit(one_step(step, rho)),
                                           DensityMatrix::qubit(pauli_oracle(rho, eps))));
  }
  return worst;
}

}  // namespace

TEST(StandardGate, reference_actions) {
  EXPECT_LT(max_abs_diff(standard_gate("Ry", 0.0), ComplexMatrix::Identity(2, 2)), 1e-15);
  const ComplexVector flipped = standard_gate("Ry", M_PI) * ComplexVector::Unit(2, 0);
  EXPECT_LT(std::abs(std::abs(flipped(1)) - 1.0), 1e-15);
  EXPECT_LT(std::abs(flipped(0)), 1e-15);

  // CNOT |10> = |11>.
  EXPECT_EQ(standard_gate("CNOT") * ComplexVector::Unit(4, 2), ComplexVector::Unit(4, 3));
  EXPECT_EQ(standard_gate("CNOT") * ComplexVector::Unit(4, 1), ComplexVector::Unit(4, 1));

  // CRy acts only on control |1>, NCRy only on control |0>.
  const ComplexMatrix cry = standard_gate("CRy", 0.7);
  EXPECT_LT(max_abs_diff(cry.block(0, 0, 2, 2), ComplexMatrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs_diff(cry.block(2, 2, 2, 2), ry(0.7)), 1e-15);
  const ComplexMatrix ncry = standard_gate("NCRy", 0.7);
  EXPECT_LT(max_abs_diff(ncry.block(0, 0, 2, 2), ry(0.7)), 1e-15);
  EXPECT_LT(max_abs_diff(ncry.block(2, 2, 2, 2), ComplexMatrix::Identity(2, 2)), 1e-15);

  EXPECT_LT(max_abs_diff(standard_gate("CZ").block(2, 2, 2, 2), pauli_z()), 1e-15);
  EXPECT_LT(max_abs_diff(standard_gate("CY").block(2, 2, 2, 2), pauli_y()), 1e-15);
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  EXPECT_LT(max_abs_diff(standard_gate("H"), h / std::sqrt(2.0)), 1e-15);
}

TEST(StandardGate, every_gate_is_unitary) {
  for (const char* name : {"X", "Y", "Z", "H", "CNOT", "CY", "CZ", "SWAP"}) {
    EXPECT_TRUE(is_unitary(standard_gate(name))) << name;
  }
  for (const char* name : {"Ry", "CRy", "NCRy"}) {
    EXPECT_TRUE(is_unitary(standard_gate(name, 1.234))) << name;
  }
}

TEST(StandardGate, theta_rules) {
  EXPECT_THROW(standard_gate("Ry"), Error);
  EXPECT_THROW(standard_gate("CNOT", 0.5), Error);
  EXPECT_THROW(standard_gate("Toffoli"), Error);
}

TEST(StepCircuit, validation_errors) {
  const Layout layout{{"q", 2, WireRole::kSystem}, {"e", 2, WireRole::kEnvironment}};
  EXPECT_THROW(StepCircuit(layout, {GateOp::reset("q")}), Error);
  EXPECT_THROW(StepCircuit(layout, {GateOp::gate("CNOT", {"q", "q"})}), Error);
  EXPECT_THROW(StepCircuit(layout, {GateOp::gate("CNOT", {"q"})}), Error);
  EXPECT_THROW(StepCircuit(layout, {GateOp::gate("X", {"zz"})}), Error);
  EXPECT_THROW(StepCircuit({{"q", 2, WireRole::kSystem}, {"q", 2, WireRole::kSystem}}, {}),
               Error);
  const Layout mixed{{"q", 2, WireRole::kSystem}, {"t", 3, WireRole::kEnvironment}};
  EXPECT_THROW(StepCircuit(mixed, {GateOp::swap("q", "t")}), Error);
  EXPECT_NO_THROW(StepCircuit(layout, {GateOp::swap("q", "e"), GateOp::reset("e")}));
}

TEST(ApplyStep, empty_ops_and_reset_semantics) {
  std::mt19937_64 rng(31);
  const Layout layout{{"q", 2, WireRole::kSystem}, {"e", 2, WireRole::kEnvironment}};
  const ComplexMatrix rho = oqs::testing::random_density(4, rng);
  EXPECT_EQ(apply_step(StepCircuit(layout, {}), rho), rho);

  const ComplexMatrix q = oqs::testing::random_density(2, rng);
  const StepCircuit reset(layout, {GateOp::reset("e")});
  EXPECT_LT(max_abs_diff(apply_step(reset, tensor_product(q, ket1())), tensor_product(q, ket0())),
            1e-15);

  EXPECT_THROW(apply_step(reset, ComplexMatrix::Identity(8, 8)), Error);
}

TEST(MarkovianStep, amplitude_damping_layout_and_population) {
  const double theta = M_PI / 10;
  const auto step = build_markovian_step(DampingKind::kAmplitudeDamping, theta);
  ASSERT_EQ(step.layout().size(), 2u);
  EXPECT_EQ(step.layout()[0].label, "q");
  EXPECT_EQ(step.layout()[1].role, WireRole::kEnvironment);
  ASSERT_EQ(step.ops().size(), 3u);
  EXPECT_EQ(step.ops()[0].name, "CRy");
  EXPECT_EQ(step.ops()[1].name, "CNOT");
  EXPECT_EQ(step.ops()[2].kind, OpKind::kReset);

  const double gamma = std::sin(theta / 2);
  const auto traj = trajectory(step, ket1(), 2);
  EXPECT_NEAR(traj[1](1, 1).real(), 1 - gamma * gamma, 1e-14);
  EXPECT_NEAR(traj[2](1, 1).real(), std::pow(1 - gamma * gamma, 2), 1e-14);
}

TEST(MarkovianStep, channel_equivalence_on_random_states) {
  std::mt19937_64 rng(32);
  for (double theta : {M_PI / 10, M_PI / 8, M_PI / 5, 2.0, 3.0}) {
    const double gamma = std::sin(theta / 2);
    const auto ad = build_markovian_step(DampingKind::kAmplitudeDamping, theta);
    const auto dp = build_markovian_step(DampingKind::kDephasing, theta);
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix rho = oqs::testing::random_density(2, rng);
      EXPECT_LT(max_abs_diff(one_step(ad, rho), damp_oracle(rho, gamma)), 1e-10);
      EXPECT_LT(max_abs_diff(one_step(dp, rho), dephase_oracle(rho, gamma)), 1e-10);
    }
  }
}

TEST(MarkovianStep, invariants_on_every_output) {
  std::mt19937_64 rng(33);
  for (auto kind : {DampingKind::kAmplitudeDamping, DampingKind::kDephasing}) {
    const auto step = build_markovian_step(kind, 1.1);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix out = apply_step(step, embed_system(step, oqs::testing::random_density(2, rng)));
      EXPECT_NEAR(std::abs(out.trace() - Complex(1.0)), 0.0, 1e-10);
      EXPECT_GE(min_eigenvalue(out), -1e-9);
    }
  }
}

TEST(MarkovianStep, rejects_bad_theta) {
  EXPECT_THROW(build_markovian_step(DampingKind::kDephasing, -0.1), Error);
  EXPECT_THROW(build_markovian_step(DampingKind::kDephasing, 7.0), Error);
}

TEST(NonMarkovianStep, op_order_for_amplitude_damping) {
  const auto step = build_nonmarkovian_step(DampingKind::kAmplitudeDamping,
                                            {{M_PI / 10, 2 * M_PI / 3, 5 * M_PI / 6}});
  ASSERT_EQ(step.layout().size(), 4u);
  EXPECT_EQ(step.layout()[3].label, "e3");
  const auto& ops = step.ops();
  ASSERT_EQ(ops.size(), 7u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(ops[i].name, "CRy");
    EXPECT_EQ(ops[i].wires, (std::vector<std::string>{"q", "e" + std::to_string(i + 1)}));
  }
  EXPECT_EQ(ops[3].name, "CNOT");
  EXPECT_EQ(ops[3].wires, (std::vector<std::string>{"e1", "q"}));
  EXPECT_EQ(ops[4], GateOp::reset("e1"));
  EXPECT_EQ(ops[5], GateOp::swap("e1", "e2"));
  EXPECT_EQ(ops[6], GateOp::swap("e2", "e3"));
}

TEST(NonMarkovianStep, dephasing_storage_is_uncontrolled) {
  const auto step = build_nonmarkovian_step(DampingKind::kDephasing, {{0.1, 0.2}});
  EXPECT_EQ(step.ops()[0].name, "Ry");
  EXPECT_EQ(step.ops()[1].name, "Ry");
  EXPECT_EQ(step.ops()[2].name, "CZ");
}

TEST(NonMarkovianStep, errors) {
  EXPECT_THROW(build_nonmarkovian_step(DampingKind::kDephasing, {{0.1}}), Error);
  EXPECT_THROW(build_nonmarkovian_step(DampingKind::kDephasing, {{}}), Error);
  EXPECT_THROW(build_nonmarkovian_step(DampingKind::kDephasing, {{0.1, -1.0}}), Error);
}

TEST(NonMarkovianStep, zero_memory_reduces_to_markovian) {
  std::mt19937_64 rng(34);
  for (auto kind : {DampingKind::kAmplitudeDamping, DampingKind::kDephasing}) {
    for (double theta : {M_PI / 10, M_PI / 5}) {
      const auto markov = build_markovian_step(kind, theta);
      for (int k : {2, 3, 4}) {
        std::vector<double> thetas(k, 0.0);
        thetas[0] = theta;
        const auto nm = build_nonmarkovian_step(kind, {thetas});
        const ComplexMatrix rho = oqs::testing::random_density(2, rng);
        const auto a = trajectory(markov, rho, 50);
        const auto b = trajectory(nm, rho, 50);
        for (int n = 0; n <= 50; ++n) EXPECT_LT(max_abs_diff(a[n], b[n]), 1e-10) << n;
      }
    }
  }
}

TEST(NonMarkovianStep, swap_bookkeeping_after_first_step) {
  const double t1 = M_PI / 10, t2 = 2 * M_PI / 3, t3 = 5 * M_PI / 6;
  const auto step = build_nonmarkovian_step(DampingKind::kAmplitudeDamping, {{t1, t2, t3}});
  const ComplexMatrix full = apply_step(step, embed_system(step, ket1()));
  const auto stored = [](double t) { return ComplexMatrix(ry(t) * ket0() * ry(t).adjoint()); };
  EXPECT_LT(max_abs_diff(reduce_to(step, full, "e1"), stored(t2)), 1e-10);
  EXPECT_LT(max_abs_diff(reduce_to(step, full, "e2"), stored(t3)), 1e-10);
  EXPECT_LT(max_abs_diff(reduce_to(step, full, "e3"), ket0()), 1e-10);
}

TEST(NonMarkovianStep, amplitude_damping_population_revives) {
  const auto step = build_nonmarkovian_step(DampingKind::kAmplitudeDamping,
                                            {{M_PI / 10, 2 * M_PI / 3, 5 * M_PI / 6}});
  const auto traj = trajectory(step, ket1(), 30);
  bool increase = false;
  for (int n = 0; n < 30; ++n) increase |= traj[n + 1](1, 1).real() > traj[n](1, 1).real();
  EXPECT_TRUE(increase);
}

TEST(NonMarkovianStep, dephasing_tends_to_one_half_non_monotonically) {
  const auto step = build_nonmarkovian_step(DampingKind::kDephasing,
                                            {{M_PI / 5, M_PI / 4, M_PI / 2}});
  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  const auto traj = trajectory(step, plus, 100);
  const auto pop = [&](const ComplexMatrix& m) { return (plus * m).trace().real(); };
  bool increase = false;
  for (int n = 0; n < 100; ++n) increase |= pop(traj[n + 1]) > pop(traj[n]) + 1e-9;
  EXPECT_TRUE(increase);
  EXPECT_NEAR(pop(traj[100]), 0.5, 0.05);
}

TEST(SequentialStep, trivial_channel_is_identity) {
  const auto step = build_sequential_step(pauli_channel(0, 0, 0));
  ASSERT_EQ(step.layout().size(), 3u);
  EXPECT_EQ(step.layout()[0].role, WireRole::kControl);
  std::mt19937_64 rng(35);
  const ComplexMatrix rho = oqs::testing::random_density(2, rng);
  EXPECT_LT(max_abs_diff(one_step(step, rho), rho), 1e-14);
}

TEST(SequentialStep, two_ancillas_regardless_of_rank) {
  const auto step = build_sequential_step(pauli_channel(0.1, 0.05, 0.02));
  EXPECT_EQ(step.layout().size(), 3u);
  // Three non-identity branches, four ops each, plus the control reset.
  EXPECT_EQ(step.ops().size(), 13u);
}

TEST(SequentialStep, close_to_channel_with_quadratic_error) {
  std::mt19937_64 rng(36);
  std::vector<ComplexMatrix> states;
  for (int i = 0; i < 20; ++i) states.push_back(oqs::testing::random_density(2, rng));

  EXPECT_LE(worst_sequential_error(0.01, states), 5e-4);

  const std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  std::vector<double> x, y;
  for (double e : eps) {
    x.push_back(std::log(e));
    y.push_back(std::log(worst_sequential_error(e, states)));
  }
  // Least-squares slope.
  const double n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, 2.0, 0.2);
  EXPECT_NEAR(std::exp(y[1] - y[2]), 4.0, 0.5);
}

TEST(SequentialStep, single_branch_is_exact) {
  std::mt19937_64 rng(37);
  const auto step = build_sequential_step(pauli_channel(0, 0, 0.3));
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = oqs::testing::random_density(2, rng);
    EXPECT_LT(max_abs_diff(one_step(step, rho),
                           0.7 * rho + 0.3 * pauli_z() * rho * pauli_z()),
              1e-12);
  }
}

TEST(SequentialStep, rejects_unsupported_channels) {
  EXPECT_THROW(build_sequential_step(amplitude_damping(ChannelParams::from_gamma(0.3))), Error);
  EXPECT_THROW(build_sequential_step(identity_channel(4)), Error);
}

TEST(DumpCircuit, round_trips_every_builder) {
  const std::vector<StepCircuit> steps{
      build_markovian_step(DampingKind::kAmplitudeDamping, M_PI / 10),
      build_markovian_step(DampingKind::kDephasing, M_PI / 5),
      build_nonmarkovian_step(DampingKind::kAmplitudeDamping, {{M_PI / 8, 5 * M_PI / 6, M_PI}}),
      build_nonmarkovian_step(DampingKind::kDephasing, {{M_PI / 5, M_PI / 4, M_PI / 2}}),
      build_sequential_step(pauli_channel(0.01, 0.02, 0.03))};
  for (const auto& step : steps) {
    const std::string text = dump_circuit(step);
    const StepCircuit back = parse_circuit(text);
    EXPECT_EQ(back, step) << text;
    EXPECT_EQ(dump_circuit(back), text);
  }
}

TEST(ParseCircuit, comments_and_line_numbered_errors) {
  const auto ok = parse_circuit(
      "# test fixture\n"
      "STEP demo\n"
      "WIRE q 2 system\n"
      "WIRE e 2 environment\n"
      "\n"
      "GATE Ry e 0.5\n"
      "GATE CZ e q\n"
      "RESET e\n");
  EXPECT_EQ(ok.label(), "demo");
  EXPECT_EQ(ok.ops().size(), 3u);

  try {
    parse_circuit("STEP x\nWIRE q 2 system\nGATE Ry q zz\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
  }
  EXPECT_THROW(parse_circuit("WIRE q 2 system\nFROB q\n"), Error);
  EXPECT_THROW(parse_circuit("WIRE q 2 system\nRESET q\n"), Error);
  EXPECT_THROW(parse_circuit("WIRE q 2 sideways\n"), Error);
}
