#include "oqs/qmath.hpp"

#include <gtest/gtest.h>

#include "oqs/error.hpp"
#include "test_util.hpp"

using namespace oqs;
using oqs::testing::max_abs_diff;

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Layout two_qubits() {
  return {{"A", 2, WireRole::kSystem}, {"B", 2, WireRole::kEnvironment}};
}

}  // namespace

TEST(TensorProduct, identity_and_projector_placement) {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(tensor_product(id2, id2), ComplexMatrix::Identity(4, 4));

  const ComplexMatrix out = tensor_product(diag2(1, 0), diag2(0, 1));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  EXPECT_EQ(out, expected);
}

TEST(TensorProduct, first_factor_is_most_significant) {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  ComplexVector ket00 = ComplexVector::Zero(4);
  ket00(0) = 1.0;
  const ComplexVector out = tensor_product(x, ComplexMatrix::Identity(2, 2)) * ket00;
  ComplexVector ket10 = ComplexVector::Zero(4);
  ket10(2) = 1.0;  // |1>|0> = index 2
  EXPECT_EQ(out, ket10);
}

TEST(TensorProduct, associative) {
  std::mt19937_64 rng(7);
  const auto a = oqs::testing::random_hermitian(2, rng);
  const auto b = oqs::testing::random_hermitian(3, rng);
  const auto c = oqs::testing::random_hermitian(2, rng);
  EXPECT_LT(max_abs_diff(tensor_product(tensor_product(a, b), c),
                         tensor_product(a, tensor_product(b, c))),
            1e-14);
}

TEST(PartialTrace, bell_state_reduces_to_maximally_mixed) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho(outer(bell), two_qubits());
  const DensityMatrix reduced = partial_trace(rho, "B");
  EXPECT_LT(max_abs_diff(reduced.matrix(), 0.5 * ComplexMatrix::Identity(2, 2)), 1e-15);
  ASSERT_EQ(reduced.layout().size(), 1u);
  EXPECT_EQ(reduced.layout()[0].label, "A");
}

TEST(PartialTrace, product_state_factorizes) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oqs::testing::random_density(2, rng);
    const auto b = oqs::testing::random_density(3, rng);
    const DensityMatrix rho(tensor_product(a, b), {{"A", 2, WireRole::kSystem},
                                                   {"B", 3, WireRole::kEnvironment}});
    EXPECT_LT(max_abs_diff(partial_trace(rho, "B").matrix(), a), 1e-10);
    EXPECT_LT(max_abs_diff(partial_trace(rho, "A").matrix(), b), 1e-10);
  }
}

TEST(PartialTrace, hermitian_operands_scale_by_trace) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oqs::testing::random_hermitian(4, rng);
    const auto b = oqs::testing::random_hermitian(2, rng);
    const DensityMatrix m(tensor_product(a, b), {{"A", 4, WireRole::kSystem},
                                                 {"B", 2, WireRole::kEnvironment}});
    EXPECT_LT(max_abs_diff(partial_trace(m, "B").matrix(), a * b.trace()), 1e-10);
  }
}

TEST(PartialTrace, matches_brute_force_on_middle_wire) {
  std::mt19937_64 rng(13);
  const auto rho = oqs::testing::random_density(8, rng);
  const DensityMatrix state(rho, {{"a", 2, WireRole::kSystem},
                                  {"b", 2, WireRole::kEnvironment},
                                  {"c", 2, WireRole::kEnvironment}});
  // Oracle: explicit sum over the middle index.
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int b = 0; b < 2; ++b)
            expected(a * 2 + c, a2 * 2 + c2) += rho(a * 4 + b * 2 + c, a2 * 4 + b * 2 + c2);
  EXPECT_LT(max_abs_diff(partial_trace(state, "b").matrix(), expected), 1e-15);
}

TEST(PartialTrace, only_wire_gives_unit_scalar) {
  const DensityMatrix rho = DensityMatrix::qubit(diag2(0.25, 0.75));
  const DensityMatrix out = partial_trace(rho, "q");
  ASSERT_EQ(out.dim(), 1);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 1.0, 1e-15);
}

TEST(PartialTrace, unknown_wire_names_the_label) {
  const DensityMatrix rho = DensityMatrix::qubit(diag2(1, 0));
  try {
    partial_trace(rho, "zz");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownWire);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST(PsdSqrt, identity_diagonal_and_damping_complement) {
  EXPECT_LT(max_abs_diff(psd_sqrt(ComplexMatrix::Identity(3, 3)),
                         ComplexMatrix::Identity(3, 3)),
            1e-12);
  EXPECT_LT(max_abs_diff(psd_sqrt(diag2(4, 9)), diag2(2, 3)), 1e-12);

  const double gamma = 0.3;
  // I - Omega1^dag Omega1 = diag(1, 1 - gamma^2).
  const ComplexMatrix m = diag2(1.0, 1.0 - gamma * gamma);
  EXPECT_LT(max_abs_diff(psd_sqrt(m), diag2(1.0, std::sqrt(1.0 - gamma * gamma))),
            1e-12);
}

TEST(PsdSqrt, squares_back_for_random_psd_up_to_dim16) {
  std::mt19937_64 rng(21);
  for (int dim : {1, 2, 3, 4, 8, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix m = oqs::testing::random_density(dim, rng) * double(dim);
      const ComplexMatrix s = psd_sqrt(m);
      EXPECT_LT((s * s - m).norm(), 1e-9) << "dim " << dim;
      EXPECT_TRUE(is_psd(s));
    }
  }
}

TEST(PsdSqrt, clamps_tiny_negative_and_rejects_large) {
  EXPECT_NO_THROW(psd_sqrt(diag2(1.0, -5e-10)));
  try {
    psd_sqrt(diag2(1.0, -1e-6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPsdViolation);
  }
  ComplexMatrix nonherm = ComplexMatrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(psd_sqrt(nonherm), Error);
}

TEST(TraceDistance, reference_values) {
  const auto zero = DensityMatrix::qubit(diag2(1, 0));
  const auto one = DensityMatrix::qubit(diag2(0, 1));
  ComplexMatrix plus_m = ComplexMatrix::Constant(2, 2, 0.5);
  const auto plus = DensityMatrix::qubit(plus_m);

  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, plus), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(TraceDistance, symmetric_and_triangle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oqs::testing::random_qubit(rng);
    const auto b = oqs::testing::random_qubit(rng);
    const auto c = oqs::testing::random_qubit(rng);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9);
    EXPECT_GE(trace_distance(a, b), 0.0);
    EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
  }
}

TEST(TraceDistance, dimension_mismatch) {
  const auto q = DensityMatrix::qubit(diag2(1, 0));
  const DensityMatrix two(ComplexMatrix::Identity(4, 4) / 4.0, two_qubits());
  EXPECT_THROW(trace_distance(q, two), Error);
}

TEST(DensityMatrix, layout_must_match_dimension) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3), two_qubits()), Error);
}

TEST(CheckState, reports_each_invariant) {
  EXPECT_TRUE(check_state(DensityMatrix::qubit(diag2(0.5, 0.5))).ok);
  EXPECT_EQ(check_state(DensityMatrix::qubit(diag2(0.5, 0.6))).invariant, "trace");
  ComplexMatrix skew = diag2(0.5, 0.5);
  skew(0, 1) = 0.1;
  EXPECT_EQ(check_state(DensityMatrix::qubit(skew)).invariant, "hermitian");
  EXPECT_EQ(check_state(DensityMatrix::qubit(diag2(1.5, -0.5))).invariant, "psd");
}

TEST(Vectorize, column_stacking) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const ComplexVector v = vectorize(m);
  EXPECT_EQ(v(0), Complex(1));
  EXPECT_EQ(v(1), Complex(3));
  EXPECT_EQ(v(2), Complex(2));
  EXPECT_EQ(v(3), Complex(4));
  EXPECT_EQ(unvectorize(v), m);
}

TEST(EmbedOperator, reversed_wire_order_matches_swap_conjugation) {
  ComplexMatrix cnot = ComplexMatrix::Identity(4, 4);
  cnot.block(2, 2, 2, 2) << 0, 1, 1, 0;
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const std::size_t reversed[] = {1, 0};
  EXPECT_EQ(embed_operator(cnot, two_qubits(), reversed), swap * cnot * swap);
}

TEST(ResetWire, replaces_wire_with_ground_state) {
  std::mt19937_64 rng(3);
  const auto a = oqs::testing::random_density(2, rng);
  const ComplexMatrix rho = tensor_product(a, diag2(0, 1));
  EXPECT_LT(max_abs_diff(reset_wire(rho, two_qubits(), 1), tensor_product(a, diag2(1, 0))),
            1e-15);
}
