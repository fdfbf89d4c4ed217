#pragma once

// Dense complex linear algebra used by every other part of the simulator.
//
// Ordering convention: in a tensor product the first factor is the most
// significant index block, and a register layout lists wires from most to
// least significant. Every function here follows that single convention.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace oqs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Absolute tolerance for validity predicates (Hermiticity, trace, unitarity).
inline constexpr double kValidityTol = 1e-10;
/// Tolerance for reconstruction checks such as S*S == M or channel completeness.
inline constexpr double kReconstructionTol = 1e-9;
/// Eigenvalues in [-kPsdClamp, 0) are treated as numerical zeros.
inline constexpr double kPsdClamp = 1e-9;

enum class WireRole { kSystem, kEnvironment, kControl };

struct Wire {
  std::string label;
  int dim = 2;
  WireRole role = WireRole::kSystem;

  friend bool operator==(const Wire&, const Wire&) = default;
};

using Layout = std::vector<Wire>;

std::string_view to_string(WireRole role);
WireRole wire_role_from_string(std::string_view text);

/// Product of all wire dimensions.
int layout_dim(const Layout& layout);

/// Position of `label` in `layout`; throws ErrorCode::kUnknownWire.
std::size_t wire_index(const Layout& layout, std::string_view label);

bool is_hermitian(const ComplexMatrix& m, double tol = kValidityTol);
bool is_unitary(const ComplexMatrix& m, double tol = kValidityTol);
bool is_psd(const ComplexMatrix& m, double tol = kValidityTol);

/// Eigenvalues of the Hermitian part of `m`, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

/// |psi><psi| for an arbitrary (not necessarily normalized) vector.
ComplexMatrix outer(const ComplexVector& psi);

/// A square matrix tagged with a register layout. Construction checks only
/// shape; the physical invariants are reported by check_state so that a
/// simulation can name the invariant that broke and when.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, Layout layout);

  /// Single-qubit state on a system wire called `label`.
  static DensityMatrix qubit(ComplexMatrix matrix, std::string label = "q");

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Layout& layout() const noexcept { return layout_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  Complex trace() const { return matrix_.trace(); }

 private:
  ComplexMatrix matrix_;
  Layout layout_;
};

struct StateCheck {
  bool ok = true;
  std::string invariant;  // "trace", "hermitian" or "psd" when !ok
  double value = 0.0;     // offending quantity
};

/// Checks trace = 1 and Hermiticity within kValidityTol and
/// min eigenvalue >= -kPsdClamp.
StateCheck check_state(const DensityMatrix& rho);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Traces out `wire`; the returned layout drops that entry.
DensityMatrix partial_trace(const DensityMatrix& rho, std::string_view wire);

/// Unique PSD square root. Throws ErrorCode::kPsdViolation for non-Hermitian
/// input or an eigenvalue below -kPsdClamp.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// 1/2 * sum |eigenvalues(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Column-stacking vectorization: entry (i, j) lands at index i + j * n.
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v);

/// Lifts `op` acting on the ordered `wires` (first = most significant inside
/// `op`) to the full register.
ComplexMatrix embed_operator(const ComplexMatrix& op, const Layout& layout,
                             std::span<const std::size_t> wires);

/// Traces out wire `index` and puts it back in |0><0|, keeping the layout.
ComplexMatrix reset_wire(const ComplexMatrix& rho, const Layout& layout,
                         std::size_t index);

}  // namespace oqs
