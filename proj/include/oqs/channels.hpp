#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "oqs/qmath.hpp"

namespace oqs {

/// Damping strength gamma and the rotation angle theta that realizes it on an
/// environment qubit, related by gamma = sin(theta / 2).
struct ChannelParams {
  double gamma = 0.0;
  double theta = 0.0;

  static ChannelParams from_gamma(double gamma);
  static ChannelParams from_theta(double theta);
};

class KrausChannel {
 public:
  KrausChannel(int dim, std::vector<ComplexMatrix> operators,
               std::string label = {});

  int dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return operators_.size(); }
  const std::vector<ComplexMatrix>& operators() const noexcept {
    return operators_;
  }
  const std::string& label() const noexcept { return label_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> operators_;
  std::string label_;
};

struct ValidationReport {
  bool passed = false;
  double deviation = 0.0;  // ||sum_i K_i^dag K_i - I||_F
};

/// Matrix acting on column-stacked density matrices; `dim` is the dimension
/// of the underlying Hilbert space (the matrix itself is dim^2 x dim^2).
struct Superoperator {
  ComplexMatrix matrix;
  int dim = 0;

  static Superoperator identity(int dim);
};

enum class FactorMode { kExact, kFirstOrder };

ValidationReport validate(const KrausChannel& ch);

KrausChannel identity_channel(int dim);

// Qubit channels. Operators whose entries are all zero are dropped, so the
// gamma = 0 cases come back as the single-operator identity channel.
KrausChannel amplitude_damping(const ChannelParams& p);
KrausChannel dephasing(const ChannelParams& p);
KrausChannel pauli_channel(double px, double py, double pz);

/// Rank-`rank` Kraus form of a Pauli channel for resource comparisons. Rank 2
/// is {sqrt(1-p) I, sqrt(p) Z}; a multiple of 4 is the depolarizing-style
/// channel with X, Y, Z each at probability p, every Pauli split into
/// rank/4 equal copies.
KrausChannel pauli_mixture(int rank, double p);

/// sum_i K_i rho K_i^dag. Requires a channel that passes validate().
DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

/// The same Kraus sum without completeness checks; used for the
/// first-order sequential factors, which are only approximately trace
/// preserving.
ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& operators,
                        const ComplexMatrix& rho);

/// Environment dimension used by stinespring_dilate for a rank-l channel:
/// the smallest power of two >= l, and at least one qubit.
int dilation_env_dim(std::size_t rank);

/// Unitary U on system (x) environment with U (|psi> (x) |0>_E) =
/// sum_i K_i |psi> (x) |i>_E. Remaining columns are completed by Gram-Schmidt
/// over canonical basis vectors in index order.
ComplexMatrix stinespring_dilate(const KrausChannel& ch);

/// tr_E[U (rho (x) |0><0|_E) U^dag] for a dilation with `env_dim`.
DensityMatrix apply_dilation(const ComplexMatrix& unitary, int env_dim,
                             const DensityMatrix& rho);

Superoperator to_superoperator(const KrausChannel& ch);
DensityMatrix apply_superoperator(const Superoperator& s,
                                  const DensityMatrix& rho);

/// second * first (apply `first`, then `second`).
Superoperator compose(const Superoperator& second, const Superoperator& first);

/// phi_t * phi_s^-1. Throws ErrorCode::kNotInvertible when phi_s is singular
/// or its condition number exceeds 1e12.
Superoperator intermediate_map(const Superoperator& phi_t,
                               const Superoperator& phi_s);

/// Unnormalized Choi matrix sum_{kl} |k><l| (x) phi(|k><l|).
ComplexMatrix choi_matrix(const Superoperator& phi);

/// Minimum eigenvalue of the (Hermitian part of the) Choi matrix. A value
/// >= -1e-9 certifies complete positivity.
double cp_witness(const Superoperator& phi);

/// Splits a rank-l channel into l two-operator channels {K_i, K_i'}, in
/// operator order. Exact mode uses K_i' = sqrt(I - K_i^dag K_i); first-order
/// mode uses K_i' = I - K_i^dag K_i / 2. Completeness of `ch` is not
/// required; an operator with a singular value above 1 is a kDecomposition
/// error.
std::vector<KrausChannel> sequential_factors(const KrausChannel& ch,
                                             FactorMode mode = FactorMode::kExact);

/// Channel specification file (JSON): {"dim", "label", "operators"}, each
/// operator a row-major list of [re, im] pairs.
KrausChannel parse_channel_spec(std::string_view text);
KrausChannel load_channel_file(const std::string& path);
std::string channel_spec_json(const KrausChannel& ch);

}  // namespace oqs
