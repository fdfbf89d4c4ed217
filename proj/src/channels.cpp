#include "oqs/channels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oqs/error.hpp"

namespace oqs {
namespace {

constexpr double kConditionLimit = 1e12;

void require_valid(const KrausChannel& ch, std::string_view where) {
  const ValidationReport report = validate(ch);
  if (!report.passed) {
    throw Error(ErrorCode::kInvalidChannel,
                std::string(where) + ": channel '" + ch.label() +
                    "' is not trace preserving (deviation " +
                    std::to_string(report.deviation) + ")");
  }
}

void require_unit_interval(double value, std::string_view name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " must lie in [0, 1], got " +
                    std::to_string(value));
  }
}

std::vector<ComplexMatrix> drop_zero(std::vector<ComplexMatrix> ops) {
  std::erase_if(ops, [](const ComplexMatrix& m) { return m.isZero(0.0); });
  return ops;
}

ComplexMatrix pauli(char which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 'X':
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case 'Y':
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      m.setIdentity();
  }
  return m;
}

}  // namespace

ChannelParams ChannelParams::from_gamma(double gamma) {
  require_unit_interval(gamma, "gamma");
  return {gamma, 2.0 * std::asin(gamma)};
}

ChannelParams ChannelParams::from_theta(double theta) {
  if (!(theta >= 0.0 && theta < 2.0 * M_PI)) {
    throw Error(ErrorCode::kInvalidArgument,
                "theta must lie in [0, 2pi), got " + std::to_string(theta));
  }
  return {std::sin(theta / 2.0), theta};
}

KrausChannel::KrausChannel(int dim, std::vector<ComplexMatrix> operators,
                           std::string label)
    : dim_(dim), operators_(std::move(operators)), label_(std::move(label)) {
  if (dim_ < 1) {
    throw Error(ErrorCode::kInvalidChannel, "channel dimension must be >= 1");
  }
  if (operators_.empty()) {
    throw Error(ErrorCode::kInvalidChannel,
                "channel needs at least one Kraus operator");
  }
  for (const auto& op : operators_) {
    if (op.rows() != dim_ || op.cols() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "Kraus operator is " + std::to_string(op.rows()) + "x" +
                      std::to_string(op.cols()) + ", expected " +
                      std::to_string(dim_) + "x" + std::to_string(dim_));
    }
  }
}

Superoperator Superoperator::identity(int dim) {
  return {ComplexMatrix::Identity(dim * dim, dim * dim), dim};
}

ValidationReport validate(const KrausChannel& ch) {
  ComplexMatrix sum = ComplexMatrix::Zero(ch.dim(), ch.dim());
  for (const auto& op : ch.operators()) sum += op.adjoint() * op;
  sum -= ComplexMatrix::Identity(ch.dim(), ch.dim());
  const double dev = sum.norm();
  return {dev <= kReconstructionTol, dev};
}

KrausChannel identity_channel(int dim) {
  return KrausChannel(dim, {ComplexMatrix::Identity(dim, dim)}, "identity");
}

KrausChannel amplitude_damping(const ChannelParams& p) {
  require_unit_interval(p.gamma, "gamma");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p.gamma * p.gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = p.gamma;
  return KrausChannel(2, drop_zero({k0, k1}), "amplitude-damping");
}

KrausChannel dephasing(const ChannelParams& p) {
  require_unit_interval(p.gamma, "gamma");
  return KrausChannel(2,
                      drop_zero({std::sqrt(1.0 - p.gamma * p.gamma) * pauli('I'),
                                 p.gamma * pauli('Z')}),
                      "dephasing");
}

KrausChannel pauli_channel(double px, double py, double pz) {
  require_unit_interval(px, "px");
  require_unit_interval(py, "py");
  require_unit_interval(pz, "pz");
  const double p0 = 1.0 - px - py - pz;
  if (p0 < -1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "pauli probabilities sum to more than 1");
  }
  return KrausChannel(2,
                      drop_zero({std::sqrt(std::max(p0, 0.0)) * pauli('I'),
                                 std::sqrt(px) * pauli('X'),
                                 std::sqrt(py) * pauli('Y'),
                                 std::sqrt(pz) * pauli('Z')}),
                      "pauli");
}

KrausChannel pauli_mixture(int rank, double p) {
  if (rank == 2) {
    require_unit_interval(p, "p");
    return KrausChannel(2, {std::sqrt(1.0 - p) * pauli('I'), std::sqrt(p) * pauli('Z')},
                        "pauli-mixture");
  }
  if (rank < 4 || rank % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "pauli_mixture rank must be 2 or a multiple of 4, got " +
                    std::to_string(rank));
  }
  if (!(p >= 0.0 && 3.0 * p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pauli_mixture needs 0 <= 3p <= 1");
  }
  const int copies = rank / 4;
  std::vector<ComplexMatrix> ops;
  for (char which : {'I', 'X', 'Y', 'Z'}) {
    const double weight = (which == 'I' ? 1.0 - 3.0 * p : p) / copies;
    for (int c = 0; c < copies; ++c) ops.push_back(std::sqrt(weight) * pauli(which));
  }
  return KrausChannel(2, std::move(ops), "pauli-mixture");
}

ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& operators,
                        const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& op : operators) out += op * rho * op.adjoint();
  return out;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  require_valid(ch, "apply_channel");
  if (ch.dim() != rho.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_channel: channel acts on dimension " +
                    std::to_string(ch.dim()) + ", state has " +
                    std::to_string(rho.dim()));
  }
  return DensityMatrix(kraus_sum(ch.operators(), rho.matrix()), rho.layout());
}

int dilation_env_dim(std::size_t rank) {
  int env = 2;
  while (static_cast<std::size_t>(env) < rank) env *= 2;
  return env;
}

ComplexMatrix stinespring_dilate(const KrausChannel& ch) {
  require_valid(ch, "stinespring_dilate");
  const int n = ch.dim();
  const int env = dilation_env_dim(ch.rank());
  const int full = n * env;

  ComplexMatrix u = ComplexMatrix::Zero(full, full);
  // Prescribed isometry: column (j, 0) holds sum_i K_i|j> (x) |i>.
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < ch.rank(); ++i) {
      for (int r = 0; r < n; ++r) {
        u(r * env + static_cast<int>(i), j * env) = ch.operators()[i](r, j);
      }
    }
  }

  std::vector<ComplexVector> basis;
  basis.reserve(full);
  for (int j = 0; j < n; ++j) basis.emplace_back(u.col(j * env));

  std::vector<int> free_columns;
  for (int j = 0; j < n; ++j) {
    for (int e = 1; e < env; ++e) free_columns.push_back(j * env + e);
  }

  std::size_t next_free = 0;
  for (int c = 0; c < full && next_free < free_columns.size(); ++c) {
    ComplexVector v = ComplexVector::Unit(full, c);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b.dot(v) * b;
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    v /= norm;
    u.col(free_columns[next_free++]) = v;
    basis.push_back(std::move(v));
  }
  return u;
}

DensityMatrix apply_dilation(const ComplexMatrix& unitary, int env_dim,
                             const DensityMatrix& rho) {
  if (unitary.rows() != rho.dim() * env_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_dilation: unitary does not match state (x) environment");
  }
  Layout layout = rho.layout();
  layout.push_back({"__env", env_dim, WireRole::kEnvironment});
  ComplexMatrix env0 = ComplexMatrix::Zero(env_dim, env_dim);
  env0(0, 0) = 1.0;
  const ComplexMatrix joint = tensor_product(rho.matrix(), env0);
  DensityMatrix out(unitary * joint * unitary.adjoint(), std::move(layout));
  return partial_trace(out, "__env");
}

Superoperator to_superoperator(const KrausChannel& ch) {
  require_valid(ch, "to_superoperator");
  const int n = ch.dim();
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  // vec(K rho K^dag) = (conj(K) (x) K) vec(rho) under column stacking.
  for (const auto& op : ch.operators()) s += tensor_product(op.conjugate(), op);
  return {s, n};
}

DensityMatrix apply_superoperator(const Superoperator& s,
                                  const DensityMatrix& rho) {
  if (s.dim != rho.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "apply_superoperator: dimension mismatch");
  }
  return DensityMatrix(unvectorize(s.matrix * vectorize(rho.matrix())),
                       rho.layout());
}

Superoperator compose(const Superoperator& second, const Superoperator& first) {
  if (second.dim != first.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "compose: superoperators act on different dimensions");
  }
  return {second.matrix * first.matrix, first.dim};
}

Superoperator intermediate_map(const Superoperator& phi_t,
                               const Superoperator& phi_s) {
  if (phi_t.dim != phi_s.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "intermediate_map: superoperators act on different dimensions");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(phi_s.matrix,
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || smax / smin > kConditionLimit) {
    throw Error(ErrorCode::kNotInvertible,
                "intermediate_map: phi_s is not invertible (condition number " +
                    (smin > 0.0 ? std::to_string(smax / smin)
                                : std::string("inf")) +
                    ")");
  }
  const ComplexMatrix inverse = svd.matrixV() *
                                sv.cwiseInverse().cast<Complex>().asDiagonal() *
                                svd.matrixU().adjoint();
  return {phi_t.matrix * inverse, phi_t.dim};
}

ComplexMatrix choi_matrix(const Superoperator& phi) {
  const int n = phi.dim;
  ComplexMatrix choi(n * n, n * n);
  // J[(k,i),(l,j)] = phi(|k><l|)_{ij} = S[i + j n, k + l n].
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
          choi(k * n + i, l * n + j) = phi.matrix(i + j * n, k + l * n);
        }
      }
    }
  }
  return choi;
}

double cp_witness(const Superoperator& phi) {
  return min_eigenvalue(choi_matrix(phi));
}

std::vector<KrausChannel> sequential_factors(const KrausChannel& ch,
                                             FactorMode mode) {
  const int n = ch.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  std::vector<KrausChannel> factors;
  factors.reserve(ch.rank());
  for (std::size_t i = 0; i < ch.rank(); ++i) {
    const ComplexMatrix& op = ch.operators()[i];
    const ComplexMatrix gram = op.adjoint() * op;
    ComplexMatrix complement;
    if (mode == FactorMode::kExact) {
      try {
        complement = psd_sqrt(id - gram);
      } catch (const Error& e) {
        throw Error(ErrorCode::kDecomposition,
                    "sequential_factors: I - K^dag K is not PSD for operator " +
                        std::to_string(i) + " (" + e.what() + ")");
      }
    } else {
      if (min_eigenvalue(id - gram) < -kPsdClamp) {
        throw Error(ErrorCode::kDecomposition,
                    "sequential_factors: operator " + std::to_string(i) +
                        " has a singular value above 1");
      }
      complement = id - 0.5 * gram;
    }
    factors.emplace_back(n, std::vector<ComplexMatrix>{op, complement},
                         ch.label() + "/factor" + std::to_string(i));
  }
  return factors;
}

KrausChannel parse_channel_spec(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                std::string("channel spec: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "channel spec: top level must be an object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "dim" && key != "label" && key != "operators") {
      throw Error(ErrorCode::kParse, "channel spec: unknown key '" + key + "'");
    }
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw Error(ErrorCode::kParse, "channel spec: 'dim' must be an integer");
  }
  if (!doc.contains("operators") || !doc["operators"].is_array()) {
    throw Error(ErrorCode::kParse, "channel spec: 'operators' must be a list");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 1) throw Error(ErrorCode::kParse, "channel spec: 'dim' must be >= 1");
  std::string label = doc.value("label", std::string("custom"));

  std::vector<ComplexMatrix> ops;
  for (const auto& entry : doc["operators"]) {
    if (!entry.is_array() || entry.size() != static_cast<std::size_t>(dim * dim)) {
      throw Error(ErrorCode::kParse,
                  "channel spec: each operator needs dim^2 = " +
                      std::to_string(dim * dim) + " entries");
    }
    ComplexMatrix m(dim, dim);
    for (int idx = 0; idx < dim * dim; ++idx) {
      const auto& pair = entry[idx];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        throw Error(ErrorCode::kParse,
                    "channel spec: entries must be [re, im] number pairs");
      }
      m(idx / dim, idx % dim) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    ops.push_back(std::move(m));
  }
  return KrausChannel(dim, std::move(ops), std::move(label));
}

KrausChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open channel file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec(buf.str());
}

std::string channel_spec_json(const KrausChannel& ch) {
  nlohmann::json doc;
  doc["dim"] = ch.dim();
  doc["label"] = ch.label();
  doc["operators"] = nlohmann::json::array();
  for (const auto& op : ch.operators()) {
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < ch.dim(); ++r) {
      for (int c = 0; c < ch.dim(); ++c) {
        entries.push_back({op(r, c).real(), op(r, c).imag()});
      }
    }
    doc["operators"].push_back(std::move(entries));
  }
  return doc.dump(2);
}

}  // namespace oqs
