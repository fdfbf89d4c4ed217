#include "oqs/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oqs/error.hpp"

namespace oqs {
namespace {

std::vector<int> strides_of(const Layout& layout) {
  std::vector<int> strides(layout.size(), 1);
  for (std::size_t w = layout.size(); w-- > 1;) {
    strides[w - 1] = strides[w] * layout[w].dim;
  }
  return strides;
}

std::string describe_layout(const Layout& layout) {
  std::string out = "[";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) out += ", ";
    out += layout[i].label + ":" + std::to_string(layout[i].dim);
  }
  return out + "]";
}

}  // namespace

std::string_view to_string(WireRole role) {
  switch (role) {
    case WireRole::kSystem:
      return "system";
    case WireRole::kEnvironment:
      return "environment";
    case WireRole::kControl:
      return "control";
  }
  return "system";
}

WireRole wire_role_from_string(std::string_view text) {
  if (text == "system") return WireRole::kSystem;
  if (text == "environment") return WireRole::kEnvironment;
  if (text == "control") return WireRole::kControl;
  throw Error(ErrorCode::kParse, "unknown wire role '" + std::string(text) + "'");
}

int layout_dim(const Layout& layout) {
  int d = 1;
  for (const auto& w : layout) d *= w.dim;
  return d;
}

std::size_t wire_index(const Layout& layout, std::string_view label) {
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].label == label) return i;
  }
  throw Error(ErrorCode::kUnknownWire,
              "unknown wire '" + std::string(label) + "' in layout " +
                  describe_layout(layout));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& m) {
  return hermitian_eigenvalues(m).minCoeff();
}

ComplexMatrix outer(const ComplexVector& psi) { return psi * psi.adjoint(); }

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Layout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "density matrix must be square and non-empty");
  }
  if (layout_dim(layout_) != matrix_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "layout " + describe_layout(layout_) + " has dimension " +
                    std::to_string(layout_dim(layout_)) + " but matrix is " +
                    std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()));
  }
}

DensityMatrix DensityMatrix::qubit(ComplexMatrix matrix, std::string label) {
  return DensityMatrix(std::move(matrix),
                       Layout{{std::move(label), 2, WireRole::kSystem}});
}

StateCheck check_state(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > kValidityTol) return {false, "trace", trace_err};
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kValidityTol) return {false, "hermitian", herm_err};
  const double lo = min_eigenvalue(m);
  if (lo < -kPsdClamp) return {false, "psd", lo};
  return {};
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  Layout layout = a.layout();
  layout.insert(layout.end(), b.layout().begin(), b.layout().end());
  return DensityMatrix(tensor_product(a.matrix(), b.matrix()),
                       std::move(layout));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::string_view wire) {
  const Layout& layout = rho.layout();
  const std::size_t w = wire_index(layout, wire);
  int left = 1;
  for (std::size_t i = 0; i < w; ++i) left *= layout[i].dim;
  const int mid = layout[w].dim;
  const int right = layout_dim(layout) / (left * mid);

  const int out_dim = left * right;
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  const ComplexMatrix& m = rho.matrix();
  for (int r = 0; r < out_dim; ++r) {
    const int ra = r / right, rb = r % right;
    for (int c = 0; c < out_dim; ++c) {
      const int ca = c / right, cb = c % right;
      Complex sum = 0.0;
      for (int x = 0; x < mid; ++x) {
        sum += m((ra * mid + x) * right + rb, (ca * mid + x) * right + cb);
      }
      out(r, c) = sum;
    }
  }
  Layout reduced = layout;
  reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(w));
  return DensityMatrix(std::move(out), std::move(reduced));
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorCode::kPsdViolation,
                "psd_sqrt: input is not Hermitian within tolerance");
  }
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  Eigen::VectorXd vals = solver.eigenvalues();
  if (vals.minCoeff() < -kPsdClamp) {
    throw Error(ErrorCode::kPsdViolation,
                "psd_sqrt: eigenvalue " + std::to_string(vals.minCoeff()) +
                    " below -1e-9");
  }
  vals = vals.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& vecs = solver.eigenvectors();
  return vecs * vals.cast<Complex>().asDiagonal() * vecs.adjoint();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim() || rho.layout() != sigma.layout()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "trace_distance: states have different layouts");
  }
  return 0.5 * hermitian_eigenvalues(rho.matrix() - sigma.matrix())
                   .cwiseAbs()
                   .sum();
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return m.reshaped();  // Eigen storage is column-major
}

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "unvectorize: length is not a perfect square");
  }
  return v.reshaped(n, n);
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const Layout& layout,
                             std::span<const std::size_t> wires) {
  const int full = layout_dim(layout);
  const std::vector<int> strides = strides_of(layout);
  int sub_dim = 1;
  for (std::size_t w : wires) {
    if (w >= layout.size()) {
      throw Error(ErrorCode::kUnknownWire, "embed_operator: wire out of range");
    }
    sub_dim *= layout[w].dim;
  }
  if (op.rows() != sub_dim || op.cols() != sub_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embed_operator: operator is " + std::to_string(op.rows()) +
                    "x" + std::to_string(op.cols()) + " but wires span " +
                    std::to_string(sub_dim));
  }

  // For every basis index: its position inside `op` and the remainder with
  // the target digits zeroed.
  std::vector<int> sub(full), rest(full);
  for (int i = 0; i < full; ++i) {
    int s = 0, r = i;
    for (std::size_t w : wires) {
      const int digit = (i / strides[w]) % layout[w].dim;
      s = s * layout[w].dim + digit;
      r -= digit * strides[w];
    }
    sub[i] = s;
    rest[i] = r;
  }

  ComplexMatrix out = ComplexMatrix::Zero(full, full);
  for (int i = 0; i < full; ++i) {
    for (int j = 0; j < full; ++j) {
      if (rest[i] == rest[j]) out(i, j) = op(sub[i], sub[j]);
    }
  }
  return out;
}

ComplexMatrix reset_wire(const ComplexMatrix& rho, const Layout& layout,
                         std::size_t index) {
  const int full = layout_dim(layout);
  const std::vector<int> strides = strides_of(layout);
  const int stride = strides.at(index);
  const int dim = layout[index].dim;
  ComplexMatrix out = ComplexMatrix::Zero(full, full);
  for (int i = 0; i < full; ++i) {
    if ((i / stride) % dim != 0) continue;
    for (int j = 0; j < full; ++j) {
      if ((j / stride) % dim != 0) continue;
      Complex sum = 0.0;
      for (int v = 0; v < dim; ++v) sum += rho(i + v * stride, j + v * stride);
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace oqs
