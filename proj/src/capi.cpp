#include "oqs/oqs.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "oqs/analysis.hpp"
#include "oqs/channels.hpp"
#include "oqs/circuit.hpp"
#include "oqs/engine.hpp"
#include "oqs/error.hpp"

struct oqs_channel {
  oqs::KrausChannel value;
};
struct oqs_state {
  oqs::DensityMatrix value;
};
struct oqs_step {
  oqs::StepCircuit value;
};
struct oqs_trajectory {
  oqs::Trajectory value;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_violation_invariant;
thread_local int g_violation_step = -1;

oqs_status status_of(oqs::ErrorCode code) {
  switch (code) {
    case oqs::ErrorCode::kInvalidArgument:
      return OQS_ERR_INVALID_ARGUMENT;
    case oqs::ErrorCode::kDimensionMismatch:
      return OQS_ERR_DIMENSION_MISMATCH;
    case oqs::ErrorCode::kUnknownWire:
      return OQS_ERR_UNKNOWN_WIRE;
    case oqs::ErrorCode::kPsdViolation:
      return OQS_ERR_PSD_VIOLATION;
    case oqs::ErrorCode::kInvalidChannel:
      return OQS_ERR_INVALID_CHANNEL;
    case oqs::ErrorCode::kNotInvertible:
      return OQS_ERR_NOT_INVERTIBLE;
    case oqs::ErrorCode::kDecomposition:
      return OQS_ERR_DECOMPOSITION;
    case oqs::ErrorCode::kParse:
      return OQS_ERR_PARSE;
    case oqs::ErrorCode::kNumericalViolation:
      return OQS_ERR_NUMERICAL;
  }
  return OQS_ERR_INTERNAL;
}

oqs_status fail(oqs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
oqs_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return OQS_OK;
  } catch (const oqs::NumericalViolation& e) {
    g_violation_invariant = e.invariant();
    g_violation_step = e.step();
    return fail(OQS_ERR_NUMERICAL, e.what());
  } catch (const oqs::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OQS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OQS_ERR_INTERNAL, e.what());
  }
}

#define OQS_REQUIRE(cond, what)                                   \
  do {                                                            \
    if (!(cond)) return fail(OQS_ERR_INVALID_ARGUMENT, (what));   \
  } while (0)

oqs::ComplexMatrix read_matrix(int dim, const double* re_im) {
  oqs::ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double* p = re_im + 2 * (r * dim + c);
      m(r, c) = oqs::Complex(p[0], p[1]);
    }
  }
  return m;
}

oqs::DampingKind kind_of(oqs_damping_kind kind) {
  if (kind == OQS_DEPHASING) return oqs::DampingKind::kDephasing;
  if (kind == OQS_AMPLITUDE_DAMPING) return oqs::DampingKind::kAmplitudeDamping;
  throw oqs::Error(oqs::ErrorCode::kInvalidArgument, "unknown damping kind");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Handle, typename Make>
oqs_status make_handle(Handle** out, Make&& make) {
  OQS_REQUIRE(out != nullptr, "output pointer is null");
  *out = nullptr;
  return guarded([&] { *out = new Handle{make()}; });
}

}  // namespace

extern "C" {

const char* oqs_last_error(void) { return g_last_error.c_str(); }

const char* oqs_status_string(oqs_status status) {
  switch (status) {
    case OQS_OK:
      return "ok";
    case OQS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case OQS_ERR_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case OQS_ERR_UNKNOWN_WIRE:
      return "unknown wire";
    case OQS_ERR_PSD_VIOLATION:
      return "PSD violation";
    case OQS_ERR_INVALID_CHANNEL:
      return "invalid channel";
    case OQS_ERR_NOT_INVERTIBLE:
      return "not invertible";
    case OQS_ERR_DECOMPOSITION:
      return "decomposition error";
    case OQS_ERR_PARSE:
      return "parse error";
    case OQS_ERR_NUMERICAL:
      return "numerical invariant violated";
    case OQS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* oqs_last_violation_invariant(void) {
  return g_violation_invariant.c_str();
}

int oqs_last_violation_step(void) { return g_violation_step; }

void oqs_string_free(char* text) { std::free(text); }

oqs_status oqs_channel_amplitude_damping(double gamma, oqs_channel** out) {
  return make_handle(out, [&] {
    return oqs::amplitude_damping(oqs::ChannelParams::from_gamma(gamma));
  });
}

oqs_status oqs_channel_dephasing(double gamma, oqs_channel** out) {
  return make_handle(
      out, [&] { return oqs::dephasing(oqs::ChannelParams::from_gamma(gamma)); });
}

oqs_status oqs_channel_pauli(double px, double py, double pz, oqs_channel** out) {
  return make_handle(out, [&] { return oqs::pauli_channel(px, py, pz); });
}

oqs_status oqs_channel_pauli_mixture(int rank, double p, oqs_channel** out) {
  return make_handle(out, [&] { return oqs::pauli_mixture(rank, p); });
}

oqs_status oqs_channel_from_operators(int dim, size_t count, const double* re_im,
                                      const char* label, oqs_channel** out) {
  OQS_REQUIRE(dim >= 1 && count >= 1 && re_im != nullptr,
              "channel needs dim >= 1 and at least one operator");
  return make_handle(out, [&] {
    std::vector<oqs::ComplexMatrix> ops;
    for (size_t i = 0; i < count; ++i) {
      ops.push_back(read_matrix(dim, re_im + 2 * i * dim * dim));
    }
    return oqs::KrausChannel(dim, std::move(ops), label ? label : "custom");
  });
}

oqs_status oqs_channel_from_spec(const char* json, oqs_channel** out) {
  OQS_REQUIRE(json != nullptr, "spec text is null");
  return make_handle(out, [&] { return oqs::parse_channel_spec(json); });
}

oqs_status oqs_channel_from_file(const char* path, oqs_channel** out) {
  OQS_REQUIRE(path != nullptr, "path is null");
  return make_handle(out, [&] { return oqs::load_channel_file(path); });
}

int oqs_channel_dim(const oqs_channel* ch) { return ch ? ch->value.dim() : 0; }

size_t oqs_channel_rank(const oqs_channel* ch) { return ch ? ch->value.rank() : 0; }

oqs_status oqs_channel_validate(const oqs_channel* ch, int* passed,
                                double* deviation) {
  OQS_REQUIRE(ch != nullptr, "channel is null");
  return guarded([&] {
    const auto report = oqs::validate(ch->value);
    if (passed) *passed = report.passed ? 1 : 0;
    if (deviation) *deviation = report.deviation;
  });
}

oqs_status oqs_channel_cp_witness(const oqs_channel* ch, double* out) {
  OQS_REQUIRE(ch != nullptr && out != nullptr, "null argument");
  return guarded(
      [&] { *out = oqs::cp_witness(oqs::to_superoperator(ch->value)); });
}

void oqs_channel_destroy(oqs_channel* ch) { delete ch; }

oqs_status oqs_state_named(const char* name, oqs_state** out) {
  OQS_REQUIRE(name != nullptr, "state name is null");
  return make_handle(out, [&] { return oqs::named_state(name); });
}

oqs_status oqs_state_from_matrix(int dim, const double* re_im, oqs_state** out) {
  OQS_REQUIRE(dim >= 1 && re_im != nullptr, "state needs dim >= 1 and data");
  return make_handle(out, [&] {
    oqs::ComplexMatrix m = read_matrix(dim, re_im);
    if (!oqs::is_hermitian(m)) {
      throw oqs::Error(oqs::ErrorCode::kInvalidArgument,
                       "initial state matrix is not Hermitian");
    }
    return oqs::DensityMatrix(std::move(m),
                              oqs::Layout{{"q", dim, oqs::WireRole::kSystem}});
  });
}

int oqs_state_dim(const oqs_state* state) { return state ? state->value.dim() : 0; }

oqs_status oqs_state_matrix(const oqs_state* state, double* re_im,
                            size_t capacity) {
  OQS_REQUIRE(state != nullptr && re_im != nullptr, "null argument");
  const int dim = state->value.dim();
  OQS_REQUIRE(capacity >= static_cast<size_t>(2 * dim * dim),
              "buffer too small for state matrix");
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      re_im[2 * (r * dim + c)] = state->value.matrix()(r, c).real();
      re_im[2 * (r * dim + c) + 1] = state->value.matrix()(r, c).imag();
    }
  }
  return OQS_OK;
}

void oqs_state_destroy(oqs_state* state) { delete state; }

oqs_status oqs_step_markovian(oqs_damping_kind kind, double theta, oqs_step** out) {
  return make_handle(
      out, [&] { return oqs::build_markovian_step(kind_of(kind), theta); });
}

oqs_status oqs_step_nonmarkovian(oqs_damping_kind kind, const double* thetas,
                                 int k, oqs_step** out) {
  OQS_REQUIRE(thetas != nullptr && k >= 0, "thetas are required");
  return make_handle(out, [&] {
    return oqs::build_nonmarkovian_step(
        kind_of(kind), oqs::MemorySpec{std::vector<double>(thetas, thetas + k)});
  });
}

oqs_status oqs_step_sequential(const oqs_channel* ch, const double* thetas, int k,
                               oqs_step** out) {
  OQS_REQUIRE(ch != nullptr, "channel is null");
  return make_handle(out, [&] {
    std::optional<oqs::MemorySpec> mem;
    if (thetas) mem = oqs::MemorySpec{std::vector<double>(thetas, thetas + k)};
    return oqs::build_sequential_step(ch->value, mem);
  });
}

oqs_status oqs_step_parse(const char* text, oqs_step** out) {
  OQS_REQUIRE(text != nullptr, "circuit text is null");
  return make_handle(out, [&] { return oqs::parse_circuit(text); });
}

oqs_status oqs_step_dump(const oqs_step* step, char** text) {
  OQS_REQUIRE(step != nullptr && text != nullptr, "null argument");
  return guarded([&] { *text = copy_string(oqs::dump_circuit(step->value)); });
}

int oqs_step_equal(const oqs_step* a, const oqs_step* b) {
  return a && b && a->value == b->value ? 1 : 0;
}

size_t oqs_step_op_count(const oqs_step* step) {
  return step ? step->value.ops().size() : 0;
}

size_t oqs_step_wire_count(const oqs_step* step) {
  return step ? step->value.layout().size() : 0;
}

void oqs_step_destroy(oqs_step* step) { delete step; }

oqs_status oqs_run(const oqs_step* step, const oqs_state* rho0, int T,
                   const char* const* observables, size_t n_observables,
                   oqs_trajectory** out) {
  OQS_REQUIRE(step != nullptr && rho0 != nullptr, "step and state are required");
  OQS_REQUIRE(n_observables == 0 || observables != nullptr, "observables are null");
  return make_handle(out, [&] {
    std::vector<oqs::Observable> obs;
    for (size_t i = 0; i < n_observables; ++i) {
      obs.push_back(oqs::named_observable(observables[i]));
    }
    return oqs::run(step->value, rho0->value, T, obs);
  });
}

size_t oqs_trajectory_length(const oqs_trajectory* traj) {
  return traj ? traj->value.records.size() : 0;
}

size_t oqs_trajectory_observable_count(const oqs_trajectory* traj) {
  return traj ? traj->value.observables.size() : 0;
}

const char* oqs_trajectory_observable_name(const oqs_trajectory* traj,
                                           size_t index) {
  if (!traj || index >= traj->value.observables.size()) return nullptr;
  return traj->value.observables[index].c_str();
}

oqs_status oqs_trajectory_record(const oqs_trajectory* traj, size_t step,
                                 oqs_record* out) {
  OQS_REQUIRE(traj != nullptr && out != nullptr, "null argument");
  OQS_REQUIRE(step < traj->value.records.size(), "step out of range");
  const auto& r = traj->value.records[step];
  *out = {r.step, r.trace, r.purity, r.min_eigenvalue};
  return OQS_OK;
}

oqs_status oqs_trajectory_value(const oqs_trajectory* traj, size_t step,
                                size_t observable, double* out) {
  OQS_REQUIRE(traj != nullptr && out != nullptr, "null argument");
  OQS_REQUIRE(step < traj->value.records.size(), "step out of range");
  OQS_REQUIRE(observable < traj->value.observables.size(),
              "observable index out of range");
  *out = traj->value.records[step].values[observable];
  return OQS_OK;
}

void oqs_trajectory_destroy(oqs_trajectory* traj) { delete traj; }

oqs_status oqs_monotonicity_check(const oqs_trajectory* traj,
                                  const char* observable, double tolerance,
                                  oqs_monotonicity* out) {
  OQS_REQUIRE(traj != nullptr && observable != nullptr && out != nullptr,
              "null argument");
  return guarded([&] {
    const auto v = oqs::monotonicity_check(traj->value, observable, tolerance);
    *out = {v.monotone ? 1 : 0, v.first_violation.value_or(-1), v.max_revival};
  });
}

oqs_status oqs_blp_witness(const oqs_step* step, const oqs_state* a,
                           const oqs_state* b, int T, double* out) {
  OQS_REQUIRE(step && a && b && out, "null argument");
  return guarded(
      [&] { *out = oqs::blp_witness(step->value, a->value, b->value, T); });
}

oqs_status oqs_resource_count(const oqs_step* step, int T,
                              oqs_resource_method method, int k, int l,
                              oqs_resource_report* out) {
  OQS_REQUIRE(step != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto m = method == OQS_SEQUENTIAL ? oqs::ResourceMethod::kSequential
                                            : oqs::ResourceMethod::kDirectDilation;
    const auto r = oqs::resource_count(step->value, T, m, k, l);
    *out = {method,
            r.k,
            r.l,
            r.system_qubits,
            r.environment_qubits,
            r.control_qubits,
            r.qubit_count,
            r.layout_qubits,
            r.gates_per_step,
            r.gates_per_step_without_resets,
            r.total_gates,
            r.total_gates_without_resets};
  });
}

oqs_status oqs_resource_report_format(const oqs_resource_report* report,
                                      char** text) {
  OQS_REQUIRE(report != nullptr && text != nullptr, "null argument");
  return guarded([&] {
    oqs::ResourceReport r;
    r.method = report->method == OQS_SEQUENTIAL ? oqs::ResourceMethod::kSequential
                                                : oqs::ResourceMethod::kDirectDilation;
    r.k = report->k;
    r.l = report->l;
    r.system_qubits = report->system_qubits;
    r.environment_qubits = report->environment_qubits;
    r.control_qubits = report->control_qubits;
    r.qubit_count = report->qubit_count;
    r.layout_qubits = report->layout_qubits;
    r.gates_per_step = report->gates_per_step;
    r.gates_per_step_without_resets = report->gates_per_step_without_resets;
    r.total_gates = report->total_gates;
    r.total_gates_without_resets = report->total_gates_without_resets;
    *text = copy_string(oqs::format_report(r));
  });
}

}  // extern "C"
