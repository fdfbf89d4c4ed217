/*
 * C interface to the open-quantum-system circuit simulator.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns an oqs_status;
 * on failure oqs_last_error() holds a message for the calling thread.
 * Matrices cross the boundary as row-major arrays of interleaved
 * (real, imaginary) doubles.
 */
#ifndef OQS_OQS_H_
#define OQS_OQS_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(OQS_BUILD_SHARED)
#define OQS_API __declspec(dllexport)
#else
#define OQS_API __declspec(dllimport)
#endif
#else
#define OQS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oqs_status {
  OQS_OK = 0,
  OQS_ERR_INVALID_ARGUMENT = 1,
  OQS_ERR_DIMENSION_MISMATCH = 2,
  OQS_ERR_UNKNOWN_WIRE = 3,
  OQS_ERR_PSD_VIOLATION = 4,
  OQS_ERR_INVALID_CHANNEL = 5,
  OQS_ERR_NOT_INVERTIBLE = 6,
  OQS_ERR_DECOMPOSITION = 7,
  OQS_ERR_PARSE = 8,
  OQS_ERR_NUMERICAL = 9,
  OQS_ERR_INTERNAL = 10
} oqs_status;

typedef enum oqs_damping_kind {
  OQS_AMPLITUDE_DAMPING = 0,
  OQS_DEPHASING = 1
} oqs_damping_kind;

typedef enum oqs_resource_method {
  OQS_DIRECT_DILATION = 0,
  OQS_SEQUENTIAL = 1
} oqs_resource_method;

typedef struct oqs_channel oqs_channel;
typedef struct oqs_state oqs_state;
typedef struct oqs_step oqs_step;
typedef struct oqs_trajectory oqs_trajectory;

typedef struct oqs_record {
  int step;
  double trace;
  double purity;
  double min_eigenvalue;
} oqs_record;

typedef struct oqs_monotonicity {
  int monotone;
  int first_violation; /* -1 when monotone */
  double max_revival;
} oqs_monotonicity;

typedef struct oqs_resource_report {
  oqs_resource_method method;
  int k;
  int l;
  int system_qubits;
  int environment_qubits;
  int control_qubits;
  int qubit_count;
  int layout_qubits;
  int gates_per_step;
  int gates_per_step_without_resets;
  long long total_gates;
  long long total_gates_without_resets;
} oqs_resource_report;

OQS_API const char* oqs_last_error(void);
OQS_API const char* oqs_status_string(oqs_status status);
/* Details of the most recent OQS_ERR_NUMERICAL on this thread. */
OQS_API const char* oqs_last_violation_invariant(void);
OQS_API int oqs_last_violation_step(void);

/* Strings returned through char** are released with oqs_string_free. */
OQS_API void oqs_string_free(char* text);

/* Channels */
OQS_API oqs_status oqs_channel_amplitude_damping(double gamma, oqs_channel** out);
OQS_API oqs_status oqs_channel_dephasing(double gamma, oqs_channel** out);
OQS_API oqs_status oqs_channel_pauli(double px, double py, double pz,
                                     oqs_channel** out);
OQS_API oqs_status oqs_channel_pauli_mixture(int rank, double p, oqs_channel** out);
OQS_API oqs_status oqs_channel_from_operators(int dim, size_t count,
                                              const double* re_im,
                                              const char* label,
                                              oqs_channel** out);
OQS_API oqs_status oqs_channel_from_spec(const char* json, oqs_channel** out);
OQS_API oqs_status oqs_channel_from_file(const char* path, oqs_channel** out);
OQS_API int oqs_channel_dim(const oqs_channel* ch);
OQS_API size_t oqs_channel_rank(const oqs_channel* ch);
OQS_API oqs_status oqs_channel_validate(const oqs_channel* ch, int* passed,
                                        double* deviation);
OQS_API oqs_status oqs_channel_cp_witness(const oqs_channel* ch, double* out);
OQS_API void oqs_channel_destroy(oqs_channel* ch);

/* States (system register only) */
OQS_API oqs_status oqs_state_named(const char* name, oqs_state** out);
/* Shape and Hermiticity are checked here; trace and positivity are checked
 * by oqs_run, which reports OQS_ERR_NUMERICAL at step 0. */
OQS_API oqs_status oqs_state_from_matrix(int dim, const double* re_im,
                                         oqs_state** out);
OQS_API int oqs_state_dim(const oqs_state* state);
OQS_API oqs_status oqs_state_matrix(const oqs_state* state, double* re_im,
                                    size_t capacity);
OQS_API void oqs_state_destroy(oqs_state* state);

/* Step circuits */
OQS_API oqs_status oqs_step_markovian(oqs_damping_kind kind, double theta,
                                      oqs_step** out);
OQS_API oqs_status oqs_step_nonmarkovian(oqs_damping_kind kind,
                                         const double* thetas, int k,
                                         oqs_step** out);
/* thetas may be NULL (k ignored) for the memoryless sequential step. */
OQS_API oqs_status oqs_step_sequential(const oqs_channel* ch,
                                       const double* thetas, int k,
                                       oqs_step** out);
OQS_API oqs_status oqs_step_parse(const char* text, oqs_step** out);
OQS_API oqs_status oqs_step_dump(const oqs_step* step, char** text);
OQS_API int oqs_step_equal(const oqs_step* a, const oqs_step* b);
OQS_API size_t oqs_step_op_count(const oqs_step* step);
OQS_API size_t oqs_step_wire_count(const oqs_step* step);
OQS_API void oqs_step_destroy(oqs_step* step);

/* Simulation */
OQS_API oqs_status oqs_run(const oqs_step* step, const oqs_state* rho0, int T,
                           const char* const* observables, size_t n_observables,
                           oqs_trajectory** out);
OQS_API size_t oqs_trajectory_length(const oqs_trajectory* traj);
OQS_API size_t oqs_trajectory_observable_count(const oqs_trajectory* traj);
OQS_API const char* oqs_trajectory_observable_name(const oqs_trajectory* traj,
                                                   size_t index);
OQS_API oqs_status oqs_trajectory_record(const oqs_trajectory* traj,
                                         size_t step, oqs_record* out);
OQS_API oqs_status oqs_trajectory_value(const oqs_trajectory* traj, size_t step,
                                        size_t observable, double* out);
OQS_API void oqs_trajectory_destroy(oqs_trajectory* traj);

/* Analysis */
OQS_API oqs_status oqs_monotonicity_check(const oqs_trajectory* traj,
                                          const char* observable,
                                          double tolerance,
                                          oqs_monotonicity* out);
OQS_API oqs_status oqs_blp_witness(const oqs_step* step, const oqs_state* a,
                                   const oqs_state* b, int T, double* out);
OQS_API oqs_status oqs_resource_count(const oqs_step* step, int T,
                                      oqs_resource_method method, int k, int l,
                                      oqs_resource_report* out);
OQS_API oqs_status oqs_resource_report_format(const oqs_resource_report* report,
                                              char** text);

#ifdef __cplusplus
}
#endif

#endif /* OQS_OQS_H_ */
