#ifndef SLT_H
#define SLT_H

/* Generated by cbindgen from the slt-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

// Status codes mirroring the CLI exit codes, plus FFI-specific ones.
typedef enum SltStatus {
  // Success (for checks: passed or skipped).
  SltOk = 0,
  // A check ran to completion and failed.
  SltCheckFailed = 1,
  // Malformed input: bad JSON, bad literal, dimension mismatch,
  // unknown name, violated precondition.
  SltInvalidInput = 2,
  // A closure or enumeration cap was exceeded.
  SltCapExceeded = 3,
  // A required pointer argument was null.
  SltNullPointer = 4,
  // An internal invariant failed (bug); details via slt_last_error.
  SltInternal = 5,
} SltStatus;

// Opaque lattice handle (a lattice plus fixture metadata).
typedef struct SltLattice SltLattice;

// Classification flags of a lattice.
typedef struct SltLatticeFlags {
  bool is_closed;
  bool is_csl;
  bool is_distributive;
  bool is_complemented;
  bool is_absl;
} SltLatticeFlags;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread; valid until the next library call.
// Never null.
const char *slt_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void slt_string_free(char *s);

// Frees a lattice handle. Null is ignored.
//
// # Safety
// `lat` must have been returned by this library and not freed before.
void slt_lattice_free(struct SltLattice *lat);

// Parses a lattice literal (`elements` or `generators` form, the latter
// closed under meet/join with the given cap).
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` a valid pointer.
enum SltStatus slt_lattice_parse(const char *json, uintptr_t cap, struct SltLattice **out);

// Resolves a bundled fixture by name (triv2, nest2, twoatom2, axes3,
// axes4, nondist2, generic4, ...). Seeded fixtures consume `seed`.
//
// # Safety
// `name` must be a valid NUL-terminated string; `out` a valid pointer.
enum SltStatus slt_fixture(const char *name, uint64_t seed, struct SltLattice **out);

// Serializes a lattice in the `elements` literal form.
//
// # Safety
// `lat` must be a live handle; `out_json` a valid pointer.
enum SltStatus slt_lattice_to_json(const struct SltLattice *lat, char **out_json);

// # Safety
// `lat` must be a live handle; `out` a valid pointer.
enum SltStatus slt_lattice_size(const struct SltLattice *lat, uintptr_t *out);

// # Safety
// `lat` must be a live handle; `out` a valid pointer.
enum SltStatus slt_lattice_ambient_dim(const struct SltLattice *lat, uintptr_t *out);

// # Safety
// `lat` must be a live handle; `out` a valid pointer.
enum SltStatus slt_lattice_flags(const struct SltLattice *lat, struct SltLatticeFlags *out);

// Computes Alg L as an operator-space JSON `{"dim", "basis"}`.
//
// # Safety
// `lat` must be a live handle; `out_json` a valid pointer.
enum SltStatus slt_alg_to_json(const struct SltLattice *lat, char **out_json);

// Rank one density verdict for the lattice.
//
// # Safety
// `lat` must be a live handle; `out` a valid pointer.
enum SltStatus slt_rank_one_density(const struct SltLattice *lat, bool *out);

// Closes the tensor product of two lattices into a new handle.
//
// # Safety
// `l` and `m` must be live handles; `out` a valid pointer.
enum SltStatus slt_tensor_lattice(const struct SltLattice *l,
                                  const struct SltLattice *m,
                                  uintptr_t cap,
                                  struct SltLattice **out);

// theta of an atom-map JSON `{"atoms": [...], "values": [...]}`; the
// result is a subspace JSON on the product space.
//
// # Safety
// `atom_map_json` must be a valid NUL-terminated string; `out_json` a
// valid pointer.
enum SltStatus slt_theta(const char *atom_map_json, char **out_json);

// Full-mode phi of a subspace JSON over the atoms of `m`; K's dimension
// is inferred from the ambient dimensions.
//
// # Safety
// `subspace_json` must be a valid NUL-terminated string; `m` a live
// handle; `out_json` a valid pointer.
enum SltStatus slt_phi(const char *subspace_json, const struct SltLattice *m, char **out_json);

// Cyclic-subspace decomposition of a vector (JSON array of rational
// literals) on K⊗H under 1 ⊗ Alg M.
//
// # Safety
// `xi_json` must be a valid NUL-terminated string; `m` a live handle;
// `out_json` a valid pointer.
enum SltStatus slt_cyclic_decomposition(const char *xi_json,
                                        const struct SltLattice *m,
                                        uintptr_t k_dim,
                                        char **out_json);

// Runs one named check (`theta-phi-inverse`, `isomorphism`,
// `perp-identity`, `latalg-tensor`, `ltpf`, `atpf-dimension`,
// `absl-tensor`, `reflexivity-transfer`, `phi-join-probe`). Lattice
// arguments may be null where the check does not use them. The full
// report JSON is written to `out_report_json`; the status is
// `SltCheckFailed` exactly when the check failed.
//
// # Safety
// `check_id` must be a valid NUL-terminated string; `l`/`m` null or live
// handles; `out_report_json` a valid pointer.
enum SltStatus slt_run_check(const char *check_id,
                             const struct SltLattice *l,
                             const struct SltLattice *m,
                             uintptr_t k_dim,
                             uint64_t seed,
                             uintptr_t samples,
                             char **out_report_json);

// Replays a counterexample payload recorded in a FAIL report. The
// status is `SltCheckFailed` when the violation reproduces.
//
// # Safety
// `payload_json` must be a valid NUL-terminated string;
// `out_report_json` a valid pointer.
enum SltStatus slt_replay(const char *payload_json, char **out_report_json);

// Runs a scenario: either a bundled name (`paper-core`) or a full
// scenario JSON document. The report JSON is always written on success
// of the run itself; the status is `SltCheckFailed` when any check
// failed.
//
// # Safety
// `scenario_json_or_name` must be a valid NUL-terminated string;
// `out_report_json` a valid pointer.
enum SltStatus slt_run_scenario(const char *scenario_json_or_name, char **out_report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLT_H */
