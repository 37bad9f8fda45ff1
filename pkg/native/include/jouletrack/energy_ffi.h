/* C boundary for the energy tracker: opaque handles and status codes.
 *
 * No exception ever crosses this boundary; every failure is a status code
 * and a message retrievable via jt_last_error(). Handles stay valid until
 * destroyed exactly once; calls on null, garbage, or destroyed handles
 * return JT_ERR_BAD_HANDLE instead of faulting. Handles are single-owner:
 * drive one handle from one thread at a time (the layer adds no locking
 * around tracker state itself).
 *
 * Environment: ENERGY_PROBE_ROOT overrides the powercap root (fixture
 * trees work); ENERGY_DISABLE_GPU=1 skips GPU discovery; ENERGY_FAKE_CLOCK
 * freezes wall/monotonic time for reproducible tests.
 */

#ifndef JOULETRACK_ENERGY_FFI_H
#define JOULETRACK_ENERGY_FFI_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct jt_tracker jt_tracker;

#define JT_OK 0
#define JT_ERR_LIFECYCLE 1   /* call out of order (e.g. stop before start) */
#define JT_ERR_UNSUPPORTED 2 /* host has no readable powercap tree */
#define JT_ERR_IO 3          /* file read/write failure or CSV schema clash */
#define JT_ERR_BAD_HANDLE 4  /* null, never-created, or destroyed handle */

/* Scans the host and returns a new tracker handle. A host without a usable
 * CPU energy interface still yields a handle; lifecycle calls on it report
 * JT_ERR_UNSUPPORTED. */
jt_tracker *jt_create(void);

/* Same, with the CSV row label (default "measurement"). */
jt_tracker *jt_create_labeled(const char *label);

int jt_start(jt_tracker *tracker);
int jt_stop(jt_tracker *tracker);

/* Aggregates all closed intervals; required before print/save. */
int jt_calculate(jt_tracker *tracker);

/* Writes the per-channel block and runtime to stdout. */
int jt_print(jt_tracker *tracker);

/* Appends one CSV row, writing the header only when the file is new. */
int jt_save_csv(jt_tracker *tracker, const char *path);

int jt_destroy(jt_tracker *tracker);

/* Message for the most recent failure on this thread; never NULL. */
const char *jt_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* JOULETRACK_ENERGY_FFI_H */
