/* C interface to the hyperwalk library.
 *
 * Every function returns an hw_status. On failure, hw_last_error() returns a
 * JSON object {"code": ..., "message": ..., "subject": ...} for the calling
 * thread. Strings returned through char** outputs are owned by the caller and
 * must be released with hw_string_free.
 */
#ifndef HYPERWALK_H
#define HYPERWALK_H

#include <stdint.h>

#if defined(HW_BUILDING_LIBRARY)
#define HW_API __attribute__((visibility("default")))
#else
#define HW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hw_group hw_group;
typedef struct hw_measure hw_measure;

typedef enum hw_status {
  HW_OK = 0,
  HW_ERR_INVALID_ARGUMENT = 1,
  HW_ERR_PARSE = 2,
  HW_ERR_INVALID_MEASURE = 3,
  HW_ERR_BALL_ESCAPE = 4,
  HW_ERR_GUARD_EXCEEDED = 5,
  HW_ERR_BACKEND_MISMATCH = 6,
  HW_ERR_BOUND_VIOLATION = 7,
  HW_ERR_UNSUPPORTED = 8,
  HW_ERR_NOT_SMALL_CANCELLATION = 9,
  HW_ERR_INTERNAL = 99
} hw_status;

HW_API const char* hw_version(void);
HW_API const char* hw_status_name(hw_status s);
/* Empty string when the last call on this thread succeeded. */
HW_API const char* hw_last_error(void);
HW_API void hw_string_free(char* s);

/* spec: "free:K", "fpc:2,3", "fpc:2,3+1", "surface:G:R", "sc:<path>:R" */
HW_API hw_status hw_group_create(const char* spec, hw_group** out);
HW_API void hw_group_free(hw_group* g);
HW_API hw_status hw_group_describe(const hw_group* g, char** out);
HW_API hw_status hw_group_canonicalize(const hw_group* g, const char* word, char** out);
HW_API hw_status hw_group_multiply(const hw_group* g, const char* x, const char* y, char** out);
HW_API hw_status hw_group_invert(const hw_group* g, const char* x, char** out);
HW_API hw_status hw_group_word_length(const hw_group* g, const char* x, int* out);
HW_API hw_status hw_group_power(const hw_group* g, const char* x, int d, char** out);
HW_API hw_status hw_group_ball_size(const hw_group* g, int radius, uint64_t* out);

/* spec: "lazy-uniform:p/q" or "weights:word=p/q,word=p/q,..." (decimals are read exactly) */
HW_API hw_status hw_measure_create(const hw_group* g, const char* spec, hw_measure** out);
HW_API void hw_measure_free(hw_measure* m);
HW_API hw_status hw_measure_describe(const hw_measure* m, char** out);

/* mode is "exact" or "float"; guard 0 selects the default support guard. */
HW_API hw_status hw_walk_exact(const hw_measure* m, int n, const char* mode, uint64_t guard, char** csv,
                               char** summary_json);
HW_API hw_status hw_walk_sample(const hw_measure* m, int n, uint64_t count, uint64_t seed, int threads,
                                char** csv, char** summary_json);

/* JSON array of accepted check ids. */
HW_API hw_status hw_check_ids(char** out);
/* m may be NULL. options_json may be NULL or a JSON object. The report carries
 * "verdict": "PASS", "ADVISORY" or "FAIL". */
HW_API hw_status hw_verify(const hw_group* g, const hw_measure* m, const char* check_id, const char* options_json,
                           char** report_json);
/* kind is "kesten", "theorem1" or "conjclass". */
HW_API hw_status hw_experiment(const hw_measure* m, const char* kind, const char* options_json, char** series_csv,
                               char** summary_json, char** plot_data);

#ifdef __cplusplus
}
#endif

#endif
