/*==============================================================================
 * halfwave.h
 * C interface to the half-wave laboratory. All functions return hw_status;
 * handles are opaque and freed with the matching *_destroy. Strings returned
 * through char** are heap-allocated and freed with hw_string_free. On error,
 * hw_last_error() carries the detail for the calling thread.
 *============================================================================*/
#ifndef HALFWAVE_H
#define HALFWAVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hw_status {
    HW_OK = 0,
    HW_ERR_INVALID_ARGUMENT = 1,
    HW_ERR_IO = 2,
    HW_ERR_FORMAT = 3,
    HW_ERR_NUMERICAL = 4,
    HW_ERR_SOLVABILITY = 5
} hw_status;

typedef struct hw_grid hw_grid;
typedef struct hw_field hw_field;
typedef struct hw_blocks hw_blocks;

const char* hw_version(void);
const char* hw_last_error(void);
void hw_string_free(char* s);

/* --- grids and fields --- */
hw_status hw_grid_create(uint64_t n, double box_length, hw_grid** out);
void hw_grid_destroy(hw_grid* grid);
uint64_t hw_grid_n(const hw_grid* grid);
double hw_grid_box_length(const hw_grid* grid);

hw_status hw_field_load(const char* path, hw_field** out);
hw_status hw_field_save(const hw_field* field, const char* path);
void hw_field_destroy(hw_field* field);
hw_status hw_field_grid(const hw_field* field, hw_grid** out);
/* mass, energy, momentum (2), H^{1/2} and Hdot^{1/2} norms */
hw_status hw_field_diagnostics(const hw_field* field, double out_values[6]);

/* --- solvers and experiments; *_json receives a report string --- */
hw_status hw_ground_state(const hw_grid* grid, double tol, int max_iter, hw_field** q_out,
                          char** report_json);
hw_status hw_boosted(const hw_grid* grid, double vx, double vy, double tol,
                     hw_field** q_out, char** report_json);
hw_status hw_boosted_scan(const hw_grid* grid, const double* speeds, size_t count,
                          const char* csv_path, char** report_json);

hw_status hw_blocks_build(const hw_field* q, double tol, hw_blocks** out,
                          char** report_json);
hw_status hw_blocks_save(const hw_blocks* blocks, const char* dir);
hw_status hw_blocks_load(const char* dir, hw_blocks** out);
void hw_blocks_destroy(hw_blocks* blocks);

hw_status hw_profile_assemble(const hw_blocks* blocks, double a, double b1, double b2,
                              hw_field** qp_out, char** report_json);
/* axis: 'a' or 'b' */
hw_status hw_profile_order_fit(const hw_blocks* blocks, char axis, const double* values,
                               size_t count, const char* csv_path, char** report_json);

hw_status hw_evolve(const hw_field* u0, double dt, double t_start, double t_end,
                    int dealias, double sample_every, const char* series_csv,
                    const char* checkpoint_base, double checkpoint_every,
                    hw_field** u_final, char** report_json);

/* direction: 0 = backward from t_init (construction direction), 1 = forward */
hw_status hw_blowup(const hw_blocks* blocks, const hw_grid* grid, double e0, double p0x,
                    double p0y, double t_init, int forward, const char* series_csv,
                    char** report_json);

/* level: "core" or "full"; report_path may be NULL */
hw_status hw_verify(const char* level, uint64_t seed, int echo, const char* report_path,
                    char** report_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* HALFWAVE_H */
