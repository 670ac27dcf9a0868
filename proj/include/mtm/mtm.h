// Copyright 2026 The mtm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * mtm: many-to-many graph matching.
 *
 * C interface over the C++ library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns an mtm_status; on failure mtm_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 *
 * Text buffers follow one convention: pass a buffer and its capacity; the
 * call stores the required size including the terminating NUL in *needed and
 * returns MTM_ERR_BUFFER_TOO_SMALL if it does not fit. buf may be NULL when
 * capacity is 0.
 */
#ifndef MTM_MTM_H_
#define MTM_MTM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MTM_BUILDING_LIBRARY)
#define MTM_API __attribute__((visibility("default")))
#else
#define MTM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtm_status {
  MTM_OK = 0,
  MTM_ERR_INVALID_ARGUMENT = 1,
  MTM_ERR_PARSE = 2,
  MTM_ERR_IO = 3,
  MTM_ERR_INFEASIBLE = 4,
  MTM_ERR_DIMENSION = 5,
  MTM_ERR_BUFFER_TOO_SMALL = 6,
  MTM_ERR_INTERNAL = 99
} mtm_status;

typedef enum mtm_method { MTM_METHOD_GRAD = 0, MTM_METHOD_SPEC = 1, MTM_METHOD_BEAM = 2 } mtm_method;

typedef enum mtm_projection { MTM_PROJECTION_INCREMENTAL = 0, MTM_PROJECTION_CLUSTERING = 1 } mtm_projection;

typedef struct mtm_graph mtm_graph;
typedef struct mtm_matching mtm_matching;
typedef struct mtm_experiment_result mtm_experiment_result;

/* Solver and baseline settings. Initialise with mtm_options_init. */
typedef struct mtm_options {
  size_t k_max;              /* max vertices per cluster and side (2) */
  double epsilon;            /* stopping tolerance (1e-6) */
  double lambda;             /* local similarity weight in [0,1] (0) */
  double mu;                 /* neighbour-merge weight (0) */
  size_t max_iters;          /* per relaxed solve (1000) */
  uint64_t seed;             /* k-means seeding (0) */
  int coords_similarity;     /* build C_ij = exp(-|x_i - y_j|^2) from coordinates (0) */
  int negate_similarity;     /* use -C (0) */
  mtm_projection projection; /* grad discretisation (incremental) */
  size_t beam_width;         /* beam baseline (3) */
  size_t num_eigenvectors;   /* spectral baseline (2) */
} mtm_options;

MTM_API void mtm_options_init(mtm_options* opts);

MTM_API const char* mtm_last_error(void);
MTM_API const char* mtm_status_string(mtm_status status);
MTM_API const char* mtm_version(void);
MTM_API mtm_status mtm_method_from_string(const char* name, mtm_method* out);
MTM_API mtm_status mtm_projection_from_string(const char* name, mtm_projection* out);

/* Graphs */
MTM_API mtm_status mtm_graph_read(const char* path, mtm_graph** out);
MTM_API mtm_status mtm_graph_write(const mtm_graph* graph, const char* path);
MTM_API mtm_status mtm_graph_from_adjacency(size_t n, const double* adj_row_major, int directed, mtm_graph** out);
MTM_API size_t mtm_graph_size(const mtm_graph* graph);
MTM_API mtm_status mtm_graph_weight(const mtm_graph* graph, size_t i, size_t j, double* out);
MTM_API int mtm_graph_has_labels(const mtm_graph* graph);
MTM_API void mtm_graph_free(mtm_graph* graph);

typedef struct mtm_synthetic_config {
  size_t n;
  double p;
  size_t m;
  double sigma;
  uint64_t seed;
  int label_with_origin; /* label each vertex with the base vertex it descends from */
} mtm_synthetic_config;

/* Synthetic pair and its ground-truth matching; truth may be NULL. */
MTM_API mtm_status mtm_generate_pair(const mtm_synthetic_config* cfg, mtm_graph** g, mtm_graph** h,
                                     mtm_matching** truth);

/* Matching */
MTM_API mtm_status mtm_match(const mtm_graph* g, const mtm_graph* h, mtm_method method, const mtm_options* opts,
                             mtm_matching** out);
MTM_API mtm_status mtm_matching_objective(const mtm_matching* m, double* out);
MTM_API size_t mtm_matching_cluster_count(const mtm_matching* m);
MTM_API mtm_status mtm_matching_cluster(const mtm_matching* m, size_t index, const size_t** g_vertices, size_t* g_count,
                                        const size_t** h_vertices, size_t* h_count);
/* Recomputes the objective of m on (g, h) under opts. */
MTM_API mtm_status mtm_matching_evaluate(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h,
                                         const mtm_options* opts, double* out);
MTM_API mtm_status mtm_matching_format(const mtm_matching* m, char* buf, size_t capacity, size_t* needed);
MTM_API mtm_status mtm_matching_write(const mtm_matching* m, const char* path);
MTM_API mtm_status mtm_matching_read(const char* path, mtm_matching** out);
MTM_API void mtm_matching_free(mtm_matching* m);

/* Label transfer */
typedef struct mtm_label_score {
  double error_g; /* G labels predicted from H */
  double error_h; /* H labels predicted from G */
  double mean;
} mtm_label_score;

MTM_API mtm_status mtm_score_labels(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h, mtm_label_score* out);
/* Scores plus per-label confusion counts as text. */
MTM_API mtm_status mtm_score_labels_format(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h, char* buf,
                                           size_t capacity, size_t* needed);

/* Experiments */
typedef enum mtm_experiment_kind {
  MTM_EXPERIMENT_SIZE = 0,  /* F against N */
  MTM_EXPERIMENT_NOISE = 1, /* F against sigma */
  MTM_EXPERIMENT_TIME = 2   /* running time against N, with log-log slopes */
} mtm_experiment_kind;

typedef struct mtm_experiment_spec {
  mtm_experiment_kind kind;
  const size_t* sizes;
  size_t num_sizes;
  const double* sigmas;
  size_t num_sigmas;
  double p;
  size_t m;
  size_t reps;
  const mtm_method* methods;
  size_t num_methods;
  uint64_t seed;
  size_t threads; /* 0 reads MTM_THREADS, defaulting to 1 */
} mtm_experiment_spec;

MTM_API mtm_status mtm_run_experiment(const mtm_experiment_spec* spec, const mtm_options* opts,
                                      mtm_experiment_result** out);
MTM_API mtm_status mtm_experiment_csv(const mtm_experiment_result* r, char* buf, size_t capacity, size_t* needed);
MTM_API mtm_status mtm_experiment_write_csv(const mtm_experiment_result* r, const char* path);
/* Mean F and time for one grid point; MTM_ERR_INVALID_ARGUMENT if absent. */
MTM_API mtm_status mtm_experiment_mean(const mtm_experiment_result* r, mtm_method method, size_t n, double sigma,
                                       double* mean_f, double* mean_time_s);
MTM_API mtm_status mtm_experiment_slope(const mtm_experiment_result* r, mtm_method method, double* out);
MTM_API size_t mtm_experiment_monotone_violations(const mtm_experiment_result* r);
MTM_API void mtm_experiment_free(mtm_experiment_result* r);

#ifdef __cplusplus
}
#endif

#endif /* MTM_MTM_H_ */
