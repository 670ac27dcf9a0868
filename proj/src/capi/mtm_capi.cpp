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

#include "mtm/mtm.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bench.hpp"
#include "graph.hpp"
#include "label_transfer.hpp"
#include "matching.hpp"
#include "solver.hpp"

struct mtm_graph {
  mtm::Graph graph;
};

struct mtm_matching {
  mtm::Matching matching;
};

struct mtm_experiment_result {
  mtm::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

mtm_status fail(mtm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

mtm_status from_code(mtm::Error::Code code) {
  switch (code) {
    case mtm::Error::Code::kInvalidArgument: return MTM_ERR_INVALID_ARGUMENT;
    case mtm::Error::Code::kParse: return MTM_ERR_PARSE;
    case mtm::Error::Code::kIo: return MTM_ERR_IO;
    case mtm::Error::Code::kInfeasible: return MTM_ERR_INFEASIBLE;
    case mtm::Error::Code::kDimension: return MTM_ERR_DIMENSION;
  }
  return MTM_ERR_INTERNAL;
}

template <typename F>
mtm_status guarded(F&& body) {
  try {
    body();
    return MTM_OK;
  } catch (const mtm::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MTM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MTM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MTM_ERR_INTERNAL, "unknown error");
  }
}

void require(bool cond, const char* message) {
  if (!cond) throw mtm::Error(mtm::Error::Code::kInvalidArgument, message);
}

mtm_status copy_text(const std::string& text, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (capacity < text.size() + 1 || buf == nullptr) {
    return fail(MTM_ERR_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(capacity) + " bytes, " +
                                              std::to_string(text.size() + 1) + " needed");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return MTM_OK;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mtm::Error(mtm::Error::Code::kIo, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw mtm::Error(mtm::Error::Code::kIo, "failed writing '" + path + "'");
}

mtm::Method to_method(mtm_method m) {
  switch (m) {
    case MTM_METHOD_GRAD: return mtm::Method::kGrad;
    case MTM_METHOD_SPEC: return mtm::Method::kSpec;
    case MTM_METHOD_BEAM: return mtm::Method::kBeam;
  }
  throw mtm::Error(mtm::Error::Code::kInvalidArgument, "unknown method");
}

mtm::SolverConfig solver_config(const mtm_options& o, const mtm::Graph* g, const mtm::Graph* h) {
  mtm::SolverConfig cfg;
  cfg.k_max = o.k_max;
  cfg.epsilon = o.epsilon;
  cfg.lambda = o.lambda;
  cfg.mu = o.mu;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  cfg.negate_similarity = o.negate_similarity != 0;
  if (o.coords_similarity && g && h) cfg.similarity = mtm::coordinate_similarity(*g, *h);
  return cfg;
}

mtm::MethodOptions method_options(const mtm_options& o, const mtm::Graph* g, const mtm::Graph* h) {
  mtm::MethodOptions opts;
  opts.solver = solver_config(o, g, h);
  switch (o.projection) {
    case MTM_PROJECTION_INCREMENTAL: opts.projection = mtm::ProjectionKind::kIncremental; break;
    case MTM_PROJECTION_CLUSTERING: opts.projection = mtm::ProjectionKind::kClustering; break;
    default: throw mtm::Error(mtm::Error::Code::kInvalidArgument, "unknown projection");
  }
  opts.beam.beam_width = o.beam_width;
  opts.spectral.num_eigenvectors = o.num_eigenvectors;
  return opts;
}

std::vector<std::string> labels_of(const mtm::Graph& g, const char* which) {
  if (!g.has_labels()) throw mtm::Error(mtm::Error::Code::kInvalidArgument, std::string("graph ") + which + " has no labels");
  return g.labels();
}

}  // namespace

extern "C" {

void mtm_options_init(mtm_options* opts) {
  if (!opts) return;
  opts->k_max = 2;
  opts->epsilon = 1e-6;
  opts->lambda = 0.0;
  opts->mu = 0.0;
  opts->max_iters = 1000;
  opts->seed = 0;
  opts->coords_similarity = 0;
  opts->negate_similarity = 0;
  opts->projection = MTM_PROJECTION_INCREMENTAL;
  opts->beam_width = 3;
  opts->num_eigenvectors = 2;
}

const char* mtm_last_error(void) { return g_last_error.c_str(); }

const char* mtm_status_string(mtm_status status) {
  switch (status) {
    case MTM_OK: return "ok";
    case MTM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MTM_ERR_PARSE: return "parse error";
    case MTM_ERR_IO: return "i/o error";
    case MTM_ERR_INFEASIBLE: return "infeasible";
    case MTM_ERR_DIMENSION: return "dimension mismatch";
    case MTM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case MTM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mtm_version(void) { return "0.1.0"; }

mtm_status mtm_method_from_string(const char* name, mtm_method* out) {
  return guarded([&] {
    require(name && out, "null argument");
    switch (mtm::parse_method(name)) {
      case mtm::Method::kGrad: *out = MTM_METHOD_GRAD; break;
      case mtm::Method::kSpec: *out = MTM_METHOD_SPEC; break;
      case mtm::Method::kBeam: *out = MTM_METHOD_BEAM; break;
    }
  });
}

mtm_status mtm_projection_from_string(const char* name, mtm_projection* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = mtm::parse_projection(name) == mtm::ProjectionKind::kIncremental ? MTM_PROJECTION_INCREMENTAL
                                                                             : MTM_PROJECTION_CLUSTERING;
  });
}

mtm_status mtm_graph_read(const char* path, mtm_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    *out = new mtm_graph{mtm::read_graph(path)};
  });
}

mtm_status mtm_graph_write(const mtm_graph* graph, const char* path) {
  return guarded([&] {
    require(graph && path, "null argument");
    mtm::write_graph(graph->graph, path);
  });
}

mtm_status mtm_graph_from_adjacency(size_t n, const double* adj_row_major, int directed, mtm_graph** out) {
  return guarded([&] {
    require(out && (adj_row_major || n == 0), "null argument");
    *out = nullptr;
    mtm::Matrix adj(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        adj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = adj_row_major[i * n + j];
    *out = new mtm_graph{mtm::Graph(std::move(adj), directed != 0)};
  });
}

size_t mtm_graph_size(const mtm_graph* graph) { return graph ? graph->graph.size() : 0; }

mtm_status mtm_graph_weight(const mtm_graph* graph, size_t i, size_t j, double* out) {
  return guarded([&] {
    require(graph && out, "null argument");
    if (i >= graph->graph.size() || j >= graph->graph.size())
      throw mtm::Error(mtm::Error::Code::kDimension, "vertex index out of range");
    *out = graph->graph.weight(i, j);
  });
}

int mtm_graph_has_labels(const mtm_graph* graph) { return graph && graph->graph.has_labels() ? 1 : 0; }

void mtm_graph_free(mtm_graph* graph) { delete graph; }

mtm_status mtm_generate_pair(const mtm_synthetic_config* cfg, mtm_graph** g, mtm_graph** h, mtm_matching** truth) {
  return guarded([&] {
    require(cfg && g && h, "null argument");
    *g = nullptr;
    *h = nullptr;
    if (truth) *truth = nullptr;
    mtm::SyntheticConfig sc;
    sc.n = cfg->n;
    sc.p = cfg->p;
    sc.m = cfg->m;
    sc.sigma = cfg->sigma;
    sc.seed = cfg->seed;
    mtm::SyntheticPair pair = mtm::generate_pair(sc);
    mtm::Graph gg = pair.g;
    mtm::Graph hh = pair.h;
    if (cfg->label_with_origin) {
      auto labels = [](const std::vector<std::size_t>& origin) {
        std::vector<std::string> out;
        out.reserve(origin.size());
        for (std::size_t o : origin) out.push_back("v" + std::to_string(o));
        return out;
      };
      gg = gg.with_labels(labels(pair.origin_g));
      hh = hh.with_labels(labels(pair.origin_h));
    }
    auto gp = std::make_unique<mtm_graph>(mtm_graph{std::move(gg)});
    auto hp = std::make_unique<mtm_graph>(mtm_graph{std::move(hh)});
    std::unique_ptr<mtm_matching> tp;
    if (truth) tp = std::make_unique<mtm_matching>(mtm_matching{mtm::ground_truth_matching(pair)});
    *g = gp.release();
    *h = hp.release();
    if (truth) *truth = tp.release();
  });
}

mtm_status mtm_match(const mtm_graph* g, const mtm_graph* h, mtm_method method, const mtm_options* opts,
                     mtm_matching** out) {
  return guarded([&] {
    require(g && h && out, "null argument");
    *out = nullptr;
    mtm_options defaults;
    mtm_options_init(&defaults);
    const mtm_options& o = opts ? *opts : defaults;
    const mtm::MethodOptions mo = method_options(o, &g->graph, &h->graph);
    mtm::validate_problem(g->graph, h->graph, mo.solver);
    mtm::MethodRun run = mtm::run_method(to_method(method), g->graph, h->graph, mo);
    mtm::validate_matching(run.matching, g->graph.size(), h->graph.size(), mo.solver.k_max);
    run.matching.objective = mtm::evaluate(run.matching, g->graph, h->graph, mo.solver);
    *out = new mtm_matching{std::move(run.matching)};
  });
}

mtm_status mtm_matching_objective(const mtm_matching* m, double* out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = m->matching.objective;
  });
}

size_t mtm_matching_cluster_count(const mtm_matching* m) { return m ? m->matching.clusters.size() : 0; }

mtm_status mtm_matching_cluster(const mtm_matching* m, size_t index, const size_t** g_vertices, size_t* g_count,
                                const size_t** h_vertices, size_t* h_count) {
  return guarded([&] {
    require(m && g_vertices && g_count && h_vertices && h_count, "null argument");
    if (index >= m->matching.clusters.size()) throw mtm::Error(mtm::Error::Code::kDimension, "cluster index out of range");
    const mtm::Cluster& c = m->matching.clusters[index];
    *g_vertices = c.g.data();
    *g_count = c.g.size();
    *h_vertices = c.h.data();
    *h_count = c.h.size();
  });
}

mtm_status mtm_matching_evaluate(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h, const mtm_options* opts,
                                 double* out) {
  return guarded([&] {
    require(m && g && h && out, "null argument");
    mtm_options defaults;
    mtm_options_init(&defaults);
    const mtm_options& o = opts ? *opts : defaults;
    const mtm::SolverConfig cfg = solver_config(o, &g->graph, &h->graph);
    std::size_t k = 0;
    for (const mtm::Cluster& c : m->matching.clusters) k = std::max({k, c.g.size(), c.h.size()});
    mtm::validate_matching(m->matching, g->graph.size(), h->graph.size(), std::max<std::size_t>(k, 1));
    *out = mtm::evaluate(m->matching, g->graph, h->graph, cfg);
  });
}

mtm_status mtm_matching_format(const mtm_matching* m, char* buf, size_t capacity, size_t* needed) {
  std::string text;
  const mtm_status st = guarded([&] {
    require(m != nullptr, "null argument");
    text = mtm::format_matching(m->matching);
  });
  if (st != MTM_OK) return st;
  return copy_text(text, buf, capacity, needed);
}

mtm_status mtm_matching_write(const mtm_matching* m, const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    write_text(path, mtm::format_matching(m->matching));
  });
}

mtm_status mtm_matching_read(const char* path, mtm_matching** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mtm::Error(mtm::Error::Code::kIo, std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = new mtm_matching{mtm::parse_matching(ss.str(), path)};
  });
}

void mtm_matching_free(mtm_matching* m) { delete m; }

mtm_status mtm_score_labels(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h, mtm_label_score* out) {
  return guarded([&] {
    require(m && g && h && out, "null argument");
    const auto s = mtm::score_label_transfer(m->matching, labels_of(g->graph, "G"), labels_of(h->graph, "H"));
    out->error_g = s.error_g;
    out->error_h = s.error_h;
    out->mean = s.mean;
  });
}

mtm_status mtm_score_labels_format(const mtm_matching* m, const mtm_graph* g, const mtm_graph* h, char* buf,
                                   size_t capacity, size_t* needed) {
  std::string text;
  const mtm_status st = guarded([&] {
    require(m && g && h, "null argument");
    const auto s = mtm::score_label_transfer(m->matching, labels_of(g->graph, "G"), labels_of(h->graph, "H"));
    std::ostringstream out;
    out.precision(6);
    out << "error_g " << s.error_g << "\nerror_h " << s.error_h << "\nmean " << s.mean << '\n';
    auto dump = [&](const char* side, const mtm::Confusion& conf) {
      for (const auto& [truth, row] : conf)
        for (const auto& [pred, count] : row) out << "confusion " << side << ' ' << truth << ' ' << pred << ' ' << count << '\n';
    };
    dump("G", s.confusion_g);
    dump("H", s.confusion_h);
    text = out.str();
  });
  if (st != MTM_OK) return st;
  return copy_text(text, buf, capacity, needed);
}

mtm_status mtm_run_experiment(const mtm_experiment_spec* spec, const mtm_options* opts, mtm_experiment_result** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = nullptr;
    require(spec->num_sizes > 0 && spec->sizes, "no sizes given");
    require(spec->num_sigmas > 0 && spec->sigmas, "no noise levels given");
    require(spec->num_methods > 0 && spec->methods, "no methods given");
    mtm_options defaults;
    mtm_options_init(&defaults);
    const mtm_options& o = opts ? *opts : defaults;
    require(!o.coords_similarity, "synthetic graphs carry no coordinates");

    mtm::ExperimentSpec es;
    es.sizes.assign(spec->sizes, spec->sizes + spec->num_sizes);
    es.sigmas.assign(spec->sigmas, spec->sigmas + spec->num_sigmas);
    es.p = spec->p;
    es.m = spec->m;
    es.reps = spec->reps;
    es.methods.clear();
    for (size_t i = 0; i < spec->num_methods; ++i) es.methods.push_back(to_method(spec->methods[i]));
    es.seed = spec->seed;
    es.options = method_options(o, nullptr, nullptr);
    es.threads = spec->threads == 0 ? mtm::threads_from_env() : spec->threads;
    es.fit_slopes = spec->kind == MTM_EXPERIMENT_TIME;
    *out = new mtm_experiment_result{mtm::run_experiment(es)};
  });
}

mtm_status mtm_experiment_csv(const mtm_experiment_result* r, char* buf, size_t capacity, size_t* needed) {
  std::string text;
  const mtm_status st = guarded([&] {
    require(r != nullptr, "null argument");
    text = mtm::to_csv(r->result);
  });
  if (st != MTM_OK) return st;
  return copy_text(text, buf, capacity, needed);
}

mtm_status mtm_experiment_write_csv(const mtm_experiment_result* r, const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    write_text(path, mtm::to_csv(r->result));
  });
}

mtm_status mtm_experiment_mean(const mtm_experiment_result* r, mtm_method method, size_t n, double sigma,
                               double* mean_f, double* mean_time_s) {
  return guarded([&] {
    require(r && mean_f && mean_time_s, "null argument");
    const mtm::Method m = to_method(method);
    for (const mtm::SummaryRow& row : r->result.summary) {
      if (row.method == m && row.n == n && std::abs(row.sigma - sigma) <= 1e-12) {
        *mean_f = row.mean_f;
        *mean_time_s = row.mean_time;
        return;
      }
    }
    throw mtm::Error(mtm::Error::Code::kInvalidArgument, "no summary row for that grid point");
  });
}

mtm_status mtm_experiment_slope(const mtm_experiment_result* r, mtm_method method, double* out) {
  return guarded([&] {
    require(r && out, "null argument");
    const auto it = r->result.slopes.find(to_method(method));
    if (it == r->result.slopes.end()) throw mtm::Error(mtm::Error::Code::kInvalidArgument, "no slope for that method");
    *out = it->second;
  });
}

size_t mtm_experiment_monotone_violations(const mtm_experiment_result* r) {
  return r ? r->result.monotone_violations : 0;
}

void mtm_experiment_free(mtm_experiment_result* r) { delete r; }

}  // extern "C"
