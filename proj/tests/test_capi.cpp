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

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "mtm/mtm.h"

namespace {

std::string matching_text(const mtm_matching* m) {
  size_t needed = 0;
  REQUIRE(mtm_matching_format(m, nullptr, 0, &needed) == MTM_ERR_BUFFER_TOO_SMALL);
  std::string buf(needed, '\0');
  REQUIRE(mtm_matching_format(m, buf.data(), buf.size(), &needed) == MTM_OK);
  buf.resize(needed - 1);
  return buf;
}

}  // namespace

TEST_CASE("options defaults") {
  mtm_options o;
  mtm_options_init(&o);
  CHECK(o.k_max == 2);
  CHECK(o.epsilon == 1e-6);
  CHECK(o.lambda == 0.0);
  CHECK(o.mu == 0.0);
  CHECK(o.max_iters == 1000);
  CHECK(o.beam_width == 3);
  CHECK(o.num_eigenvectors == 2);
  CHECK(o.projection == MTM_PROJECTION_INCREMENTAL);
  CHECK(std::strlen(mtm_version()) > 0);
}

TEST_CASE("names") {
  mtm_method m;
  CHECK(mtm_method_from_string("spec", &m) == MTM_OK);
  CHECK(m == MTM_METHOD_SPEC);
  CHECK(mtm_method_from_string("nope", &m) == MTM_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(mtm_last_error()) > 0);
  mtm_projection p;
  CHECK(mtm_projection_from_string("clustering", &p) == MTM_OK);
  CHECK(p == MTM_PROJECTION_CLUSTERING);
  CHECK(std::string(mtm_status_string(MTM_ERR_PARSE)) != std::string(mtm_status_string(MTM_OK)));
}

TEST_CASE("graphs through the handle API") {
  const double adj[9] = {0, 1, 0, 1, 0, 1, 0, 1, 0};
  mtm_graph* g = nullptr;
  REQUIRE(mtm_graph_from_adjacency(3, adj, 0, &g) == MTM_OK);
  CHECK(mtm_graph_size(g) == 3);
  double w = -1;
  CHECK(mtm_graph_weight(g, 1, 2, &w) == MTM_OK);
  CHECK(w == 1.0);
  CHECK(mtm_graph_weight(g, 3, 0, &w) == MTM_ERR_DIMENSION);
  CHECK(mtm_graph_has_labels(g) == 0);

  const auto path = (std::filesystem::temp_directory_path() / "mtm_capi_graph.txt").string();
  REQUIRE(mtm_graph_write(g, path.c_str()) == MTM_OK);
  mtm_graph* back = nullptr;
  REQUIRE(mtm_graph_read(path.c_str(), &back) == MTM_OK);
  CHECK(mtm_graph_size(back) == 3);
  mtm_graph_free(back);
  std::filesystem::remove(path);
  CHECK(mtm_graph_read(path.c_str(), &back) == MTM_ERR_IO);

  const double asym[4] = {0, 1, 0, 0};
  mtm_graph* bad = nullptr;
  CHECK(mtm_graph_from_adjacency(2, asym, 0, &bad) == MTM_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(mtm_graph_from_adjacency(2, asym, 1, &bad) == MTM_OK);
  mtm_graph_free(bad);
  mtm_graph_free(g);
  mtm_graph_free(nullptr);
}

TEST_CASE("parse errors surface the line") {
  const auto path = (std::filesystem::temp_directory_path() / "mtm_capi_bad.txt").string();
  std::FILE* f = std::fopen(path.c_str(), "w");
  std::fputs("graph 2 undirected\nedge 0 9 1\n", f);
  std::fclose(f);
  mtm_graph* g = nullptr;
  CHECK(mtm_graph_read(path.c_str(), &g) == MTM_ERR_PARSE);
  CHECK(std::string(mtm_last_error()).find(":2:") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("generate, match and score") {
  mtm_synthetic_config cfg{12, 0.3, 2, 0.0, 4, 1};
  mtm_graph *g = nullptr, *h = nullptr;
  mtm_matching* truth = nullptr;
  REQUIRE(mtm_generate_pair(&cfg, &g, &h, &truth) == MTM_OK);
  CHECK(mtm_graph_size(g) == 14);
  CHECK(mtm_graph_has_labels(g) == 1);

  mtm_label_score score;
  REQUIRE(mtm_score_labels(truth, g, h, &score) == MTM_OK);
  CHECK(score.error_g == 0.0);
  CHECK(score.error_h == 0.0);

  mtm_options opts;
  mtm_options_init(&opts);
  for (mtm_method method : {MTM_METHOD_GRAD, MTM_METHOD_SPEC, MTM_METHOD_BEAM}) {
    mtm_matching* m = nullptr;
    REQUIRE(mtm_match(g, h, method, &opts, &m) == MTM_OK);
    double f = -1, again = -2;
    CHECK(mtm_matching_objective(m, &f) == MTM_OK);
    CHECK(mtm_matching_evaluate(m, g, h, &opts, &again) == MTM_OK);
    CHECK(f == again);
    CHECK(f >= 0.0);
    size_t covered_g = 0, covered_h = 0;
    for (size_t c = 0; c < mtm_matching_cluster_count(m); ++c) {
      const size_t *gv, *hv;
      size_t gc, hc;
      REQUIRE(mtm_matching_cluster(m, c, &gv, &gc, &hv, &hc) == MTM_OK);
      CHECK(gc <= 2);
      CHECK(hc <= 2);
      covered_g += gc;
      covered_h += hc;
    }
    CHECK(covered_g == 14);
    CHECK(covered_h == 14);
    const std::string text = matching_text(m);
    CHECK(text.find("objective") != std::string::npos);

    const auto path = (std::filesystem::temp_directory_path() / "mtm_capi_matching.txt").string();
    REQUIRE(mtm_matching_write(m, path.c_str()) == MTM_OK);
    mtm_matching* back = nullptr;
    REQUIRE(mtm_matching_read(path.c_str(), &back) == MTM_OK);
    CHECK(matching_text(back) == text);
    mtm_matching_free(back);
    std::filesystem::remove(path);
    mtm_matching_free(m);
  }

  size_t needed = 0;
  CHECK(mtm_score_labels_format(truth, g, h, nullptr, 0, &needed) == MTM_ERR_BUFFER_TOO_SMALL);
  std::string buf(needed, '\0');
  CHECK(mtm_score_labels_format(truth, g, h, buf.data(), buf.size(), &needed) == MTM_OK);
  CHECK(buf.find("mean 0") != std::string::npos);

  CHECK(mtm_match(g, h, MTM_METHOD_GRAD, nullptr, nullptr) == MTM_ERR_INVALID_ARGUMENT);
  opts.k_max = 0;
  mtm_matching* m = nullptr;
  CHECK(mtm_match(g, h, MTM_METHOD_GRAD, &opts, &m) != MTM_OK);
  mtm_matching_free(truth);
  mtm_graph_free(g);
  mtm_graph_free(h);
}

TEST_CASE("experiments through the handle API") {
  const size_t sizes[] = {8, 10, 12};
  const mtm_method methods[] = {MTM_METHOD_SPEC, MTM_METHOD_BEAM};
  mtm_experiment_spec spec{};
  spec.kind = MTM_EXPERIMENT_TIME;
  spec.sizes = sizes;
  spec.num_sizes = 3;
  spec.p = 0.2;
  spec.m = 1;
  spec.reps = 1;
  spec.methods = methods;
  spec.num_methods = 2;
  spec.threads = 2;
  const double sigma = 0.05;
  spec.sigmas = &sigma;
  spec.num_sigmas = 1;
  mtm_options opts;
  mtm_options_init(&opts);
  mtm_experiment_result* r = nullptr;
  REQUIRE(mtm_run_experiment(&spec, &opts, &r) == MTM_OK);
  double f = 0, t = 0, slope = 0;
  CHECK(mtm_experiment_mean(r, MTM_METHOD_SPEC, 10, 0.05, &f, &t) == MTM_OK);
  CHECK(t > 0.0);
  CHECK(mtm_experiment_mean(r, MTM_METHOD_GRAD, 10, 0.05, &f, &t) == MTM_ERR_INVALID_ARGUMENT);
  CHECK(mtm_experiment_slope(r, MTM_METHOD_BEAM, &slope) == MTM_OK);
  CHECK(mtm_experiment_monotone_violations(r) == 0);
  size_t needed = 0;
  CHECK(mtm_experiment_csv(r, nullptr, 0, &needed) == MTM_ERR_BUFFER_TOO_SMALL);
  std::vector<char> csv(needed);
  CHECK(mtm_experiment_csv(r, csv.data(), csv.size(), &needed) == MTM_OK);
  CHECK(std::string(csv.data()).rfind("method,N,p,M,sigma,seed,F,time_s,iters", 0) == 0);
  mtm_experiment_free(r);

  spec.reps = 0;
  CHECK(mtm_run_experiment(&spec, &opts, &r) == MTM_ERR_INVALID_ARGUMENT);
}
