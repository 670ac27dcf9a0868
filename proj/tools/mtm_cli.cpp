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
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtm/mtm.h"

namespace {

struct Common {
  size_t kmax = 2;
  double epsilon = 1e-6;
  double lambda = 0.0;
  double mu = 0.0;
  uint64_t seed = 0;
  size_t reps = 30;
  size_t max_iters = 1000;
  std::string method = "grad";
  std::vector<std::string> methods{"grad", "spec", "beam"};
  std::string projection = "incremental";
  std::string out;
  bool coords_similarity = false;
  bool negate_similarity = false;
  size_t beam_width = 3;
  size_t eigenvectors = 2;
};

class Failure {
 public:
  explicit Failure(mtm_status s) : status(s) {}
  mtm_status status;
};

void check(mtm_status s) {
  if (s != MTM_OK) throw Failure(s);
}

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--kmax", c.kmax, "Max vertices per cluster and graph")->capture_default_str();
  app->add_option("--epsilon", c.epsilon, "Stopping tolerance")->capture_default_str();
  app->add_option("--lambda", c.lambda, "Local similarity weight in [0,1]")->capture_default_str();
  app->add_option("--mu", c.mu, "Neighbour-merge weight")->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--max-iters", c.max_iters, "Iteration cap per relaxed solve")->capture_default_str();
  app->add_option("--projection", c.projection, "Discretisation for grad")
      ->check(CLI::IsMember({"incremental", "clustering"}))
      ->capture_default_str();
  app->add_option("--beam-width", c.beam_width, "Beam width")->capture_default_str();
  app->add_option("--eigenvectors", c.eigenvectors, "Leading eigenvectors for spec")->capture_default_str();
}

mtm_options to_options(const Common& c) {
  mtm_options o;
  mtm_options_init(&o);
  o.k_max = c.kmax;
  o.epsilon = c.epsilon;
  o.lambda = c.lambda;
  o.mu = c.mu;
  o.seed = c.seed;
  o.max_iters = c.max_iters;
  o.coords_similarity = c.coords_similarity ? 1 : 0;
  o.negate_similarity = c.negate_similarity ? 1 : 0;
  o.beam_width = c.beam_width;
  o.num_eigenvectors = c.eigenvectors;
  check(mtm_projection_from_string(c.projection.c_str(), &o.projection));
  return o;
}

std::string matching_text(const mtm_matching* m) {
  size_t needed = 0;
  mtm_matching_format(m, nullptr, 0, &needed);
  std::string text(needed, '\0');
  check(mtm_matching_format(m, text.data(), text.size(), &needed));
  text.resize(needed - 1);
  return text;
}

int cmd_gen(size_t n, double p, size_t m, double sigma, uint64_t seed, bool labels, const std::string& out_g,
            const std::string& out_h, const std::string& out_truth) {
  mtm_synthetic_config cfg{n, p, m, sigma, seed, labels ? 1 : 0};
  mtm_graph* g = nullptr;
  mtm_graph* h = nullptr;
  mtm_matching* truth = nullptr;
  check(mtm_generate_pair(&cfg, &g, &h, out_truth.empty() ? nullptr : &truth));
  mtm_status s = mtm_graph_write(g, out_g.c_str());
  if (s == MTM_OK) s = mtm_graph_write(h, out_h.c_str());
  if (s == MTM_OK && truth) s = mtm_matching_write(truth, out_truth.c_str());
  mtm_graph_free(g);
  mtm_graph_free(h);
  mtm_matching_free(truth);
  check(s);
  return 0;
}

int cmd_match(const std::string& path_g, const std::string& path_h, const Common& c) {
  mtm_method method;
  check(mtm_method_from_string(c.method.c_str(), &method));
  const mtm_options opts = to_options(c);
  mtm_graph* g = nullptr;
  mtm_graph* h = nullptr;
  mtm_matching* m = nullptr;
  mtm_status s = mtm_graph_read(path_g.c_str(), &g);
  if (s == MTM_OK) s = mtm_graph_read(path_h.c_str(), &h);
  if (s == MTM_OK) s = mtm_match(g, h, method, &opts, &m);
  std::string text;
  if (s == MTM_OK) {
    text = matching_text(m);
    if (!c.out.empty()) s = mtm_matching_write(m, c.out.c_str());
  }
  mtm_graph_free(g);
  mtm_graph_free(h);
  mtm_matching_free(m);
  check(s);
  std::cout << text;
  return 0;
}

int cmd_bench(mtm_experiment_kind kind, const std::vector<size_t>& sizes, const std::vector<double>& sigmas, double p,
              size_t m, const Common& c) {
  std::vector<mtm_method> methods;
  for (const std::string& name : c.methods) {
    mtm_method mm;
    check(mtm_method_from_string(name.c_str(), &mm));
    methods.push_back(mm);
  }
  const mtm_options opts = to_options(c);
  mtm_experiment_spec spec{};
  spec.kind = kind;
  spec.sizes = sizes.data();
  spec.num_sizes = sizes.size();
  spec.sigmas = sigmas.data();
  spec.num_sigmas = sigmas.size();
  spec.p = p;
  spec.m = m;
  spec.reps = c.reps;
  spec.methods = methods.data();
  spec.num_methods = methods.size();
  spec.seed = c.seed;
  spec.threads = 0;
  mtm_experiment_result* r = nullptr;
  check(mtm_run_experiment(&spec, &opts, &r));
  mtm_status s = MTM_OK;
  if (c.out.empty()) {
    size_t needed = 0;
    mtm_experiment_csv(r, nullptr, 0, &needed);
    std::string text(needed, '\0');
    s = mtm_experiment_csv(r, text.data(), text.size(), &needed);
    if (s == MTM_OK) {
      text.resize(needed - 1);
      std::cout << text;
    }
  } else {
    s = mtm_experiment_write_csv(r, c.out.c_str());
  }
  if (s == MTM_OK && kind == MTM_EXPERIMENT_TIME) {
    for (size_t i = 0; i < methods.size(); ++i) {
      double slope = 0.0;
      if (mtm_experiment_slope(r, methods[i], &slope) == MTM_OK)
        std::cerr << "slope " << c.methods[i] << ' ' << slope << '\n';
    }
  }
  mtm_experiment_free(r);
  check(s);
  return 0;
}

int cmd_score(const std::string& path_m, const std::string& path_g, const std::string& path_h) {
  mtm_matching* m = nullptr;
  mtm_graph* g = nullptr;
  mtm_graph* h = nullptr;
  mtm_status s = mtm_matching_read(path_m.c_str(), &m);
  if (s == MTM_OK) s = mtm_graph_read(path_g.c_str(), &g);
  if (s == MTM_OK) s = mtm_graph_read(path_h.c_str(), &h);
  std::string text;
  if (s == MTM_OK) {
    size_t needed = 0;
    s = mtm_score_labels_format(m, g, h, nullptr, 0, &needed);
    if (s == MTM_ERR_BUFFER_TOO_SMALL) {
      text.assign(needed, '\0');
      s = mtm_score_labels_format(m, g, h, text.data(), text.size(), &needed);
      if (s == MTM_OK) text.resize(needed - 1);
    }
  }
  mtm_matching_free(m);
  mtm_graph_free(g);
  mtm_graph_free(h);
  check(s);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-to-many graph matching"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtm_version()));

  Common common;

  size_t gen_n = 30, gen_m = 3;
  double gen_p = 0.1, gen_sigma = 0.05;
  bool gen_labels = false;
  std::string out_g, out_h, out_truth;
  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic graph pair");
  gen->add_option("-n,--n", gen_n, "Base graph size")->capture_default_str();
  gen->add_option("-p,--p", gen_p, "Edge probability")->capture_default_str();
  gen->add_option("-m,--m", gen_m, "Vertex splits per graph")->capture_default_str();
  gen->add_option("--sigma", gen_sigma, "Noise level")->capture_default_str();
  gen->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  gen->add_flag("--labels", gen_labels, "Label vertices with their base vertex");
  gen->add_option("--out-g", out_g, "Output file for G")->required();
  gen->add_option("--out-h", out_h, "Output file for H")->required();
  gen->add_option("--out-truth", out_truth, "Output file for the ground-truth matching");

  std::string path_g, path_h, path_m;
  CLI::App* match = app.add_subcommand("match", "Match two graph files");
  match->add_option("graph_g", path_g, "First graph file")->required();
  match->add_option("graph_h", path_h, "Second graph file")->required();
  match->add_option("--method", common.method, "Matcher")
      ->check(CLI::IsMember({"grad", "spec", "beam"}))
      ->capture_default_str();
  match->add_option("--out", common.out, "Also write the matching to this file");
  match->add_flag("--coords-similarity", common.coords_similarity, "Use coordinate similarity as C");
  match->add_flag("--negate-similarity", common.negate_similarity, "Use -C instead of C");
  add_solver_flags(match, common);

  std::vector<size_t> sizes_a{10, 20, 30, 40, 50, 60};
  std::vector<size_t> sizes_c{20, 40, 60, 80};
  std::vector<double> sigmas_b{0.0, 0.05, 0.1, 0.15, 0.2};
  size_t bench_n = 30, bench_m = 3;
  double bench_p = 0.1, bench_sigma = 0.05;
  auto add_bench = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--reps", common.reps, "Repetitions per grid point")->capture_default_str();
    sub->add_option("--method", common.methods, "Methods to run")
        ->check(CLI::IsMember({"grad", "spec", "beam"}))
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--out", common.out, "CSV output file (stdout when absent)");
    sub->add_option("-p,--p", bench_p, "Edge probability")->capture_default_str();
    sub->add_option("-m,--m", bench_m, "Vertex splits per graph")->capture_default_str();
    add_solver_flags(sub, common);
    return sub;
  };
  CLI::App* bench_size = add_bench("bench-size", "Objective against graph size");
  bench_size->add_option("--sizes", sizes_a, "Base graph sizes")->delimiter(',')->capture_default_str();
  bench_size->add_option("--sigma", bench_sigma, "Noise level")->capture_default_str();
  CLI::App* bench_noise = add_bench("bench-noise", "Objective against noise");
  bench_noise->add_option("-n,--n", bench_n, "Base graph size")->capture_default_str();
  bench_noise->add_option("--sigmas", sigmas_b, "Noise levels")->delimiter(',')->capture_default_str();
  CLI::App* bench_time = add_bench("bench-time", "Running time against graph size");
  bench_time->add_option("--sizes", sizes_c, "Base graph sizes")->delimiter(',')->capture_default_str();
  bench_time->add_option("--sigma", bench_sigma, "Noise level")->capture_default_str();

  CLI::App* score = app.add_subcommand("score-labels", "Label-transfer error of a matching");
  score->add_option("matching", path_m, "Matching file")->required();
  score->add_option("graph_g", path_g, "Labelled first graph")->required();
  score->add_option("graph_h", path_h, "Labelled second graph")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_p, gen_m, gen_sigma, common.seed, gen_labels, out_g, out_h, out_truth);
    if (match->parsed()) return cmd_match(path_g, path_h, common);
    if (bench_size->parsed())
      return cmd_bench(MTM_EXPERIMENT_SIZE, sizes_a, {bench_sigma}, bench_p, bench_m, common);
    if (bench_noise->parsed())
      return cmd_bench(MTM_EXPERIMENT_NOISE, {bench_n}, sigmas_b, bench_p, bench_m, common);
    if (bench_time->parsed())
      return cmd_bench(MTM_EXPERIMENT_TIME, sizes_c, {bench_sigma}, bench_p, bench_m, common);
    if (score->parsed()) return cmd_score(path_m, path_g, path_h);
  } catch (const Failure& f) {
    std::cerr << "error: " << mtm_status_string(f.status) << ": " << mtm_last_error() << '\n';
    return static_cast<int>(f.status);
  }
  return 1;
}
