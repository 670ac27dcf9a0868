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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "generator.hpp"
#include "matching.hpp"
#include "solver.hpp"

namespace mtm {

enum class Method { kGrad, kSpec, kBeam };
enum class ProjectionKind { kIncremental, kClustering };

const char* to_string(Method m);
Method parse_method(const std::string& name);
const char* to_string(ProjectionKind p);
ProjectionKind parse_projection(const std::string& name);

struct MethodOptions {
  SolverConfig solver;
  ProjectionKind projection = ProjectionKind::kIncremental;
  SpectralConfig spectral;
  BeamConfig beam;
};

struct MethodRun {
  Matching matching;
  double seconds = 0.0;       // wall time of the method call alone
  std::size_t iterations = 0;  // conditional-gradient iterations (grad only)
  std::vector<SolveTrace> traces;
};

MethodRun run_method(Method method, const Graph& g, const Graph& h, const MethodOptions& opts);

/// Clusters grouping every G and H vertex by the base vertex it descends from.
Matching ground_truth_matching(const SyntheticPair& pair);

struct BenchmarkRecord {
  Method method = Method::kGrad;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t m = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double f = 0.0;
  double time_s = 0.0;
  std::size_t iters = 0;
};

struct SummaryRow {
  Method method = Method::kGrad;
  std::size_t n = 0;
  double sigma = 0.0;
  std::size_t reps = 0;
  double mean_f = 0.0;
  double std_f = 0.0;
  double mean_time = 0.0;
  double std_time = 0.0;
};

struct ExperimentSpec {
  std::vector<std::size_t> sizes{30};
  std::vector<double> sigmas{0.05};
  double p = 0.1;
  std::size_t m = 3;
  std::size_t reps = 30;
  std::vector<Method> methods{Method::kGrad, Method::kSpec, Method::kBeam};
  std::uint64_t seed = 0;
  MethodOptions options;
  std::size_t threads = 1;
  bool fit_slopes = false;
};

struct ExperimentResult {
  std::vector<BenchmarkRecord> records;  // ordered by size, sigma, rep, method
  std::vector<SummaryRow> summary;
  std::map<Method, double> slopes;  // log(mean time) against log(N)
  std::size_t traces = 0;
  std::size_t monotone_violations = 0;
  std::string grid_note;
};

/// Runs every method on `reps` generated pairs for each (N, sigma) in the
/// grid. Repetition r at grid point k uses a seed derived from spec.seed, k and
/// r. Reported F is recomputed from the returned matching.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// F against graph size.
ExperimentResult run_experiment_a(std::size_t reps, std::vector<std::size_t> sizes, double p, double sigma, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base = {});
/// F against noise.
ExperimentResult run_experiment_b(std::size_t reps, std::size_t n, double p, std::vector<double> sigmas, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base = {});
/// Running time against graph size with fitted log-log slopes.
ExperimentResult run_experiment_c(std::size_t reps, std::vector<std::size_t> sizes, double p, double sigma, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base = {});

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr const char* kCsvHeader = "method,N,p,M,sigma,seed,F,time_s,iters";

/// Header, data rows, then '#'-prefixed metadata, summary and slope lines.
std::string to_csv(const ExperimentResult& result);
/// Data rows of a CSV produced by to_csv; '#' lines are skipped.
std::vector<BenchmarkRecord> parse_csv_records(const std::string& text);

/// Concurrency cap from MTM_THREADS (defaults to 1).
std::size_t threads_from_env();

}  // namespace mtm
