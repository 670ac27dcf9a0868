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

#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <thread>

#include "projection.hpp"

namespace mtm {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::kGrad: return "grad";
    case Method::kSpec: return "spec";
    case Method::kBeam: return "beam";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "grad") return Method::kGrad;
  if (name == "spec") return Method::kSpec;
  if (name == "beam") return Method::kBeam;
  throw Error(Error::Code::kInvalidArgument, "unknown method '" + name + "' (expected grad, spec or beam)");
}

const char* to_string(ProjectionKind p) {
  return p == ProjectionKind::kIncremental ? "incremental" : "clustering";
}

ProjectionKind parse_projection(const std::string& name) {
  if (name == "incremental") return ProjectionKind::kIncremental;
  if (name == "clustering") return ProjectionKind::kClustering;
  throw Error(Error::Code::kInvalidArgument, "unknown projection '" + name + "' (expected incremental or clustering)");
}

MethodRun run_method(Method method, const Graph& g, const Graph& h, const MethodOptions& opts) {
  MethodRun run;
  const auto start = std::chrono::steady_clock::now();
  switch (method) {
    case Method::kGrad:
      if (opts.projection == ProjectionKind::kIncremental) {
        IncrementalResult res = project_incremental(g, h, opts.solver);
        run.matching = std::move(res.matching);
        run.traces = std::move(res.traces);
      } else {
        SolveTrace trace = solve_relaxed(g, h, opts.solver);
        run.matching = project_by_clustering(g, h, trace.solution, opts.solver);
        run.traces.push_back(std::move(trace));
      }
      break;
    case Method::kSpec:
      run.matching = spectral_match(g, h, opts.spectral, opts.solver);
      break;
    case Method::kBeam:
      run.matching = beam_match(g, h, opts.beam, opts.solver);
      break;
  }
  const auto stop = std::chrono::steady_clock::now();
  run.seconds = std::max(1e-9, std::chrono::duration<double>(stop - start).count());
  for (const SolveTrace& t : run.traces) run.iterations += t.iterations.size();
  return run;
}

Matching ground_truth_matching(const SyntheticPair& pair) {
  std::size_t base = 0;
  for (std::size_t o : pair.origin_g) base = std::max(base, o + 1);
  for (std::size_t o : pair.origin_h) base = std::max(base, o + 1);
  Matching m;
  m.clusters.resize(base);
  for (std::size_t v = 0; v < pair.origin_g.size(); ++v) m.clusters[pair.origin_g[v]].g.push_back(v);
  for (std::size_t v = 0; v < pair.origin_h.size(); ++v) m.clusters[pair.origin_h[v]].h.push_back(v);
  std::erase_if(m.clusters, [](const Cluster& c) { return c.g.empty() && c.h.empty(); });
  m.objective = evaluate(m, pair.g, pair.h, SolverConfig{});
  return m;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(Error::Code::kInvalidArgument, "slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(Error::Code::kInvalidArgument, "slope fit needs distinct x values");
  return sxy / sxx;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.reps == 0) throw Error(Error::Code::kInvalidArgument, "reps must be at least 1");
  if (spec.sizes.empty() || spec.sigmas.empty() || spec.methods.empty())
    throw Error(Error::Code::kInvalidArgument, "experiment grid is empty");

  struct Task {
    std::size_t n;
    double sigma;
    std::size_t grid;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  std::size_t grid = 0;
  for (std::size_t n : spec.sizes)
    for (double sigma : spec.sigmas) {
      for (std::size_t r = 0; r < spec.reps; ++r) tasks.push_back({n, sigma, grid, r});
      ++grid;
    }

  // Validate generator parameters up front so errors surface before any work.
  for (std::size_t n : spec.sizes)
    for (double sigma : spec.sigmas) generate_pair({n, spec.p, spec.m, sigma, 0});

  struct Slot {
    std::vector<BenchmarkRecord> rows;
    std::size_t traces = 0;
    std::size_t violations = 0;
    std::string error;
  };
  std::vector<Slot> slots(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      Slot& slot = slots[i];
      try {
        const std::uint64_t seed = derive_seed(spec.seed, (static_cast<std::uint64_t>(t.grid) << 32) | t.rep);
        const SyntheticPair pair = generate_pair({t.n, spec.p, spec.m, t.sigma, seed});
        MethodOptions opts = spec.options;
        opts.solver.seed = seed;
        for (Method method : spec.methods) {
          const MethodRun run = run_method(method, pair.g, pair.h, opts);
          validate_matching(run.matching, pair.g.size(), pair.h.size(), opts.solver.k_max);
          BenchmarkRecord rec;
          rec.method = method;
          rec.n = t.n;
          rec.p = spec.p;
          rec.m = spec.m;
          rec.sigma = t.sigma;
          rec.seed = seed;
          rec.f = evaluate(run.matching, pair.g, pair.h, opts.solver);
          rec.time_s = run.seconds;
          rec.iters = run.iterations;
          slot.rows.push_back(rec);
          slot.traces += run.traces.size();
          for (const SolveTrace& tr : run.traces) slot.violations += tr.monotone_violations();
        }
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, tasks.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  for (Slot& slot : slots) {
    if (!slot.error.empty()) throw Error(Error::Code::kInvalidArgument, "experiment repetition failed: " + slot.error);
    result.records.insert(result.records.end(), slot.rows.begin(), slot.rows.end());
    result.traces += slot.traces;
    result.monotone_violations += slot.violations;
  }

  for (std::size_t n : spec.sizes)
    for (double sigma : spec.sigmas)
      for (Method method : spec.methods) {
        SummaryRow row;
        row.method = method;
        row.n = n;
        row.sigma = sigma;
        std::vector<double> fs, ts;
        for (const auto& r : result.records)
          if (r.n == n && r.sigma == sigma && r.method == method) {
            fs.push_back(r.f);
            ts.push_back(r.time_s);
          }
        row.reps = fs.size();
        auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
          mean = 0.0;
          for (double x : v) mean += x;
          mean /= static_cast<double>(v.size());
          double ss = 0.0;
          for (double x : v) ss += (x - mean) * (x - mean);
          sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        };
        mean_std(fs, row.mean_f, row.std_f);
        mean_std(ts, row.mean_time, row.std_time);
        result.summary.push_back(row);
      }

  if (spec.fit_slopes) {
    const std::set<std::size_t> distinct(spec.sizes.begin(), spec.sizes.end());
    if (distinct.size() < 3) throw Error(Error::Code::kInvalidArgument, "slope fitting needs at least three distinct sizes");
    for (Method method : spec.methods) {
      std::vector<double> lx, ly;
      for (std::size_t n : distinct) {
        double total = 0.0;
        std::size_t count = 0;
        for (const auto& row : result.summary)
          if (row.method == method && row.n == n) {
            total += row.mean_time * static_cast<double>(row.reps);
            count += row.reps;
          }
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(total / static_cast<double>(count)));
      }
      result.slopes[method] = fit_slope(lx, ly);
    }
  }

  std::ostringstream note;
  note << "sizes=";
  for (std::size_t k = 0; k < spec.sizes.size(); ++k) note << (k ? ";" : "") << spec.sizes[k];
  note << " sigmas=";
  for (std::size_t k = 0; k < spec.sigmas.size(); ++k) note << (k ? ";" : "") << num(spec.sigmas[k]);
  note << " p=" << num(spec.p) << " M=" << spec.m << " reps=" << spec.reps << " seed=" << spec.seed
       << " kmax=" << spec.options.solver.k_max << " projection=" << to_string(spec.options.projection)
       << " beam_width=" << spec.options.beam.beam_width << " eigenvectors=" << spec.options.spectral.num_eigenvectors;
  result.grid_note = note.str();
  return result;
}

ExperimentResult run_experiment_a(std::size_t reps, std::vector<std::size_t> sizes, double p, double sigma, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base) {
  ExperimentSpec spec = base;
  spec.reps = reps;
  spec.sizes = std::move(sizes);
  spec.sigmas = {sigma};
  spec.p = p;
  spec.m = m;
  spec.methods = std::move(methods);
  spec.fit_slopes = false;
  return run_experiment(spec);
}

ExperimentResult run_experiment_b(std::size_t reps, std::size_t n, double p, std::vector<double> sigmas, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base) {
  ExperimentSpec spec = base;
  spec.reps = reps;
  spec.sizes = {n};
  spec.sigmas = std::move(sigmas);
  spec.p = p;
  spec.m = m;
  spec.methods = std::move(methods);
  spec.fit_slopes = false;
  return run_experiment(spec);
}

ExperimentResult run_experiment_c(std::size_t reps, std::vector<std::size_t> sizes, double p, double sigma, std::size_t m,
                                  std::vector<Method> methods, const ExperimentSpec& base) {
  ExperimentSpec spec = base;
  spec.reps = reps;
  spec.sizes = std::move(sizes);
  spec.sigmas = {sigma};
  spec.p = p;
  spec.m = m;
  spec.methods = std::move(methods);
  spec.fit_slopes = true;
  return run_experiment(spec);
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : result.records)
    out << to_string(r.method) << ',' << r.n << ',' << num(r.p) << ',' << r.m << ',' << num(r.sigma) << ',' << r.seed
        << ',' << num(r.f) << ',' << num(r.time_s) << ',' << r.iters << '\n';
  out << "# grid " << result.grid_note << '\n';
  out << "#summary,method,N,sigma,reps,mean_F,std_F,mean_time_s,std_time_s\n";
  for (const auto& s : result.summary)
    out << "#summary," << to_string(s.method) << ',' << s.n << ',' << num(s.sigma) << ',' << s.reps << ','
        << num(s.mean_f) << ',' << num(s.std_f) << ',' << num(s.mean_time) << ',' << num(s.std_time) << '\n';
  for (const auto& [method, slope] : result.slopes) out << "#slope," << to_string(method) << ',' << num(slope) << '\n';
  return out.str();
}

std::vector<BenchmarkRecord> parse_csv_records(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<BenchmarkRecord> out;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw Error(Error::Code::kParse, "csv:1: unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string tok;
    while (std::getline(fields, tok, ',')) f.push_back(tok);
    if (f.size() != 9) throw Error(Error::Code::kParse, "csv:" + std::to_string(lineno) + ": expected 9 fields");
    auto to_d = [&](const std::string& s) {
      double v = 0.0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(Error::Code::kParse, "csv:" + std::to_string(lineno) + ": bad number '" + s + "'");
      return v;
    };
    auto to_u = [&](const std::string& s) {
      std::uint64_t v = 0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(Error::Code::kParse, "csv:" + std::to_string(lineno) + ": bad integer '" + s + "'");
      return v;
    };
    BenchmarkRecord r;
    r.method = parse_method(f[0]);
    r.n = static_cast<std::size_t>(to_u(f[1]));
    r.p = to_d(f[2]);
    r.m = static_cast<std::size_t>(to_u(f[3]));
    r.sigma = to_d(f[4]);
    r.seed = to_u(f[5]);
    r.f = to_d(f[6]);
    r.time_s = to_d(f[7]);
    r.iters = static_cast<std::size_t>(to_u(f[8]));
    out.push_back(r);
  }
  return out;
}

std::size_t threads_from_env() {
  const char* env = std::getenv("MTM_THREADS");
  if (!env || !*env) return 1;
  std::size_t v = 0;
  auto res = std::from_chars(env, env + std::strlen(env), v);
  if (res.ec != std::errc() || v == 0) return 1;
  return v;
}

}  // namespace mtm
