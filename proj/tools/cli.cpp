// Copyright 2026 The lculab Authors
//
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

#include "cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "lculab/cost.hpp"
#include "lculab/error.hpp"
#include "lculab/gibbs.hpp"
#include "lculab/inverse_estimator.hpp"
#include "lculab/io.hpp"
#include "lculab/markov.hpp"
#include "lculab/random.hpp"
#include "lculab/sparse_chain.hpp"

namespace lculab::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Constants {
  CostConstants cost;
  double c_a = 1.0;
  double c_m = 16.0;
  double c_ae = 4.0;
  double gibbs_eps_prime = 0.5;
  double hitting_eps_prime = 1.0;
};

struct Context {
  Json config;
  fs::path base_dir;
  fs::path out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  Constants k;
  std::shared_ptr<spdlog::logger> log;
};

// ---- config access ---------------------------------------------------------

double num(const Json& cfg, const std::string& key, std::optional<double> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing field '" + key + "'");
  }
  const Json& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const Json& cfg, const std::string& key, std::int64_t fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::vector<double> num_list(const Json& cfg, const std::string& key,
                             std::optional<std::vector<double>> fallback = {}) {
  if (!cfg.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing field '" + key + "'");
  }
  const Json& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) {
    throw ConfigError("field '" + key + "' must be a number or a nonempty array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("field '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string choice(const Json& cfg, const std::string& key, const std::vector<std::string>& allowed,
                   const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg.at(key);
  if (!v.is_string() || std::find(allowed.begin(), allowed.end(), v.get<std::string>()) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError("field '" + key + "' must be one of: " + list);
  }
  return v.get<std::string>();
}

void allow_keys(const Json& cfg, std::vector<std::string> keys, const std::string& context) {
  keys.push_back("command");
  keys.push_back("seed");
  try {
    io::reject_unknown_keys(cfg, keys, context);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

template <class F>
auto schema(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

io::ChainSpec load_chain(const Context& ctx) {
  if (!ctx.config.contains("chain")) throw ConfigError("missing field 'chain'");
  const Json& c = ctx.config.at("chain");
  if (c.is_string()) {
    const Json file = read_json_file(ctx.base_dir / c.get<std::string>());
    return schema("chain", [&] { return io::chain_from_json(file); });
  }
  return schema("chain", [&] { return io::chain_from_json(c); });
}

ProjectorDecomposition load_hamiltonian(const Context& ctx) {
  if (!ctx.config.contains("hamiltonian")) throw ConfigError("missing field 'hamiltonian'");
  const Json& h = ctx.config.at("hamiltonian");
  if (h.is_string() || h.is_array()) {
    std::vector<std::string> lines;
    if (h.is_string()) {
      std::istringstream in(h.get<std::string>());
      for (std::string line; std::getline(in, line);) lines.push_back(line);
    } else {
      for (const auto& l : h) {
        if (!l.is_string()) throw ConfigError("hamiltonian: Pauli terms must be strings");
        lines.push_back(l.get<std::string>());
      }
    }
    return schema("hamiltonian", [&] { return io::pauli_decomposition(lines); });
  }
  const ComplexMatrix m = schema("hamiltonian", [&] { return io::matrix_from_json(h); });
  return schema("hamiltonian", [&] { return io::decomposition_from_matrix(HermitianOperator(m)); });
}

Constants load_constants(const std::string& path) {
  Constants k;
  if (path.empty()) return k;
  const Json j = read_json_file(path);
  const std::vector<std::string> keys = {"queries",      "extra_gates",    "total_gates",
                                         "sparse_gates", "b_gate",         "eps_prime",
                                         "evolution_time", "c_a",          "c_m",
                                         "c_ae",         "gibbs_eps_prime", "hitting_eps_prime"};
  try {
    io::reject_unknown_keys(j, keys, "constants");
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  const auto get = [&](const char* key, double& field) {
    field = num(j, key, field);
    if (!(field > 0.0) || !std::isfinite(field)) {
      throw ConfigError(std::string("constants: '") + key + "' must be positive");
    }
  };
  get("queries", k.cost.queries);
  get("extra_gates", k.cost.extra_gates);
  get("total_gates", k.cost.total_gates);
  get("sparse_gates", k.cost.sparse_gates);
  get("b_gate", k.cost.b_gate);
  get("eps_prime", k.cost.eps_prime);
  get("evolution_time", k.cost.evolution_time);
  get("c_a", k.c_a);
  get("c_m", k.c_m);
  get("c_ae", k.c_ae);
  get("gibbs_eps_prime", k.gibbs_eps_prime);
  get("hitting_eps_prime", k.hitting_eps_prime);
  return k;
}

// ---- output ----------------------------------------------------------------

std::string fmt_num(double v) { return fmt::format("{:.12g}", v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }
  std::string str() const {
    std::string s;
    const auto line = [&s](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
      s += "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Runs f(i) for i in [0, n) on `jobs` threads; results are stored by index
/// so the output order never depends on scheduling. The exception of the
/// lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int t = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Json cost_json(const CostReport& r) {
  Json j = Json::object();
  for (const auto& e : r.entries()) j[e.name] = e.value;
  return j;
}

// ---- gibbs -----------------------------------------------------------------

int cmd_gibbs(const Context& ctx) {
  const Json& cfg = ctx.config;
  allow_keys(cfg, {"hamiltonian", "beta", "epsilon", "mode", "z_lower_bound", "precondition"},
             "gibbs");
  const ProjectorDecomposition p = load_hamiltonian(ctx);
  const auto betas = num_list(cfg, "beta");
  const auto epsilons = num_list(cfg, "epsilon");
  const std::string mode = choice(cfg, "mode", {"desk", "oracle-free"}, "desk");
  const std::string pre = choice(cfg, "precondition", {"strict", "warn"}, "strict");
  std::optional<double> z_lb;
  if (cfg.contains("z_lower_bound")) z_lb = num(cfg, "z_lower_bound");
  if (mode == "oracle-free" && !z_lb) throw ConfigError("oracle-free mode needs 'z_lower_bound'");

  struct Point {
    double beta, epsilon;
  };
  std::vector<Point> points;
  for (double b : betas) {
    for (double e : epsilons) points.push_back({b, e});
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.beta != b.beta ? a.beta < b.beta : a.epsilon < b.epsilon;
  });
  std::vector<std::optional<GibbsResult>> results(points.size());
  parallel_for(points.size(), ctx.jobs, [&](std::size_t i) {
    GibbsTask task(p);
    task.beta = points[i].beta;
    task.epsilon = points[i].epsilon;
    task.mode = mode == "desk" ? GibbsMode::kDesk : GibbsMode::kOracleFree;
    task.z_lower_bound = z_lb;
    task.eps_prime_constant = ctx.k.gibbs_eps_prime;
    task.precondition_mode = pre == "strict" ? PreconditionMode::kStrict : PreconditionMode::kWarn;
    task.lcu.c_a = ctx.k.c_a;
    task.constants = ctx.k.cost;
    results[i].emplace(prepare_gibbs(task));
  });

  Csv csv({"beta", "epsilon", "eps_prime", "J", "delta_y", "trace_dist", "success_amp", "rounds",
           "total_gate_model"});
  Csv err({"series", "x", "y"}), cost({"series", "x", "y"});
  Json rows = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GibbsResult& r = *results[i];
    ctx.log->debug("beta={} eps={}: grid J={} delta_y={} after {} refinements", points[i].beta,
                   points[i].epsilon, r.grid.J, r.grid.delta_y, r.grid.iterations);
    csv.row({fmt_num(points[i].beta), fmt_num(points[i].epsilon), fmt_num(r.eps_prime),
             std::to_string(r.grid.J), fmt_num(r.grid.delta_y), fmt_num(r.trace_dist),
             fmt_num(r.success_amplitude), std::to_string(r.amplification_rounds),
             fmt_num(r.cost.total())});
    err.row({fmt_num(points[i].epsilon), fmt_num(points[i].beta), fmt_num(r.trace_dist)});
    cost.row({fmt_num(points[i].epsilon), fmt_num(points[i].beta), fmt_num(r.cost.total())});
    const bool within = r.trace_dist <= points[i].epsilon;
    if (!within && r.warnings.empty()) ok = false;
    rows.push_back({{"beta", points[i].beta},
                    {"epsilon", points[i].epsilon},
                    {"eps_prime", r.eps_prime},
                    {"J", r.grid.J},
                    {"delta_y", r.grid.delta_y},
                    {"trace_dist", r.trace_dist},
                    {"success_amp", r.success_amplitude},
                    {"partition_function", r.partition_function},
                    {"rounds", r.amplification_rounds},
                    {"rounds_inverse_form", r.rounds_inverse_form},
                    {"cost", cost_json(r.cost)},
                    {"within_epsilon", within},
                    {"warnings", r.warnings}});
    for (const auto& w : r.warnings) ctx.log->warn("beta={}: {}", points[i].beta, w);
  }
  write_text(ctx.out_dir / "gibbs.csv", csv.str());
  write_text(ctx.out_dir / "plot_error.csv", err.str());
  write_text(ctx.out_dir / "plot_cost.csv", cost.str());
  write_json(ctx.out_dir / "summary.json",
             {{"command", "gibbs"}, {"seed", ctx.seed}, {"dim", p.dim()}, {"runs", rows},
              {"all_within_epsilon", ok}});
  if (!ok) throw CheckFailed("trace distance above epsilon with preconditions satisfied");
  return kExitOk;
}

// ---- hitting ---------------------------------------------------------------

int cmd_hitting(const Context& ctx) {
  const Json& cfg = ctx.config;
  allow_keys(cfg, {"chain", "epsilon", "confidence", "mode", "delta_lower_bound", "route",
                   "repetitions", "scaling", "oracle_costs"},
             "hitting");
  const io::ChainSpec spec = load_chain(ctx);
  const double eps = num(cfg, "epsilon");
  const double confidence = num(cfg, "confidence", 0.81);
  const std::string mode = choice(cfg, "mode", {"desk", "oracle-free"}, "desk");
  const std::string route = choice(cfg, "route", {"dense", "sparse"}, "dense");
  const std::string scaling = choice(cfg, "scaling", {"sqrt_2z", "sqrt_z"}, "sqrt_2z");
  const std::int64_t reps = integer(cfg, "repetitions", 1);
  if (reps < 1) throw ConfigError("'repetitions' must be >= 1");
  OracleCosts oc;
  if (cfg.contains("oracle_costs")) {
    const Json& o = cfg.at("oracle_costs");
    schema("oracle_costs", [&] { io::reject_unknown_keys(o, {"c_p", "c_u", "c_sqrt_pi"}, "oracle_costs"); return 0; });
    oc.c_p = num(o, "c_p", 1.0);
    oc.c_u = num(o, "c_u", 1.0);
    oc.c_sqrt_pi = num(o, "c_sqrt_pi", 1.0);
  }
  std::optional<double> dlb;
  if (cfg.contains("delta_lower_bound")) dlb = num(cfg, "delta_lower_bound");
  if (mode == "oracle-free" && !dlb) throw ConfigError("oracle-free mode needs 'delta_lower_bound'");

  MarkedPartition mp(validate_chain(spec.transition), spec.marked);
  HittingTimeTask task(mp);
  task.epsilon = eps;
  task.confidence = confidence;
  task.mode = mode == "desk" ? HittingMode::kDesk : HittingMode::kOracleFree;
  task.delta_lower_bound = dlb;
  task.route = route == "dense" ? ChainRoute::kDense : ChainRoute::kSparse;
  task.scaling = scaling == "sqrt_2z" ? TimeScaling::kSqrtTwoZ : TimeScaling::kSqrtZ;
  task.eps_prime_constant = ctx.k.hitting_eps_prime;
  task.c_ae = ctx.k.c_ae;
  task.oracles = oc;
  task.constants = ctx.k.cost;
  const HittingTimeResult r = estimate_hitting_time(task, derive_seed(ctx.seed, 0));
  ctx.log->debug("inverse grid: K={} delta_z={} z_K={} J={} after {} refinements", r.grid.K,
                 r.grid.delta_z, r.grid.z_K, r.grid.hs.J, r.grid.iterations);
  const Json breakdown = {{"C_W", r.cost.get("C_W")},
                          {"C_U", r.cost.get("C_U")},
                          {"C_sqrt_pi", r.cost.get("C_sqrt_pi")},
                          {"C_B", r.cost.get("C_B")},
                          {"total", r.cost.total()}};
  write_json(ctx.out_dir / "result.json", {{"t_hat", r.estimate},
                                           {"t_exact", r.exact},
                                           {"error", r.error},
                                           {"grover_queries", r.grover_queries},
                                           {"cost_breakdown", breakdown}});
  Csv runs({"run", "t_hat", "error"});
  runs.row({"0", fmt_num(r.estimate), fmt_num(r.error)});
  std::int64_t covered = r.error <= eps ? 1 : 0;
  for (std::int64_t i = 1; i < reps; ++i) {
    const double est = resample_hitting_estimate(r, task, derive_seed(ctx.seed, static_cast<std::uint64_t>(i)));
    const double e = std::abs(est - r.exact);
    covered += e <= eps;
    runs.row({std::to_string(i), fmt_num(est), fmt_num(e)});
  }
  write_text(ctx.out_dir / "hitting_runs.csv", runs.str());
  Json summary = {{"command", "hitting"},
                  {"seed", ctx.seed},
                  {"route", route},
                  {"delta", r.delta},
                  {"eps_prime", r.eps_prime},
                  {"z_K", r.grid.z_K},
                  {"gamma", r.grid.gamma},
                  {"K", r.grid.K},
                  {"J", r.grid.hs.J},
                  {"exact_amplitude", r.exact_amplitude},
                  {"noiseless_estimate", r.noiseless_estimate},
                  {"repetitions", reps},
                  {"fraction_within_epsilon", static_cast<double>(covered) / static_cast<double>(reps)},
                  {"cost", cost_json(r.cost)}};
  if (r.classical_cost_comparison) {
    summary["classical_comparison"] = {{"quantum_total", r.classical_cost_comparison->first},
                                       {"classical_steps", r.classical_cost_comparison->second}};
  }
  write_json(ctx.out_dir / "summary.json", summary);
  return kExitOk;
}

// ---- appendix-verify -------------------------------------------------------

int cmd_appendix(const Context& ctx) {
  allow_keys(ctx.config, {"chain"}, "appendix-verify");
  const io::ChainSpec spec = load_chain(ctx);
  MarkedPartition mp(validate_chain(spec.transition), spec.marked);
  const SparseChainOracle oracle(mp);
  const SparsePipeline pipe = build_sparse_pipeline(oracle);
  const DiscriminantPair dp = discriminant(mp);
  const double dense_residual = max_abs_entry(pipe.projected.h.matrix() - dp.h.matrix());
  Json alphas = Json::array();
  for (const auto& t : pipe.projected.decomposition.terms()) alphas.push_back(t.alpha);
  write_json(ctx.out_dir / "manifest.json",
             {{"colors", pipe.coloring.num_colors},
              {"terms", pipe.assembled.terms},
              {"alpha_list", alphas},
              {"reconstruction_residual", pipe.assembled.reconstruction_residual}});
  const bool proper = is_proper_coloring(pipe.coloring);
  const bool ok = proper && dense_residual <= 1e-10 &&
                  pipe.assembled.reconstruction_residual <= 1e-10 &&
                  pipe.coloring.num_colors <= pipe.coloring.greedy_bound;
  write_json(ctx.out_dir / "summary.json", {{"command", "appendix-verify"},
                                            {"seed", ctx.seed},
                                            {"n_states", mp.chain().n_states()},
                                            {"sparsity", mp.chain().sparsity()},
                                            {"greedy_bound", pipe.coloring.greedy_bound},
                                            {"paper_bound", pipe.coloring.paper_bound},
                                            {"proper_coloring", proper},
                                            {"dense_h_residual", dense_residual},
                                            {"passed", ok}});
  if (!ok) throw CheckFailed("sparse construction does not reproduce the dense Hamiltonian");
  return kExitOk;
}

// ---- lemma sweeps ----------------------------------------------------------

ComplexMatrix random_states(Index dim, Index count, Rng& rng) {
  ComplexMatrix m(dim, count);
  for (Index c = 0; c < count; ++c) m.col(c) = random_state(dim, rng).amplitudes();
  return m;
}

int cmd_lemma1(const Context& ctx) {
  const Json& cfg = ctx.config;
  allow_keys(cfg, {"instances", "max_dim", "norm_beta", "eps_prime", "states"}, "lemma1-sweep");
  const std::int64_t instances = integer(cfg, "instances", 10);
  const std::int64_t max_dim = integer(cfg, "max_dim", 16);
  const std::int64_t states = integer(cfg, "states", 20);
  const auto nbs = num_list(cfg, "norm_beta", std::vector<double>{4.0, 8.0});
  const auto eps = num_list(cfg, "eps_prime", std::vector<double>{std::exp(-4.0), std::exp(-6.0)});
  if (instances < 1 || max_dim < 2 || max_dim > 64 || states < 1) {
    throw ConfigError("lemma1-sweep: need instances >= 1, 2 <= max_dim <= 64, states >= 1");
  }
  struct Job {
    std::int64_t instance;
    double nb, ep;
  };
  std::vector<Job> jobs;
  for (std::int64_t i = 0; i < instances; ++i) {
    for (double nb : nbs) {
      for (double ep : eps) jobs.push_back({i, nb, ep});
    }
  }
  struct Out {
    Index dim;
    HsGrid grid;
    double residual;
  };
  std::vector<std::optional<Out>> out(jobs.size());
  parallel_for(jobs.size(), ctx.jobs, [&](std::size_t i) {
    Rng rng = make_rng(ctx.seed, static_cast<std::uint64_t>(jobs[i].instance));
    const Index dim = 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_dim - 1));
    RealVector spec(dim);
    for (Index k = 0; k < dim; ++k) spec(k) = uniform01(rng);
    spec(0) = 1.0;
    const ProjectorDecomposition p =
        ProjectorDecomposition::from_psd(random_with_spectrum(spec, rng));
    const double norm = p.hamiltonian().norm();
    const HsGrid grid = calibrate_hs_grid(norm, jobs[i].nb / norm, jobs[i].ep);
    const ComplexMatrix phis = random_states(dim, states, rng);
    out[i].emplace(Out{dim, grid, hs_residual(grid, p, phis)});
  });
  Csv csv({"instance", "dim", "norm_beta", "eps_prime", "J", "delta_y", "weight_sum_error",
           "residual", "bound", "pass"});
  Csv plot({"series", "x", "y"});
  bool ok = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Out& o = *out[i];
    const double bound = jobs[i].ep / 2.0;
    const double wse = std::abs(o.grid.weight_sum() - 1.0);
    const bool pass = o.residual <= bound && wse <= bound;
    ok = ok && pass;
    worst_ratio = std::max(worst_ratio, o.residual / bound);
    csv.row({std::to_string(jobs[i].instance), std::to_string(o.dim), fmt_num(jobs[i].nb),
             fmt_num(jobs[i].ep), std::to_string(o.grid.J), fmt_num(o.grid.delta_y), fmt_num(wse),
             fmt_num(o.residual), fmt_num(bound), pass ? "1" : "0"});
    plot.row({fmt_num(jobs[i].ep), fmt_num(jobs[i].nb), fmt_num(o.residual)});
  }
  write_text(ctx.out_dir / "lemma1.csv", csv.str());
  write_text(ctx.out_dir / "plot_error.csv", plot.str());
  write_json(ctx.out_dir / "summary.json", {{"command", "lemma1-sweep"},
                                            {"seed", ctx.seed},
                                            {"cases", jobs.size()},
                                            {"worst_residual_over_bound", worst_ratio},
                                            {"passed", ok}});
  if (!ok) throw CheckFailed("Hubbard-Stratonovich residual above eps'/2");
  return kExitOk;
}

int cmd_lemma2(const Context& ctx) {
  const Json& cfg = ctx.config;
  allow_keys(cfg, {"instances", "max_dim", "delta", "epsilon", "states", "scaling"},
             "lemma2-sweep");
  const std::int64_t instances = integer(cfg, "instances", 5);
  const std::int64_t max_dim = integer(cfg, "max_dim", 16);
  const std::int64_t states = integer(cfg, "states", 20);
  const auto deltas = num_list(cfg, "delta", std::vector<double>{0.25, 0.125, 0.0625});
  const auto epss = num_list(cfg, "epsilon", std::vector<double>{0.05, 0.01});
  const std::string scaling = choice(cfg, "scaling", {"sqrt_2z", "sqrt_z"}, "sqrt_2z");
  const TimeScaling ts = scaling == "sqrt_2z" ? TimeScaling::kSqrtTwoZ : TimeScaling::kSqrtZ;
  if (instances < 1 || max_dim < 2 || max_dim > 64 || states < 1) {
    throw ConfigError("lemma2-sweep: need instances >= 1, 2 <= max_dim <= 64, states >= 1");
  }
  struct Combo {
    double delta, eps;
  };
  std::vector<Combo> combos;
  for (double d : deltas) {
    for (double e : epss) combos.push_back({d, e});
  }
  std::vector<std::optional<InverseGrid>> grids(combos.size());
  parallel_for(combos.size(), ctx.jobs, [&](std::size_t i) {
    grids[i].emplace(calibrate_inverse_grid(combos[i].delta, combos[i].eps));
  });
  struct Job {
    std::size_t combo;
    std::int64_t instance;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < combos.size(); ++c) {
    for (std::int64_t i = 0; i < instances; ++i) jobs.push_back({c, i});
  }
  std::vector<std::pair<Index, double>> out(jobs.size());
  parallel_for(jobs.size(), ctx.jobs, [&](std::size_t i) {
    const Combo& c = combos[jobs[i].combo];
    Rng rng = make_rng(ctx.seed, static_cast<std::uint64_t>(jobs[i].instance));
    const Index dim = 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_dim - 1));
    RealVector spec(dim);
    for (Index k = 0; k < dim; ++k) spec(k) = c.delta + (1.0 - c.delta) * uniform01(rng);
    spec(0) = c.delta;
    spec(dim - 1) = 1.0;
    const ProjectorDecomposition p =
        ProjectorDecomposition::from_psd(random_with_spectrum(spec, rng));
    out[i] = {dim, inverse_residual(*grids[jobs[i].combo], p, random_states(dim, states, rng), ts)};
  });
  Csv csv({"instance", "dim", "delta", "epsilon", "K", "delta_z", "z_K", "J", "gamma",
           "gamma_error", "residual", "bound", "pass"});
  Csv plot({"series", "x", "y"});
  bool ok = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Combo& c = combos[jobs[i].combo];
    const InverseGrid& g = *grids[jobs[i].combo];
    const double bound = c.eps / 2.0;
    const double gerr = std::abs(g.gamma - g.z_K);
    const bool pass = out[i].second <= bound && gerr <= g.z_K * c.eps / 4.0;
    ok = ok && pass;
    csv.row({std::to_string(jobs[i].instance), std::to_string(out[i].first), fmt_num(c.delta),
             fmt_num(c.eps), std::to_string(g.K), fmt_num(g.delta_z), fmt_num(g.z_K),
             std::to_string(g.hs.J), fmt_num(g.gamma), fmt_num(gerr), fmt_num(out[i].second),
             fmt_num(bound), pass ? "1" : "0"});
    plot.row({fmt_num(c.eps), fmt_num(c.delta), fmt_num(out[i].second)});
  }
  write_text(ctx.out_dir / "lemma2.csv", csv.str());
  write_text(ctx.out_dir / "plot_error.csv", plot.str());
  write_json(ctx.out_dir / "summary.json", {{"command", "lemma2-sweep"},
                                            {"seed", ctx.seed},
                                            {"scaling", scaling},
                                            {"cases", jobs.size()},
                                            {"passed", ok}});
  if (!ok) throw CheckFailed("inverse residual above eps/2");
  return kExitOk;
}

// ---- cost-sweep ------------------------------------------------------------

int cmd_cost(const Context& ctx) {
  const Json& cfg = ctx.config;
  allow_keys(cfg, {"model", "sweep", "values", "delta", "epsilon", "beta", "sparsity", "n_states",
                   "cycle_length", "marked", "oracle_costs", "hamiltonian"},
             "cost-sweep");
  const std::string model = choice(cfg, "model", {"theorem1", "theorem2", "classical"}, "theorem2");
  const std::string sweep =
      choice(cfg, "sweep", {"delta", "epsilon", "beta", "move_probability"}, "delta");
  const auto values = num_list(cfg, "values");
  OracleCosts oc;
  if (cfg.contains("oracle_costs")) {
    const Json& o = cfg.at("oracle_costs");
    schema("oracle_costs", [&] { io::reject_unknown_keys(o, {"c_p", "c_u", "c_sqrt_pi"}, "oracle_costs"); return 0; });
    oc.c_p = num(o, "c_p", 1.0);
    oc.c_u = num(o, "c_u", 1.0);
    oc.c_sqrt_pi = num(o, "c_sqrt_pi", 1.0);
  }
  const Index cycle = integer(cfg, "cycle_length", 4);
  std::vector<Index> marked{0};
  if (cfg.contains("marked")) {
    marked.clear();
    for (const auto& m : cfg.at("marked")) {
      if (!m.is_number_integer()) throw ConfigError("'marked' must hold integers");
      marked.push_back(m.get<Index>());
    }
  }
  if (model == "theorem1" && sweep != "beta" && sweep != "epsilon") {
    throw ConfigError("theorem1 sweeps 'beta' or 'epsilon'");
  }
  if (model != "theorem1" && sweep == "beta") throw ConfigError("only theorem1 sweeps 'beta'");
  if (model == "classical" && sweep == "delta") {
    throw ConfigError("classical sweeps 'move_probability' or 'epsilon'");
  }
  std::optional<ProjectorDecomposition> ham;
  if (model == "theorem1") ham.emplace(load_hamiltonian(ctx));

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::optional<CostReport>> reports(sorted.size());
  std::vector<double> xs(sorted.size());
  parallel_for(sorted.size(), ctx.jobs, [&](std::size_t i) {
    const double v = sorted[i];
    if (model == "theorem1") {
      const double beta = sweep == "beta" ? v : num(cfg, "beta");
      const double eps = sweep == "epsilon" ? v : num(cfg, "epsilon");
      Theorem1Params tp;
      tp.norm = ham->hamiltonian().norm();
      tp.sum_sqrt_alpha = ham->sum_sqrt_alpha();
      tp.terms = 2.0 * static_cast<double>(ham->size());
      tp.c_u = oc.c_u;
      reports[i].emplace(theorem1_cost(static_cast<double>(ham->dim()),
                                        partition_function(*ham, beta), beta, eps, tp,
                                        ctx.k.cost));
      xs[i] = sweep == "beta" ? beta : 1.0 / eps;
      return;
    }
    double delta = 0.0;
    double p_move = 0.5;
    if (sweep == "move_probability") {
      p_move = v;
      delta = lazy_cycle_delta(cycle, v, marked);
    } else if (sweep == "delta") {
      delta = v;
    } else if (cfg.contains("move_probability")) {
      p_move = num(cfg, "move_probability");
      delta = lazy_cycle_delta(cycle, p_move, marked);
    } else if (model == "classical") {
      delta = lazy_cycle_delta(cycle, p_move, marked);
    } else {
      delta = num(cfg, "delta");
    }
    const double eps = sweep == "epsilon" ? v : num(cfg, "epsilon");
    if (model == "theorem2") {
      reports[i].emplace(theorem2_cost(delta, eps, num(cfg, "sparsity", 3.0),
                                       num(cfg, "n_states", static_cast<double>(cycle)), oc,
                                       ctx.k.cost));
    } else {
      MarkedPartition mp(validate_chain(lazy_cycle(cycle, p_move)), marked);
      McConfig mc;
      mc.c_m = ctx.k.c_m;
      const McEstimate est = classical_mc_estimate(mp, eps, derive_seed(ctx.seed, i), mc);
      CostReport r;
      r.set("delta", delta, "lambda_min(H)");
      r.set("samples", static_cast<double>(est.samples_used), "ceil(c_M sigma^2 / eps^2)");
      r.set("estimate", est.estimate, "mean sampled hitting time");
      r.set("exact", exact_hitting_time_resolvent(mp), "pi_U <1|(1 - P_UU)^{-1}|pi_U>");
      r.set("C_W", static_cast<double>(est.steps_used), "applications of P");
      r.finalize();
      reports[i].emplace(std::move(r));
    }
    xs[i] = sweep == "epsilon" ? 1.0 / eps : delta;
  });

  std::vector<std::string> header = {"sweep_var", "value", "x"};
  for (const auto& e : reports[0]->entries()) {
    if (e.name != "total") header.push_back(e.name);
  }
  header.push_back("total");
  Csv csv(header);
  Csv plot({"series", "x", "y"});
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::vector<std::string> row = {sweep, fmt_num(sorted[i]), fmt_num(xs[i])};
    for (const auto& e : reports[i]->entries()) {
      if (e.name != "total") row.push_back(fmt_num(e.value));
    }
    row.push_back(fmt_num(reports[i]->total()));
    csv.row(row);
    plot.row({model, fmt_num(xs[i]), fmt_num(reports[i]->total())});
    pts.emplace_back(xs[i], reports[i]->total());
  }
  write_text(ctx.out_dir / "cost_sweep.csv", csv.str());
  write_text(ctx.out_dir / "plot_cost.csv", plot.str());
  Json summary = {{"command", "cost-sweep"}, {"seed", ctx.seed}, {"model", model}, {"sweep", sweep}};
  if (pts.size() >= 4) {
    try {
      const ScalingFit fit = fit_scaling(pts);
      summary["fit"] = {{"x", sweep == "epsilon" ? "1/epsilon" : (sweep == "beta" ? "beta" : "delta")},
                        {"exponent", fit.exponent},
                        {"r_squared", fit.r_squared}};
    } catch (const ValidationError& e) {
      summary["fit"] = {{"error", e.what()}};
    }
  }
  write_json(ctx.out_dir / "summary.json", summary);
  return kExitOk;
}

// ---- dispatch --------------------------------------------------------------

spdlog::level::level_enum log_level() {
  const char* env = std::getenv("LCULAB_LOG");
  const std::string v = env ? env : "normal";
  if (v == "quiet") return spdlog::level::err;
  if (v == "debug") return spdlog::level::debug;
  return spdlog::level::info;
}

std::shared_ptr<spdlog::logger> make_logger() {
  auto log = spdlog::get("lculab");
  if (!log) log = spdlog::stderr_color_mt("lculab");
  log->set_level(log_level());
  log->set_pattern("[%l] %v");
  return log;
}

int dispatch(const Context& ctx) {
  if (!ctx.config.contains("command") || !ctx.config.at("command").is_string()) {
    throw ConfigError("missing field 'command'");
  }
  const std::string cmd = ctx.config.at("command").get<std::string>();
  static const std::map<std::string, std::function<int(const Context&)>> table = {
      {"gibbs", cmd_gibbs},          {"hitting", cmd_hitting},     {"appendix-verify", cmd_appendix},
      {"lemma1-sweep", cmd_lemma1},  {"lemma2-sweep", cmd_lemma2}, {"cost-sweep", cmd_cost}};
  const auto it = table.find(cmd);
  if (it == table.end()) throw ConfigError("unknown command '" + cmd + "'");
  ctx.log->info("running {}", cmd);
  return it->second(ctx);
}

}  // namespace

int run(const RunOptions& options) {
  const auto log = make_logger();
  try {
    Context ctx;
    ctx.log = log;
    if (options.config_path.empty()) throw ConfigError("no --config given");
    ctx.config = read_json_file(options.config_path);
    if (!ctx.config.is_object() || ctx.config.empty()) throw ConfigError("config is empty");
    ctx.base_dir = fs::path(options.config_path).parent_path();
    ctx.k = load_constants(options.constants_path);
    if (options.seed) {
      ctx.seed = *options.seed;
    } else if (ctx.config.contains("seed")) {
      if (!ctx.config.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
      ctx.seed = ctx.config.at("seed").get<std::uint64_t>();
    }
    if (options.jobs < 1) throw ConfigError("--jobs must be >= 1");
    ctx.jobs = options.jobs;
    ctx.out_dir = options.out_dir;
    fs::create_directories(ctx.out_dir);
    const int code = dispatch(ctx);
    log->info("done");
    return code;
  } catch (const ConfigError& e) {
    log->error("malformed config: {}", e.what());
    return kExitMalformedConfig;
  } catch (const PreconditionError& e) {
    log->error("precondition violated: {}", e.what());
    return kExitPrecondition;
  } catch (const CheckFailed& e) {
    log->error("validation failed: {}", e.what());
    return kExitValidation;
  } catch (const Error& e) {
    log->error("validation failed: {}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    log->error("error: {}", e.what());
    return kExitValidation;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Linear-combination-of-unitaries experiments: Gibbs states and hitting times"};
  RunOptions opt;
  std::uint64_t seed = 0;
  app.add_option("--config", opt.config_path, "Experiment config (JSON)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  app.add_option("--jobs", opt.jobs, "Worker threads for sweeps")->capture_default_str();
  app.add_option("--constants", opt.constants_path, "Cost-model constants (JSON)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitMalformedConfig;
  }
  if (*seed_opt) opt.seed = seed;
  return run(opt);
}

}  // namespace lculab::cli
