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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace lculab::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    setenv("LCULAB_LOG", "quiet", 1);
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("lculab_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_raw(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const Json& j) { return write_raw(name, j.dump()); }

  int run_config(const std::string& config, const std::string& out, int jobs = 1,
                 std::optional<std::uint64_t> seed = {}) {
    RunOptions o;
    o.config_path = config;
    o.out_dir = (dir_ / out).string();
    o.jobs = jobs;
    o.seed = seed;
    return run(o);
  }
  Json read_json(const std::string& out, const std::string& file) {
    std::ifstream in(dir_ / out / file);
    return Json::parse(in);
  }
  std::string read_text(const std::string& out, const std::string& file) {
    std::ifstream in(dir_ / out / file);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static Json two_state_chain() {
    return {{"n_states", 2},
            {"entries", {{0, 0, 0.5}, {1, 0, 0.5}, {0, 1, 0.5}, {1, 1, 0.5}}},
            {"marked", {1}}};
  }

  fs::path dir_;
};

TEST_F(CliTest, MalformedConfigs) {
  EXPECT_EQ(run_config(write_raw("empty.json", "{}"), "o"), kExitMalformedConfig);
  EXPECT_EQ(run_config(write_raw("blank.json", ""), "o"), kExitMalformedConfig);
  EXPECT_EQ(run_config(write_raw("broken.json", "{\"command\": "), "o"), kExitMalformedConfig);
  EXPECT_EQ(run_config((dir_ / "missing.json").string(), "o"), kExitMalformedConfig);
  EXPECT_EQ(run_config(write("cmd.json", Json{{"command", "teleport"}}), "o"),
            kExitMalformedConfig);
  const Json unknown = {{"command", "hitting"}, {"chain", two_state_chain()}, {"epsilon", 0.1},
                        {"colour", 3}};
  EXPECT_EQ(run_config(write("unknown.json", unknown), "o"), kExitMalformedConfig);
  const Json typed = {{"command", "hitting"}, {"chain", two_state_chain()}, {"epsilon", "small"}};
  EXPECT_EQ(run_config(write("typed.json", typed), "o"), kExitMalformedConfig);
  const Json missing = {{"command", "gibbs"}, {"beta", 1.0}, {"epsilon", 0.1}};
  EXPECT_EQ(run_config(write("nofield.json", missing), "o"), kExitMalformedConfig);
}

TEST_F(CliTest, GibbsSingleQubit) {
  const Json cfg = {{"command", "gibbs"},
                    {"hamiltonian", {{"dim", 2}, {"re", {0, 0, 0, 1}}}},
                    {"beta", 8.0},
                    {"epsilon", 0.05}};
  ASSERT_EQ(run_config(write("g.json", cfg), "o"), kExitOk);
  const Json s = read_json("o", "summary.json");
  ASSERT_EQ(s["runs"].size(), 1u);
  EXPECT_LE(s["runs"][0]["trace_dist"].get<double>(), 0.05);
  EXPECT_TRUE(s["all_within_epsilon"].get<bool>());
  EXPECT_NE(read_text("o", "gibbs.csv").find("beta,epsilon,eps_prime,J,delta_y,trace_dist"),
            std::string::npos);
  EXPECT_EQ(read_text("o", "plot_error.csv").rfind("series,x,y", 0), 0u);
  EXPECT_EQ(read_text("o", "plot_cost.csv").rfind("series,x,y", 0), 0u);
}

TEST_F(CliTest, GibbsPreconditionViolation) {
  const Json cfg = {{"command", "gibbs"}, {"hamiltonian", {"0.5 Z"}}, {"beta", 1.0},
                    {"epsilon", 0.05}};
  EXPECT_EQ(run_config(write("g.json", cfg), "o"), kExitPrecondition);
  Json warn = cfg;
  warn["precondition"] = "warn";
  EXPECT_EQ(run_config(write("w.json", warn), "w"), kExitOk);
}

TEST_F(CliTest, HittingTwoState) {
  const Json cfg = {{"command", "hitting"}, {"seed", 7}, {"chain", two_state_chain()},
                    {"epsilon", 0.1}, {"repetitions", 4}};
  ASSERT_EQ(run_config(write("h.json", cfg), "o"), kExitOk);
  const Json r = read_json("o", "result.json");
  for (const char* key : {"t_hat", "t_exact", "error", "grover_queries", "cost_breakdown"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  for (const char* key : {"C_W", "C_U", "C_sqrt_pi", "C_B", "total"}) {
    EXPECT_TRUE(r["cost_breakdown"].contains(key)) << key;
  }
  EXPECT_NEAR(r["t_exact"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(r["t_hat"].get<double>(), 1.0, 0.4);
  const std::string runs = read_text("o", "hitting_runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 5);
}

TEST_F(CliTest, ChainFileRelativeToConfig) {
  write("chain.json", two_state_chain());
  const Json cfg = {{"command", "appendix-verify"}, {"chain", "chain.json"}};
  ASSERT_EQ(run_config(write("a.json", cfg), "o"), kExitOk);
  const Json m = read_json("o", "manifest.json");
  for (const char* key : {"colors", "terms", "alpha_list", "reconstruction_residual"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_LE(m["reconstruction_residual"].get<double>(), 1e-10);
}

TEST_F(CliTest, InvalidChainIsValidationFailure) {
  Json chain = two_state_chain();
  chain["entries"] = {{0, 0, 0.5}, {1, 0, 0.4}, {0, 1, 0.5}, {1, 1, 0.5}};
  const Json cfg = {{"command", "hitting"}, {"chain", chain}, {"epsilon", 0.1}};
  EXPECT_EQ(run_config(write("h.json", cfg), "o"), kExitValidation);
}

TEST_F(CliTest, ByteIdenticalOutputs) {
  const Json hit = {{"command", "hitting"}, {"chain", two_state_chain()}, {"epsilon", 0.1},
                    {"repetitions", 3}};
  const std::string h = write("h.json", hit);
  ASSERT_EQ(run_config(h, "a", 1, 11), kExitOk);
  ASSERT_EQ(run_config(h, "b", 1, 11), kExitOk);
  for (const char* f : {"result.json", "hitting_runs.csv", "summary.json"}) {
    EXPECT_EQ(read_text("a", f), read_text("b", f)) << f;
  }
  const Json sweep = {{"command", "lemma1-sweep"}, {"instances", 3}, {"max_dim", 6},
                      {"states", 4}, {"norm_beta", {4.0, 6.0}}};
  const std::string l = write("l.json", sweep);
  ASSERT_EQ(run_config(l, "c", 1, 3), kExitOk);
  ASSERT_EQ(run_config(l, "d", 3, 3), kExitOk);
  for (const char* f : {"lemma1.csv", "summary.json", "plot_error.csv"}) {
    EXPECT_EQ(read_text("c", f), read_text("d", f)) << f;
  }
  ASSERT_EQ(run_config(l, "e", 1, 4), kExitOk);
  EXPECT_NE(read_text("c", "lemma1.csv"), read_text("e", "lemma1.csv"));
}

TEST_F(CliTest, Lemma2AndCostSweep) {
  const Json l2 = {{"command", "lemma2-sweep"}, {"instances", 1}, {"max_dim", 4},
                   {"states", 3}, {"delta", {0.25}}, {"epsilon", {0.1}}};
  ASSERT_EQ(run_config(write("l2.json", l2), "o"), kExitOk);
  EXPECT_TRUE(read_json("o", "summary.json")["passed"].get<bool>());
  const Json cs = {{"command", "cost-sweep"}, {"model", "theorem2"}, {"sweep", "delta"},
                   {"values", {1e-14, 1e-13, 1e-12, 1e-11}}, {"epsilon", 0.01}};
  ASSERT_EQ(run_config(write("cs.json", cs), "p"), kExitOk);
  const Json s = read_json("p", "summary.json");
  EXPECT_NEAR(s["fit"]["exponent"].get<double>(), -1.5, 0.15);
  EXPECT_EQ(read_text("p", "cost_sweep.csv").rfind("sweep_var,value,x,", 0), 0u);
  const Json bad = {{"command", "cost-sweep"}, {"model", "theorem1"}, {"sweep", "delta"},
                    {"values", {1.0}}};
  EXPECT_EQ(run_config(write("bad.json", bad), "q"), kExitMalformedConfig);
}

TEST_F(CliTest, ConstantsFile) {
  const Json cfg = {{"command", "cost-sweep"}, {"model", "theorem2"}, {"sweep", "epsilon"},
                    {"values", {1e-4, 1e-3, 1e-2, 1e-1}}, {"delta", 0.01}};
  const std::string c = write("c.json", cfg);
  RunOptions o;
  o.config_path = c;
  o.out_dir = (dir_ / "o").string();
  o.constants_path = write("k.json", Json{{"sparse_gates", 2.0}});
  ASSERT_EQ(run(o), kExitOk);
  o.out_dir = (dir_ / "p").string();
  o.constants_path = write("k2.json", Json{{"gates", 2.0}});
  EXPECT_EQ(run(o), kExitMalformedConfig);
}

}  // namespace
}  // namespace lculab::cli
