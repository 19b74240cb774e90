// Copyright 2026 The switchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "commands.h"
#include "config.h"
#include "oracle_values.h"
#include "switchsim/causal.h"
#include "switchsim/csv.h"
#include "switchsim/tomography.h"

namespace switchsim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const double kTsirelson = 2 * std::sqrt(2.0);

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("switchsim_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string error_of(const std::string &text, const std::string &name = "cfg.json") {
    try {
        parse_config(text, name);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

RunConfig quick(const std::string &text = "{}") {
    RunConfig cfg = parse_config(text);
    cfg.runs = 2;
    cfg.experiment.counts_per_setting = 0;
    return cfg;
}

EnvLookup fake_env(std::map<std::string, std::string> vars) {
    return [vars](const char *name) -> std::optional<std::string> {
        auto it = vars.find(name);
        if (it == vars.end()) {
            return std::nullopt;
        }
        return it->second;
    };
}

TEST(Config, Defaults) {
    RunConfig cfg = default_config();
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_EQ(cfg.runs, 20);
    EXPECT_EQ(cfg.experiment.counts_per_setting, 10000u);
    EXPECT_EQ(cfg.experiment.gates1.u_a.name, "sigma_z");
    EXPECT_EQ(cfg.experiment.gates1.u_b.name, "sqrt_iX");
    EXPECT_EQ(cfg.sweep.grid.size(), 11u);
    EXPECT_FALSE(cfg.calibrate_control_chsh.has_value());
}

TEST(Config, NoiseFields) {
    RunConfig cfg = parse_config(R"({
      "source": {"visibility": 0.9, "phase_offset_rad": 0.1, "jitter_deg": 1.9, "calibrate_control_chsh": 2.58},
      "ifo": {"vis1": 0.8, "vis2": 0.7, "jitter_deg": 0.97},
      "efficiencies": [1, 0.93, 0.88, 0.85],
      "postselection": "-+"
    })");
    const ExperimentConfig &e = cfg.experiment;
    EXPECT_DOUBLE_EQ(e.source.visibility, 0.9);
    EXPECT_DOUBLE_EQ(e.source.phase_offset, 0.1);
    EXPECT_DOUBLE_EQ(e.source_jitter_deg, 1.9);
    EXPECT_DOUBLE_EQ(e.ifo.vis1, 0.8);
    EXPECT_DOUBLE_EQ(e.ifo.vis2, 0.7);
    EXPECT_DOUBLE_EQ(e.ifo.phase_jitter_deg, 0.97);
    EXPECT_DOUBLE_EQ(e.efficiencies[3], 0.85);
    EXPECT_EQ(e.postselect1, Sign::kMinus);
    EXPECT_EQ(e.postselect2, Sign::kPlus);
    EXPECT_DOUBLE_EQ(*cfg.calibrate_control_chsh, 2.58);
}

TEST(Config, ExplicitGateMatrix) {
    RunConfig cfg = parse_config(R"({"gates": {"switch2": {"u_a": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}}})");
    EXPECT_LT((cfg.experiment.gates2.u_a.matrix - pauli_x()).norm(), 1e-15);
    EXPECT_EQ(cfg.experiment.gates1.u_a.name, "sigma_z");
}

TEST(Config, SyntaxErrorReportsLineAndColumn) {
    std::string msg = error_of("{\n  \"seed\": 1,\n  \"runs\": ]\n}");
    EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("syntax error"), std::string::npos) << msg;
}

TEST(Config, SemanticErrorsNameFieldAndLine) {
    std::string msg = error_of("{\n  \"source\": {\"visibility\": 1.0},\n  \"ifo\": {\n    \"vis1\": 1.4\n  }\n}");
    EXPECT_NE(msg.find("cfg.json:4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("/ifo/vis1"), std::string::npos) << msg;

    EXPECT_NE(error_of(R"({"sourse": {}})").find("sourse"), std::string::npos);
    EXPECT_NE(error_of(R"({"gates": {"switch1": {"u_a": "toffoli"}}})").find("/gates/switch1/u_a"), std::string::npos);
    EXPECT_NE(error_of(R"({"gates": {"switch1": {"u_a": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}}})").find("unitary"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"efficiencies": [1, 1, 1]})").find("/efficiencies"), std::string::npos);
    EXPECT_NE(error_of(R"({"efficiencies": [1, 1, 1, 0]})").find("/efficiencies/3"), std::string::npos);
    EXPECT_NE(error_of(R"({"postselection": "+0"})").find("/postselection"), std::string::npos);
    EXPECT_NE(error_of(R"({"sweep": {"axis": "bogus"}})").find("/sweep/axis"), std::string::npos);
    EXPECT_NE(error_of(R"({"sweep": {"grid": []}})").find("/sweep/grid"), std::string::npos);
    EXPECT_NE(error_of(R"({"sweep": {"grid": [0.5], "points": 3}})").find("/sweep/grid"), std::string::npos);
    EXPECT_NE(error_of(R"({"causal": {"control": [1, 1]}})").find("/causal/control"), std::string::npos);
    EXPECT_NE(error_of(R"({"runs": 1})").find("/runs"), std::string::npos);
    EXPECT_NE(error_of(R"({"seed": -3})").find("/seed"), std::string::npos);
}

TEST(Config, ShippedConfigsParse) {
    for (const auto &entry : fs::directory_iterator(SWITCHSIM_CONFIG_DIR)) {
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    }
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, HashIsStableAndSensitive) {
    RunConfig a = parse_config(R"({"seed": 3})");
    RunConfig b = parse_config("{\n  \"seed\" : 3\n}");
    RunConfig c = parse_config(R"({"seed": 3, "ifo": {"vis1": 0.5}})");
    EXPECT_EQ(config_hash(a.effective), config_hash(b.effective));
    EXPECT_NE(config_hash(a.effective), config_hash(c.effective));
    EXPECT_EQ(config_hash(a.effective).size(), 16u);
}

TEST(Overrides, Precedence) {
    RunConfig cfg = parse_config(R"({"seed": 3, "output_dir": "from_file"})");
    apply_overrides(cfg, {}, fake_env({}));
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_EQ(*cfg.out_dir, "from_file");

    apply_overrides(cfg, {}, fake_env({{"SWITCHSIM_SEED", "11"}, {"SWITCHSIM_OUT", "from_env"}}));
    EXPECT_EQ(cfg.seed, 11u);
    EXPECT_EQ(*cfg.out_dir, "from_env");

    Overrides flags;
    flags.seed = 42;
    flags.out = "from_flag";
    flags.n_counts = 123;
    flags.runs = 7;
    apply_overrides(cfg, flags, fake_env({{"SWITCHSIM_SEED", "11"}, {"SWITCHSIM_OUT", "from_env"}}));
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(*cfg.out_dir, "from_flag");
    EXPECT_EQ(cfg.experiment.counts_per_setting, 123u);
    EXPECT_EQ(cfg.runs, 7);

    EXPECT_THROW(apply_overrides(cfg, {}, fake_env({{"SWITCHSIM_SEED", "twelve"}})), ConfigError);
    Overrides bad_runs;
    bad_runs.runs = 1;
    EXPECT_THROW(apply_overrides(cfg, bad_runs, fake_env({})), ConfigError);
}

TEST(Simulate, IdealReport) {
    CommandResult r = cmd_simulate(quick());
    EXPECT_EQ(r.exit_code, kExitPass);
    const json &j = r.report;
    EXPECT_EQ(j["command"], "simulate");
    EXPECT_TRUE(j.contains("version"));
    EXPECT_EQ(j["seed"], 1);
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
    EXPECT_NEAR(j["exact"]["output_concurrence"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(j["exact"]["s_target"].get<double>(), kTsirelson, 1e-9);
    EXPECT_NEAR(j["monte_carlo"]["s_target"]["mean"].get<double>(), kTsirelson, 1e-9);
    double total = 0;
    for (const auto &[branch, p] : j["exact"]["postselection_probability"].items()) {
        total += p.get<double>();
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Simulate, DeterministicGivenSeed) {
    RunConfig cfg = parse_config(R"({"ifo": {"jitter_deg": 0.97}, "source": {"jitter_deg": 1.9}})");
    cfg.runs = 3;
    cfg.experiment.counts_per_setting = 500;
    json a = cmd_simulate(cfg).report;
    json b = cmd_simulate(cfg).report;
    EXPECT_EQ(a.dump(), b.dump());
    cfg.seed = 2;
    EXPECT_NE(cmd_simulate(cfg).report["monte_carlo"].dump(), a["monte_carlo"].dump());
}

TEST(Simulate, FullyDephasedOrdersAreLocal) {
    CommandResult r = cmd_simulate(quick(R"({"ifo": {"vis1": 0, "vis2": 0}})"));
    EXPECT_LE(r.report["exact"]["s_target"].get<double>(), 2.0 + 1e-9);
    EXPECT_LE(r.report["exact"]["s_target_max"].get<double>(), 2.0 + 1e-9);
}

TEST(Simulate, WritesReport) {
    RunConfig cfg = quick();
    cfg.out_dir = scratch("simulate");
    json j = cmd_simulate(cfg).report;
    std::ifstream in(*cfg.out_dir / "simulate.json");
    ASSERT_TRUE(in.good());
    EXPECT_EQ(json::parse(in).dump(), j.dump());
    fs::remove_all(*cfg.out_dir);
}

TEST(Sweep, CsvRoundTrip) {
    RunConfig cfg = quick(R"({"sweep": {"axis": "source_visibility", "start": 0, "stop": 1, "points": 11}})");
    cfg.out_dir = scratch("sweep");
    CommandResult r = cmd_sweep(cfg);
    EXPECT_TRUE(r.report["monotone_non_decreasing"].get<bool>());
    std::ifstream in(*cfg.out_dir / "sweep_source_visibility.csv");
    auto rows = csv::read(in, {"visibility", "S", "S_err", "S_control", "S_control_err"});
    ASSERT_EQ(rows.size(), 11u);
    for (size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(csv::to_double(rows[k], 1), r.report["rows"][k]["S"].get<double>());
    }
    EXPECT_NEAR(csv::to_double(rows.back(), 1), kTsirelson, 1e-9);
    EXPECT_LE(csv::to_double(rows.front(), 1), 2.0);
    fs::remove_all(*cfg.out_dir);
}

TEST(Sweep, InterferometerLinearFit) {
    RunConfig cfg = quick(R"({"sweep": {"axis": "ifo_both", "start": 0.5, "stop": 1, "points": 11}})");
    EXPECT_GT(cmd_sweep(cfg).report["linear_fit_r2"].get<double>(), 0.99);
}

TEST(Tomo, RecordsRoundTripAndMetrics) {
    RunConfig cfg = parse_config("{}");
    cfg.runs = 2;
    cfg.experiment.counts_per_setting = 100000;
    cfg.out_dir = scratch("tomo");
    CommandResult r = cmd_tomo(cfg);
    EXPECT_GT(r.report["output"]["fidelity"].get<double>(), 0.999);
    EXPECT_LT(r.report["input"]["concurrence"].get<double>(), 0.01);
    TomographyRecord rec = read_tomography_record(*cfg.out_dir / "tomo_output.json");
    EXPECT_EQ(rec.tables.size(), 36u);
    EXPECT_TRUE(fs::exists(*cfg.out_dir / "tomo_report.json"));
    fs::remove_all(*cfg.out_dir);
}

TEST(GptCheck, FixturesPass) {
    CommandResult r = cmd_gpt_check(default_config(), {});
    EXPECT_EQ(r.exit_code, kExitPass);
    EXPECT_NEAR(r.report["assumption1"]["distance"].get<double>(), oracle::kRmsS1S2, 1e-12);
    EXPECT_NEAR(r.report["assumption2b"]["order_ab"]["distance"].get<double>(), oracle::kRmsS3, 1e-12);
    EXPECT_NEAR(r.report["assumption2b"]["order_ba"]["distance"].get<double>(), oracle::kRmsS4, 1e-12);
}

TEST(GptCheck, SimulatedTables) {
    RunConfig cfg = default_config();
    cfg.experiment.counts_per_setting = 0;
    GptCheckOptions opt;
    opt.simulate = true;
    CommandResult exact = cmd_gpt_check(cfg, opt);
    EXPECT_EQ(exact.exit_code, kExitPass);
    EXPECT_LT(exact.report["assumption1"]["distance"].get<double>(), 1e-10);

    cfg.experiment.counts_per_setting = 2000;
    opt.simulate_target = "entangled";
    EXPECT_EQ(cmd_gpt_check(cfg, opt).exit_code, kExitCheckFailed);
    opt.simulate_target = "bogus";
    EXPECT_THROW(cmd_gpt_check(cfg, opt), ConfigError);
}

TEST(GptCheck, MissingFixtureFile) {
    GptCheckOptions opt;
    opt.tables = "/nonexistent/fixtures.json";
    EXPECT_THROW(cmd_gpt_check(default_config(), opt), ConfigError);
}

TEST(CausalCheck, FeasibleAndCsvRoundTrip) {
    RunConfig cfg = parse_config(R"({"causal": {"instruments": "z_basis", "configurations": 5, "control": "+"}})");
    cfg.out_dir = scratch("causal");
    CommandResult r = cmd_causal_check(cfg);
    EXPECT_EQ(r.exit_code, kExitPass);
    for (const auto &c : r.report["configurations"]) {
        EXPECT_TRUE(c["feasible"].get<bool>());
        EXPECT_NEAR(c["zeta"].get<double>(), 0.5, 1e-12);
    }
    std::ifstream in(*cfg.out_dir / "behavior_switch.csv");
    BehaviorTable t = read_behavior_csv(in);
    EXPECT_NO_THROW(t.validate());
    fs::remove_all(*cfg.out_dir);
}

}  // namespace
}  // namespace switchsim::cli
