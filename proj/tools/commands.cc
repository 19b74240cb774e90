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

#include "commands.h"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "switchsim/bell.h"
#include "switchsim/causal.h"
#include "switchsim/csv.h"
#include "switchsim/gpt.h"
#include "switchsim/pipeline.h"
#include "switchsim/rng.h"
#include "switchsim/tomography.h"
#include "switchsim/version.h"

#ifndef SWITCHSIM_DEFAULT_DATA_DIR
#define SWITCHSIM_DEFAULT_DATA_DIR "data"
#endif

namespace switchsim::cli {

namespace {

using nlohmann::json;

json header(const std::string &command, const RunConfig &cfg) {
    return {{"command", command},
            {"version", SWITCHSIM_VERSION},
            {"seed", cfg.seed},
            {"config_hash", config_hash(cfg.effective)},
            {"config", cfg.effective}};
}

json stat_json(const Statistic &s) {
    return {{"mean", s.mean}, {"std", s.std}};
}

json matrix_json(const Eigen::MatrixXcd &m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json a = json::array(), b = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            a.push_back(m(r, c).real());
            b.push_back(m(r, c).imag());
        }
        re.push_back(a);
        im.push_back(b);
    }
    return {{"real", re}, {"imag", im}};
}

std::filesystem::path prepare_out(const RunConfig &cfg) {
    std::filesystem::create_directories(*cfg.out_dir);
    return *cfg.out_dir;
}

void write_json(const std::filesystem::path &path, const json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

std::uint64_t parse_u64(const std::string &text, const char *what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(what) + ": expected an unsigned integer, got '" + text + "'");
    }
    return v;
}

// MLE of one record plus Monte Carlo spread over independent records.
template <class MakeRecord>
json tomography_block(const RunConfig &cfg, MakeRecord make, const StateVector &reference,
                      const std::optional<std::filesystem::path> &record_path) {
    TomographyRecord first = make(derive_seed(cfg.seed, 0));
    if (record_path) {
        write_tomography_record(*record_path, first);
    }
    MleEstimate est = reconstruct_mle(first);
    std::vector<double> fid(static_cast<size_t>(cfg.runs)), conc(static_cast<size_t>(cfg.runs));
    parallel_for(fid.size(), [&](size_t r) {
        DensityOperator rho = r == 0 ? est.rho : reconstruct_mle(make(derive_seed(cfg.seed, r))).rho;
        fid[r] = fidelity(rho, reference);
        conc[r] = concurrence_clipped(rho).value;
    });
    auto stats = [](const std::vector<double> &xs) {
        double m = 0, ss = 0;
        for (double x : xs) {
            m += x;
        }
        m /= static_cast<double>(xs.size());
        for (double x : xs) {
            ss += (x - m) * (x - m);
        }
        return json{{"mean", m}, {"std", std::sqrt(ss / static_cast<double>(xs.size() - 1))}};
    };
    return {{"rho", matrix_json(est.rho.matrix())},
            {"fidelity", fid[0]},
            {"concurrence", conc[0]},
            {"log_likelihood", est.log_likelihood},
            {"iterations", est.iterations},
            {"converged", est.converged},
            {"monte_carlo", {{"runs", cfg.runs}, {"fidelity", stats(fid)}, {"concurrence", stats(conc)}}}};
}

ProbabilityTable read_tables(const std::filesystem::path &dir, const json &files, const std::string &field) {
    if (!files.is_array() || files.empty()) {
        throw ConfigError("fixtures: field '" + field + "' must list CSV files");
    }
    ProbabilityTable out;
    for (const auto &f : files) {
        std::filesystem::path p = dir / f.get<std::string>();
        std::ifstream in(p);
        if (!in) {
            throw ConfigError("fixtures: cannot open " + p.string());
        }
        try {
            ProbabilityTable t = read_probability_csv(in);
            out.rows.insert(out.rows.end(), t.rows.begin(), t.rows.end());
        } catch (const std::exception &e) {
            throw ConfigError(p.string() + ": " + e.what());
        }
    }
    return out;
}

json check_json(const ProductCheck &c) {
    return {{"distance", c.distance}, {"sigma_stat", c.sigma_stat}, {"sigma_sys", c.sigma_sys}, {"pass", c.pass}};
}

double number_field(const json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ConfigError("fixtures: " + where + " needs a numeric '" + key + "'");
    }
    return obj.at(key).get<double>();
}

Instrument family_instrument(const std::string &family, Rng &rng) {
    const Eigen::Vector3d x = Eigen::Vector3d::UnitX(), z = Eigen::Vector3d::UnitZ();
    if (family == "z_basis") {
        return basis_instrument(z, x);
    }
    if (family == "x_basis") {
        return basis_instrument(x, z);
    }
    if (family == "unitary") {
        return unitary_instrument({gate_preset("sigma_z"), gate_preset("sqrt_iX")});
    }
    return random_measure_reprepare(rng, 2);
}

Eigen::Vector2cd random_control(Rng &rng) {
    std::normal_distribution<double> g;
    Eigen::Vector2cd v;
    do {
        v = {cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    } while (v.norm() < 1e-6);
    return v.normalized();
}

}  // namespace

std::optional<std::string> process_env(const char *name) {
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

void apply_overrides(RunConfig &cfg, const Overrides &flags, const EnvLookup &env) {
    if (auto s = env("SWITCHSIM_SEED")) {
        cfg.seed = parse_u64(*s, "SWITCHSIM_SEED");
    }
    if (auto o = env("SWITCHSIM_OUT")) {
        cfg.out_dir = *o;
    }
    if (flags.seed) {
        cfg.seed = *flags.seed;
    }
    if (flags.out) {
        cfg.out_dir = *flags.out;
    }
    if (flags.n_counts) {
        cfg.experiment.counts_per_setting = *flags.n_counts;
        cfg.effective["counts_per_setting"] = *flags.n_counts;
    }
    if (flags.runs) {
        if (*flags.runs < 2) {
            throw ConfigError("--runs must be at least 2");
        }
        cfg.runs = *flags.runs;
        cfg.effective["runs"] = *flags.runs;
    }
}

std::filesystem::path default_fixtures_path() {
    return std::filesystem::path(SWITCHSIM_DEFAULT_DATA_DIR) / "fixtures.json";
}

CommandResult cmd_simulate(RunConfig cfg) {
    json report = header("simulate", cfg);
    if (cfg.calibrate_control_chsh) {
        double v = calibrate_source_visibility(cfg.experiment, *cfg.calibrate_control_chsh, cfg.calibration_samples,
                                               derive_seed(cfg.seed, 1000));
        cfg.experiment.source.visibility = v;
        report["calibrated_source_visibility"] = v;
    }
    ExactMetrics m = exact_metrics(cfg.experiment);
    report["exact"] = {{"input_fidelity", m.input_fidelity},
                       {"input_concurrence", m.input_concurrence},
                       {"output_fidelity", m.output_fidelity},
                       {"output_concurrence", m.output_concurrence},
                       {"s_target", m.s_target},
                       {"s_target_max", m.s_target_max},
                       {"s_control", m.s_control},
                       {"postselection_probability",
                        {{"++", m.postselection_probability[0]},
                         {"+-", m.postselection_probability[1]},
                         {"-+", m.postselection_probability[2]},
                         {"--", m.postselection_probability[3]}}}};
    MonteCarloSummary mc = monte_carlo_errors(cfg.experiment, cfg.runs, cfg.seed, true);
    report["monte_carlo"] = {{"runs", mc.runs},
                             {"counts_per_setting", cfg.experiment.counts_per_setting},
                             {"s_target", stat_json(mc.s_target)},
                             {"s_control", stat_json(mc.s_control)},
                             {"output_fidelity", stat_json(mc.fidelity)},
                             {"output_concurrence", stat_json(mc.concurrence)}};
    if (cfg.out_dir) {
        write_json(prepare_out(cfg) / "simulate.json", report);
    }
    return {kExitPass, report};
}

CommandResult cmd_sweep(const RunConfig &cfg) {
    json report = header("sweep", cfg);
    auto rows = sweep(cfg.experiment, cfg.sweep.axis, cfg.sweep.grid, cfg.seed);
    std::vector<double> x, y;
    bool monotone = true;
    json jrows = json::array();
    for (size_t k = 0; k < rows.size(); ++k) {
        const auto &r = rows[k];
        x.push_back(r.visibility);
        y.push_back(r.s_target);
        if (k > 0 && r.visibility >= rows[k - 1].visibility && r.s_target < rows[k - 1].s_target - 1e-12) {
            monotone = false;
        }
        jrows.push_back({{"visibility", r.visibility},
                         {"S", r.s_target},
                         {"S_err", r.s_target_err},
                         {"S_control", r.s_control},
                         {"S_control_err", r.s_control_err}});
    }
    report["axis"] = sweep_axis_name(cfg.sweep.axis);
    report["rows"] = jrows;
    report["monotone_non_decreasing"] = monotone;
    if (rows.size() >= 2) {
        try {
            report["linear_fit_r2"] = linear_fit_r2(x, y);
        } catch (const std::invalid_argument &) {
            report["linear_fit_r2"] = nullptr;
        }
    }
    if (cfg.out_dir) {
        auto dir = prepare_out(cfg);
        std::string stem = "sweep_" + sweep_axis_name(cfg.sweep.axis);
        std::ofstream table(dir / (stem + ".csv"));
        table << "visibility,S,S_err,S_control,S_control_err\n";
        for (const auto &r : rows) {
            table << csv::join({csv::format(r.visibility), csv::format(r.s_target), csv::format(r.s_target_err),
                              csv::format(r.s_control), csv::format(r.s_control_err)})
                << '\n';
        }
        write_json(dir / (stem + ".json"), report);
    }
    return {kExitPass, report};
}

CommandResult cmd_tomo(const RunConfig &cfg) {
    json report = header("tomo", cfg);
    std::optional<std::filesystem::path> dir;
    if (cfg.out_dir) {
        dir = prepare_out(cfg);
    }
    auto path = [&](const char *name) -> std::optional<std::filesystem::path> {
        if (!dir) {
            return std::nullopt;
        }
        return *dir / name;
    };
    const ExperimentConfig &e = cfg.experiment;
    report["counts_per_setting"] = e.counts_per_setting;
    report["input"] = tomography_block(
        cfg, [&](std::uint64_t s) { return input_tomography_record(e, s); }, StateVector::basis("00", {kT1, kT2}),
        path("tomo_input.json"));
    report["output"] = tomography_block(
        cfg, [&](std::uint64_t s) { return output_tomography_record(e, s); }, ideal_target_state(),
        path("tomo_output.json"));
    if (dir) {
        write_json(*dir / "tomo_report.json", report);
    }
    return {kExitPass, report};
}

CommandResult cmd_gpt_check(const RunConfig &cfg, const GptCheckOptions &options) {
    json report = header("gpt-check", cfg);
    ProductCheck a1;
    Assumption2bInput ab, ba;
    if (options.simulate) {
        if (options.simulate_target != "product" && options.simulate_target != "entangled") {
            throw ConfigError("--simulate-target must be 'product' or 'entangled'");
        }
        const std::uint64_t n = cfg.experiment.counts_per_setting;
        DensityOperator targets = target_input_state(cfg.experiment.target_input_fidelity);
        if (options.simulate_target == "entangled") {
            Eigen::Vector4cd phi(1, 0, 0, -1);
            targets = DensityOperator::from_pure(StateVector(phi / std::sqrt(2.0), {kT1, kT2}));
        }
        auto simulate = [&](const DensityOperator &rho, const std::vector<std::string> &labels, std::uint64_t idx) {
            ProbabilityData d = simulate_probability_data(rho, labels, n, derive_seed(cfg.seed, idx));
            double sigma = bootstrap_sigma_stat(d, options.bootstrap_resamples, derive_seed(cfg.seed, idx + 1));
            return std::make_pair(d, sigma);
        };
        auto [d1, s1] = simulate(targets, assumption1_labels(), 10);
        a1 = check_assumption1(d1.joint, d1.product, s1, 0.0);
        auto [dab, sab] = simulate(definite_order_state(cfg.experiment.gates1, true), assumption2b_labels(), 20);
        auto [dba, sba] = simulate(definite_order_state(cfg.experiment.gates1, false), assumption2b_labels(), 30);
        ab = {dab.joint, dab.product, sab, 0.0};
        ba = {dba.joint, dba.product, sba, 0.0};
        report["source"] = {{"mode", "simulated"},
                            {"target", options.simulate_target},
                            {"counts_per_setting", n},
                            {"bootstrap_resamples", options.bootstrap_resamples}};
    } else {
        std::filesystem::path fx = options.tables ? *options.tables
                                   : cfg.gpt_fixtures.empty() ? default_fixtures_path()
                                                              : std::filesystem::path(cfg.gpt_fixtures);
        std::ifstream in(fx);
        if (!in) {
            throw ConfigError("cannot open fixtures file " + fx.string());
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ConfigError(fx.string() + ": " + e.what());
        }
        auto dir = fx.parent_path();
        if (!j.contains("assumption1") || !j.contains("assumption2b")) {
            throw ConfigError(fx.string() + ": needs 'assumption1' and 'assumption2b' sections");
        }
        const json &s1 = j["assumption1"];
        a1 = check_assumption1(read_tables(dir, s1.value("joint", json()), "assumption1/joint"),
                               read_tables(dir, s1.value("product", json()), "assumption1/product"),
                               number_field(s1, "sigma_stat", "assumption1"),
                               number_field(s1, "sigma_sys", "assumption1"));
        auto order = [&](const char *key) {
            if (!j["assumption2b"].contains(key)) {
                throw ConfigError(fx.string() + ": assumption2b needs '" + key + "'");
            }
            const json &s = j["assumption2b"][key];
            std::string w = std::string("assumption2b/") + key;
            return Assumption2bInput{read_tables(dir, s.value("joint", json()), w + "/joint"),
                                     read_tables(dir, s.value("product", json()), w + "/product"),
                                     number_field(s, "sigma_stat", w), number_field(s, "sigma_sys", w)};
        };
        ab = order("order_ab");
        ba = order("order_ba");
        report["source"] = {{"mode", "fixtures"}, {"path", fx.string()}};
    }
    Assumption2bCheck a2 = check_assumption2b(ab, ba);
    report["assumption1"] = check_json(a1);
    report["assumption2b"] = {
        {"order_ab", check_json(a2.order_ab)}, {"order_ba", check_json(a2.order_ba)}, {"pass", a2.pass}};
    bool pass = a1.pass && a2.pass;
    report["pass"] = pass;
    if (cfg.out_dir) {
        write_json(prepare_out(cfg) / "gpt_check.json", report);
    }
    return {pass ? kExitPass : kExitCheckFailed, report};
}

CommandResult cmd_causal_check(const RunConfig &cfg) {
    json report = header("causal-check", cfg);
    const CausalSpec &spec = cfg.causal;
    StateVector target = StateVector::qubit(spec.target[0], "T");
    auto charlie = default_charlie_settings();
    json results = json::array();
    bool all_feasible = true;
    for (int k = 0; k < spec.configurations; ++k) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(k));
        Instrument alice = family_instrument(spec.instruments, rng);
        Instrument bob = family_instrument(spec.instruments, rng);
        Eigen::Vector2cd amp = spec.control ? *spec.control : random_control(rng);
        StateVector control(amp, {"C"});
        BehaviorTable p = switch_behavior(alice, bob, control, target, charlie);
        BehaviorTable pa = ordered_behavior(CausalOrder::kAliceFirst, alice, bob, control, target, charlie);
        BehaviorTable pb = ordered_behavior(CausalOrder::kBobFirst, alice, bob, control, target, charlie);
        CausalDecomposition d = find_causal_decomposition(p, pa, pb);
        all_feasible = all_feasible && d.feasible;
        results.push_back({{"zeta", d.zeta},
                           {"alpha_squared", std::norm(amp(0))},
                           {"residual", d.residual},
                           {"identifiable", d.identifiable},
                           {"feasible", d.feasible},
                           {"signaling_error", p.signaling_error()}});
        if (k == 0 && cfg.out_dir) {
            std::ofstream out(prepare_out(cfg) / "behavior_switch.csv");
            write_behavior_csv(out, p);
        }
    }
    report["instruments"] = spec.instruments;
    report["configurations"] = results;
    report["pass"] = all_feasible;
    if (cfg.out_dir) {
        write_json(prepare_out(cfg) / "causal_check.json", report);
    }
    return {all_feasible ? kExitPass : kExitCheckFailed, report};
}

}  // namespace switchsim::cli
