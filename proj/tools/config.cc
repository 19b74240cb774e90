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

#include "config.h"

#include <cmath>
#include <fstream>
#include <sstream>

namespace switchsim::cli {

namespace {

using nlohmann::json;

std::pair<size_t, size_t> line_col(const std::string &text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class Reader {
   public:
    Reader(const std::string &text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::vector<std::string> &path, const std::string &msg) const {
        std::string p;
        for (const auto &s : path) {
            p += "/" + s;
        }
        std::string where = source_;
        if (size_t line = locate(path)) {
            where += ":" + std::to_string(line);
        }
        throw ConfigError(where + ": field '" + (p.empty() ? "/" : p) + "': " + msg);
    }

    void check_keys(const json &obj, const std::vector<std::string> &path, const std::vector<std::string> &allowed) const {
        if (!obj.is_object()) {
            fail(path, "expected an object");
        }
        for (const auto &[key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown field");
            }
        }
    }

    double number(const json &obj, std::vector<std::string> path, double fallback, double lo, double hi) const {
        const std::string &key = path.back();
        if (!obj.contains(key)) {
            return fallback;
        }
        return number_value(obj.at(key), path, lo, hi);
    }

    double number_value(const json &v, const std::vector<std::string> &path, double lo, double hi) const {
        if (!v.is_number()) {
            fail(path, "expected a number");
        }
        double x = v.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi) {
            std::ostringstream os;
            os << "value " << x << " outside [" << lo << ", " << hi << "]";
            fail(path, os.str());
        }
        return x;
    }

    std::uint64_t unsigned_int(const json &obj, std::vector<std::string> path, std::uint64_t fallback) const {
        const std::string &key = path.back();
        if (!obj.contains(key)) {
            return fallback;
        }
        const json &v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(path, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const json &obj, std::vector<std::string> path, const std::string &fallback) const {
        const std::string &key = path.back();
        if (!obj.contains(key)) {
            return fallback;
        }
        if (!obj.at(key).is_string()) {
            fail(path, "expected a string");
        }
        return obj.at(key).get<std::string>();
    }

   private:
    // Line of the last path key, found by scanning for each quoted key in turn.
    size_t locate(const std::vector<std::string> &path) const {
        size_t pos = 0;
        for (const auto &key : path) {
            if (!key.empty() && std::isdigit(static_cast<unsigned char>(key[0]))) {
                continue;
            }
            size_t hit = text_.find("\"" + key + "\"", pos);
            if (hit == std::string::npos) {
                return 0;
            }
            pos = hit + 1;
        }
        return pos == 0 ? 0 : line_col(text_, pos - 1).first;
    }

    const std::string &text_;
    std::string source_;
};

cplx complex_entry(const Reader &r, const json &j, const std::vector<std::string> &path) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    r.fail(path, "expected a number or an [re, im] pair");
}

GateSpec gate_from(const Reader &r, const json &j, const std::vector<std::string> &path) {
    if (j.is_string()) {
        try {
            return gate_preset(j.get<std::string>());
        } catch (const std::invalid_argument &e) {
            r.fail(path, e.what());
        }
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2) {
        r.fail(path, "expected a preset name or a 2x2 matrix");
    }
    Eigen::Matrix2cd m;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            auto p = path;
            p.push_back(std::to_string(a));
            p.push_back(std::to_string(b));
            m(a, b) = complex_entry(r, j[a][b], p);
        }
    }
    try {
        return GateSpec::make("custom", m);
    } catch (const std::invalid_argument &e) {
        r.fail(path, e.what());
    }
}

json gate_json(const GateSpec &g) {
    json m = json::array();
    for (int a = 0; a < 2; ++a) {
        json row = json::array();
        for (int b = 0; b < 2; ++b) {
            row.push_back({g.matrix(a, b).real(), g.matrix(a, b).imag()});
        }
        m.push_back(row);
    }
    return {{"name", g.name}, {"matrix", m}};
}

SwitchGates switch_gates(const Reader &r, const json &gates, const std::string &key) {
    SwitchGates g = entangling_gates();
    if (!gates.contains(key)) {
        return g;
    }
    const json &s = gates.at(key);
    r.check_keys(s, {"gates", key}, {"u_a", "u_b"});
    if (s.contains("u_a")) {
        g.u_a = gate_from(r, s.at("u_a"), {"gates", key, "u_a"});
    }
    if (s.contains("u_b")) {
        g.u_b = gate_from(r, s.at("u_b"), {"gates", key, "u_b"});
    }
    return g;
}

Sign sign_from(char c) {
    return c == '+' ? Sign::kPlus : Sign::kMinus;
}

}  // namespace

GateSpec parse_gate(const nlohmann::json &j, const std::string &field) {
    std::string text = j.dump();
    Reader r(text, "<gate>");
    return gate_from(r, j, {field});
}

RunConfig parse_config(const std::string &text, const std::string &source_name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error &e) {
        auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(source_name + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": syntax error: " + e.what());
    }
    Reader r(text, source_name);
    r.check_keys(root, {},
                 {"gates", "source", "ifo", "target_input_fidelity", "efficiencies", "postselection",
                  "counts_per_setting", "runs", "seed", "output_dir", "sweep", "causal", "gpt"});

    RunConfig cfg;
    ExperimentConfig &e = cfg.experiment;
    if (root.contains("gates")) {
        const json &g = root.at("gates");
        r.check_keys(g, {"gates"}, {"switch1", "switch2"});
        e.gates1 = switch_gates(r, g, "switch1");
        e.gates2 = switch_gates(r, g, "switch2");
    }
    if (root.contains("source")) {
        const json &s = root.at("source");
        r.check_keys(s, {"source"},
                     {"visibility", "phase_offset_rad", "jitter_deg", "calibrate_control_chsh",
                      "calibration_samples"});
        e.source.visibility = r.number(s, {"source", "visibility"}, 1.0, 0.0, 1.0);
        e.source.phase_offset = r.number(s, {"source", "phase_offset_rad"}, 0.0, -1e6, 1e6);
        e.source_jitter_deg = r.number(s, {"source", "jitter_deg"}, 0.0, 0.0, 180.0);
        if (s.contains("calibrate_control_chsh")) {
            cfg.calibrate_control_chsh =
                r.number(s, {"source", "calibrate_control_chsh"}, 0.0, 0.0, 2.0 * std::sqrt(2.0));
        }
        cfg.calibration_samples =
            static_cast<int>(r.number(s, {"source", "calibration_samples"}, 200, 1, 1e6));
    }
    if (root.contains("ifo")) {
        const json &s = root.at("ifo");
        r.check_keys(s, {"ifo"}, {"vis1", "vis2", "jitter_deg"});
        e.ifo.vis1 = r.number(s, {"ifo", "vis1"}, 1.0, 0.0, 1.0);
        e.ifo.vis2 = r.number(s, {"ifo", "vis2"}, 1.0, 0.0, 1.0);
        e.ifo.phase_jitter_deg = r.number(s, {"ifo", "jitter_deg"}, 0.0, 0.0, 180.0);
    }
    e.target_input_fidelity = r.number(root, {"target_input_fidelity"}, 1.0, 0.0, 1.0);
    if (root.contains("efficiencies")) {
        const json &f = root.at("efficiencies");
        if (!f.is_array() || f.size() != 4) {
            r.fail({"efficiencies"}, "expected four detector-pair efficiencies");
        }
        for (int k = 0; k < 4; ++k) {
            e.efficiencies[k] = r.number_value(f[k], {"efficiencies", std::to_string(k)}, 1e-6, 1.0);
        }
    }
    std::string ps = r.string(root, {"postselection"}, "++");
    if (ps.size() != 2 || (ps[0] != '+' && ps[0] != '-') || (ps[1] != '+' && ps[1] != '-')) {
        r.fail({"postselection"}, "expected one of \"++\", \"+-\", \"-+\", \"--\"");
    }
    e.postselect1 = sign_from(ps[0]);
    e.postselect2 = sign_from(ps[1]);
    e.counts_per_setting = r.unsigned_int(root, {"counts_per_setting"}, 10000);
    cfg.runs = static_cast<int>(r.number(root, {"runs"}, 20, 2, 1e6));
    cfg.seed = r.unsigned_int(root, {"seed"}, 1);
    if (root.contains("output_dir")) {
        cfg.out_dir = r.string(root, {"output_dir"}, "");
    }

    std::vector<double> default_grid;
    for (int k = 0; k <= 10; ++k) {
        default_grid.push_back(k / 10.0);
    }
    cfg.sweep.grid = default_grid;
    if (root.contains("sweep")) {
        const json &s = root.at("sweep");
        r.check_keys(s, {"sweep"}, {"axis", "grid", "start", "stop", "points"});
        std::string axis = r.string(s, {"sweep", "axis"}, "source_visibility");
        try {
            cfg.sweep.axis = parse_sweep_axis(axis);
        } catch (const std::invalid_argument &ex) {
            r.fail({"sweep", "axis"}, ex.what());
        }
        if (s.contains("grid")) {
            if (s.contains("start") || s.contains("stop") || s.contains("points")) {
                r.fail({"sweep", "grid"}, "give either grid or start/stop/points, not both");
            }
            const json &g = s.at("grid");
            if (!g.is_array() || g.empty()) {
                r.fail({"sweep", "grid"}, "expected a non-empty array");
            }
            cfg.sweep.grid.clear();
            for (size_t k = 0; k < g.size(); ++k) {
                cfg.sweep.grid.push_back(r.number_value(g[k], {"sweep", "grid", std::to_string(k)}, 0.0, 1.0));
            }
        } else if (s.contains("start") || s.contains("stop") || s.contains("points")) {
            double a = r.number(s, {"sweep", "start"}, 0.0, 0.0, 1.0);
            double b = r.number(s, {"sweep", "stop"}, 1.0, 0.0, 1.0);
            int n = static_cast<int>(r.number(s, {"sweep", "points"}, 11, 1, 100000));
            cfg.sweep.grid.clear();
            for (int k = 0; k < n; ++k) {
                cfg.sweep.grid.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
            }
        }
    }
    if (root.contains("causal")) {
        const json &s = root.at("causal");
        r.check_keys(s, {"causal"}, {"instruments", "configurations", "control", "target"});
        cfg.causal.instruments = r.string(s, {"causal", "instruments"}, "random");
        const std::vector<std::string> families = {"z_basis", "x_basis", "random", "unitary"};
        if (std::find(families.begin(), families.end(), cfg.causal.instruments) == families.end()) {
            r.fail({"causal", "instruments"}, "expected z_basis, x_basis, random or unitary");
        }
        cfg.causal.configurations = static_cast<int>(r.number(s, {"causal", "configurations"}, 20, 1, 1e5));
        if (s.contains("control")) {
            const json &c = s.at("control");
            if (c.is_string()) {
                std::string name = c.get<std::string>();
                try {
                    if (name.size() != 1) {
                        throw std::invalid_argument("expected a single-character state name");
                    }
                    cfg.causal.control = StateVector::qubit(name[0], "C").amplitudes();
                } catch (const std::invalid_argument &ex) {
                    r.fail({"causal", "control"}, ex.what());
                }
            } else if (c.is_array() && c.size() == 2) {
                Eigen::Vector2cd v(complex_entry(r, c[0], {"causal", "control", "0"}),
                                   complex_entry(r, c[1], {"causal", "control", "1"}));
                if (std::abs(v.norm() - 1.0) > 1e-9) {
                    r.fail({"causal", "control"}, "control amplitudes must be normalised");
                }
                cfg.causal.control = v;
            } else {
                r.fail({"causal", "control"}, "expected a state name or two amplitudes");
            }
        }
        cfg.causal.target = r.string(s, {"causal", "target"}, "H");
        try {
            if (cfg.causal.target.size() != 1) {
                throw std::invalid_argument("expected a single-character state name");
            }
            StateVector::qubit(cfg.causal.target[0], "T");
        } catch (const std::invalid_argument &ex) {
            r.fail({"causal", "target"}, ex.what());
        }
    }
    if (root.contains("gpt")) {
        const json &s = root.at("gpt");
        r.check_keys(s, {"gpt"}, {"fixtures"});
        cfg.gpt_fixtures = r.string(s, {"gpt", "fixtures"}, "");
    }

    try {
        e.validate();
    } catch (const std::invalid_argument &ex) {
        r.fail({}, ex.what());
    }

    json &eff = cfg.effective;
    eff["gates"] = {{"switch1", {{"u_a", gate_json(e.gates1.u_a)}, {"u_b", gate_json(e.gates1.u_b)}}},
                    {"switch2", {{"u_a", gate_json(e.gates2.u_a)}, {"u_b", gate_json(e.gates2.u_b)}}}};
    eff["source"] = {{"visibility", e.source.visibility},
                     {"phase_offset_rad", e.source.phase_offset},
                     {"jitter_deg", e.source_jitter_deg},
                     {"calibration_samples", cfg.calibration_samples}};
    if (cfg.calibrate_control_chsh) {
        eff["source"]["calibrate_control_chsh"] = *cfg.calibrate_control_chsh;
    }
    eff["ifo"] = {{"vis1", e.ifo.vis1}, {"vis2", e.ifo.vis2}, {"jitter_deg", e.ifo.phase_jitter_deg}};
    eff["target_input_fidelity"] = e.target_input_fidelity;
    eff["efficiencies"] = e.efficiencies;
    eff["postselection"] = ps;
    eff["counts_per_setting"] = e.counts_per_setting;
    eff["runs"] = cfg.runs;
    eff["sweep"] = {{"axis", sweep_axis_name(cfg.sweep.axis)}, {"grid", cfg.sweep.grid}};
    json causal = {{"instruments", cfg.causal.instruments},
                   {"configurations", cfg.causal.configurations},
                   {"target", cfg.causal.target}};
    if (cfg.causal.control) {
        const auto &c = *cfg.causal.control;
        causal["control"] = {{c(0).real(), c(0).imag()}, {c(1).real(), c(1).imag()}};
    }
    eff["causal"] = causal;
    eff["gpt"] = {{"fixtures", cfg.gpt_fixtures}};
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

RunConfig default_config() {
    return parse_config("{}", "<defaults>");
}

std::string config_hash(const nlohmann::json &effective) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : effective.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace switchsim::cli
