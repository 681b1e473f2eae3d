// Copyright 2026 The gqsearch Authors.
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

/**
 * @file
 * Experiment configuration: flat `key = value` lines under `[section]`
 * headers. `#` and `;` start comments. Unknown sections or keys are errors.
 *
 *   [experiment]  kind, id, b_targets
 *   [instance]    family, N, seed, theta_min, theta_max, epsilon, alpha,
 *                 target_index, target_b, spread, resonance_m, log2N,
 *                 spectrum_path
 *   [run]         m, q_max, out, format, trace
 *
 * A value may be a comma-separated list. `run` accepts lists only for
 * b_targets; `sweep` expands every other list into a cartesian product.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gqs/error.hpp"

namespace gqs::harness {

inline const std::vector<std::string> &experiment_kinds() {
    static const std::vector<std::string> kinds{
        "grover-baseline", "general-search", "boosted-search", "divergence-demo",
        "b-sweep"};
    return kinds;
}

inline const std::vector<std::string> &instance_families() {
    static const std::vector<std::string> families{
        "grover", "symmetric", "resonant", "scaling", "tuned", "file"};
    return families;
}

/// Every field carries its default; 0 for alpha / m / q_max means "auto".
struct ExperimentConfig {
    // [experiment]
    std::string kind = "general-search";
    std::string id;                          ///< defaults to kind
    std::vector<double> b_targets{2, 4, 8, 16}; ///< b-sweep only

    // [instance]
    std::string family = "symmetric";
    std::size_t n = 64;
    std::uint64_t seed = 1;
    double theta_min = 2.0;
    double theta_max = 3.1;
    double epsilon = 1e-3;
    double alpha = 0.0;        ///< auto: 1/sqrt(N), or 1/16 for b-sweep
    std::size_t target_index = 0;
    double target_b = 4.0;
    double spread = 0.1;
    int resonance_m = 3;
    int log2n = 8;
    std::string spectrum_path;

    // [run]
    int m = 0;           ///< auto: max(1, round(log2 B)); divergence-demo: resonance_m
    long long q_max = 0; ///< auto: max(4, 2 q_m) of the algorithm being run
    std::string out;     ///< empty: stdout
    std::string format = "csv";
    std::string trace;   ///< optional per-iteration CSV path

    [[nodiscard]] std::string experiment_id() const { return id.empty() ? kind : id; }
};

/// One parsed `key = value...` entry.
struct RawEntry {
    std::string key; ///< "section.key"
    std::vector<std::string> values;
    std::size_t line = 0;
};

using RawConfig = std::vector<RawEntry>;

namespace detail {

[[nodiscard]] inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[nodiscard]] inline std::vector<std::string> split_list(const std::string &v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

template <class T>
[[nodiscard]] T parse_number(const RawEntry &e, const std::string &text) {
    std::istringstream is(text);
    T value{};
    if (!(is >> value) || !(is >> std::ws).eof()) {
        throw ConfigError("invalid number '" + text + "'", e.line, e.key);
    }
    return value;
}

using Setter = std::function<void(ExperimentConfig &, const RawEntry &, const std::string &)>;

inline const std::map<std::string, Setter> &setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        const auto one_of = [](const std::vector<std::string> &allowed,
                               const RawEntry &e, const std::string &v) {
            for (const auto &a : allowed) {
                if (a == v) {
                    return;
                }
            }
            throw ConfigError("unsupported value '" + v + "'", e.line, e.key);
        };
        t["experiment.kind"] = [one_of](ExperimentConfig &c, const RawEntry &e,
                                        const std::string &v) {
            one_of(experiment_kinds(), e, v);
            c.kind = v;
        };
        t["experiment.id"] = [](ExperimentConfig &c, const RawEntry &, const std::string &v) {
            c.id = v;
        };
        t["instance.family"] = [one_of](ExperimentConfig &c, const RawEntry &e,
                                        const std::string &v) {
            one_of(instance_families(), e, v);
            c.family = v;
        };
        t["instance.N"] = [](ExperimentConfig &c, const RawEntry &e, const std::string &v) {
            c.n = parse_number<std::size_t>(e, v);
        };
        t["instance.seed"] = [](ExperimentConfig &c, const RawEntry &e, const std::string &v) {
            c.seed = parse_number<std::uint64_t>(e, v);
        };
        t["instance.theta_min"] = [](ExperimentConfig &c, const RawEntry &e,
                                     const std::string &v) {
            c.theta_min = parse_number<double>(e, v);
        };
        t["instance.theta_max"] = [](ExperimentConfig &c, const RawEntry &e,
                                     const std::string &v) {
            c.theta_max = parse_number<double>(e, v);
        };
        t["instance.epsilon"] = [](ExperimentConfig &c, const RawEntry &e,
                                   const std::string &v) {
            c.epsilon = parse_number<double>(e, v);
        };
        t["instance.alpha"] = [](ExperimentConfig &c, const RawEntry &e, const std::string &v) {
            c.alpha = parse_number<double>(e, v);
        };
        t["instance.target_index"] = [](ExperimentConfig &c, const RawEntry &e,
                                        const std::string &v) {
            c.target_index = parse_number<std::size_t>(e, v);
        };
        t["instance.target_b"] = [](ExperimentConfig &c, const RawEntry &e,
                                    const std::string &v) {
            c.target_b = parse_number<double>(e, v);
        };
        t["instance.spread"] = [](ExperimentConfig &c, const RawEntry &e,
                                  const std::string &v) {
            c.spread = parse_number<double>(e, v);
        };
        t["instance.resonance_m"] = [](ExperimentConfig &c, const RawEntry &e,
                                       const std::string &v) {
            c.resonance_m = parse_number<int>(e, v);
        };
        t["instance.log2N"] = [](ExperimentConfig &c, const RawEntry &e,
                                 const std::string &v) {
            c.log2n = parse_number<int>(e, v);
        };
        t["instance.spectrum_path"] = [](ExperimentConfig &c, const RawEntry &,
                                         const std::string &v) { c.spectrum_path = v; };
        t["run.m"] = [](ExperimentConfig &c, const RawEntry &e, const std::string &v) {
            c.m = parse_number<int>(e, v);
        };
        t["run.q_max"] = [](ExperimentConfig &c, const RawEntry &e, const std::string &v) {
            c.q_max = parse_number<long long>(e, v);
        };
        t["run.out"] = [](ExperimentConfig &c, const RawEntry &, const std::string &v) {
            c.out = v;
        };
        t["run.format"] = [one_of](ExperimentConfig &c, const RawEntry &e,
                                   const std::string &v) {
            one_of({"csv", "json"}, e, v);
            c.format = v;
        };
        t["run.trace"] = [](ExperimentConfig &c, const RawEntry &, const std::string &v) {
            c.trace = v;
        };
        return t;
    }();
    return table;
}

} // namespace detail

/// Tokenizes a config document; validates section and key names.
[[nodiscard]] inline RawConfig parse_raw_config(std::istream &is) {
    RawConfig raw;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    const auto &table = detail::setters();
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header", lineno);
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "instance" && section != "run") {
                throw ConfigError("unknown section '" + section + "'", lineno);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value'", lineno);
        }
        if (section.empty()) {
            throw ConfigError("key outside of any section", lineno);
        }
        RawEntry e;
        e.key = section + "." + detail::trim(line.substr(0, eq));
        e.line = lineno;
        const std::string rhs = detail::trim(line.substr(eq + 1));
        if (e.key == "experiment.b_targets") {
            e.values = {rhs};
        } else {
            e.values = detail::split_list(rhs);
        }
        if (e.key != "experiment.b_targets" && table.find(e.key) == table.end()) {
            throw ConfigError("unknown key", lineno, e.key);
        }
        for (const auto &v : e.values) {
            if (v.empty()) {
                throw ConfigError("empty value", lineno, e.key);
            }
        }
        for (const auto &prev : raw) {
            if (prev.key == e.key) {
                throw ConfigError("duplicate key", lineno, e.key);
            }
        }
        raw.push_back(std::move(e));
    }
    return raw;
}

namespace detail {

inline void apply_entry(ExperimentConfig &c, const RawEntry &e, const std::string &v) {
    if (e.key == "experiment.b_targets") {
        c.b_targets.clear();
        for (const auto &item : split_list(v)) {
            c.b_targets.push_back(parse_number<double>(e, item));
        }
        if (c.b_targets.empty()) {
            throw ConfigError("empty list", e.line, e.key);
        }
        return;
    }
    setters().at(e.key)(c, e, v);
}

} // namespace detail

/// Single configuration; lists (other than b_targets) are rejected.
[[nodiscard]] inline ExperimentConfig build_config(const RawConfig &raw) {
    ExperimentConfig c;
    for (const auto &e : raw) {
        if (e.values.size() != 1) {
            throw ConfigError("list values are only allowed with 'sweep'", e.line, e.key);
        }
        detail::apply_entry(c, e, e.values.front());
    }
    return c;
}

/// Cartesian product over every list-valued key, in file order with the
/// last key varying fastest.
[[nodiscard]] inline std::vector<ExperimentConfig> expand_sweep(const RawConfig &raw) {
    std::vector<ExperimentConfig> out{ExperimentConfig{}};
    std::vector<std::string> suffix{""};
    for (const auto &e : raw) {
        std::vector<ExperimentConfig> next;
        std::vector<std::string> next_suffix;
        for (std::size_t k = 0; k < out.size(); ++k) {
            for (const auto &v : e.values) {
                ExperimentConfig c = out[k];
                detail::apply_entry(c, e, v);
                next.push_back(std::move(c));
                std::string s = suffix[k];
                if (e.values.size() > 1) {
                    const auto dot = e.key.find('.');
                    s += "/" + e.key.substr(dot + 1) + "=" + v;
                }
                next_suffix.push_back(std::move(s));
            }
        }
        out = std::move(next);
        suffix = std::move(next_suffix);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].id = out[k].experiment_id() + suffix[k];
    }
    return out;
}

[[nodiscard]] inline RawConfig load_raw_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_raw_config(in);
}

} // namespace gqs::harness
