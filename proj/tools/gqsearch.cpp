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


// gqsearch: experiment CLI.
//
//   gqsearch run      --config exp.cfg [--seed S] [--out path] [--format csv|json]
//   gqsearch sweep    --config sweep.cfg [...]
//   gqsearch validate [--seed S]
//
// Exit status: 0 success, 1 config / size / I/O error, 2 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gqs/gqs.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
};

void apply(const Overrides &o, gqs::harness::ExperimentConfig &c) {
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (!o.out.empty()) {
        c.out = o.out;
    }
    if (!o.format.empty()) {
        c.format = o.format;
    }
}

void emit(const std::vector<gqs::harness::ReportRow> &rows,
          const gqs::harness::ExperimentConfig &c) {
    if (c.out.empty()) {
        gqs::harness::emit_report(rows, c.format, std::cout);
    } else {
        gqs::harness::emit_report(rows, c.format, c.out);
    }
}

int run_one(const Overrides &o) {
    gqs::harness::ExperimentConfig c =
        gqs::harness::build_config(gqs::harness::load_raw_config(o.config));
    apply(o, c);
    const gqs::harness::ExperimentOutput result = gqs::harness::run_experiment_traced(c);
    if (!c.trace.empty()) {
        gqs::harness::write_traces(c.trace, result);
    }
    emit(result.rows, c);
    return 0;
}

int run_sweep(const Overrides &o) {
    std::vector<gqs::harness::ExperimentConfig> configs =
        gqs::harness::expand_sweep(gqs::harness::load_raw_config(o.config));
    std::vector<gqs::harness::ReportRow> rows;
    for (auto &c : configs) {
        apply(o, c);
        for (auto &row : gqs::harness::run_experiment(c)) {
            rows.push_back(std::move(row));
        }
    }
    emit(rows, configs.front());
    return 0;
}

int run_validate(const Overrides &o) {
    const auto results = gqs::harness::run_validation(o.seed.value_or(1));
    bool ok = true;
    for (const auto &r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all invariants hold" : "invariant failure") << '\n';
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Generalized quantum search simulator"};
    app.require_subcommand(1);
    Overrides o;
    const auto common = [&o](CLI::App *sub, bool needs_config) {
        auto *cfg = sub->add_option("--config", o.config, "experiment config file");
        if (needs_config) {
            cfg->required()->check(CLI::ExistingFile);
        }
        sub->add_option("--seed", o.seed, "override instance.seed");
        sub->add_option("--out", o.out, "report path (default stdout)");
        sub->add_option("--format", o.format, "report format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    CLI::App *run = app.add_subcommand("run", "execute one config");
    CLI::App *sweep = app.add_subcommand("sweep", "cartesian product over listed values");
    CLI::App *validate = app.add_subcommand("validate", "run the invariant suite");
    common(run, true);
    common(sweep, true);
    common(validate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return run_one(o);
        }
        if (*sweep) {
            return run_sweep(o);
        }
        return run_validate(o);
    } catch (const gqs::ConfigError &e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const gqs::SizeError &e) {
        std::cerr << "size error: " << e.what() << '\n';
        return 1;
    } catch (const gqs::ValidationError &e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const gqs::ConvergenceError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const gqs::DivergenceError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const gqs::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
