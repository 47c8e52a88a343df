/*
 * Copyright 2026 The ddrc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: run a trace, self-check random traffic, or dump
// the initialization sequence.

#include "ddrc/error.hpp"
#include "ddrc/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int cmd_run(const std::string& config_path, const std::string& trace_path, const std::string& report_path,
            bool fsm_trace)
{
    const auto cfg = ddrc::load_config(config_path);
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << '\n';
    const auto trace = ddrc::load_trace(trace_path);
    ddrc::RunOptions opt;
    opt.fsm_trace = fsm_trace;
    const auto rep = ddrc::run(cfg, trace, opt);

    if (fsm_trace)
        std::cout << ddrc::format_fsm_trace(rep.fsm_trace);
    std::cout << ddrc::format_report(rep);
    const auto json = ddrc::report_json(rep).dump();
    if (report_path.empty())
    {
        std::cout << json << '\n';
    }
    else
    {
        std::ofstream out(report_path);
        if (!out)
            throw ddrc::Error("cannot write " + report_path);
        out << json << '\n';
    }
    return rep.violations.empty() && !rep.timed_out ? 0 : 1;
}

int cmd_check(const std::string& config_path, std::size_t transfers, std::optional<std::uint64_t> seed,
              const std::string& dump_path)
{
    const auto cfg = ddrc::load_config(config_path);
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << '\n';
    const auto trace = ddrc::annotate_expected(ddrc::random_traffic(seed.value_or(cfg.seed), transfers, cfg.geometry),
                                               cfg.mode_register.burst_length);
    if (!dump_path.empty())
    {
        std::ofstream out(dump_path);
        out << ddrc::format_trace(trace);
    }
    const auto rep = ddrc::run(cfg, trace);
    std::cout << ddrc::format_report(rep);
    std::cout << ddrc::report_json(rep).dump() << '\n';
    if (!rep.clean())
    {
        std::cout << "check FAILED\n";
        return 1;
    }
    std::cout << "check passed: " << rep.reads << " reads verified\n";
    return 0;
}

int cmd_inittrace(const std::string& config_path)
{
    const auto cfg = ddrc::load_config(config_path);
    const auto t = ddrc::init_trace(cfg);
    std::cout << ddrc::format_init_trace(t);
    return t.violations.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cycle-level DDR SDRAM controller simulator"};
    app.require_subcommand(1);

    std::string config;
    std::string trace;
    std::string report;
    bool fsm_trace = false;
    auto* run = app.add_subcommand("run", "Replay an AHB trace through the controller");
    run->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("--trace", trace, "Trace file")->required()->check(CLI::ExistingFile);
    run->add_option("--report", report, "Write the JSON report here instead of stdout");
    run->add_flag("--fsm-trace", fsm_trace, "Print per-cycle FSM states");

    std::size_t transfers = 1000;
    std::optional<std::uint64_t> seed;
    std::string dump;
    auto* check = app.add_subcommand("check", "Random traffic checked against a reference memory");
    check->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);
    check->add_option("--random", transfers, "Number of bus transfers");
    check->add_option("--seed", seed, "Traffic seed (default: config seed)");
    check->add_option("--dump-trace", dump, "Save the generated trace");

    auto* init = app.add_subcommand("inittrace", "Print the initialization command sequence");
    init->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(config, trace, report, fsm_trace);
        if (check->parsed())
            return cmd_check(config, transfers, seed, dump);
        return cmd_inittrace(config);
    }
    catch (const ddrc::Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
