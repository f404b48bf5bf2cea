// SPDX-License-Identifier: Apache-2.0
//
// isacsim: HAPS integrated sensing and communication simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// isacsim command-line runner: experiments, scenario validation and the selftest.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <isacsim/harness/experiments.hpp>
#include <isacsim/harness/manifest.hpp>
#include <isacsim/harness/scenario_file.hpp>
#include <isacsim/harness/seeds.hpp>
#include <isacsim/harness/selftest.hpp>

namespace
{
    namespace fs = std::filesystem;
    using namespace isacsim;
    using namespace isacsim::harness;

    enum Exit : int
    {
        ok = 0,
        usage = 2,
        infeasible = 3,
        internal = 4,
    };

    std::string utc_now()
    {
        const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::ostringstream os;
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return os.str();
    }

    ScenarioConfig load_scenario(const std::string &file, const std::string &preset_name, Kind kind)
    {
        if (!file.empty() && !preset_name.empty())
            throw UsageError("--scenario and --preset are mutually exclusive");
        if (!file.empty())
            return parse_scenario_file(file);
        const std::string name = preset_name.empty() ? default_preset(kind) : preset_name;
        const auto p = preset(name);
        if (!p)
            throw UsageError("unknown preset '" + name + "'");
        return *p;
    }

    void print_selftest(const std::vector<CheckResult> &results)
    {
        for (const auto &r : results)
            std::cout << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(26) << r.name << ' '
                      << std::right << std::fixed << std::setprecision(2) << std::setw(7) << r.seconds << "s  " << std::left << r.detail << '\n';
        std::cout.unsetf(std::ios::floatfield);
    }

    struct RunArgs
    {
        std::string kind;
        std::string scenario;
        std::string preset;
        std::string seeds = "1..5";
        std::string evolver = "desk";
        std::string out;
        std::size_t workers = 0;
    };

    void write_outputs(const fs::path &dir, const std::vector<OutputFile> &files, RunManifest &manifest)
    {
        fs::create_directories(dir);
        for (const auto &f : files)
        {
            write_atomic(dir / f.name, f.body);
            manifest.files.push_back(f.name);
        }
    }

    int run_selftest_command(const std::string &out, std::size_t workers, const std::vector<std::string> &argv)
    {
        const auto t0 = std::chrono::steady_clock::now();
        RunManifest manifest;
        manifest.kind = "selftest";
        manifest.command_line = argv;
        manifest.started_utc = utc_now();
        manifest.workers = workers;
        const auto results = run_selftest(std::max<std::size_t>(workers, 2));
        print_selftest(results);
        bool all = true;
        for (const auto &r : results)
            all = all && r.passed;
        std::cout << (all ? "selftest: all checks passed\n" : "selftest: FAILED\n");
        if (!out.empty())
        {
            write_outputs(out, {{"selftest.csv", selftest_table(results).str()}}, manifest);
            manifest.exit_code = all ? Exit::ok : Exit::internal;
            manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            write_manifest(fs::path(out) / "manifest.json", manifest);
        }
        return all ? Exit::ok : Exit::internal;
    }

    int run_command(const RunArgs &a, const std::vector<std::string> &argv)
    {
        const auto kind = parse_kind(a.kind);
        if (!kind)
            throw UsageError("unknown experiment kind '" + a.kind + "'");
        const std::size_t workers = a.workers == 0 ? hardware_workers() : a.workers;
        const std::string out = a.out.empty() ? "out/" + a.kind : a.out;
        if (*kind == Kind::selftest)
            return run_selftest_command(out, workers, argv);

        const auto seeds = parse_seeds(a.seeds);
        const ScenarioConfig cfg = load_scenario(a.scenario, a.preset, *kind);
        if (const auto sys = required_system(*kind); sys && *sys != cfg.system)
            throw UsageError(a.kind + " needs a System " + std::string(to_string(*sys)) + " scenario");

        const auto family = cfg.system == System::a ? evolver::presets::Family::system_a : evolver::presets::Family::system_b;
        const auto evo = evolver::presets::by_name(a.evolver, family);
        if (!evo)
            throw UsageError("unknown evolver preset '" + a.evolver + "' (expected paper or desk)");
        if (a.evolver == "paper")
        {
            const double ratio = static_cast<double>(evo->population_size * evo->generations) / (100.0 * 200.0);
            std::cerr << "warning: the paper evolver preset evaluates about " << ratio
                      << "x more genomes per solve than the desk preset; expect hours to days of runtime\n";
        }

        const auto t0 = std::chrono::steady_clock::now();
        RunManifest manifest;
        manifest.kind = a.kind;
        manifest.scenario_path = a.scenario;
        manifest.command_line = argv;
        manifest.config = cfg;
        manifest.seeds = seeds;
        manifest.evolver = *evo;
        manifest.workers = workers;
        manifest.started_utc = utc_now();

        const auto result = run_experiment(*kind, cfg, seeds, {*evo, workers});
        write_outputs(out, result.files, manifest);
        manifest.feasibility = result.feasibility;
        manifest.exit_code = result.any_feasible() ? Exit::ok : Exit::infeasible;
        manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(fs::path(out) / "manifest.json", manifest);

        for (const auto &f : result.feasibility)
            std::cout << "seed " << f.seed << ": " << f.feasible << "/" << f.cells << " feasible\n";
        std::cout << "wrote " << result.files.size() << " CSV files and manifest.json to " << out << '\n';
        if (manifest.exit_code == Exit::infeasible)
            std::cerr << "error: no feasible solution in any cell\n";
        return manifest.exit_code;
    }

    int validate_command(const std::string &path)
    {
        const auto cfg = parse_scenario_file(path);
        std::cout << path << ": OK (System " << to_string(cfg.system)
                  << (cfg.preset.empty() ? std::string() : ", preset " + cfg.preset) << ")\n"
                  << config_json(cfg).dump(2) << '\n';
        return Exit::ok;
    }
}

int main(int argc, char **argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"isacsim: HAPS integrated sensing and communication simulator"};
    app.set_version_flag("--version", std::string(ISACSIM_VERSION));
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Run one experiment and write CSV files plus a manifest");
    std::string kinds;
    for (Kind k : all_kinds)
        kinds += (kinds.empty() ? "" : ", ") + std::string(to_string(k));
    run_cmd->add_option("kind", run.kind, "Experiment: " + kinds)->required();
    run_cmd->add_option("--scenario", run.scenario, "Scenario file (YAML)");
    run_cmd->add_option("--preset", run.preset, "Built-in scenario: system_a.default or system_b.default");
    run_cmd->add_option("--seeds", run.seeds, "Seed list such as 1..5 or 1,2,7")->capture_default_str();
    run_cmd->add_option("--evolver", run.evolver, "Evolver budget: desk or paper")->capture_default_str();
    run_cmd->add_option("--out", run.out, "Output directory (default out/<kind>)");
    run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)")->capture_default_str();

    std::string selftest_out;
    std::size_t selftest_workers = 2;
    auto *self_cmd = app.add_subcommand("selftest", "Run the invariant suite and print a pass/fail table");
    self_cmd->add_option("--out", selftest_out, "Also write selftest.csv and manifest.json here");
    self_cmd->add_option("--workers", selftest_workers, "Worker count for the determinism check")->capture_default_str();

    std::string validate_path;
    auto *val_cmd = app.add_subcommand("validate", "Parse and range-check a scenario file");
    val_cmd->add_option("scenario", validate_path, "Scenario file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    try
    {
        if (*run_cmd)
            return run_command(run, args);
        if (*self_cmd)
            return run_selftest_command(selftest_out, selftest_workers, args);
        if (*val_cmd)
            return validate_command(validate_path);
    }
    catch (const UsageError &e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return Exit::usage;
    }
    catch (const ParseError &e)
    {
        std::cerr << "parse error: " << e.what() << '\n';
        return Exit::usage;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return Exit::usage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "internal error: " << e.what() << '\n';
        return Exit::internal;
    }
    return Exit::internal;
}
