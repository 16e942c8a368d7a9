/*
   Copyright 2026 The levyfield Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "levyfield/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using levy::cli::RunConfig;
using nlohmann::json;

void print_report(const std::string &cmd, const json &r)
{
    if (cmd == "plan") {
        for (const char *k : {"model", "delta", "tail_mode", "eta", "R", "kappa", "D", "eps", "J",
                              "J_from_D", "J_from_eps", "theta", "B", "log_B", "u_star", "M"})
            std::cout << k << ": " << r[k].dump() << '\n';
        if (r.contains("budget"))
            std::cout << "budget: " << r["budget"].dump() << '\n';
        std::cout << "resolved: " << r["resolved"].dump() << '\n';
        return;
    }
    std::cout << r.dump(2) << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Levy process and Levy field sampling by Fourier inversion"};
    app.require_subcommand(1);
    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    auto *seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
    auto *thr_opt =
        app.add_option("--threads", threads, "worker threads (overrides config)")->check(CLI::PositiveNumber);
    auto *out_opt = app.add_option("--out", out, "output directory (overrides config)");
    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"plan", "resolve and print an inversion plan"},
        {"sample-process", "sample Levy process paths to CSV"},
        {"sample-field", "sample one GH Levy field to CSV plus metadata"},
        {"tables", "errors, truncation, KS p-values and timings per eta"},
        {"convergence", "empirical L^p convergence study"},
        {"decorrelate", "GH_N parameters with the given uncorrelated marginals"}};
    for (const auto &[name, help] : cmds)
        app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = levy::cli::load_config(config_path);
        if (*seed_opt)
            cfg.seed = seed;
        if (*thr_opt)
            cfg.threads = threads;
        if (*out_opt)
            cfg.out = out;
        json r;
        if (cmd == "plan")
            r = levy::cli::cmd_plan(cfg);
        else if (cmd == "sample-process")
            r = levy::cli::cmd_sample_process(cfg);
        else if (cmd == "sample-field")
            r = levy::cli::cmd_sample_field(cfg);
        else if (cmd == "tables")
            r = levy::cli::cmd_tables(cfg);
        else if (cmd == "convergence")
            r = levy::cli::cmd_convergence(cfg);
        else
            r = levy::cli::cmd_decorrelate(cfg);
        print_report(cmd, r);
    } catch (const levy::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return levy::cli::exit_code(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
