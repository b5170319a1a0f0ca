#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "sdlab/config.hpp"
#include "sdlab/errors.hpp"
#include "sdlab/kernels.hpp"
#include "sdlab/quadrature.hpp"
#include "sdlab/runner.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override, int jobs,
            bool no_cache) {
    sdlab::ExperimentConfig cfg;
    try {
        cfg = sdlab::parse_config(config_path);
    } catch (const sdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }
    if (!out_override.empty()) cfg.out = out_override;
    if (jobs > 0) cfg.jobs = jobs;
    try {
        const sdlab::RunRecord record = sdlab::run_cached(cfg, cfg.out, !no_cache);
        std::cout << record.report;
        if (record.from_cache) std::cout << "(served from cache)\n";
        return record.all_pass() ? 0 : 2;
    } catch (const sdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_list() {
    for (const auto id : sdlab::all_experiments())
        std::printf("%-12s %s\n", sdlab::experiment_name(id), sdlab::experiment_blurb(id));
    return 0;
}

int cmd_constants(int n) {
    try {
        const sdlab::Thm45Constants c = sdlab::thm45_constants(n);
        std::printf("n = %d\n", n);
        std::printf("C1 = %.12g\n", c.c1);
        std::printf("C2 = %.12g\n", c.c2);
        std::printf("C3 = %.12g\n", c.c3);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_kernels(double t, double r) {
    try {
        const sdlab::Frequency freq{r, 1};
        const sdlab::CharRoots roots = sdlab::char_roots(freq);
        const sdlab::KernelValue kv = sdlab::eval_kernels(t, freq);
        std::printf("t = %.12g  r = %.12g\n", t, r);
        std::printf("lambda1 = %.12g %+.12gi\n", roots.lambda1.real(), roots.lambda1.imag());
        std::printf("lambda2 = %.12g %+.12gi\n", roots.lambda2.real(), roots.lambda2.imag());
        std::printf("E0 = %.12g\n", kv.e0);
        std::printf("E1 = %.12g\n", kv.e1);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sdlab: Fourier-space decay laboratory for u_tt - Lap u + Lap^2 u_t = 0"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 0;
    bool no_cache = false;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (default from config)");
    run->add_option("--jobs", jobs, "parallel ladder evaluations");
    run->add_flag("--no-cache", no_cache, "recompute even if cached");

    auto* list = app.add_subcommand("list", "list experiment ids");

    int n = 1;
    auto* constants = app.add_subcommand("constants", "print the explicit profile constants");
    constants->add_option("--n", n, "spatial dimension")->required();

    double t = 1.0, r = 1.0;
    auto* kernels = app.add_subcommand("kernels", "print roots and multipliers at (t, r)");
    kernels->add_option("--t", t, "time")->required();
    kernels->add_option("--r", r, "radial frequency")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, jobs, no_cache);
    if (list->parsed()) return cmd_list();
    if (constants->parsed()) return cmd_constants(n);
    if (kernels->parsed()) return cmd_kernels(t, r);
    return 0;
}
