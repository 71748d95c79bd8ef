// Command line front end: density, compare, experiment, validate.

#include "arratia/config.hpp"
#include "arratia/harness.hpp"
#include "arratia/parallel.hpp"
#include "arratia/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

using namespace arratia;

namespace {

struct ValueOption {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr ValueOption kValueOptions[] = {
    {"--method", "method", "series|pde|mc|flow|oracle"},
    {"--drift", "drift", "drift spec, e.g. tanh:k=0.5,lam=1"},
    {"--t", "t", "time horizon"},
    {"--x", "x", "evaluation point"},
    {"--seed", "seed", "master seed (fallback: ARRATIA_SEED)"},
    {"--tol", "tol", "series: tail tolerance"},
    {"--nmax", "nmax", "series: highest term"},
    {"--samples", "samples", "series: Monte Carlo samples per term"},
    {"--h", "h", "pde: grid step"},
    {"--umax", "umax", "pde: extent normal to the diagonal"},
    {"--vpad", "vpad", "pde: padding along the diagonal"},
    {"--ramp", "ramp", "pde: geometric ramp of the first steps"},
    {"--dump-field", "dump-field", "pde: write the final field (u,v,W) here"},
    {"--delta", "delta", "mc: initial gap"},
    {"--paths", "paths", "mc: number of paths"},
    {"--dt", "dt", "mc/flow: time step"},
    {"--bridge", "bridge", "mc: bridge correction (true|false)"},
    {"--U", "U", "flow: starters cover [-U, U]"},
    {"--spacing", "spacing", "flow: starter spacing"},
    {"--runs", "runs", "flow: independent runs"},
    {"--bins", "bins", "flow: histogram bins"},
    {"--width", "width", "flow: window width around x"},
    {"--margin", "margin", "flow: evaluation margin"},
    {"--bridge-merge", "bridge-merge", "flow: bridge meeting between steps (true|false)"},
    {"--samples-out", "samples-out", "flow: write point process samples here"},
    {"--methods", "methods", "compare: comma separated methods"},
    {"--mode", "mode", "converge: L1|Linf"},
    {"--ns", "ns", "converge: comma separated indices"},
    {"--npass", "npass", "converge: first index held to the tolerance"},
    {"--gaps", "gaps", "coalescence: comma separated gaps"},
    {"--u", "u", "duality/coalescence: left point"},
    {"--v", "v", "duality: right point"},
    {"--threads", "threads", "worker threads"},
    {"--out", "out", "CSV output file (default stdout)"},
    {"--plot", "plot", "write <base>.dat and <base>.svg"},
};

std::ostream& output(const RunConfig& cfg, std::unique_ptr<std::ofstream>& file)
{
    if (!cfg.has("out"))
        return std::cout;
    file = std::make_unique<std::ofstream>(cfg.get("out"));
    if (!*file)
        throw std::runtime_error("cannot write '" + cfg.get("out") + "'");
    return *file;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Arratia flow density lab"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    std::string config_path;
    app.add_option("--config", config_path, "key=value file; command line values take precedence");
    std::map<std::string, std::string> values;
    for (const auto& o : kValueOptions)
        app.add_option(o.flag, values[o.key], o.help);
    bool richardson = false, timing = false;
    app.add_flag("--richardson", richardson, "mc: two-delta extrapolation");
    app.add_flag("--timing", timing, "fill the runtime_ms column");

    auto* density = app.add_subcommand("density", "one density value");
    auto* compare = app.add_subcommand("compare", "all methods at one point");
    auto* experiment = app.add_subcommand("experiment", "converge | duality | coalescence");
    experiment->require_subcommand(1);
    auto* converge = experiment->add_subcommand("converge", "convergence along a drift sequence");
    auto* duality = experiment->add_subcommand("duality", "occupancy vs dual non-meeting");
    auto* coalescence = experiment->add_subcommand("coalescence", "non-meeting probability vs gap");
    auto* validate = app.add_subcommand("validate", "invariant suites");
    validate->require_subcommand(1);
    auto* kernels = validate->add_subcommand("kernels", "kernel and Gamma-integral checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty())
            cfg = RunConfig::load(config_path);
        RunConfig cli;
        for (const auto& o : kValueOptions)
            if (app.count(o.flag) > 0)
                cli.set(o.key, values[o.key]);
        if (richardson)
            cli.set("richardson", "true");
        if (timing)
            cli.set("timing", "true");
        cfg.merge(cli);
        if (cfg.has("threads"))
            parallel::set_threads(static_cast<int>(cfg.get_int("threads", 1)));

        std::unique_ptr<std::ofstream> file;
        int code = 0;
        if (*density) {
            const auto run = harness::run_density(cfg);
            write_csv(output(cfg, file), run.rows);
            for (const auto& r : run.rows)
                if (r.estimate.flag != "ok")
                    code = 2;
        } else if (*compare) {
            const auto rep = harness::compare_methods(cfg);
            write_csv(output(cfg, file), rep.rows);
            for (const auto& p : rep.pairs)
                std::fprintf(stderr, "%s-%s: difference %.6g budget %.6g %s\n", to_string(p.a).c_str(),
                             to_string(p.b).c_str(), p.difference, p.budget, p.pass ? "ok" : "EXCEEDED");
            if (cfg.has("plot"))
                harness::emit_plot_data(rep, cfg.get("plot"));
            code = rep.pass() ? 0 : 2;
        } else if (*converge) {
            const auto rep = harness::experiment_converge(cfg);
            write_csv(output(cfg, file), rep.csv());
            for (const auto& r : rep.rows)
                std::fprintf(stderr, "n=%d distance %.6g estimate %.6g error %.6g tolerance %.6g\n", r.n, r.distance,
                             r.estimate.value, r.error, r.tolerance);
            std::fprintf(stderr, "converge %s %s: %s\n", harness::to_string(rep.mode).c_str(),
                         to_string(rep.method).c_str(), rep.pass() ? "pass" : "fail");
            if (cfg.has("plot"))
                harness::emit_plot_data(rep, cfg.get("plot"));
            code = rep.pass() ? 0 : 2;
        } else if (*duality) {
            const auto rep = harness::experiment_duality(cfg);
            write_csv(output(cfg, file), rep.csv());
            std::fprintf(stderr, "lhs %.6g +- %.2g rhs %.6g +- %.2g: %s\n", rep.result.lhs.p, rep.result.lhs.stderr_,
                         rep.result.rhs.p, rep.result.rhs.stderr_, rep.pass() ? "pass" : "fail");
            code = rep.pass() ? 0 : 2;
        } else if (*coalescence) {
            const auto rep = harness::experiment_coalescence(cfg);
            write_csv(output(cfg, file), rep.csv());
            std::fprintf(stderr, "slope %.6g +- %.2g, max relative residual %.3g: %s\n", rep.slope, rep.slope_stderr,
                         rep.max_relative_residual, rep.pass() ? "pass" : "fail");
            if (cfg.has("plot"))
                harness::emit_plot_data(rep, cfg.get("plot"));
            code = rep.pass() ? 0 : 2;
        } else if (*kernels) {
            const auto checks = harness::validate_kernels(cfg.get_uint("seed", harness::kDefaultSeed));
            harness::write_checks(output(cfg, file), checks);
            for (const auto& c : checks)
                if (!c.pass)
                    code = 2;
        }
        return code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
