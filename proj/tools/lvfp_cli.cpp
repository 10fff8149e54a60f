// Command-line driver: moment ODE runs, PDE simulation, distance series,
// parameter sweeps and the acceptance suite.

#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lvfp/acceptance.hpp"
#include "lvfp/commands.hpp"
#include "lvfp/config.hpp"
#include "lvfp/errors.hpp"

namespace {

enum Exit { ok = 0, bad_input = 1, numeric = 2, acceptance_failed = 3 };

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string outdir;
    std::string tag;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("-c,--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", c.sets, "override one key, as key=value (repeatable)");
    sub->add_option("--outdir", c.outdir, "output directory");
    sub->add_option("--tag", c.tag, "file name tag");
}

lvfp::RunConfig build_config(const Common& c)
{
    lvfp::RunConfig cfg;
    if (!c.config_path.empty())
        lvfp::apply_settings(cfg, lvfp::read_config_file(c.config_path));
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw lvfp::ConfigError("--set expects key=value, got '" + s + "'");
        lvfp::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!c.outdir.empty())
        cfg.outdir = c.outdir;
    if (!c.tag.empty())
        cfg.tag = c.tag;
    cfg.validate();
    return cfg;
}

void report(const std::vector<std::string>& paths)
{
    for (const auto& p : paths)
        std::cout << "wrote " << p << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic predator-prey Fokker-Planck solver"};
    app.require_subcommand(1);

    Common common;
    auto* moments = app.add_subcommand("moments", "integrate the mean/variance ODE");
    auto* simulate = app.add_subcommand("simulate", "evolve both densities and write snapshots");
    auto* distances = app.add_subcommand("distances", "distance series against quasi-equilibrium and equilibrium");
    auto* sweep = app.add_subcommand("sweep", "repeat the distance run over a parameter list");
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    auto* dump = app.add_subcommand("dump-config", "print the effective configuration");
    for (auto* sub : {moments, simulate, distances, sweep, dump})
        add_common(sub, common);

    unsigned threads = 0;
    sweep->add_option("--threads", threads, "worker threads (default: LVFP_THREADS or hardware)");
    std::string filter;
    verify->add_option("--filter", filter, "only criteria tagged with this module");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::bad_input;
    }

    try {
        if (verify->parsed())
            return lvfp::run_acceptance(std::cout, filter) == 0 ? Exit::ok : Exit::acceptance_failed;

        const lvfp::RunConfig cfg = build_config(common);
        if (dump->parsed())
            std::cout << lvfp::dump_config(cfg);
        else if (moments->parsed())
            report(lvfp::cmd_moments(cfg));
        else if (simulate->parsed())
            report(lvfp::cmd_simulate(cfg));
        else if (distances->parsed())
            report(lvfp::cmd_distances(cfg));
        else if (sweep->parsed())
            report(lvfp::cmd_sweep(cfg, threads ? threads : lvfp::sweep_threads_from_env()));
        return Exit::ok;
    } catch (const std::invalid_argument& e) {  // ConfigError included
        std::cerr << "error: " << e.what() << '\n';
        return Exit::bad_input;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::bad_input;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return Exit::numeric;
    }
}
