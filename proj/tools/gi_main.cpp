#include <CLI11.hpp>
#include <iostream>

#include "ghost/commands.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset = "paper";
    bool preset_given = false;
    bool seed_given = false;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string in_dir;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "JSON config file");
    sub->add_option("--preset", o.preset, "built-in preset: paper | fast")
        ->check(CLI::IsMember({"paper", "fast"}))
        ->each([&](const std::string&) { o.preset_given = true; });
    sub->add_option("--seed", o.seed, "master seed override")
        ->each([&](const std::string&) { o.seed_given = true; });
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--in", o.in_dir, "input measurement-set directory");
}

int resolve(const CommonOpts& o, ghost::RunConfig& cfg) {
    try {
        cfg = ghost::preset_config(o.preset);
        if (!o.config_path.empty()) cfg = ghost::load_config_file(o.config_path, cfg);
        if (o.seed_given) cfg.master_seed = o.seed;
        if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
        if (!o.in_dir.empty()) cfg.input_dir = o.in_dir;
        return ghost::kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ghost::kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ghost-imaging simulation toolkit"};
    app.require_subcommand(1);

    CommonOpts sim_o, rec_o, sweep_o, met_o;
    std::string method = "both";
    std::string parameter;
    std::vector<double> values;
    std::string estimate_path;

    CLI::App* sim = app.add_subcommand("simulate", "run a speckle campaign and persist it");
    add_common(sim, sim_o);

    CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct a persisted measurement set");
    add_common(rec, rec_o);
    rec->add_option("--method", method, "gi | cs | both")
        ->check(CLI::IsMember({"gi", "cs", "both"}));

    CLI::App* swp = app.add_subcommand("sweep", "sweep a parameter and tabulate metrics");
    add_common(swp, sweep_o);
    swp->add_option("--parameter", parameter, "L1 | reference_pixel_pitch | m");
    swp->add_option("--values", values, "sweep values")->delimiter(',');

    CLI::App* met = app.add_subcommand("metrics", "metrics for an estimate grid");
    add_common(met, met_o);
    met->add_option("--estimate", estimate_path, "estimate .gig file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ghost::kExitUsage;
    }

    ghost::RunConfig cfg;
    if (sim->parsed()) {
        if (int rc = resolve(sim_o, cfg)) return rc;
        return ghost::cmd_simulate(cfg);
    }
    if (rec->parsed()) {
        if (int rc = resolve(rec_o, cfg)) return rc;
        if (method == "gi") cfg.method = ghost::ReconMethod::Gi;
        else if (method == "cs") cfg.method = ghost::ReconMethod::Cs;
        else cfg.method = ghost::ReconMethod::Both;
        return ghost::cmd_reconstruct(cfg);
    }
    if (swp->parsed()) {
        if (int rc = resolve(sweep_o, cfg)) return rc;
        if (!parameter.empty()) cfg.sweep_parameter = parameter;
        if (!values.empty()) cfg.sweep_values = values;
        return ghost::cmd_sweep(cfg);
    }
    if (met->parsed()) {
        if (int rc = resolve(met_o, cfg)) return rc;
        if (!estimate_path.empty()) cfg.estimate_path = estimate_path;
        return ghost::cmd_metrics(cfg);
    }
    return ghost::kExitUsage;
}
