#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "fanolab/report.hpp"

using namespace fanolab;

namespace {

int worker_cap_from_env(int requested) {
    const char* env = std::getenv("FANOLAB_THREADS");
    if (!env) return requested;
    int cap = std::atoi(env);
    if (cap < 1) cap = 1;
    return std::min(requested, cap);
}

void emit(const CmdResult& res, const PipelineConfig& cfg) {
    if (cfg.format == "md")
        std::cout << render_markdown(res.report);
    else
        std::cout << res.report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fanolab: exact computations on Fano varieties of cyclic cubic fourfolds"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    cfg.threads = std::max(1, std::min(4, hw));

    auto add_common = [&](CLI::App* sub, bool with_instance = true) {
        sub->add_option("--seed", cfg.seed, "seed for deterministic sampling and draws");
        sub->add_option("--jet-order", cfg.jet_order, "jet truncation order (default 8)");
        sub->add_option("--format", cfg.format, "output format: json or md");
        if (with_instance) {
            sub->add_option("--instance", cfg.instance_path, "instance JSON file");
            sub->add_option("--i", cfg.i, "branch singularity index (2, 3 or 4)");
        }
    };

    auto* classify_cmd = app.add_subcommand("classify", "classify a hypersurface germ");
    add_common(classify_cmd);
    classify_cmd->add_option("--poly", cfg.poly_text, "inline polynomial text");
    classify_cmd->add_option("--vars", cfg.poly_vars, "variable names for --poly")->delimiter(',');

    auto* gamma_cmd = app.add_subcommand("gamma", "local model at a smooth point of Sigma");
    add_common(gamma_cmd);

    auto* plane_cmd = app.add_subcommand("plane-check", "exhaustive plane search over F_p");
    add_common(plane_cmd);
    plane_cmd->add_option("--primes", cfg.primes, "primes for the search (<= 13)")->delimiter(',');

    auto* equi_cmd = app.add_subcommand("equivariance", "sigma-equivariance of residual lines");
    add_common(equi_cmd);
    equi_cmd->add_option("--count", cfg.equiv_count, "number of random length-two schemes");

    auto* lat_cmd = app.add_subcommand("lattice-table", "invariant/Picard lattice table");
    add_common(lat_cmd, false);
    lat_cmd->add_option("--i", cfg.i, "restrict to one table row");

    auto* wall_cmd = app.add_subcommand("wall", "singularities of Sigma from the type of the branch point");
    add_common(wall_cmd, false);

    auto* sample_cmd = app.add_subcommand("sample", "emit a certified seeded instance");
    add_common(sample_cmd, false);
    sample_cmd->add_option("--i", cfg.i, "branch singularity index (2, 3 or 4)");

    auto* all_cmd = app.add_subcommand("report-all", "run every pipeline on one instance");
    add_common(all_cmd);
    all_cmd->add_option("--primes", cfg.primes, "primes for the plane search")->delimiter(',');
    all_cmd->add_option("--count", cfg.equiv_count, "number of equivariance draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    cfg.threads = worker_cap_from_env(cfg.threads);

    try {
        CmdResult res;
        if (classify_cmd->parsed()) {
            cfg.command = "classify";
            res = cmd_classify(cfg);
        } else if (gamma_cmd->parsed()) {
            cfg.command = "gamma";
            res = cmd_gamma(cfg);
        } else if (plane_cmd->parsed()) {
            cfg.command = "plane-check";
            res = cmd_plane_check(cfg);
        } else if (equi_cmd->parsed()) {
            cfg.command = "equivariance";
            res = cmd_equivariance(cfg);
        } else if (lat_cmd->parsed()) {
            cfg.command = "lattice-table";
            res = cmd_lattice_table(cfg);
        } else if (wall_cmd->parsed()) {
            cfg.command = "wall";
            res = cmd_wall(cfg);
        } else if (sample_cmd->parsed()) {
            cfg.command = "sample";
            res = cmd_sample(cfg);
        } else {
            cfg.command = "report-all";
            res = cmd_report_all(cfg);
        }
        emit(res, cfg);
        return res.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
