#include "vortex/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace vortex;

namespace {

struct Overrides {
    std::string config_path;
    std::string regime;
    std::optional<double> eps, kappa, d_hat, h;
    std::vector<double> bracket;
    std::string output;
};

void add_overrides(CLI::App* cmd, Overrides& o, bool with_regime) {
    cmd->add_option("--config", o.config_path, "key = value configuration file");
    if (with_regime) cmd->add_option("--regime", o.regime, "PAIR_WM, PAIR_SCH, RING_WM or RING_SCH");
    cmd->add_option("--eps", o.eps, "coupling eps");
    cmd->add_option("--kappa", o.kappa, "Schroedinger mixing kappa");
    cmd->add_option("--dhat", o.d_hat, "scaled half-separation d eps");
    cmd->add_option("--grid-step", o.h, "grid spacing h1 = h2");
    cmd->add_option("--bracket", o.bracket, "absolute d bracket: lo hi")->expected(2);
    cmd->add_option("--out", o.output, "output directory");
}

// Flags win over the file; the merged result is validated again.
RunConfig merged(const Overrides& o, const std::string& regime_default) {
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (!o.regime.empty()) cfg.regime = o.regime;
    // pair and ring fix the regime themselves
    if (!regime_default.empty()) cfg.regime = regime_default;
    if (o.eps) cfg.eps = *o.eps;
    if (o.kappa) cfg.kappa = *o.kappa;
    if (o.d_hat) cfg.d_hat = *o.d_hat;
    if (o.h) cfg.h1 = cfg.h2 = *o.h;
    if (o.bracket.size() == 2) cfg.d_bracket = std::array<double, 2>{o.bracket[0], o.bracket[1]};
    if (!o.output.empty()) cfg.output = o.output;
    config_params(cfg);
    config_solver(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Traveling vortex pairs and rings for wave maps and Schroedinger maps into the sphere"};
    app.require_subcommand(1);

    Overrides o;
    int stride = 100;
    auto* profile = app.add_subcommand("profile", "solve the degree-one vortex profile and write profile.csv");
    add_overrides(profile, o, false);
    profile->add_option("--stride", stride, "knot stride of the CSV rows");

    SolveFlags solve_flags;
    bool schroedinger = false;
    auto* pair = app.add_subcommand("pair", "vortex pair: ansatz, projected solve or balanced solve");
    auto* ring = app.add_subcommand("ring", "vortex ring: ansatz, projected solve or balanced solve");
    for (auto* cmd : {pair, ring}) {
        add_overrides(cmd, o, false);
        cmd->add_flag("--schroedinger", schroedinger, "Schroedinger map instead of wave map");
        cmd->add_flag("--ansatz-only", solve_flags.ansatz_only, "stop after the ansatz");
        cmd->add_flag("--balance", solve_flags.balance, "root search for the balanced separation");
    }

    int points = 8;
    auto* reduce = app.add_subcommand("reduce", "numeric c(d) curve and its root");
    add_overrides(reduce, o, true);
    reduce->add_option("--points", points, "number of d samples");

    std::string field_path;
    std::optional<std::string> ansatz_path;
    auto* verify = app.add_subcommand("verify", "diagnostics of a stored field");
    add_overrides(verify, o, true);
    verify->add_option("field", field_path, "VSF1 field file")->required();
    verify->add_option("--ansatz", ansatz_path, "ansatz file for the corrector norms");

    ReconstructFlags rec_flags;
    auto* reconstruct = app.add_subcommand("reconstruct", "space-time samples and PDE residual of a stored field");
    add_overrides(reconstruct, o, true);
    reconstruct->add_option("field", field_path, "VSF1 field file")->required();
    reconstruct->add_option("--fine", rec_flags.fine_path, "solution at half the step, for Richardson extrapolation");
    reconstruct->add_option("--spacing", rec_flags.spacing_fraction, "CSV sample spacing in units of h");
    reconstruct->add_option("--levels", rec_flags.levels, "number of spacing halvings");

    std::vector<double> eps_list{0.1, 0.05, 0.025};
    auto* sweep = app.add_subcommand("sweep", "eps sweep of ansatz and corrector norms");
    add_overrides(sweep, o, true);
    sweep->add_option("--eps-list", eps_list, "eps values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Report report;
        if (*profile) {
            report = run_profile(merged(o, ""), stride);
        } else if (*pair || *ring) {
            std::string regime = *pair ? (schroedinger ? "PAIR_SCH" : "PAIR_WM")
                                       : (schroedinger ? "RING_SCH" : "RING_WM");
            report = run_solve(merged(o, regime), solve_flags);
        } else if (*reduce) {
            report = run_reduce(merged(o, ""), points);
        } else if (*verify) {
            report = run_verify(merged(o, ""), field_path, ansatz_path);
        } else if (*reconstruct) {
            report = run_reconstruct(merged(o, ""), field_path, rec_flags);
        } else if (*sweep) {
            report = run_sweep(merged(o, ""), eps_list);
        }
        std::cout << report.str();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
