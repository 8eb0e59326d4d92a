#include <CLI11.hpp>
#include <iostream>

#include "persym_cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"persym: pseudodifferential operators with completely periodic symbols"};
    app.set_config("--config", "", "structured text configuration (INI; sections per command)");
    app.require_subcommand(1);

    persym::cli::RunConfig cfg;
    app.add_option("--threads", cfg.threads, "worker cap for parallel loops")
        ->capture_default_str();

    auto add_common_grid = [&](CLI::App* cmd) {
        cmd->add_option("--T", cfg.T, "torus extent for generated grids")->capture_default_str();
        cmd->add_option("--N", cfg.N, "grid points per axis")->capture_default_str();
    };

    auto* coeffs = app.add_subcommand("coeffs", "extract Fourier coefficients from cell samples");
    coeffs->add_option("--cell", cfg.cell_path, "period-cell samples (.csv or binary)")->required();
    coeffs->add_option("--K", cfg.K, "coefficient truncation radius")->capture_default_str();
    coeffs->add_option("--prune", cfg.prune, "magnitude threshold for dropping coefficients")
        ->capture_default_str();
    coeffs->add_option("--out", cfg.out_path, "symbol JSON output")->required();
    coeffs->add_option("--report", cfg.report_path, "JSON report path (stdout when omitted)");

    auto* apply = app.add_subcommand("apply", "apply Op_tau(p) to a signal");
    apply->add_option("--symbol", cfg.symbol_path, "symbol JSON")->required();
    apply->add_option("--signal", cfg.signal_path, "input signal (.csv or binary)")->required();
    apply->add_option("--tau", cfg.tau, "quantization parameter in [0,1]")->capture_default_str();
    apply->add_option("--K", cfg.K, "series truncation radius")->capture_default_str();
    apply->add_option("--out", cfg.out_path, "output signal path")->required();
    apply->add_option("--report", cfg.report_path, "JSON-lines metadata file (appended)");

    auto* bound = app.add_subcommand("bound", "continuity bound report (C times the weighted coefficient norm)");
    bound->add_option("--symbol", cfg.symbol_path, "symbol JSON")->required();
    bound->add_option("--s", cfg.s, "polynomial weight exponent")->capture_default_str();
    bound->add_option("--C", cfg.C, "tfs constant of the target space")->capture_default_str();
    bound->add_option("--weight", cfg.weight, "weight preset: constant | polynomial(<s>)");
    bound->add_flag("--measure", cfg.measure, "also run the power-iteration estimate");
    bound->add_option("--tau", cfg.tau, "quantization for the measured norm")
        ->capture_default_str();
    bound->add_option("--K", cfg.K, "series truncation radius")->capture_default_str();
    bound->add_option("--iters", cfg.iters, "power iteration cap")->capture_default_str();
    add_common_grid(bound);
    bound->add_option("--report", cfg.report_path, "JSON report path");

    auto* invert = app.add_subcommand("invert", "Neumann-series inverse application");
    invert->add_option("--symbol", cfg.symbol_path, "symbol JSON")->required();
    invert->add_option("--signal", cfg.signal_path, "right-hand side signal")->required();
    invert->add_option("--tau", cfg.tau, "quantization parameter")->capture_default_str();
    invert->add_option("--K", cfg.K, "series truncation radius")->capture_default_str();
    invert->add_option("--terms", cfg.terms, "Neumann terms")->capture_default_str();
    invert->add_option("--s", cfg.s, "polynomial weight exponent")->capture_default_str();
    invert->add_option("--C", cfg.C, "tfs constant")->capture_default_str();
    invert->add_option("--weight", cfg.weight, "weight preset: constant | polynomial(<s>)");
    invert->add_option("--out", cfg.out_path, "inverse-applied signal output (optional)");
    invert->add_option("--report", cfg.report_path, "JSON report path");

    auto* gabor = app.add_subcommand("gabor", "Gabor frame tools: dual window or (alpha,beta) scan");
    gabor->add_option("--alpha", cfg.alpha, "lattice step in time")->capture_default_str();
    gabor->add_option("--beta", cfg.beta, "lattice step in frequency")->capture_default_str();
    gabor->add_option("--window", cfg.window, "window preset (gaussian)")->capture_default_str();
    gabor->add_option("--H", cfg.H, "lattice truncation")->capture_default_str();
    gabor->add_option("--K", cfg.K, "symbol coefficient truncation")->capture_default_str();
    gabor->add_option("--M", cfg.M, "cell samples per axis")->capture_default_str();
    gabor->add_option("--terms", cfg.terms, "Neumann terms for the dual window")
        ->capture_default_str();
    gabor->add_option("--scan", cfg.scan, "zone map over a0:a1:na,b0:b1:nb");
    add_common_grid(gabor);
    gabor->add_option("--out", cfg.out_path, "dual-window signal or scan CSV output");
    gabor->add_option("--report", cfg.report_path, "JSON report path");

    auto* multiplier = app.add_subcommand("multiplier", "Fourier multiplier tools");
    multiplier->add_option("--symbol", cfg.symbol_path, "multiplier symbol JSON (d x d period)")
        ->required();
    multiplier->add_flag("--witness", cfg.witness, "emit the L1_v necessity witness chain");
    multiplier->add_option("--signal", cfg.signal_path, "signal to apply sigma(D) to");
    multiplier->add_option("--s", cfg.s, "polynomial weight exponent")->capture_default_str();
    multiplier->add_option("--weight", cfg.weight, "weight preset: constant | polynomial(<s>)");
    add_common_grid(multiplier);
    multiplier->add_option("--out", cfg.out_path, "output signal path");
    multiplier->add_option("--report", cfg.report_path, "JSON report path");

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
    selftest->add_option("--report", cfg.report_path, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : {coeffs, apply, bound, invert, gabor, multiplier, selftest})
        if (sub->parsed()) cfg.command = sub->get_name();

    return persym::cli::dispatch(cfg, std::cout, std::cerr);
}
