#include <doctest.h>

#include <fstream>
#include <persym/io.hpp>
#include <persym/oracle.hpp>
#include <sstream>

#include "persym_cli.hpp"

using namespace persym;
using persym::cli::RunConfig;

namespace {

std::filesystem::path workdir() {
    auto p = std::filesystem::temp_directory_path() / "persym_cli_test";
    std::filesystem::create_directories(p);
    return p;
}

RunConfig base_config(const std::string& command) {
    RunConfig cfg;
    cfg.command = command;
    return cfg;
}

int run(const RunConfig& cfg, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = persym::cli::dispatch(cfg, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::filesystem::path write_test_symbol(bool invertible) {
    PeriodicSymbol p(PeriodMatrix::identity(2));
    p.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
    p.coeffs.emplace(MultiIndex{1, 1}, cplx(invertible ? 0.2 : 1.5, 0.0));
    auto path = workdir() / (invertible ? "sym_ok.json" : "sym_bad.json");
    save_symbol_json(p, path);
    return path;
}

std::filesystem::path write_test_signal() {
    auto path = workdir() / "gauss.csv";
    save_signal_csv(TestSignal::gaussian(1).sample(16.0, 256), path);
    return path;
}

}  // namespace

TEST_CASE("validate rejects out-of-range parameters with exit 2") {
    auto cfg = base_config("apply");
    cfg.symbol_path = write_test_symbol(true);
    cfg.signal_path = write_test_signal();
    cfg.out_path = workdir() / "out.csv";
    cfg.tau = 1.5;
    std::string err;
    CHECK(run(cfg, nullptr, &err) == persym::cli::kExitConfig);
    CHECK(err.find("tau") != std::string::npos);

    cfg.tau = 0.5;
    cfg.signal_path = workdir() / "missing.csv";
    CHECK(run(cfg) == persym::cli::kExitConfig);
}

TEST_CASE("selftest passes and reports per-check lines") {
    auto cfg = base_config("selftest");
    cfg.report_path = workdir() / "selftest.json";
    CHECK(run(cfg) == persym::cli::kExitOk);
    std::ifstream in(cfg.report_path);
    nlohmann::json j;
    in >> j;
    CHECK(j["all_pass"].get<bool>());
    CHECK(j["checks"].size() >= 10);
    CHECK(j.contains("conventions"));
}

TEST_CASE("apply writes the output signal and a JSON-lines record") {
    auto cfg = base_config("apply");
    cfg.symbol_path = write_test_symbol(true);
    cfg.signal_path = write_test_signal();
    cfg.out_path = workdir() / "applied.csv";
    cfg.report_path = workdir() / "applied.jsonl";
    std::filesystem::remove(cfg.report_path);
    cfg.tau = 0.5;
    cfg.K = 2;
    CHECK(run(cfg) == persym::cli::kExitOk);
    CHECK(std::filesystem::exists(cfg.out_path));

    // Determinism: identical run, byte-identical signal output.
    auto first = load_signal(cfg.out_path);
    CHECK(run(cfg) == persym::cli::kExitOk);
    auto second = load_signal(cfg.out_path);
    CHECK(first.values == second.values);

    // Two JSON-lines appended.
    std::ifstream in(cfg.report_path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        CHECK(j["command"] == "apply");
        CHECK(j.contains("aliasing_margin"));
        ++lines;
    }
    CHECK(lines == 2);
}

TEST_CASE("coeffs extracts a symbol from cell samples") {
    auto L = PeriodMatrix::identity(2);
    auto cell = sample_period_cell(L, 16, [](std::span<const double> z) {
        return cplx(std::cos(two_pi * z[0]), 0.0);
    });
    auto cell_path = workdir() / "cell.csv";
    save_cell_samples_csv(cell, cell_path);

    auto cfg = base_config("coeffs");
    cfg.cell_path = cell_path;
    cfg.K = 3;
    cfg.out_path = workdir() / "extracted.json";
    cfg.report_path = workdir() / "coeffs.json";
    CHECK(run(cfg) == persym::cli::kExitOk);
    auto p = load_symbol_json(cfg.out_path);
    CHECK(p.coeffs.size() == 2);
    CHECK(std::abs(p.coefficient(MultiIndex{1, 0}) - cplx(0.5, 0.0)) < 1e-13);
}

TEST_CASE("invert succeeds inside the criterion and refuses outside with exit 3") {
    auto cfg = base_config("invert");
    cfg.symbol_path = write_test_symbol(true);
    cfg.signal_path = write_test_signal();
    cfg.terms = 25;
    cfg.K = 2;
    cfg.report_path = workdir() / "invert.json";
    cfg.out_path = workdir() / "inverted.csv";
    CHECK(run(cfg) == persym::cli::kExitOk);
    std::ifstream in(cfg.report_path);
    nlohmann::json j;
    in >> j;
    CHECK(j["residual"].get<double>() < 1e-6);
    CHECK(j["certificate"]["invertible"].get<bool>());

    auto bad = base_config("invert");
    bad.symbol_path = write_test_symbol(false);
    bad.signal_path = write_test_signal();
    bad.K = 2;
    std::string err;
    CHECK(run(bad, nullptr, &err) == persym::cli::kExitNumerical);
    auto je = nlohmann::json::parse(err);
    CHECK(je["error"]["kind"] == "criterion_inconclusive");
    CHECK(je["error"]["certificate"]["invertible"].get<bool>() == false);
}

TEST_CASE("gabor scan emits the CSV zone map with fixed headers") {
    auto cfg = base_config("gabor");
    cfg.scan = "0.4:0.6:2,0.4:0.6:2";
    cfg.H = 6;
    cfg.K = 8;
    cfg.M = 20;
    cfg.T = 16.0;
    cfg.N = 128;
    cfg.out_path = workdir() / "scan.csv";
    cfg.report_path = workdir() / "scan.json";
    CHECK(run(cfg) == persym::cli::kExitOk);

    std::ifstream in(cfg.out_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "alpha,beta,c0_abs,tail,certified,lower_frame_bound,upper_frame_bound,zone");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("multiplier witness report holds") {
    PeriodicSymbol sigma(PeriodMatrix::identity(1));
    sigma.coeffs.emplace(MultiIndex{0}, cplx(1.0, 0.0));
    sigma.coeffs.emplace(MultiIndex{1}, cplx(0.3, 0.0));
    auto path = workdir() / "sigma.json";
    save_symbol_json(sigma, path);

    auto cfg = base_config("multiplier");
    cfg.symbol_path = path;
    cfg.witness = true;
    cfg.s = 2.0;
    cfg.T = 16.0;
    cfg.N = 2048;
    cfg.report_path = workdir() / "witness.json";
    CHECK(run(cfg) == persym::cli::kExitOk);
    std::ifstream in(cfg.report_path);
    nlohmann::json j;
    in >> j;
    CHECK(j["witness"]["holds"].get<bool>());
    CHECK(std::abs(j["witness"]["norm_u"].get<double>() - 1.0) < 1e-8);
}

TEST_CASE("reports embed the adopted conventions") {
    auto j = persym::cli::conventions();
    CHECK(j.contains("coefficient_sign"));
    CHECK(j.contains("invertibility_weight"));
}
