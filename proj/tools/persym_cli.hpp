// Command dispatch behind the persym executable: validated run
// configurations, structured JSON/CSV emitters and exit-code policy.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace persym::cli {

// Exit codes: 0 success, 2 config validation, 3 numerical refusal, 4 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
    std::string command;  // coeffs | apply | bound | invert | gabor | multiplier | selftest

    // Shared paths.
    std::filesystem::path symbol_path;
    std::filesystem::path signal_path;
    std::filesystem::path cell_path;
    std::filesystem::path out_path;
    std::filesystem::path report_path;

    // Numeric parameters (documented ranges enforced in validate()).
    double tau = 0.0;
    int K = 6;            // coefficient truncation radius
    int H = 8;            // Gabor lattice truncation
    int M = 32;           // cell samples per axis
    double alpha = 0.5;
    double beta = 0.5;
    double s = 0.0;       // polynomial weight exponent
    double C = 1.0;       // tfs constant of the target space
    double p = 2.0;
    double q = 2.0;
    int terms = 20;       // Neumann terms
    int iters = 200;      // power-iteration cap
    double T = 16.0;      // grid extent for generated templates
    int N = 512;          // grid points for generated templates
    double prune = 1e-14;
    std::string weight;  // preset selector: "constant" | "polynomial(<s>)"; overrides s and C
    std::string window = "gaussian";
    std::string scan;     // "a0:a1:na,b0:b1:nb"
    bool measure = false;
    bool witness = false;
    int threads = 1;
};

/// Throws std::invalid_argument on out-of-range parameters or missing files.
void validate(const RunConfig& config);

/// Runs the configured command; writes artifacts; returns the exit status.
/// Failures print a machine-readable JSON error record to `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The conventions block embedded in every report (adopted coefficient sign,
/// the reading of the invertibility weight, summation order).
nlohmann::json conventions();

}  // namespace persym::cli
